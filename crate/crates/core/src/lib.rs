//! Discrete positive semidefinite matrices and exact mixed-integer
//! semidefinite (MISDP) formulations of binary quadratic problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: symmetric matrices, eigen-decomposition, PSD and rank tests.
//! * [`dpsd`]: structure of binary / ±1 / ternary PSD matrices.
//! * [`model`]: a small MISDP intermediate representation with CBF and JSON I/O.
//! * [`formulations`]: generic binary quadratic programs as MISDPs.
//! * [`problems`]: concrete combinatorial problems and their MISDP models.
//! * [`schemes`]: symmetric association schemes and their eigenmatrices.
//! * [`verify`]: exhaustive solving of small models against brute-force oracles.
//! * [`cli`]: the `misdp` command-line front end.
//!
//! [`lp`] is an exact rational feasibility LP used by the polytope membership
//! tests; [`Tolerances`] collects every float threshold.

pub mod cli;
pub mod dpsd;
pub mod formulations;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod problems;
pub mod schemes;
pub mod tolerance;
pub mod verify;

pub use tolerance::Tolerances;
