//! Exact verification at desk scale: solve a model by enumerating its
//! integer variables and compare the optimum with a brute-force oracle for
//! the source problem.
//!
//! Continuous variables are never searched. Each one must be recoverable
//! from the integer part: through equality rows, as the corner of a single
//! pencil (bisection), as one half of a nuclear-norm block pair, or as the
//! free block of a pencil whose Schur complement pins it down.

mod enumerate;
pub mod oracle;
mod report;
mod resolve;
pub mod suites;

pub use enumerate::{solve_by_enumeration, EnumOptions, FeasiblePoint, Solution, DEFAULT_BUDGET};
pub use report::{render_table, SuiteOutcome, VerificationReport};
pub use suites::{run_suite, suite_names};

use crate::formulations::BuildError;
use crate::linalg::LinalgError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("search space of {size:.3e} assignments exceeds the budget of {budget}")]
    BudgetExceeded { size: f64, budget: u64 },
    #[error("unsupported continuous pattern: {0}")]
    UnsupportedContinuousPattern(String),
    #[error("could not decide feasibility: {0}")]
    Undecided(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
