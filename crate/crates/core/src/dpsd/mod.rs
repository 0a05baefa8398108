//! Discrete PSD matrices: binary, signed and ternary decompositions, rank
//! certificates, enumeration of `D(n, r)` and polytope membership.

mod binary;
mod enumerate;
mod packing;
mod polytope;
mod signed;

pub use binary::{
    block_form01, decompose01, rank1_iff_binary, rank_exact_certificate, rank_upper_certificate, triangle_check01,
    BlockForm, TriangleViolation,
};
pub use enumerate::{count_dnr, enumerate_dnr, packings, MAX_COUNT_N, MAX_ENUMERATE_N};
pub use packing::Packing;
pub use polytope::{membership_pnr, membership_rnr, rational_rows, Membership, Separation, MAX_MEMBERSHIP_N};
pub use signed::{decompose_pm1, decompose_ternary, pm1_to_01_rank2, ternary_rank1_check, SignedBlock, TernaryBlocks};

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DpsdError {
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("n = {n} exceeds the supported maximum {max}")]
    SizeLimit { n: usize, max: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
