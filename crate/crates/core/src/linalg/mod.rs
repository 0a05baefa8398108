//! Dense symmetric matrices, a Jacobi eigensolver, and the PSD and rank
//! predicates every other module leans on.

mod eigen;
mod mat;
mod symmat;
pub mod text;

pub use eigen::{
    eigensym, is_psd, is_psd_eig, min_eigenvalue, nuclear_norm, num_rank, pinv, solve_unique, sqrt_psd, Eigen,
};
pub use mat::Mat;
pub use symmat::{Discreteness, SymMat};
pub use text::{fmt_num, parse_symmat, write_symmat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("system does not have full column rank")]
    Rank,
}
