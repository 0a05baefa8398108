//! Binary PSD matrices: combinatorial decomposition and the certificates
//! that tie PSD-ness and rank to linear and semidefinite conditions.

use serde::{Deserialize, Serialize};

use super::{DpsdError, Packing};
use crate::linalg::{is_psd, num_rank, Mat, SymMat};
use crate::tolerance::Tolerances;

fn require_binary(x: &SymMat) -> Result<(), DpsdError> {
    if x.is_binary() {
        Ok(())
    } else {
        Err(DpsdError::Precondition("matrix entries must be 0 or 1".into()))
    }
}

/// Splits a binary PSD matrix into the packing whose parts are its all-ones
/// blocks, so that `X = Σ_S 1_S 1_Sᵀ`.
///
/// Purely combinatorial: `X` is PSD exactly when every row with a zero
/// diagonal is zero and every row with a one on the diagonal has a support
/// on which all rows agree with it.
pub fn decompose01(x: &SymMat) -> Result<Packing, DpsdError> {
    require_binary(x)?;
    let n = x.n();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if x.get(i, i) == 0.0 {
            if (0..n).any(|j| x.get(i, j) != 0.0) {
                return Err(DpsdError::NotPsd);
            }
            continue;
        }
        if label[i].is_some() {
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|&j| x.get(i, j) == 1.0).collect();
        for &j in &support {
            if label[j].is_some() || (0..n).any(|k| x.get(j, k) != x.get(i, k)) {
                return Err(DpsdError::NotPsd);
            }
            label[j] = Some(parts.len());
        }
        parts.push(support);
    }
    Packing::new(n, parts)
}

/// Permutation bringing a binary PSD matrix to `J_{s1} ⊕ … ⊕ J_{sr} ⊕ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockForm {
    /// `perm[k]` is the original index placed at position `k`.
    pub perm: Vec<usize>,
    /// Block sizes, largest first.
    pub sizes: Vec<usize>,
    /// Number of trailing zero rows.
    pub zeros: usize,
}

/// Blocks are ordered by size (descending), ties broken by smallest original
/// index; zero-diagonal indices come last in ascending order.
pub fn block_form01(x: &SymMat) -> Result<BlockForm, DpsdError> {
    let packing = decompose01(x)?;
    let mut parts: Vec<&Vec<usize>> = packing.parts().iter().collect();
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut perm: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    let zeros = packing.uncovered();
    perm.extend(&zeros);
    Ok(BlockForm { perm, sizes: parts.iter().map(|p| p.len()).collect(), zeros: zeros.len() })
}

/// A violated inequality of the binary PSD characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleViolation {
    /// `X_ij > X_ii`.
    Dominance { i: usize, j: usize },
    /// `X_ij + X_ik - X_jk > X_ii` with `j < k`.
    Triangle { i: usize, j: usize, k: usize },
}

/// All violations of `X_ij ≤ X_ii` and `X_ij + X_ik - X_jk ≤ X_ii`. A binary
/// matrix is PSD exactly when the list is empty.
pub fn triangle_check01(x: &SymMat) -> Result<Vec<TriangleViolation>, DpsdError> {
    require_binary(x)?;
    let n = x.n();
    let mut out = Vec::new();
    for i in 0..n {
        let xii = x.get(i, i);
        for j in 0..n {
            if j != i && x.get(i, j) > xii {
                out.push(TriangleViolation::Dominance { i, j });
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                if j == i || k == i {
                    continue;
                }
                if x.get(i, j) + x.get(i, k) - x.get(j, k) > xii {
                    out.push(TriangleViolation::Triangle { i, j, k });
                }
            }
        }
    }
    Ok(out)
}

/// `[[r, diag(X)ᵀ], [diag(X), X]] ⪰ 0`, which for binary PSD `X` is
/// equivalent to `rank(X) ≤ r`.
pub fn rank_upper_certificate(x: &SymMat, r: usize, tol: &Tolerances) -> bool {
    is_psd(&x.bordered(r as f64, &x.diag()), tol)
}

/// `Pᵀ1 ≥ 1`, `P1 = diag(X)` and `[[I_r, Pᵀ], [P, X]] ⪰ 0`. For binary `X`
/// and binary `P` these force `X = PPᵀ` with exactly `r` parts.
pub fn rank_exact_certificate(x: &SymMat, p: &Mat, tol: &Tolerances) -> Result<bool, DpsdError> {
    require_binary(x)?;
    let n = x.n();
    if p.rows() != n {
        return Err(DpsdError::ShapeMismatch(format!("P has {} rows, X has order {n}", p.rows())));
    }
    if !p.is_binary() {
        return Err(DpsdError::Precondition("P must be binary".into()));
    }
    let r = p.cols();
    if p.col_sums().iter().any(|&s| s < 1.0) {
        return Ok(false);
    }
    if p.row_sums().iter().zip(x.diag()).any(|(a, b)| *a != b) {
        return Ok(false);
    }
    let y = SymMat::from_fn(r + n, |i, j| match (i < r, j < r) {
        (true, true) => f64::from(u8::from(i == j)),
        (false, true) => p[(i - r, j)],
        (false, false) => x.get(i - r, j - r),
        (true, false) => unreachable!("lower triangle only"),
    });
    Ok(is_psd(&y, tol))
}

/// For a bordered `Y = [[Y₁₁, xᵀ], [x, X]]` with `diag(Y) = Y e₁`, reports
/// `(rank(Y) = 1, Y binary)`.
///
/// When `Y₁₁ = 1` the two predicates coincide; the classic counterexample
/// `½(J₃ + 3E₁₁)` shows the corner normalization cannot be dropped.
pub fn rank1_iff_binary(y: &SymMat, tol: &Tolerances) -> Result<(bool, bool), DpsdError> {
    let m = y.n();
    if m == 0 {
        return Err(DpsdError::Precondition("empty matrix".into()));
    }
    for i in 1..m {
        if y.get(i, i) != y.get(0, i) {
            return Err(DpsdError::Precondition(format!(
                "diagonal entry {} differs from the border",
                i + 1
            )));
        }
    }
    if !is_psd(y, tol) {
        return Err(DpsdError::Precondition("matrix is not PSD".into()));
    }
    let rank = num_rank(y, tol)?;
    Ok((rank == 1, y.is_binary()))
}
