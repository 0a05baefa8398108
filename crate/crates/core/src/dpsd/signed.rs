//! PSD matrices over {±1} and {0, ±1}.

use serde::{Deserialize, Serialize};

use super::DpsdError;
use crate::linalg::{is_psd, SymMat};
use crate::tolerance::Tolerances;

/// Sign vector `s` with `s₁ = +1` and `X = s sᵀ`.
///
/// A ±1 matrix is PSD only if it has rank one, so the first row determines
/// the candidate and a single comparison pass decides.
pub fn decompose_pm1(x: &SymMat) -> Result<Vec<i8>, DpsdError> {
    if !x.is_signed() {
        return Err(DpsdError::Precondition("matrix entries must be ±1".into()));
    }
    let n = x.n();
    let s: Vec<i8> = (0..n).map(|j| if n > 0 && x.get(0, j) > 0.0 { 1 } else { -1 }).collect();
    for i in 0..n {
        for j in 0..=i {
            if x.get(i, j) != f64::from(s[i] * s[j]) {
                return Err(DpsdError::NotPsd);
            }
        }
    }
    Ok(s)
}

/// `½(X + J)`: a ±1 PSD matrix maps to a binary PSD matrix of rank at most 2.
pub fn pm1_to_01_rank2(x: &SymMat) -> Result<SymMat, DpsdError> {
    if !x.is_signed() {
        return Err(DpsdError::Precondition("matrix entries must be ±1".into()));
    }
    Ok(x.add(&SymMat::ones(x.n())).scale(0.5))
}

/// One signed block of a ternary PSD matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedBlock {
    /// Original indices, ascending.
    pub support: Vec<usize>,
    /// Signs on `support`, the first one `+1`.
    pub signs: Vec<i8>,
}

/// `PᵀXP = b₁b₁ᵀ ⊕ … ⊕ b_rb_rᵀ ⊕ 0` for a ternary PSD matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryBlocks {
    /// `perm[k]` is the original index placed at position `k`.
    pub perm: Vec<usize>,
    /// Blocks in order of their smallest index.
    pub blocks: Vec<SignedBlock>,
    /// Number of trailing zero rows.
    pub zeros: usize,
}

impl TernaryBlocks {
    /// The vectors `x_i ∈ {0, ±1}ⁿ` with `X = Σ x_i x_iᵀ`.
    pub fn vectors(&self, n: usize) -> Vec<Vec<i8>> {
        self.blocks
            .iter()
            .map(|b| {
                let mut v = vec![0i8; n];
                for (&i, &s) in b.support.iter().zip(&b.signs) {
                    v[i] = s;
                }
                v
            })
            .collect()
    }

    pub fn reconstruct(&self, n: usize) -> SymMat {
        let mut m = SymMat::zeros(n);
        for v in self.vectors(n) {
            m = m.add(&SymMat::outer(&v.iter().map(|&s| f64::from(s)).collect::<Vec<_>>()));
        }
        m
    }
}

/// Combinatorial decomposition of a {0, ±1} PSD matrix into signed blocks.
pub fn decompose_ternary(x: &SymMat) -> Result<TernaryBlocks, DpsdError> {
    if !x.is_ternary() {
        return Err(DpsdError::Precondition("matrix entries must be in {0, ±1}".into()));
    }
    let n = x.n();
    let mut assigned = vec![false; n];
    let mut blocks = Vec::new();
    let mut zeros = Vec::new();
    for i in 0..n {
        match x.get(i, i) {
            d if d < 0.0 => return Err(DpsdError::NotPsd),
            d if d == 0.0 => {
                if (0..n).any(|j| x.get(i, j) != 0.0) {
                    return Err(DpsdError::NotPsd);
                }
                zeros.push(i);
            }
            _ if assigned[i] => {}
            _ => {
                let support: Vec<usize> = (0..n).filter(|&j| x.get(i, j) != 0.0).collect();
                // Sign relative to the smallest member; i is the smallest
                // unassigned index, hence the first element of its support.
                let signs: Vec<i8> = support.iter().map(|&j| x.get(i, j) as i8).collect();
                for (a, &j) in support.iter().enumerate() {
                    if assigned[j] {
                        return Err(DpsdError::NotPsd);
                    }
                    for k in 0..n {
                        let want = support
                            .iter()
                            .position(|&s| s == k)
                            .map_or(0.0, |b| f64::from(signs[a] * signs[b]));
                        if x.get(j, k) != want {
                            return Err(DpsdError::NotPsd);
                        }
                    }
                }
                for &j in &support {
                    assigned[j] = true;
                }
                blocks.push(SignedBlock { support, signs });
            }
        }
    }
    let mut perm: Vec<usize> = blocks.iter().flat_map(|b: &SignedBlock| b.support.iter().copied()).collect();
    perm.extend(&zeros);
    Ok(TernaryBlocks { perm, blocks, zeros: zeros.len() })
}

/// For `Y = [[1, xᵀ], [x, X]]` with `supp(diag X) = supp(x)`: `Y` is ternary
/// and PSD exactly when `X = x xᵀ` with `x` ternary. Both sides are
/// evaluated; disagreement is reported as an error rather than hidden.
pub fn ternary_rank1_check(y: &SymMat, tol: &Tolerances) -> Result<bool, DpsdError> {
    let m = y.n();
    if m == 0 || y.get(0, 0) != 1.0 {
        return Err(DpsdError::Precondition("corner entry must be 1".into()));
    }
    for i in 1..m {
        if (y.get(i, i) != 0.0) != (y.get(0, i) != 0.0) {
            return Err(DpsdError::Precondition(format!(
                "support of diag(X) and x differ at {}",
                i
            )));
        }
    }
    let lhs = y.is_ternary() && is_psd(y, tol);
    let x: Vec<f64> = (1..m).map(|i| y.get(0, i)).collect();
    let rhs = x.iter().all(|v| [-1.0, 0.0, 1.0].contains(v))
        && (1..m).all(|i| (1..=i).all(|j| y.get(i, j) == x[i - 1] * x[j - 1]));
    if lhs != rhs {
        return Err(DpsdError::Inconsistent(format!(
            "ternary PSD = {lhs} but rank-one lift = {rhs}"
        )));
    }
    Ok(lhs)
}
