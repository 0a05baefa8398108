//! Cyclic Jacobi eigensolver and the PSD / rank predicates built on it.

use super::{LinalgError, Mat, SymMat};
use crate::tolerance::Tolerances;

/// Spectral decomposition `A = V diag(λ) Vᵀ` with `λ` sorted descending and
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.col(k)
    }

    /// `V diag(f(λ)) Vᵀ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> SymMat {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMat::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * fv[k] * self.vectors[(j, k)]).sum()
        })
    }

    /// `‖A - V diag(λ) Vᵀ‖_∞`-style residual (max abs entry).
    pub fn reconstruction_error(&self, a: &SymMat) -> f64 {
        let r = self.apply(|l| l);
        let n = a.n();
        let mut e: f64 = 0.0;
        for i in 0..n {
            for j in 0..=i {
                e = e.max((r.get(i, j) - a.get(i, j)).abs());
            }
        }
        e
    }

    /// `max |VᵀV - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let vtv = self.vectors.transpose().mul(&self.vectors);
        vtv.max_abs_diff(&Mat::identity(self.values.len()))
    }
}

/// Eigen-decomposes a symmetric matrix with cyclic Jacobi rotations.
pub fn eigensym(a: &SymMat, tol: &Tolerances) -> Result<Eigen, LinalgError> {
    let n = a.n();
    let mut m = a.to_dense();
    let mut v = Mat::identity(n);
    let frob = a.norm_frob();
    let target = tol.eig_rel * frob;

    let mut converged = false;
    for _ in 0..=tol.eig_max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                // signum(0) is 1 for f64, which is the convention we want.
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                m[p * n + p] -= t * apq;
                m[q * n + q] += t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = m[k * n + p];
                        let akq = m[k * n + q];
                        let np = c * akp - s * akq;
                        let nq = s * akp + c * akq;
                        m[k * n + p] = np;
                        m[p * n + k] = np;
                        m[k * n + q] = nq;
                        m[q * n + k] = nq;
                    }
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(LinalgError::NonConvergence { sweeps: tol.eig_max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].total_cmp(&m[i * n + i]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

fn psd_threshold(a: &SymMat, tol: &Tolerances) -> f64 {
    tol.psd_rel * a.norm_inf().max(1.0)
}

/// Outcome of a Cholesky attempt on `A + tI`.
enum CholeskyVerdict {
    Accept,
    Reject,
    Unsure,
}

fn shifted_cholesky(a: &SymMat, shift: f64) -> CholeskyVerdict {
    let n = a.n();
    // Pivots within this band are indistinguishable from zero in floating point.
    let band = 1e-13 * a.norm_inf().max(1.0) * (n as f64).max(1.0);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j) + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d < -band {
            return CholeskyVerdict::Reject;
        }
        if d <= band {
            return CholeskyVerdict::Unsure;
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    CholeskyVerdict::Accept
}

/// `λ_min(A) ≥ -psd_rel · max(1, ‖A‖∞)`.
///
/// A Cholesky factorization of the shifted matrix settles clear cases; the
/// eigensolver is only consulted when a pivot lands near zero.
pub fn is_psd(a: &SymMat, tol: &Tolerances) -> bool {
    if a.n() == 0 {
        return true;
    }
    let t = psd_threshold(a, tol);
    match shifted_cholesky(a, t) {
        CholeskyVerdict::Accept => true,
        CholeskyVerdict::Reject => false,
        CholeskyVerdict::Unsure => match eigensym(a, tol) {
            Ok(e) => e.min() >= -t,
            Err(_) => false,
        },
    }
}

/// Eigenvalue-only PSD test, the reference definition of [`is_psd`].
pub fn is_psd_eig(a: &SymMat, tol: &Tolerances) -> Result<bool, LinalgError> {
    if a.n() == 0 {
        return Ok(true);
    }
    Ok(eigensym(a, tol)?.min() >= -psd_threshold(a, tol))
}

/// Number of eigenvalues with `|λ| > rank_rel · max(1, λ_max)`.
pub fn num_rank(a: &SymMat, tol: &Tolerances) -> Result<usize, LinalgError> {
    if a.n() == 0 {
        return Ok(0);
    }
    let e = eigensym(a, tol)?;
    let cut = tol.rank_rel * e.max().max(1.0);
    Ok(e.values.iter().filter(|l| l.abs() > cut).count())
}

pub fn min_eigenvalue(a: &SymMat, tol: &Tolerances) -> Result<f64, LinalgError> {
    if a.n() == 0 {
        return Ok(0.0);
    }
    Ok(eigensym(a, tol)?.min())
}

/// Moore-Penrose pseudo-inverse, dropping eigenvalues below the rank cut.
pub fn pinv(a: &SymMat, tol: &Tolerances) -> Result<SymMat, LinalgError> {
    let e = eigensym(a, tol)?;
    let cut = tol.rank_rel * e.values.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    Ok(e.apply(|l| if l.abs() > cut { 1.0 / l } else { 0.0 }))
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped to 0).
pub fn sqrt_psd(a: &SymMat, tol: &Tolerances) -> Result<SymMat, LinalgError> {
    Ok(eigensym(a, tol)?.apply(|l| l.max(0.0).sqrt()))
}

/// Sum of singular values of a general matrix.
pub fn nuclear_norm(x: &Mat, tol: &Tolerances) -> Result<f64, LinalgError> {
    let g = if x.rows() <= x.cols() {
        x.mul(&x.transpose())
    } else {
        x.transpose().mul(x)
    };
    let g = SymMat::sym_part(&g);
    Ok(eigensym(&g, tol)?.values.iter().map(|l| l.max(0.0).sqrt()).sum())
}

/// Least-squares solution of `A x = b` that insists on a unique minimizer.
///
/// Returns `Ok(None)` when the system is inconsistent beyond `residual_tol`
/// and `Err(Rank)` when `A` lacks full column rank.
pub fn solve_unique(a: &Mat, b: &[f64], residual_tol: f64) -> Result<Option<Vec<f64>>, LinalgError> {
    let n = a.cols();
    let m = a.rows();
    // Householder QR on [A | b].
    let mut r = a.clone();
    let mut rhs = b.to_vec();
    let scale = a.as_slice().iter().fold(1.0f64, |s, v| s.max(v.abs()));
    for k in 0..n {
        if k >= m {
            return Err(LinalgError::Rank);
        }
        let norm: f64 = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm <= 1e-10 * scale {
            return Err(LinalgError::Rank);
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for j in k..n {
                let dot: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in k..m {
                    r[(i, j)] -= f * v[i - k];
                }
            }
            let dot: f64 = (k..m).map(|i| v[i - k] * rhs[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                rhs[i] -= f * v[i - k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = ((k + 1)..n).map(|j| r[(k, j)] * x[j]).sum();
        x[k] = (rhs[k] - s) / r[(k, k)];
    }
    let resid = a.mul_vec(&x).iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    if resid > residual_tol {
        return Ok(None);
    }
    Ok(Some(x))
}
