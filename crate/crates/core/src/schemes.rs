//! Symmetric association schemes: axiom checks with exact intersection
//! numbers, eigenmatrices from shared eigenspaces, and the two schemes the
//! TSP and equipartition models are built on.
//!
//! Conventions: `A_j = Σ_i P[i][j] E_i` and `E_j = (1/n) Σ_i Q[i][j] A_i`,
//! so `P` has one row per idempotent and `Q` one row per relation.
//! `E_0 = J/n`; the other idempotents are ordered by descending rank, then by
//! descending eigenvalue of `A_1` (then `A_2`, …).

use serde::{Deserialize, Serialize};

use crate::linalg::{eigensym, LinalgError, Mat, SymMat};
use crate::problems::Graph;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// `A_0 = I`, `Σ A_i = J`, entries binary.
    I,
    /// `A_i A_j = A_j A_i`.
    III,
    /// `A_i A_j ∈ span{A_h}`.
    IV,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axiom::I => "i",
            Axiom::III => "iii",
            Axiom::IV => "iv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("axiom ({axiom}) fails: {detail}")]
    AxiomViolation { axiom: Axiom, detail: String },
    #[error("matrices have different orders or the list is empty")]
    Shape,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("order {0} is even")]
    EvenOrder(usize),
    #[error("order {0} is too small")]
    TooSmall(usize),
    #[error("spectral decomposition failed: {0}")]
    Spectral(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationScheme {
    pub n: usize,
    /// `A_0 = I, A_1, …, A_r`.
    pub matrices: Vec<SymMat>,
    /// `intersection[h][i][j] = p^h_{ij}`.
    pub intersection: Vec<Vec<Vec<i64>>>,
    /// First eigenmatrix, `(r+1) × (r+1)`.
    pub p: Mat,
    /// Second (dual) eigenmatrix.
    pub q: Mat,
    /// Ranks of `E_0, …, E_r`.
    pub multiplicities: Vec<usize>,
    /// Row sums of `A_0, …, A_r`.
    pub valencies: Vec<usize>,
    /// Largest defect among `E_iE_j = δ_ij E_i`, `Σ E_i = I` and the
    /// reconstruction of `E_j` from `Q`.
    pub idempotent_residual: f64,
}

impl AssociationScheme {
    pub fn r(&self) -> usize {
        self.matrices.len() - 1
    }

    /// `p^h_{ij}`.
    pub fn p_hij(&self, h: usize, i: usize, j: usize) -> i64 {
        self.intersection[h][i][j]
    }
}

fn to_int(a: &SymMat) -> Option<Vec<i64>> {
    let n = a.n();
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = a.get(i, j);
            if v != 0.0 && v != 1.0 {
                return None;
            }
            out[i * n + j] = v as i64;
        }
    }
    Some(out)
}

fn int_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0 {
                for j in 0..n {
                    c[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    c
}

/// Checks axioms (i), (iv) and (iii), in that order, and computes the
/// intersection numbers exactly and the eigenmatrices numerically.
pub fn verify_axioms(mats: &[SymMat], tol: &Tolerances) -> Result<AssociationScheme, SchemeError> {
    let n = mats.first().ok_or(SchemeError::Shape)?.n();
    if mats.iter().any(|a| a.n() != n) || n == 0 {
        return Err(SchemeError::Shape);
    }
    let viol = |axiom, detail: String| SchemeError::AxiomViolation { axiom, detail };
    let ints: Vec<Vec<i64>> = mats
        .iter()
        .enumerate()
        .map(|(i, a)| to_int(a).ok_or_else(|| viol(Axiom::I, format!("A_{i} is not binary"))))
        .collect::<Result<_, _>>()?;
    let r1 = mats.len();
    // (i): A_0 = I and the relations partition J.
    for x in 0..n {
        for y in 0..n {
            if ints[0][x * n + y] != (x == y) as i64 {
                return Err(viol(Axiom::I, "A_0 is not the identity".into()));
            }
            let s: i64 = ints.iter().map(|a| a[x * n + y]).sum();
            if s != 1 {
                return Err(viol(Axiom::I, format!("entry ({},{}) is covered {s} times", x + 1, y + 1)));
            }
        }
    }
    if let Some(i) = ints.iter().position(|a| a.iter().all(|&v| v == 0)) {
        return Err(viol(Axiom::I, format!("A_{i} is zero")));
    }
    // relation index of every position
    let mut rel = vec![0usize; n * n];
    for (h, a) in ints.iter().enumerate() {
        for (p, &v) in a.iter().enumerate() {
            if v == 1 {
                rel[p] = h;
            }
        }
    }
    let mut inter = vec![vec![vec![0i64; r1]; r1]; r1];
    for i in 0..r1 {
        for j in 0..r1 {
            let prod = int_mul(&ints[i], &ints[j], n);
            let mut seen: Vec<Option<i64>> = vec![None; r1];
            for (p, &v) in prod.iter().enumerate() {
                let h = rel[p];
                match seen[h] {
                    None => seen[h] = Some(v),
                    Some(w) if w != v => {
                        return Err(viol(Axiom::IV, format!("A_{i}A_{j} is not constant on A_{h}")));
                    }
                    _ => {}
                }
            }
            for h in 0..r1 {
                inter[h][i][j] = seen[h].unwrap_or(0);
            }
        }
    }
    for i in 0..r1 {
        for j in 0..i {
            for h in 0..r1 {
                if inter[h][i][j] != inter[h][j][i] {
                    return Err(viol(Axiom::III, format!("A_{i} and A_{j} do not commute")));
                }
            }
        }
    }
    let valencies: Vec<usize> = ints.iter().map(|a| a[..n].iter().sum::<i64>() as usize).collect();
    let (p, q, mult) = eigenmatrices(mats, &valencies, tol)?;
    let mut s = AssociationScheme {
        n,
        matrices: mats.to_vec(),
        intersection: inter,
        p,
        q,
        multiplicities: mult,
        valencies,
        idempotent_residual: 0.0,
    };
    s.idempotent_residual = idempotents(&s).1;
    Ok(s)
}

/// Orthonormal bases of the common eigenspaces, splitting by `A_1`, then
/// refining each piece by `A_2`, …
fn common_eigenspaces(mats: &[SymMat], tol: &Tolerances) -> Result<Vec<Mat>, SchemeError> {
    let n = mats[0].n();
    let mut spaces = vec![Mat::identity(n)];
    for a in &mats[1..] {
        let am = a.to_mat();
        let mut next = Vec::new();
        for u in spaces {
            if u.cols() == 1 {
                next.push(u);
                continue;
            }
            let m = SymMat::sym_part(&u.transpose().mul(&am).mul(&u));
            let e = eigensym(&m, tol)?;
            let scale = e.values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
            let mut start = 0;
            for k in 1..=e.values.len() {
                if k == e.values.len() || e.values[k - 1] - e.values[k] > tol.cluster * scale {
                    let w = Mat::from_fn(u.cols(), k - start, |r, c| e.vectors[(r, start + c)]);
                    next.push(u.mul(&w));
                    start = k;
                }
            }
        }
        spaces = next;
    }
    Ok(spaces)
}

fn frob_inner(a: &SymMat, b: &SymMat) -> f64 {
    a.inner(b)
}

fn eigenmatrices(mats: &[SymMat], val: &[usize], tol: &Tolerances) -> Result<(Mat, Mat, Vec<usize>), SchemeError> {
    let n = mats[0].n();
    let r1 = mats.len();
    let spaces = common_eigenspaces(mats, tol)?;
    if spaces.len() != r1 {
        return Err(SchemeError::Spectral(format!("{} common eigenspaces, expected {r1}", spaces.len())));
    }
    let es: Vec<SymMat> = spaces.iter().map(|u| SymMat::sym_part(&u.mul(&u.transpose()))).collect();
    // eigenvalue of A_i on E_s
    let eig: Vec<Vec<f64>> =
        es.iter().zip(&spaces).map(|(e, u)| mats.iter().map(|a| frob_inner(a, e) / u.cols() as f64).collect()).collect();
    let ones = SymMat::ones(n);
    let first = (0..r1)
        .max_by(|&a, &b| frob_inner(&ones, &es[a]).total_cmp(&frob_inner(&ones, &es[b])))
        .expect("nonempty");
    let mut order: Vec<usize> = (0..r1).filter(|&s| s != first).collect();
    order.sort_by(|&a, &b| {
        spaces[b].cols().cmp(&spaces[a].cols()).then_with(|| {
            for i in 1..r1 {
                let (x, y) = (eig[a][i], eig[b][i]);
                if (x - y).abs() > tol.cluster * x.abs().max(y.abs()).max(1.0) {
                    return y.total_cmp(&x);
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    order.insert(0, first);
    let p = Mat::from_fn(r1, r1, |s, i| eig[order[s]][i]);
    let q = Mat::from_fn(r1, r1, |i, s| frob_inner(&mats[i], &es[order[s]]) / val[i] as f64);
    let mult = order.iter().map(|&s| spaces[s].cols()).collect();
    Ok((p, q, mult))
}

/// `E_j = (1/n) Σ_i Q_ij A_i` and the largest defect of the idempotent
/// identities.
pub fn idempotents(s: &AssociationScheme) -> (Vec<SymMat>, f64) {
    let n = s.n;
    let r1 = s.matrices.len();
    let es: Vec<SymMat> = (0..r1)
        .map(|j| {
            let mut e = SymMat::zeros(n);
            for i in 0..r1 {
                e = e.add(&s.matrices[i].scale(s.q[(i, j)] / n as f64));
            }
            e
        })
        .collect();
    let mut res: f64 = 0.0;
    let mut total = SymMat::zeros(n);
    for i in 0..r1 {
        total = total.add(&es[i]);
        for j in 0..r1 {
            let prod = es[i].mul(&es[j]);
            let target = if i == j { es[i].to_mat() } else { Mat::zeros(n, n) };
            res = res.max(prod.max_abs_diff(&target));
        }
    }
    res = res.max(total.sub(&SymMat::identity(n)).norm_inf());
    (es, res)
}

/// Distance-`i` matrices `A_0 … A_d` of a connected graph.
pub fn distance_matrices(g: &Graph) -> Result<Vec<SymMat>, SchemeError> {
    let n = g.n();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| g.bfs(s)).collect();
    if dist.iter().flatten().any(Option::is_none) {
        return Err(SchemeError::Disconnected);
    }
    let d = dist.iter().flatten().map(|x| x.unwrap()).max().unwrap_or(0);
    Ok((0..=d).map(|k| SymMat::from_fn(n, |i, j| (dist[i][j] == Some(k)) as u8 as f64)).collect())
}

/// `X_2 = X_1² − 2I`, `X_{i+1} = X_1X_i − X_{i−1}`; returns `X_1 … X_r`.
///
/// For the adjacency of `C_n` these are its distance matrices.
pub fn cycle_recurrence(x1: &SymMat, r: usize) -> Vec<SymMat> {
    let n = x1.n();
    let mut out = vec![x1.clone()];
    if r >= 2 {
        out.push(SymMat::sym_part(&x1.mul(x1)).sub(&SymMat::identity(n).scale(2.0)));
    }
    while out.len() < r {
        let k = out.len();
        let next = SymMat::sym_part(&x1.mul(&out[k - 1])).sub(&out[k - 2]);
        out.push(next);
    }
    out
}

/// Scheme of the distance matrices of `C_n`, odd `n ≥ 5`, with its dual
/// eigenvalue pattern checked (`Q_{i0} = 1`, `Q_{0j} = 2`).
pub fn lee_scheme(n: usize, tol: &Tolerances) -> Result<AssociationScheme, SchemeError> {
    if n % 2 == 0 {
        return Err(SchemeError::EvenOrder(n));
    }
    if n < 5 {
        return Err(SchemeError::TooSmall(n));
    }
    let s = verify_axioms(&distance_matrices(&Graph::cycle(n))?, tol)?;
    let r1 = s.matrices.len();
    let bad = (0..r1).any(|i| (s.q[(i, 0)] - 1.0).abs() > 1e-8) || (1..r1).any(|j| (s.q[(0, j)] - 2.0).abs() > 1e-8);
    if bad {
        return Err(SchemeError::Spectral("dual eigenvalues do not follow the cycle pattern".into()));
    }
    Ok(s)
}

/// Relations of the k-equipartition scheme on `n = mk` points:
/// `[I, different part, same part]`.
pub fn kep_matrices(m: usize, k: usize) -> Vec<SymMat> {
    let n = m * k;
    let same = SymMat::from_fn(n, |i, j| (i != j && i / m == j / m) as u8 as f64);
    let across = SymMat::from_fn(n, |i, j| (i / m != j / m) as u8 as f64);
    vec![SymMat::identity(n), across, same]
}

/// Closed form of the dual eigenmatrix of [`kep_matrices`].
pub fn kep_scheme_eigen(m: usize, k: usize) -> Mat {
    let (m, k) = (m as f64, k as f64);
    Mat::from_rows(&[vec![1.0, (m - 1.0) * k, k - 1.0], vec![1.0, 0.0, -1.0], vec![1.0, -k, k - 1.0]])
}
