use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::formulations::BuildError;
use crate::linalg::{Mat, SymMat};
use crate::model::{Diagonal, MatVars, MisdpModel, PencilBuilder, Relation, VarDomain, VarId};

/// `min tr(AXBXᵀ) + tr(CXᵀ)` over permutation matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QapInstance {
    pub a: SymMat,
    pub b: SymMat,
    pub c: Mat,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("QAPLIB parse error at token {token}: {msg}")]
pub struct QaplibError {
    pub token: usize,
    pub msg: String,
}

impl QapInstance {
    pub fn new(a: SymMat, b: SymMat, c: Option<Mat>) -> Result<Self, BuildError> {
        let n = a.n();
        if b.n() != n {
            return Err(BuildError::DimensionMismatch(format!("A has order {n}, B has order {}", b.n())));
        }
        let c = c.unwrap_or_else(|| Mat::zeros(n, n));
        if c.rows() != n || c.cols() != n {
            return Err(BuildError::DimensionMismatch(format!("C is {}x{}, expected {n}x{n}", c.rows(), c.cols())));
        }
        Ok(QapInstance { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    /// Cost of the assignment `i ↦ perm[i]`, i.e. `X_{i,perm[i]} = 1`.
    pub fn cost(&self, perm: &[usize]) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += self.a.get(i, k) * self.b.get(perm[i], perm[k]);
            }
            s += self.c[(i, perm[i])];
        }
        s
    }

    /// QAPLIB layout: `n`, then `A`, then `B`, optionally `C`, all as
    /// whitespace-separated numbers.
    pub fn parse_qaplib(text: &str) -> Result<Self, QaplibError> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let num = |i: usize| -> Result<f64, QaplibError> {
            let t = toks.get(i).ok_or(QaplibError { token: i + 1, msg: "unexpected end of input".into() })?;
            t.parse::<f64>().map_err(|e| QaplibError { token: i + 1, msg: format!("`{t}`: {e}") })
        };
        let n = num(0)?;
        if n < 1.0 || n.fract() != 0.0 {
            return Err(QaplibError { token: 1, msg: "size must be a positive integer".into() });
        }
        let n = n as usize;
        let block = |start: usize| -> Result<Vec<Vec<f64>>, QaplibError> {
            (0..n).map(|i| (0..n).map(|j| num(start + i * n + j)).collect()).collect()
        };
        let sym = |rows: Vec<Vec<f64>>, start: usize| {
            SymMat::from_rows(&rows).map_err(|e| QaplibError { token: start + 1, msg: e.to_string() })
        };
        let a = sym(block(1)?, 1)?;
        let b = sym(block(1 + n * n)?, 1 + n * n)?;
        let rest = toks.len() - (1 + 2 * n * n);
        let c = match rest {
            0 => None,
            r if r == n * n => Some(Mat::from_rows(&block(1 + 2 * n * n)?)),
            _ => return Err(QaplibError { token: 2 + 2 * n * n, msg: format!("{rest} trailing numbers") }),
        };
        QapInstance::new(a, b, c).map_err(|e| QaplibError { token: 1, msg: e.to_string() })
    }

    pub fn to_qaplib(&self) -> String {
        let n = self.n();
        let fmt = |rows: Vec<Vec<f64>>| -> String {
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::linalg::fmt_num(v)).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let mut s = format!("{n}\n\n{}\n\n{}\n", fmt(self.a.to_rows()), fmt(self.b.to_rows()));
        if self.c.as_slice().iter().any(|&v| v != 0.0) {
            s.push_str(&format!("\n{}\n", fmt((0..n).map(|i| self.c.row(i).to_vec()).collect())));
        }
        s
    }
}

/// Adjacency of the cycle `1-2-…-n-1`: the symmetric Toeplitz matrix with
/// first row `[0 1 0 … 0 1]`.
pub fn cycle_adjacency(n: usize) -> SymMat {
    SymMat::from_fn(n, |i, j| if (i + 1) % n == j || (j + 1) % n == i { 1.0 } else { 0.0 })
}

/// Permutation variables with both assignment rows.
fn permutation_matrix(m: &mut MisdpModel, n: usize) -> MatVars {
    let x = m.add_matrix("X", n, n, VarDomain::Binary);
    for i in 0..n {
        m.add_row(format!("row[{}]", i + 1), (0..n).map(|j| (x.get(i, j), 1.0)).collect(), Relation::Eq, 1.0);
    }
    for j in 0..n {
        m.add_row(format!("col[{}]", j + 1), (0..n).map(|i| (x.get(i, j), 1.0)).collect(), Relation::Eq, 1.0);
    }
    x
}

/// Matrix-lifted QAP: `[[I, Xᵀ, Rᵀ],[X, I, Y],[R, Y, Z]] ⪰ 0`, `R = XB`,
/// `X` a permutation matrix, objective `⟨A, Y⟩ + ⟨C, X⟩`.
pub fn build_qap(q: &QapInstance) -> MisdpModel {
    build_qap_lift(q, "qap", 1.0)
}

fn build_qap_lift(q: &QapInstance, provenance: &str, scale: f64) -> MisdpModel {
    let n = q.n();
    let mut m = MisdpModel::new(provenance);
    let x = permutation_matrix(&mut m, n);
    let r = m.add_matrix("R", n, n, VarDomain::free());
    let y = m.add_sym_matrix("Y", n, Diagonal::Own(VarDomain::free()), VarDomain::free());
    let z = m.add_sym_matrix("Z", n, Diagonal::Own(VarDomain::free()), VarDomain::free());
    for i in 0..n {
        for j in 0..n {
            let mut terms: Vec<(VarId, f64)> = vec![(r.get(i, j), 1.0)];
            terms.extend((0..n).map(|l| (x.get(i, l), -q.b.get(l, j))));
            m.add_row(format!("R[{},{}]", i + 1, j + 1), terms, Relation::Eq, 0.0);
        }
    }
    let (mut obj, c) = y.inner(&q.a);
    for t in &mut obj {
        t.1 *= scale;
    }
    for i in 0..n {
        for j in 0..n {
            obj.push((x.get(i, j), q.c[(i, j)]));
        }
    }
    m.minimize(obj, c * scale);

    let mut pb = PencilBuilder::new(3 * n);
    for i in 0..2 * n {
        pb.constant(i, i, 1.0);
    }
    for i in 0..n {
        for j in 0..n {
            pb.var(x.get(i, j), n + i, j, 1.0);
            pb.var(r.get(i, j), 2 * n + i, j, 1.0);
            pb.var(y.get(i, j), 2 * n + i, n + j, 1.0);
        }
    }
    z.add_to_pencil(&mut pb, 2 * n, 1.0);
    m.add_pencil(pb.build("lift"));
    m.canonicalize();
    m
}

fn check_distances(d: &SymMat, min_n: usize) -> Result<(), BuildError> {
    if d.n() < min_n {
        return Err(BuildError::DimensionMismatch(format!("need at least {min_n} cities, got {}", d.n())));
    }
    Ok(())
}

/// TSP as a QAP with `A = D`, `B` the cycle adjacency, `C = 0` and the
/// objective halved to `½⟨D, Y⟩`.
pub fn build_tsp_qap(d: &SymMat) -> Result<MisdpModel, BuildError> {
    check_distances(d, 3)?;
    let n = d.n();
    let q = QapInstance::new(d.clone(), cycle_adjacency(n), None)?;
    Ok(build_qap_lift(&q, "tsp-qap", 0.5))
}

/// Off-diagonal variables of a hollow symmetric matrix; `None` on the
/// diagonal.
pub(crate) struct Hollow {
    n: usize,
    ids: Vec<VarId>,
}

impl Hollow {
    pub(crate) fn new(m: &mut MisdpModel, name: &str, n: usize, domain: VarDomain) -> Self {
        let ids = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m.add_var(format!("{name}[{},{}]", i + 1, j + 1), domain.clone()))
            .collect();
        Hollow { n, ids }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> VarId {
        let (a, b) = (i.min(j), i.max(j));
        assert!(a != b, "hollow matrices have no diagonal variables");
        self.ids[a * self.n - a * (a + 1) / 2 + (b - a - 1)]
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (usize, usize, VarId)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// `½⟨D, X⟩ = Σ_{i<j} D_ij X_ij` for a zero-diagonal `X`.
    pub(crate) fn half_inner(&self, d: &SymMat) -> Vec<(VarId, f64)> {
        self.pairs().map(|(i, j, v)| (v, d.get(i, j))).collect()
    }

    pub(crate) fn row_sum(&self, i: usize) -> Vec<(VarId, f64)> {
        (0..self.n).filter(|&j| j != i).map(|j| (self.get(i, j), 1.0)).collect()
    }

    pub(crate) fn add_to_pencil(&self, pb: &mut PencilBuilder, scale: f64) {
        for (i, j, v) in self.pairs() {
            pb.var(v, i, j, scale);
        }
    }
}

/// Algebraic-connectivity TSP model: `X1 = 2·1`, `diag(X) = 0`, `X` binary,
/// `2I − X + 2(1 − cos(2π/n))(J − I) ⪰ 0`, objective `½⟨D, X⟩`.
pub fn build_tsp_cvetkovic(d: &SymMat) -> Result<MisdpModel, BuildError> {
    check_distances(d, 3)?;
    let n = d.n();
    let mut m = MisdpModel::new("tsp-cvetkovic");
    let x = Hollow::new(&mut m, "X", n, VarDomain::Binary);
    m.minimize(x.half_inner(d), 0.0);
    for i in 0..n {
        m.add_row(format!("degree[{}]", i + 1), x.row_sum(i), Relation::Eq, 2.0);
    }
    let alpha = 2.0 * (1.0 - (2.0 * PI / n as f64).cos());
    let mut pb = PencilBuilder::new(n);
    for i in 0..n {
        pb.constant(i, i, 2.0);
        for j in i + 1..n {
            pb.constant(i, j, alpha);
        }
    }
    x.add_to_pencil(&mut pb, -1.0);
    m.add_pencil(pb.build("connectivity"));
    m.canonicalize();
    Ok(m)
}

/// Lee-scheme TSP model for odd `n`: `X_1` binary, `X_2..X_r` nonnegative,
/// `I + Σ X_i = J` and `I + Σ_i cos(2ijπ/n) X_i ⪰ 0` for `j = 1..r`, with
/// `r = ⌊n/2⌋`. The diagonals are zero (forced by the sum rows and
/// nonnegativity), so only off-diagonal variables are created.
pub fn build_tsp_lee(d: &SymMat) -> Result<MisdpModel, BuildError> {
    let n = d.n();
    if n % 2 == 0 {
        return Err(BuildError::EvenOrder(n));
    }
    check_distances(d, 5)?;
    let r = n / 2;
    let mut m = MisdpModel::new("tsp-lee");
    let xs: Vec<Hollow> = (1..=r)
        .map(|t| Hollow::new(&mut m, &format!("X{t}"), n, if t == 1 { VarDomain::Binary } else { VarDomain::nonneg() }))
        .collect();
    m.minimize(xs[0].half_inner(d), 0.0);
    for i in 0..n {
        for j in i + 1..n {
            let terms = xs.iter().map(|x| (x.get(i, j), 1.0)).collect();
            m.add_row(format!("sum[{},{}]", i + 1, j + 1), terms, Relation::Eq, 1.0);
        }
    }
    for j in 1..=r {
        let mut pb = PencilBuilder::new(n);
        for i in 0..n {
            pb.constant(i, i, 1.0);
        }
        for (t, x) in xs.iter().enumerate() {
            x.add_to_pencil(&mut pb, lee_cos(n, t + 1, j));
        }
        m.add_pencil(pb.build(format!("eigen[{j}]")));
    }
    m.canonicalize();
    Ok(m)
}

/// `cos(2ijπ/n)`, the dual eigenvalue `Q_ij / 2` of the Lee scheme.
pub fn lee_cos(n: usize, i: usize, j: usize) -> f64 {
    (2.0 * PI * (i * j) as f64 / n as f64).cos()
}
