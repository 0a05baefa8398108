use serde::{Deserialize, Serialize};

use crate::formulations::{bordered_pencil, BuildError};
use crate::linalg::{Mat, SymMat};
use crate::model::{Diagonal, MisdpModel, PencilBuilder, Relation, VarDomain, VarId};

/// Partially observed `rows × cols` matrix; unobserved entries range over
/// a discrete set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionInstance {
    pub rows: usize,
    pub cols: usize,
    /// `(i, j, value)`, 0-based.
    pub observed: Vec<(usize, usize, f64)>,
    /// Domain of every unobserved entry.
    pub domain: VarDomain,
}

impl CompletionInstance {
    pub fn validate(&self) -> Result<(), BuildError> {
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, _) in &self.observed {
            if i >= self.rows || j >= self.cols {
                return Err(BuildError::DimensionMismatch(format!("observed entry ({},{}) outside the matrix", i + 1, j + 1)));
            }
            if !seen.insert((i, j)) {
                return Err(BuildError::DimensionMismatch(format!("entry ({},{}) observed twice", i + 1, j + 1)));
            }
        }
        if self.domain.is_continuous() {
            return Err(BuildError::VariantPrecondition("unobserved entries need a discrete domain".into()));
        }
        Ok(())
    }

    pub fn observed_value(&self, i: usize, j: usize) -> Option<f64> {
        self.observed.iter().find(|o| o.0 == i && o.1 == j).map(|o| o.2)
    }

    /// Unobserved positions, row-major.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.observed_value(i, j).is_none())
            .collect()
    }

    /// The matrix with the free entries filled in order.
    pub fn complete(&self, values: &[f64]) -> Mat {
        let mut x = Mat::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.observed {
            x[(i, j)] = v;
        }
        for (&(i, j), &v) in self.free_positions().iter().zip(values) {
            x[(i, j)] = v;
        }
        x
    }
}

/// Integer matrix completion: `min ½(⟨I, Z₁⟩ + ⟨I, Z₂⟩)` subject to
/// `[[Z₁, X],[Xᵀ, Z₂]] ⪰ 0`, `X = D` on the observed set and integer
/// elsewhere.
///
/// The ½ makes the optimum equal the nuclear norm `‖X‖_*`. Observed entries
/// enter the pencil as constants.
pub fn build_matrix_completion(c: &CompletionInstance) -> Result<MisdpModel, BuildError> {
    c.validate()?;
    let (n, m_) = (c.rows, c.cols);
    let mut m = MisdpModel::new("matrix-completion");
    let free: Vec<(usize, usize, VarId)> = c
        .free_positions()
        .into_iter()
        .map(|(i, j)| (i, j, m.add_var(format!("X[{},{}]", i + 1, j + 1), c.domain.clone())))
        .collect();
    let z1 = m.add_sym_matrix("Z1", n, Diagonal::Own(VarDomain::free()), VarDomain::free());
    let z2 = m.add_sym_matrix("Z2", m_, Diagonal::Own(VarDomain::free()), VarDomain::free());
    let mut obj: Vec<(VarId, f64)> = (0..n).map(|i| (z1.get(i, i), 0.5)).collect();
    obj.extend((0..m_).map(|i| (z2.get(i, i), 0.5)));
    m.minimize(obj, 0.0);
    let mut pb = PencilBuilder::new(n + m_);
    z1.add_to_pencil(&mut pb, 0, 1.0);
    z2.add_to_pencil(&mut pb, n, 1.0);
    for &(i, j, v) in &c.observed {
        pb.constant(i, n + j, v);
    }
    for &(i, j, v) in &free {
        pb.var(v, i, n + j, 1.0);
    }
    m.add_pencil(pb.build("norm"));
    m.canonicalize();
    Ok(m)
}

/// Sparse integer least squares: `min (1/n)‖Mx − b‖²` over ternary `x` with
/// at most `cap` nonzeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilsInstance {
    pub m: Mat,
    pub b: Vec<f64>,
    pub cap: usize,
}

impl SilsInstance {
    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn k(&self) -> usize {
        self.m.cols()
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.b.len() != self.n() {
            return Err(BuildError::DimensionMismatch(format!("b has length {}, M has {} rows", self.b.len(), self.n())));
        }
        if self.cap > self.k() {
            return Err(BuildError::DimensionMismatch(format!("cap {} exceeds {} columns", self.cap, self.k())));
        }
        if self.n() == 0 {
            return Err(BuildError::DimensionMismatch("M has no rows".into()));
        }
        Ok(())
    }

    /// `(1/n)‖Mx − b‖²`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mx = self.m.mul_vec(x);
        mx.iter().zip(&self.b).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / self.n() as f64
    }
}

/// Ternary SDP: `Y = [[1, xᵀ],[x, X]]` ternary and PSD, `tr(X) ≤ K`,
/// `diag(X) = y₁ + y₂`, `x = y₁ − y₂`, `y ≥ 0`; objective
/// `(1/n)⟨Y, [[bᵀb, −bᵀM],[−Mᵀb, MᵀM]]⟩`.
///
/// `y₁, y₂` have one entry per column of `M`.
pub fn build_sils(s: &SilsInstance) -> Result<MisdpModel, BuildError> {
    s.validate()?;
    let (n, k) = (s.n(), s.k());
    let inv = 1.0 / n as f64;
    let mut m = MisdpModel::new("sils");
    let x = m.add_vector("x", k, VarDomain::Ternary);
    let xx = m.add_sym_matrix("X", k, Diagonal::Own(VarDomain::Ternary), VarDomain::Ternary);
    let y1 = m.add_vector("y1", k, VarDomain::nonneg());
    let y2 = m.add_vector("y2", k, VarDomain::nonneg());
    let mtm = SymMat::from_fn(k, |i, j| (0..n).map(|r| s.m[(r, i)] * s.m[(r, j)]).sum::<f64>() * inv);
    let mtb: Vec<f64> = (0..k).map(|j| (0..n).map(|r| s.m[(r, j)] * s.b[r]).sum()).collect();
    let btb: f64 = s.b.iter().map(|v| v * v).sum();
    let (mut obj, c) = xx.inner(&mtm);
    obj.extend(x.iter().zip(&mtb).map(|(&v, &a)| (v, -2.0 * a * inv)));
    m.minimize(obj, c + btb * inv);
    m.add_row("trace", (0..k).map(|i| (xx.get(i, i), 1.0)).collect(), Relation::Le, s.cap as f64);
    for i in 0..k {
        m.add_row(format!("diag[{}]", i + 1), vec![(xx.get(i, i), 1.0), (y1[i], -1.0), (y2[i], -1.0)], Relation::Eq, 0.0);
        m.add_row(format!("split[{}]", i + 1), vec![(x[i], 1.0), (y1[i], -1.0), (y2[i], 1.0)], Relation::Eq, 0.0);
    }
    m.add_pencil(bordered_pencil("lift", 1.0, &x, &xx));
    m.canonicalize();
    Ok(m)
}
