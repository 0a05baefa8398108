use serde::{Deserialize, Serialize};

use super::Graph;
use crate::formulations::{bordered_pencil, qmp1_lift, qmp1_pencil, qmp2_lift, BuildError};
use crate::linalg::SymMat;
use crate::model::{Diagonal, MisdpModel, PencilBuilder, Relation, VarDomain, VarId};

/// Maximum stable set: `max ⟨I, X⟩` with `X_ij = 0` on edges,
/// `[[1, xᵀ],[x, X]] ⪰ 0` and `diag(X) = x` binary.
///
/// Off-diagonal entries are continuous in `[0, 1]` and flagged
/// implied-integer, as in the QCQP compiler.
pub fn build_stable_set(g: &Graph) -> MisdpModel {
    let n = g.n();
    let mut m = MisdpModel::new("stable-set");
    let x = m.add_vector("x", n, VarDomain::Binary);
    let xx = m.add_sym_matrix("X", n, Diagonal::Alias(&x), VarDomain::interval(0.0, 1.0));
    for (_, _, v) in xx.off_diagonal() {
        m.mark_implied_integer(v);
    }
    m.maximize(x.iter().map(|&v| (v, 1.0)).collect(), 0.0);
    for &(i, j) in g.edges() {
        m.add_row(format!("edge[{},{}]", i + 1, j + 1), vec![(xx.get(i, j), 1.0)], Relation::Eq, 0.0);
    }
    m.add_pencil(bordered_pencil("lift", 1.0, &x, &xx));
    m.canonicalize();
    m
}

/// Maximum k-colorable subgraph: as the stable set model but with corner
/// `k` and all of `X` binary.
pub fn build_mkcs(g: &Graph, k: usize) -> Result<MisdpModel, BuildError> {
    let n = g.n();
    if k == 0 || k > n.max(1) {
        return Err(BuildError::DimensionMismatch(format!("k = {k} outside 1..={n}")));
    }
    let mut m = MisdpModel::new("mkcs");
    let (xx, x) = qmp1_lift(&mut m, n, false);
    m.maximize((0..n).map(|i| (xx.get(i, i), 1.0)).collect(), 0.0);
    for &(i, j) in g.edges() {
        m.add_row(format!("edge[{},{}]", i + 1, j + 1), vec![(xx.get(i, j), 1.0)], Relation::Eq, 0.0);
    }
    m.add_pencil(qmp1_pencil(&xx, &x, k as f64));
    m.canonicalize();
    Ok(m)
}

/// Quadratic bin packing: items with weights `w`, bins of capacity `cap`
/// and cost `c`, pairwise dissimilarity `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QbppInstance {
    pub weights: Vec<f64>,
    pub capacity: f64,
    pub bin_cost: f64,
    pub dissimilarity: SymMat,
}

impl QbppInstance {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.dissimilarity.n() != self.n() {
            return Err(BuildError::DimensionMismatch(format!(
                "dissimilarity has order {}, expected {}",
                self.dissimilarity.n(),
                self.n()
            )));
        }
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.capacity {
                return Err(BuildError::InfeasibleItem { item: i + 1, weight: w, capacity: self.capacity });
            }
        }
        Ok(())
    }
}

/// `min ⟨[[z, 1ᵀ],[1, X]], c ⊕ D⟩` with `Xw ≤ W·1`, `diag(X) = 1`, the
/// bordered matrix PSD, `X` binary and `z` a free real.
///
/// At an optimum `z = rank(X)`, the number of bins.
pub fn build_qbpp(q: &QbppInstance) -> Result<MisdpModel, BuildError> {
    q.validate()?;
    let n = q.n();
    let mut m = MisdpModel::new("qbpp");
    let z = m.add_var("z", VarDomain::free());
    let xx = m.add_sym_matrix("X", n, Diagonal::Fixed(1.0), VarDomain::Binary);
    let (mut obj, c) = xx.inner(&q.dissimilarity);
    obj.push((z, q.bin_cost));
    m.minimize(obj, c);
    for r in 0..n {
        let (terms, c) = xx.row_times(r, &q.weights);
        m.add_row(format!("cap[{}]", r + 1), terms, Relation::Le, q.capacity - c);
    }
    let mut pb = PencilBuilder::new(n + 1);
    pb.var(z, 0, 0, 1.0);
    for i in 0..n {
        pb.constant(0, i + 1, 1.0);
    }
    xx.add_to_pencil(&mut pb, 1, 1.0);
    m.add_pencil(pb.build("lift"));
    m.canonicalize();
    Ok(m)
}

/// Quadratic multiple knapsack: item weights and profits, knapsack
/// capacities, pairwise revenue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QmkpInstance {
    pub weights: Vec<f64>,
    pub capacities: Vec<f64>,
    pub profits: Vec<f64>,
    pub revenue: SymMat,
}

impl QmkpInstance {
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn k(&self) -> usize {
        self.capacities.len()
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        let n = self.n();
        if self.profits.len() != n || self.revenue.n() != n {
            return Err(BuildError::DimensionMismatch(format!(
                "{n} weights, {} profits, revenue of order {}",
                self.profits.len(),
                self.revenue.n()
            )));
        }
        if self.k() == 0 {
            return Err(BuildError::DimensionMismatch("at least one knapsack is needed".into()));
        }
        Ok(())
    }
}

/// `max ⟨R, X⟩ + pᵀP1` with `Pᵀw ≤ c`, `diag(X) = P1` and
/// `[[I_k, Pᵀ],[P, X]] ⪰ 0`, `P`, `X` binary.
pub fn build_qmkp(q: &QmkpInstance) -> Result<MisdpModel, BuildError> {
    q.validate()?;
    let (n, k) = (q.n(), q.k());
    let mut m = MisdpModel::new("qmkp");
    let l = qmp2_lift(&mut m, n, k, false);
    let (mut obj, c) = l.x.inner(&q.revenue);
    for i in 0..n {
        for j in 0..k {
            obj.push((l.p.get(i, j), q.profits[i]));
        }
    }
    m.maximize(obj, c);
    for j in 0..k {
        let terms: Vec<(VarId, f64)> = (0..n).map(|i| (l.p.get(i, j), q.weights[i])).collect();
        m.add_row(format!("cap[{}]", j + 1), terms, Relation::Le, q.capacities[j]);
    }
    m.canonicalize();
    Ok(m)
}
