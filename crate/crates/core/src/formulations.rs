//! Compilers from binary quadratic programs to binary SDPs.
//!
//! Three source shapes are supported: a vector QCQP over `x ∈ {0,1}^n`, and
//! two quadratic matrix programs over packing (or partition) matrices
//! `P ∈ {0,1}^{n×k}`. The first matrix program only sees `X = PPᵀ`; the
//! second keeps `P` in the model and can therefore express class-specific
//! constraints.

use serde::{Deserialize, Serialize};

use crate::linalg::{Mat, SymMat};
use crate::model::{Diagonal, MatVars, MisdpModel, PencilBuilder, Relation, Sense, SymVars, VarDomain, VarId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("capacity b[{index}] = {value} is negative")]
    NegativeCapacity { index: usize, value: f64 },
    #[error("item {item} has weight {weight} above the bin capacity {capacity}")]
    InfeasibleItem { item: usize, weight: f64, capacity: f64 },
    #[error("order {0} is even; only odd orders are supported")]
    EvenOrder(usize),
    #[error("variant precondition: {0}")]
    VariantPrecondition(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
}

fn default_min() -> Sense {
    Sense::Min
}

fn check_len(what: &str, got: usize, want: usize) -> Result<(), BuildError> {
    if got == want {
        Ok(())
    } else {
        Err(BuildError::DimensionMismatch(format!("{what} has length {got}, expected {want}")))
    }
}

fn check_order(what: &str, m: &SymMat, n: usize) -> Result<(), BuildError> {
    if m.n() == n {
        Ok(())
    } else {
        Err(BuildError::DimensionMismatch(format!("{what} has order {}, expected {n}", m.n())))
    }
}

fn check_shape(what: &str, m: &Mat, rows: usize, cols: usize) -> Result<(), BuildError> {
    if m.rows() == rows && m.cols() == cols {
        Ok(())
    } else {
        Err(BuildError::DimensionMismatch(format!(
            "{what} is {}x{}, expected {rows}x{cols}",
            m.rows(),
            m.cols()
        )))
    }
}

/// `xᵀQx + cᵀx ≤ d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConstraint {
    pub q: SymMat,
    pub c: Vec<f64>,
    pub d: f64,
}

/// `aᵀx = b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEquality {
    pub a: Vec<f64>,
    pub b: f64,
}

/// `min/max xᵀQ₀x + c₀ᵀx` over `x ∈ {0,1}^n` subject to quadratic
/// inequalities and linear equalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcqpInstance {
    pub n: usize,
    #[serde(default = "default_min")]
    pub sense: Sense,
    pub q0: SymMat,
    pub c0: Vec<f64>,
    #[serde(default)]
    pub constraints: Vec<QuadConstraint>,
    #[serde(default)]
    pub equalities: Vec<LinearEquality>,
}

impl QcqpInstance {
    pub fn validate(&self) -> Result<(), BuildError> {
        check_order("Q0", &self.q0, self.n)?;
        check_len("c0", self.c0.len(), self.n)?;
        for (i, c) in self.constraints.iter().enumerate() {
            check_order(&format!("Q{}", i + 1), &c.q, self.n)?;
            check_len(&format!("c{}", i + 1), c.c.len(), self.n)?;
        }
        for (i, e) in self.equalities.iter().enumerate() {
            check_len(&format!("a{}", i + 1), e.a.len(), self.n)?;
        }
        Ok(())
    }

    /// Source objective at a binary point.
    pub fn objective(&self, x: &[f64]) -> f64 {
        quad(&self.q0, x) + dot(&self.c0, x)
    }

    /// Source feasibility at a binary point, exact for integer data.
    pub fn is_feasible(&self, x: &[f64]) -> bool {
        self.constraints.iter().all(|c| quad(&c.q, x) + dot(&c.c, x) <= c.d)
            && self.equalities.iter().all(|e| dot(&e.a, x) == e.b)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn quad(q: &SymMat, x: &[f64]) -> f64 {
    dot(x, &q.mul_vec(x))
}

fn set_objective(m: &mut MisdpModel, sense: Sense, terms: Vec<(VarId, f64)>, constant: f64) {
    match sense {
        Sense::Min => m.minimize(terms, constant),
        Sense::Max => m.maximize(terms, constant),
    }
}

/// `[[corner, borderᵀ], [border, X]]` where the corner is a constant.
pub(crate) fn bordered_pencil(name: &str, corner: f64, border: &[VarId], x: &SymVars) -> crate::model::MatrixPencil {
    let n = x.n();
    let mut pb = PencilBuilder::new(n + 1);
    pb.constant(0, 0, corner);
    for (i, &v) in border.iter().enumerate() {
        pb.var(v, 0, i + 1, 1.0);
    }
    x.add_to_pencil(&mut pb, 1, 1.0);
    pb.build(name)
}

/// Compiles a QCQP into `[[1, xᵀ],[x, X]] ⪰ 0, diag(X) = x, x binary`.
///
/// Only `x` is binary. The off-diagonal entries of `X` are continuous in
/// `[0, 1]` and flagged implied-integer: once the diagonal is binary the
/// 3×3 principal minors leave no fractional choice. With `compact` the
/// equalities are aggregated into one row `⟨S, Y⟩ = 0`.
pub fn build_bsdp_qcqp(q: &QcqpInstance, compact: bool) -> Result<MisdpModel, BuildError> {
    q.validate()?;
    let n = q.n;
    let mut m = MisdpModel::new(if compact { "bsdp-qcqp-compact" } else { "bsdp-qcqp" });
    let x = m.add_vector("x", n, VarDomain::Binary);
    let xx = m.add_sym_matrix("X", n, Diagonal::Alias(&x), VarDomain::interval(0.0, 1.0));
    for (_, _, v) in xx.off_diagonal() {
        m.mark_implied_integer(v);
    }
    let (mut obj, c) = xx.inner(&q.q0);
    obj.extend(x.iter().copied().zip(q.c0.iter().copied()));
    set_objective(&mut m, q.sense, obj, c);

    for (i, qc) in q.constraints.iter().enumerate() {
        let (mut terms, c) = xx.inner(&qc.q);
        terms.extend(x.iter().copied().zip(qc.c.iter().copied()));
        m.add_row(format!("quad[{}]", i + 1), terms, Relation::Le, qc.d - c);
    }
    if compact && !q.equalities.is_empty() {
        // S = Σ s sᵀ with s = (-b; a), paired against Y = [[1, xᵀ],[x, X]].
        let s = SymMat::from_fn(n + 1, |i, j| {
            q.equalities
                .iter()
                .map(|e| {
                    let si = if i == 0 { -e.b } else { e.a[i - 1] };
                    let sj = if j == 0 { -e.b } else { e.a[j - 1] };
                    si * sj
                })
                .sum()
        });
        let inner = SymMat::from_fn(n, |i, j| s.get(i + 1, j + 1));
        let (mut terms, c) = xx.inner(&inner);
        for (i, &v) in x.iter().enumerate() {
            terms.push((v, 2.0 * s.get(0, i + 1)));
        }
        m.add_row("aggregated", terms, Relation::Eq, -s.get(0, 0) - c);
    } else {
        for (i, e) in q.equalities.iter().enumerate() {
            let terms = x.iter().copied().zip(e.a.iter().copied()).collect();
            m.add_row(format!("eq[{}]", i + 1), terms, Relation::Eq, e.b);
        }
    }
    m.add_pencil(bordered_pencil("lift", 1.0, &x, &xx));
    m.canonicalize();
    Ok(m)
}

/// `⟨Q, PPᵀ⟩ + d ≤ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qmp1Constraint {
    pub q: SymMat,
    pub d: f64,
}

/// `Pᵀa ≤ b·1_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    pub a: Vec<f64>,
    pub b: f64,
}

/// `tr(PᵀQ₀P)` over packing (or partition) matrices with class-symmetric
/// constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qmp1Instance {
    pub n: usize,
    pub k: usize,
    #[serde(default = "default_min")]
    pub sense: Sense,
    pub q0: SymMat,
    #[serde(default)]
    pub constraints: Vec<Qmp1Constraint>,
    #[serde(default)]
    pub capacities: Vec<Capacity>,
    #[serde(default)]
    pub partition: bool,
}

impl Qmp1Instance {
    pub fn validate(&self) -> Result<(), BuildError> {
        check_order("Q0", &self.q0, self.n)?;
        for (i, c) in self.constraints.iter().enumerate() {
            check_order(&format!("Q{}", i + 1), &c.q, self.n)?;
        }
        for (i, c) in self.capacities.iter().enumerate() {
            check_len(&format!("a{}", i + 1), c.a.len(), self.n)?;
            if c.b < 0.0 {
                return Err(BuildError::NegativeCapacity { index: i + 1, value: c.b });
            }
        }
        if self.k == 0 {
            return Err(BuildError::DimensionMismatch("k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Compiles a first-kind QMP into `[[k, xᵀ],[x, X]] ⪰ 0, diag(X) = x`.
///
/// Every entry of `X` is binary. Diagonal integrality alone is not enough
/// here: with `k = 2`, `x = (1,1)` and `X₁₂ = ½` the pencil is PSD.
/// The partition flag fixes `diag(X) = 1`.
pub fn build_bsdp_qmp1(q: &Qmp1Instance) -> Result<MisdpModel, BuildError> {
    q.validate()?;
    let n = q.n;
    let mut m = MisdpModel::new(if q.partition { "bsdp-qmp1-partition" } else { "bsdp-qmp1" });
    let (xx, x) = qmp1_lift(&mut m, n, q.partition);
    let (obj, c) = xx.inner(&q.q0);
    set_objective(&mut m, q.sense, obj, c);
    for (i, qc) in q.constraints.iter().enumerate() {
        let (terms, c) = xx.inner(&qc.q);
        m.add_row(format!("quad[{}]", i + 1), terms, Relation::Le, -qc.d - c);
    }
    for (i, cap) in q.capacities.iter().enumerate() {
        add_capacity_rows(&mut m, &xx, &x, &cap.a, cap.b, &format!("cap[{}]", i + 1));
    }
    m.add_pencil(qmp1_pencil(&xx, &x, q.k as f64));
    m.canonicalize();
    Ok(m)
}

/// Diagonal of the lifted matrix: a binary vector, or the constant 1 for
/// partitions.
pub(crate) enum Border {
    Vars(Vec<VarId>),
    Ones,
}

pub(crate) fn qmp1_lift(m: &mut MisdpModel, n: usize, partition: bool) -> (SymVars, Border) {
    if partition {
        (m.add_sym_matrix("X", n, Diagonal::Fixed(1.0), VarDomain::Binary), Border::Ones)
    } else {
        let xx = m.add_sym_matrix("X", n, Diagonal::Own(VarDomain::Binary), VarDomain::Binary);
        let d: Vec<VarId> = (0..n).map(|i| xx.get(i, i)).collect();
        (xx, Border::Vars(d))
    }
}

/// `[[corner, xᵀ],[x, X]]` with `x = diag(X)` or `1`.
pub(crate) fn qmp1_pencil(xx: &SymVars, x: &Border, corner: f64) -> crate::model::MatrixPencil {
    match x {
        Border::Vars(v) => bordered_pencil("lift", corner, v, xx),
        Border::Ones => {
            let n = xx.n();
            let mut pb = PencilBuilder::new(n + 1);
            pb.constant(0, 0, corner);
            for i in 0..n {
                pb.constant(0, i + 1, 1.0);
            }
            xx.add_to_pencil(&mut pb, 1, 1.0);
            pb.build("lift")
        }
    }
}

/// `X a ≤ b x`, one row per object.
pub(crate) fn add_capacity_rows(m: &mut MisdpModel, xx: &SymVars, x: &Border, a: &[f64], b: f64, name: &str) {
    for r in 0..xx.n() {
        let (mut terms, c) = xx.row_times(r, a);
        let rhs = match x {
            Border::Vars(v) => {
                terms.push((v[r], -b));
                -c
            }
            Border::Ones => b - c,
        };
        m.add_row(format!("{name}[{}]", r + 1), terms, Relation::Le, rhs);
    }
}

/// `tr(PᵀQP) + 2 tr(BᵀP) + d ≤ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qmp2Constraint {
    pub q: SymMat,
    pub b: Mat,
    pub d: f64,
}

/// `tr(PᵀQ₀P) + 2 tr(B₀ᵀP) + d₀` over packing (or partition) matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qmp2Instance {
    pub n: usize,
    pub k: usize,
    #[serde(default = "default_min")]
    pub sense: Sense,
    pub q0: SymMat,
    pub b0: Mat,
    #[serde(default)]
    pub d0: f64,
    #[serde(default)]
    pub constraints: Vec<Qmp2Constraint>,
    #[serde(default)]
    pub partition: bool,
    /// Adds `Pᵀ1 ≥ 1`, which pins `rank(X) = k`.
    #[serde(default)]
    pub exact_rank: bool,
}

impl Qmp2Instance {
    pub fn validate(&self) -> Result<(), BuildError> {
        if self.k == 0 {
            return Err(BuildError::DimensionMismatch("k must be at least 1".into()));
        }
        check_order("Q0", &self.q0, self.n)?;
        check_shape("B0", &self.b0, self.n, self.k)?;
        for (i, c) in self.constraints.iter().enumerate() {
            check_order(&format!("Q{}", i + 1), &c.q, self.n)?;
            check_shape(&format!("B{}", i + 1), &c.b, self.n, self.k)?;
        }
        Ok(())
    }

    /// `tr(PᵀQP) + 2 tr(BᵀP) + d` at a given `P`.
    pub fn form(q: &SymMat, b: &Mat, d: f64, p: &Mat) -> f64 {
        let x = p.mul(&p.transpose());
        let quad: f64 = (0..q.n()).flat_map(|i| (0..q.n()).map(move |j| (i, j))).map(|(i, j)| q.get(i, j) * x[(i, j)]).sum();
        let lin: f64 = (0..b.rows()).flat_map(|i| (0..b.cols()).map(move |j| (i, j))).map(|(i, j)| b[(i, j)] * p[(i, j)]).sum();
        quad + 2.0 * lin + d
    }
}

/// Variables of the `[[I_k, Pᵀ],[P, X]]` lift.
pub(crate) struct Qmp2Lift {
    pub p: MatVars,
    pub x: SymVars,
}

/// Adds `P`, `X` with `diag(X) = P1` (or `= 1` with `P1 = 1` for
/// partitions) and the pencil.
pub(crate) fn qmp2_lift(m: &mut MisdpModel, n: usize, k: usize, partition: bool) -> Qmp2Lift {
    let p = m.add_matrix("P", n, k, VarDomain::Binary);
    let x = if partition {
        m.add_sym_matrix("X", n, Diagonal::Fixed(1.0), VarDomain::Binary)
    } else {
        m.add_sym_matrix("X", n, Diagonal::Own(VarDomain::Binary), VarDomain::Binary)
    };
    for i in 0..n {
        let mut terms: Vec<(VarId, f64)> = (0..k).map(|j| (p.get(i, j), 1.0)).collect();
        if partition {
            m.add_row(format!("assign[{}]", i + 1), terms, Relation::Eq, 1.0);
        } else {
            terms.push((x.get(i, i), -1.0));
            m.add_row(format!("diag[{}]", i + 1), terms, Relation::Eq, 0.0);
        }
    }
    let mut pb = PencilBuilder::new(n + k);
    for j in 0..k {
        pb.constant(j, j, 1.0);
    }
    for i in 0..n {
        for j in 0..k {
            pb.var(p.get(i, j), k + i, j, 1.0);
        }
    }
    x.add_to_pencil(&mut pb, k, 1.0);
    m.add_pencil(pb.build("lift"));
    Qmp2Lift { p, x }
}

/// Terms of `tr(PᵀQP) + 2 tr(BᵀP)` in the lifted variables, plus constant.
fn qmp2_form(l: &Qmp2Lift, q: &SymMat, b: &Mat) -> (Vec<(VarId, f64)>, f64) {
    let (mut terms, c) = l.x.inner(q);
    for i in 0..l.p.rows() {
        for j in 0..l.p.cols() {
            terms.push((l.p.get(i, j), 2.0 * b[(i, j)]));
        }
    }
    (terms, c)
}

/// Compiles a second-kind QMP into `[[I_k, Pᵀ],[P, X]] ⪰ 0, diag(X) = P1`
/// with `P` and `X` binary. The objective is
/// `⟨[[d₀/k·I, B₀ᵀ],[B₀, Q₀]], [[I, Pᵀ],[P, X]]⟩`.
pub fn build_bsdp_qmp2(q: &Qmp2Instance) -> Result<MisdpModel, BuildError> {
    q.validate()?;
    let mut m = MisdpModel::new(if q.partition { "bsdp-qmp2-partition" } else { "bsdp-qmp2" });
    let l = qmp2_lift(&mut m, q.n, q.k, q.partition);
    let (obj, c) = qmp2_form(&l, &q.q0, &q.b0);
    set_objective(&mut m, q.sense, obj, c + q.d0);
    for (i, qc) in q.constraints.iter().enumerate() {
        let (terms, c) = qmp2_form(&l, &qc.q, &qc.b);
        m.add_row(format!("quad[{}]", i + 1), terms, Relation::Le, -qc.d - c);
    }
    if q.exact_rank {
        for j in 0..q.k {
            let terms = (0..q.n).map(|i| (l.p.get(i, j), 1.0)).collect();
            m.add_row(format!("class[{}]", j + 1), terms, Relation::Ge, 1.0);
        }
    }
    m.canonicalize();
    Ok(m)
}
