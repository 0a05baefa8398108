//! Intermediate representation for mixed-integer semidefinite programs.
//!
//! A [`MisdpModel`] is a list of scalar variables with domains, an objective,
//! linear rows and linear matrix pencils `A₀ + Σ v_j A_j ⪰ 0`. Symmetric matrix
//! variables are flattened to their upper triangle; a diagonal tied to a
//! vector (`diag(X) = x`) is expressed by reusing the vector's variables.
//!
//! Objectives are stored in minimization form. A maximization model keeps its
//! coefficients negated and reports values with the original sign.

mod cbf;
mod eval;
mod json;

pub use cbf::{export_cbf, import_cbf, CbfExport};
pub use eval::{EvalResult, Violation};
pub(crate) use eval::row_residual;
pub use json::{export_json, import_json};

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

pub type VarId = usize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("incomplete assignment: {0}")]
    IncompleteAssignment(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("cannot export: {0}")]
    Export(String),
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VarDomain {
    /// Real interval; `None` means unbounded on that side.
    Continuous { lo: Option<f64>, hi: Option<f64> },
    Binary,
    /// `{-1, 0, 1}`.
    Ternary,
    IntegerRange { lo: i64, hi: i64 },
    FiniteSet { values: Vec<f64> },
}

impl VarDomain {
    pub fn free() -> Self {
        VarDomain::Continuous { lo: None, hi: None }
    }

    pub fn nonneg() -> Self {
        VarDomain::Continuous { lo: Some(0.0), hi: None }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        VarDomain::Continuous { lo: Some(lo), hi: Some(hi) }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, VarDomain::Continuous { .. })
    }

    /// Bounds as floats (infinite when open).
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            VarDomain::Continuous { lo, hi } => (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)),
            VarDomain::Binary => (0.0, 1.0),
            VarDomain::Ternary => (-1.0, 1.0),
            VarDomain::IntegerRange { lo, hi } => (*lo as f64, *hi as f64),
            VarDomain::FiniteSet { values } => (
                values.iter().copied().fold(f64::INFINITY, f64::min),
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ),
        }
    }

    /// The finite list of admissible values, ascending, for discrete domains.
    pub fn values(&self) -> Option<Vec<f64>> {
        match self {
            VarDomain::Continuous { .. } => None,
            VarDomain::Binary => Some(vec![0.0, 1.0]),
            VarDomain::Ternary => Some(vec![-1.0, 0.0, 1.0]),
            VarDomain::IntegerRange { lo, hi } => Some((*lo..=*hi).map(|v| v as f64).collect()),
            VarDomain::FiniteSet { values } => {
                let mut v = values.clone();
                v.sort_by(f64::total_cmp);
                v.dedup();
                Some(v)
            }
        }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        match self {
            VarDomain::Continuous { lo, hi } => {
                lo.map_or(true, |l| v >= l - tol * l.abs().max(1.0))
                    && hi.map_or(true, |h| v <= h + tol * h.abs().max(1.0))
            }
            VarDomain::FiniteSet { values } => values.contains(&v),
            _ => {
                let (lo, hi) = self.bounds();
                v.fract() == 0.0 && v >= lo && v <= hi
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: VarDomain,
    /// Continuous in the model, but integral at every feasible point (forced
    /// by the pencils). Exhaustive solvers may enumerate it over the integers
    /// in its bounds.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub implied_integer: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRow {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub rel: Relation,
    pub rhs: f64,
}

impl LinearRow {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * x[v]).sum()
    }
}

/// Sparse square matrix as `(row, col, value)` triples, both triangles stored.
/// Canonical form is sorted by position with duplicates merged and zeros
/// dropped.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefMatrix {
    pub entries: Vec<(usize, usize, f64)>,
}

impl CoefMatrix {
    pub fn canonicalize(&mut self) {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(r, c, v) in &self.entries {
            *map.entry((r, c)).or_insert(0.0) += v;
        }
        self.entries = map.into_iter().filter(|(_, v)| *v != 0.0).map(|((r, c), v)| (r, c, v)).collect();
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        let map: BTreeMap<(usize, usize), f64> = self.entries.iter().map(|&(r, c, v)| ((r, c), v)).collect();
        map.iter().all(|(&(r, c), v)| map.get(&(c, r)) == Some(v))
    }

    /// Entries on or below the diagonal.
    pub fn lower(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().copied().filter(|&(r, c, _)| r >= c)
    }
}

/// `A₀ + Σ v_j A_j ⪰ 0` of a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixPencil {
    pub name: String,
    pub order: usize,
    pub constant: CoefMatrix,
    pub terms: Vec<(VarId, CoefMatrix)>,
}

impl MatrixPencil {
    pub fn canonicalize(&mut self) {
        self.constant.canonicalize();
        let mut map: BTreeMap<VarId, CoefMatrix> = BTreeMap::new();
        for (v, m) in self.terms.drain(..) {
            map.entry(v).or_default().entries.extend(m.entries);
        }
        self.terms = map
            .into_iter()
            .filter_map(|(v, mut m)| {
                m.canonicalize();
                (!m.is_empty()).then_some((v, m))
            })
            .collect();
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.terms.iter().map(|(v, _)| *v)
    }
}

/// Accumulates a symmetric pencil entry by entry.
#[derive(Debug, Clone)]
pub struct PencilBuilder {
    order: usize,
    constant: CoefMatrix,
    terms: BTreeMap<VarId, CoefMatrix>,
}

impl PencilBuilder {
    pub fn new(order: usize) -> Self {
        PencilBuilder { order, constant: CoefMatrix::default(), terms: BTreeMap::new() }
    }

    fn push_sym(m: &mut CoefMatrix, i: usize, j: usize, v: f64) {
        m.entries.push((i, j, v));
        if i != j {
            m.entries.push((j, i, v));
        }
    }

    /// Adds `v` at `(i, j)` and `(j, i)`.
    pub fn constant(&mut self, i: usize, j: usize, v: f64) -> &mut Self {
        Self::push_sym(&mut self.constant, i, j, v);
        self
    }

    /// Adds `coef · var` at `(i, j)` and `(j, i)`.
    pub fn var(&mut self, var: VarId, i: usize, j: usize, coef: f64) -> &mut Self {
        Self::push_sym(self.terms.entry(var).or_default(), i, j, coef);
        self
    }

    pub fn build(self, name: impl Into<String>) -> MatrixPencil {
        let mut p = MatrixPencil {
            name: name.into(),
            order: self.order,
            constant: self.constant,
            terms: self.terms.into_iter().collect(),
        };
        p.canonicalize();
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Min,
    Max,
}

/// Objective in minimization form: the model minimizes
/// `Σ c_j v_j + constant`; for [`Sense::Max`] the reported value is its
/// negation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub sense: Sense,
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Objective {
    /// Value in minimization form.
    pub fn min_form(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>() + self.constant
    }

    /// Value with the original sense restored.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.report(self.min_form(x))
    }

    /// Converts a minimization-form value to the reported sign.
    pub fn report(&self, min_value: f64) -> f64 {
        match self.sense {
            Sense::Min => min_value,
            Sense::Max => -min_value,
        }
    }
}

/// One entry of a structured matrix: a model variable or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    Var(VarId),
    Const(f64),
}

/// Upper-triangle entries of a symmetric matrix variable. Off-diagonal
/// entries are always variables; the diagonal may be fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVars {
    n: usize,
    entries: Vec<Entry>,
}

impl SymVars {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.entries[a * self.n - a * (a + 1) / 2 + b]
    }

    /// Variable at `(i, j)`; panics on a fixed diagonal entry.
    pub fn get(&self, i: usize, j: usize) -> VarId {
        match self.entry(i, j) {
            Entry::Var(v) => v,
            Entry::Const(_) => panic!("entry ({i},{j}) is fixed"),
        }
    }

    /// `(i, j, entry)` for `i ≤ j`.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, Entry)> + '_ {
        (0..self.n).flat_map(move |i| (i..self.n).map(move |j| (i, j, self.entry(i, j))))
    }

    /// Strictly-upper variables `(i, j, id)`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, VarId)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// `⟨C, X⟩` as linear terms plus the contribution of fixed entries.
    pub fn inner(&self, c: &crate::linalg::SymMat) -> (Vec<(VarId, f64)>, f64) {
        let mut terms = Vec::new();
        let mut constant = 0.0;
        for (i, j, e) in self.upper() {
            let w = if i == j { c.get(i, i) } else { 2.0 * c.get(i, j) };
            match e {
                Entry::Var(v) => terms.push((v, w)),
                Entry::Const(x) => constant += w * x,
            }
        }
        (terms, constant)
    }

    /// Row `i` of `X a` as terms plus constant.
    pub fn row_times(&self, i: usize, a: &[f64]) -> (Vec<(VarId, f64)>, f64) {
        let mut terms = Vec::new();
        let mut constant = 0.0;
        for (j, &aj) in a.iter().enumerate() {
            match self.entry(i, j) {
                Entry::Var(v) => terms.push((v, aj)),
                Entry::Const(x) => constant += aj * x,
            }
        }
        (terms, constant)
    }

    /// Writes `scale · X` into a pencil with the block starting at `offset`.
    pub fn add_to_pencil(&self, pb: &mut PencilBuilder, offset: usize, scale: f64) {
        for (i, j, e) in self.upper() {
            match e {
                Entry::Var(v) => pb.var(v, offset + i, offset + j, scale),
                Entry::Const(x) => pb.constant(offset + i, offset + j, scale * x),
            };
        }
    }
}

/// Row-major variable ids of a general matrix variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatVars {
    rows: usize,
    cols: usize,
    ids: Vec<VarId>,
}

impl MatVars {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> VarId {
        self.ids[i * self.cols + j]
    }
}

/// How the diagonal of a new symmetric matrix variable is represented.
pub enum Diagonal<'a> {
    /// Fresh variables with this domain.
    Own(VarDomain),
    /// Reuse these ids, which ties `diag(X)` to an existing vector.
    Alias(&'a [VarId]),
    /// A constant diagonal, e.g. `diag(X) = 1`.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisdpModel {
    /// Provenance tag naming the builder that produced the model.
    pub provenance: String,
    pub variables: Vec<Variable>,
    pub objective: Objective,
    pub rows: Vec<LinearRow>,
    pub pencils: Vec<MatrixPencil>,
}

/// A defect reported by [`MisdpModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Defect(pub String);

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl MisdpModel {
    pub fn new(provenance: impl Into<String>) -> Self {
        MisdpModel {
            provenance: provenance.into(),
            variables: Vec::new(),
            objective: Objective { sense: Sense::Min, terms: Vec::new(), constant: 0.0 },
            rows: Vec::new(),
            pencils: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, domain: VarDomain) -> VarId {
        self.variables.push(Variable { name: name.into(), domain, implied_integer: false });
        self.variables.len() - 1
    }

    pub fn add_vector(&mut self, name: &str, n: usize, domain: VarDomain) -> Vec<VarId> {
        (0..n).map(|i| self.add_var(format!("{name}[{}]", i + 1), domain.clone())).collect()
    }

    pub fn add_matrix(&mut self, name: &str, rows: usize, cols: usize, domain: VarDomain) -> MatVars {
        let mut ids = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                ids.push(self.add_var(format!("{name}[{},{}]", i + 1, j + 1), domain.clone()));
            }
        }
        MatVars { rows, cols, ids }
    }

    /// Symmetric matrix variable, upper triangle row by row.
    pub fn add_sym_matrix(&mut self, name: &str, n: usize, diag: Diagonal<'_>, off: VarDomain) -> SymVars {
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let e = if i == j {
                    match &diag {
                        Diagonal::Own(d) => Entry::Var(self.add_var(format!("{name}[{},{}]", i + 1, i + 1), d.clone())),
                        Diagonal::Alias(a) => Entry::Var(a[i]),
                        Diagonal::Fixed(v) => Entry::Const(*v),
                    }
                } else {
                    Entry::Var(self.add_var(format!("{name}[{},{}]", i + 1, j + 1), off.clone()))
                };
                entries.push(e);
            }
        }
        SymVars { n, entries }
    }

    pub fn mark_implied_integer(&mut self, v: VarId) {
        self.variables[v].implied_integer = true;
    }

    pub fn add_row(&mut self, name: impl Into<String>, terms: Vec<(VarId, f64)>, rel: Relation, rhs: f64) {
        let mut row = LinearRow { name: name.into(), terms, rel, rhs };
        canonical_terms(&mut row.terms);
        self.rows.push(row);
    }

    pub fn add_pencil(&mut self, pencil: MatrixPencil) {
        self.pencils.push(pencil);
    }

    pub fn minimize(&mut self, mut terms: Vec<(VarId, f64)>, constant: f64) {
        canonical_terms(&mut terms);
        self.objective = Objective { sense: Sense::Min, terms, constant };
    }

    /// Stores `-f` for minimization and flags the sense for reporting.
    pub fn maximize(&mut self, terms: Vec<(VarId, f64)>, constant: f64) {
        let mut terms: Vec<(VarId, f64)> = terms.into_iter().map(|(v, c)| (v, -c)).collect();
        canonical_terms(&mut terms);
        self.objective = Objective { sense: Sense::Max, terms, constant: -constant };
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Sorts and merges every coefficient list. Builders call this once at
    /// the end so that equal models compare equal after a round trip.
    pub fn canonicalize(&mut self) {
        canonical_terms(&mut self.objective.terms);
        for r in &mut self.rows {
            canonical_terms(&mut r.terms);
        }
        for p in &mut self.pencils {
            p.canonicalize();
        }
    }

    pub fn integer_vars(&self) -> Vec<VarId> {
        (0..self.num_vars()).filter(|&v| !self.variables[v].domain.is_continuous()).collect()
    }

    /// Structural problems: bad indices, asymmetric or out-of-range pencil
    /// entries, empty domains, non-finite data, duplicate names.
    pub fn validate(&self) -> Vec<Defect> {
        let mut out = Vec::new();
        let nv = self.num_vars();
        let mut names = HashSet::new();
        for (i, v) in self.variables.iter().enumerate() {
            if !names.insert(v.name.as_str()) {
                out.push(Defect(format!("variable {i}: duplicate name `{}`", v.name)));
            }
            if v.name.chars().any(char::is_whitespace) || v.name.is_empty() {
                out.push(Defect(format!("variable {i}: name `{}` is empty or has whitespace", v.name)));
            }
            let empty = match &v.domain {
                VarDomain::Continuous { lo, hi } => matches!((lo, hi), (Some(l), Some(h)) if l > h),
                VarDomain::IntegerRange { lo, hi } => lo > hi,
                VarDomain::FiniteSet { values } => values.is_empty() || values.iter().any(|x| !x.is_finite()),
                _ => false,
            };
            if empty {
                out.push(Defect(format!("variable `{}` has an empty domain", v.name)));
            }
            if v.implied_integer {
                let (lo, hi) = v.domain.bounds();
                if !v.domain.is_continuous() || !lo.is_finite() || !hi.is_finite() {
                    out.push(Defect(format!("variable `{}`: implied integrality needs finite continuous bounds", v.name)));
                }
            }
        }
        let check_terms = |what: &str, terms: &[(VarId, f64)], out: &mut Vec<Defect>| {
            for &(v, c) in terms {
                if v >= nv {
                    out.push(Defect(format!("{what}: variable index {v} out of range")));
                }
                if !c.is_finite() {
                    out.push(Defect(format!("{what}: non-finite coefficient")));
                }
            }
        };
        check_terms("objective", &self.objective.terms, &mut out);
        if !self.objective.constant.is_finite() {
            out.push(Defect("objective: non-finite constant".into()));
        }
        for r in &self.rows {
            check_terms(&format!("row `{}`", r.name), &r.terms, &mut out);
            if !r.rhs.is_finite() {
                out.push(Defect(format!("row `{}`: non-finite right-hand side", r.name)));
            }
        }
        for p in &self.pencils {
            let mut mats: Vec<(String, &CoefMatrix)> = vec![("constant".to_string(), &p.constant)];
            for (v, m) in &p.terms {
                if *v >= nv {
                    out.push(Defect(format!("pencil `{}`: variable index {v} out of range", p.name)));
                }
                mats.push((format!("coefficient of variable {v}"), m));
            }
            for (what, m) in mats {
                if m.entries.iter().any(|&(r, c, v)| r >= p.order || c >= p.order || !v.is_finite()) {
                    out.push(Defect(format!("pencil `{}`: {what} has an entry out of range", p.name)));
                }
                if !m.is_symmetric() {
                    out.push(Defect(format!("pencil `{}`: {what} is not symmetric", p.name)));
                }
            }
        }
        out
    }

    /// Same model with variables reordered: new variable `k` is old `perm[k]`.
    pub fn permute_vars(&self, perm: &[VarId]) -> MisdpModel {
        assert_eq!(perm.len(), self.num_vars());
        let mut inv = vec![0; perm.len()];
        for (k, &old) in perm.iter().enumerate() {
            inv[old] = k;
        }
        let map = |terms: &[(VarId, f64)]| -> Vec<(VarId, f64)> { terms.iter().map(|&(v, c)| (inv[v], c)).collect() };
        let mut m = MisdpModel {
            provenance: self.provenance.clone(),
            variables: perm.iter().map(|&o| self.variables[o].clone()).collect(),
            objective: Objective { terms: map(&self.objective.terms), ..self.objective.clone() },
            rows: self.rows.iter().map(|r| LinearRow { terms: map(&r.terms), ..r.clone() }).collect(),
            pencils: self
                .pencils
                .iter()
                .map(|p| MatrixPencil {
                    terms: p.terms.iter().map(|(v, m)| (inv[*v], m.clone())).collect(),
                    ..p.clone()
                })
                .collect(),
        };
        m.canonicalize();
        m
    }

    /// Pencil evaluated at a full assignment.
    pub fn pencil_matrix(&self, k: usize, x: &[f64]) -> crate::linalg::SymMat {
        let p = &self.pencils[k];
        let mut m = crate::linalg::SymMat::zeros(p.order);
        for (r, c, v) in p.constant.lower() {
            m.add_to(r, c, v);
        }
        for (var, a) in &p.terms {
            let xv = x[*var];
            if xv != 0.0 {
                for (r, c, v) in a.lower() {
                    m.add_to(r, c, v * xv);
                }
            }
        }
        m
    }

    /// Assignment from `(name, value)` pairs; every variable must be named.
    pub fn assignment(&self, values: &[(&str, f64)]) -> Result<Vec<f64>, ModelError> {
        let mut x = vec![f64::NAN; self.num_vars()];
        for (name, v) in values {
            let id = self
                .var_id(name)
                .ok_or_else(|| ModelError::IncompleteAssignment(format!("unknown variable `{name}`")))?;
            x[id] = *v;
        }
        if let Some(i) = x.iter().position(|v| v.is_nan()) {
            return Err(ModelError::IncompleteAssignment(format!("variable `{}` unset", self.variables[i].name)));
        }
        Ok(x)
    }
}

fn canonical_terms(terms: &mut Vec<(VarId, f64)>) {
    let mut map: BTreeMap<VarId, f64> = BTreeMap::new();
    for &(v, c) in terms.iter() {
        *map.entry(v).or_insert(0.0) += c;
    }
    *terms = map.into_iter().filter(|(_, c)| *c != 0.0).collect();
}
