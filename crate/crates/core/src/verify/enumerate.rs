use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::resolve::{Completion, Resolver};
use super::VerifyError;
use crate::linalg::{is_psd, min_eigenvalue};
use crate::model::row_residual;
use crate::model::{LinearRow, MisdpModel, Relation, VarDomain, VarId};
use crate::tolerance::Tolerances;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Upper bound on the raw product of integer domain sizes.
    pub budget: u64,
    /// Keep every integer-feasible point, not just the minimizers.
    pub collect_feasible: bool,
    /// Split the search tree across the rayon pool.
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_BUDGET, collect_feasible: false, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasiblePoint {
    pub x: Vec<f64>,
    /// With the model's sense restored.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    /// `None` when no integer assignment is feasible.
    pub optimum: Option<f64>,
    /// Complete assignments attaining the optimum, in enumeration order.
    pub argmin: Vec<Vec<f64>>,
    pub feasible_count: u64,
    /// Filled only with [`EnumOptions::collect_feasible`].
    pub feasible: Vec<FeasiblePoint>,
    /// Largest row residual or negative pencil eigenvalue over `argmin`.
    pub max_residual: f64,
    pub nodes: u64,
}

/// Exact optimum of `m` over its integer assignments.
///
/// Integer variables (and continuous ones flagged implied-integer, over the
/// integers in their bounds) are walked in model order. Linear rows are
/// checked as soon as they can no longer be satisfied given the bounds of
/// the unassigned variables; 1×1 and 2×2 principal minors of each pencil are
/// checked once their variables are assigned. Complete assignments get their
/// continuous part from the resolver and a full [`MisdpModel::eval_point`].
pub fn solve_by_enumeration(m: &MisdpModel, opts: &EnumOptions, tol: &Tolerances) -> Result<Solution, VerifyError> {
    let plan = Plan::new(m, opts, tol)?;
    let acc = if opts.parallel { plan.run_parallel()? } else { plan.run_from(&[])? };
    let max_residual = acc.argmin.iter().map(|x| residual(m, x, tol)).fold(0.0, f64::max) + 0.0; // `+ 0.0` normalizes -0.0
    Ok(Solution {
        optimum: acc.best.map(|b| m.objective.report(b)),
        argmin: acc.argmin,
        feasible_count: acc.count,
        feasible: acc.feasible,
        max_residual,
        nodes: acc.nodes,
    })
}

fn residual(m: &MisdpModel, x: &[f64], tol: &Tolerances) -> f64 {
    let mut r: f64 = 0.0;
    for row in &m.rows {
        r = r.max(row_residual(row.rel, row.activity(x), row.rhs).abs());
    }
    for k in 0..m.pencils.len() {
        let lmin = min_eigenvalue(&m.pencil_matrix(k, x), tol).unwrap_or(f64::NEG_INFINITY);
        r = r.max(-lmin);
    }
    r
}

fn domain_values(d: &VarDomain, implied: bool) -> Option<Vec<f64>> {
    if let Some(v) = d.values() {
        return Some(v);
    }
    if implied {
        let (lo, hi) = d.bounds();
        if lo.is_finite() && hi.is_finite() {
            return Some((lo.ceil() as i64..=hi.floor() as i64).map(|v| v as f64).collect());
        }
    }
    None
}

struct RowCheck {
    rel: Relation,
    rhs: f64,
    slack: f64,
    /// Bounds of the continuous part.
    c_min: f64,
    c_max: f64,
    /// Coefficients of the enumerated part in enumeration order.
    coefs: Vec<f64>,
    suffix_min: Vec<f64>,
    suffix_max: Vec<f64>,
}

#[derive(Clone)]
struct Entry {
    constant: f64,
    terms: Vec<(VarId, f64)>,
}

impl Entry {
    fn value(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>()
    }
}

enum Minor {
    Diag(Entry),
    Pair(Entry, Entry, Entry),
}

impl Minor {
    fn holds(&self, x: &[f64]) -> bool {
        match self {
            Minor::Diag(a) => {
                let v = a.value(x);
                v >= -1e-9 * v.abs().max(1.0)
            }
            Minor::Pair(a, b, c) => {
                let (a, b, c) = (a.value(x), b.value(x), c.value(x));
                let s = (a.abs() + b.abs() + c.abs()).max(1.0);
                a * b - c * c >= -1e-6 * s * s
            }
        }
    }
}

struct Plan<'a> {
    m: &'a MisdpModel,
    tol: Tolerances,
    collect: bool,
    order: Vec<VarId>,
    values: Vec<Vec<f64>>,
    rows: Vec<RowCheck>,
    /// `(row, index into coefs)` per position.
    touch: Vec<Vec<(usize, usize)>>,
    minors: Vec<Vec<Minor>>,
    integer_pencils: Vec<usize>,
    resolver: Resolver,
}

#[derive(Default)]
struct Acc {
    best: Option<f64>,
    argmin: Vec<Vec<f64>>,
    count: u64,
    feasible: Vec<FeasiblePoint>,
    nodes: u64,
}

impl Acc {
    fn offer(&mut self, value: f64, x: &[f64], tol: &Tolerances) {
        match self.best {
            Some(b) if tol.same_value(value, b) => self.argmin.push(x.to_vec()),
            Some(b) if value > b => {}
            _ => {
                self.best = Some(value);
                self.argmin = vec![x.to_vec()];
            }
        }
    }

    fn merge(&mut self, other: Acc, tol: &Tolerances) {
        self.count += other.count;
        self.nodes += other.nodes;
        self.feasible.extend(other.feasible);
        if let Some(ob) = other.best {
            match self.best {
                Some(b) if tol.same_value(ob, b) => self.argmin.extend(other.argmin),
                Some(b) if ob > b => {}
                _ => {
                    self.best = Some(ob);
                    self.argmin = other.argmin;
                }
            }
        }
    }
}

struct State {
    x: Vec<f64>,
    partial: Vec<f64>,
}

impl<'a> Plan<'a> {
    fn new(m: &'a MisdpModel, opts: &EnumOptions, tol: &Tolerances) -> Result<Self, VerifyError> {
        let nv = m.num_vars();
        let mut order = Vec::new();
        let mut values = Vec::new();
        let mut pos = vec![None; nv];
        for (v, var) in m.variables.iter().enumerate() {
            let enumerated = !var.domain.is_continuous() || var.implied_integer;
            if enumerated {
                let vals = domain_values(&var.domain, var.implied_integer).ok_or_else(|| {
                    VerifyError::UnsupportedContinuousPattern(format!("`{}` is implied-integer but unbounded", var.name))
                })?;
                pos[v] = Some(order.len());
                order.push(v);
                values.push(vals);
            }
        }
        let size: f64 = values.iter().map(|v| v.len() as f64).product();
        if size > opts.budget as f64 {
            return Err(VerifyError::BudgetExceeded { size, budget: opts.budget });
        }
        let enumerated: Vec<bool> = pos.iter().map(Option::is_some).collect();
        let resolver = Resolver::plan(m, &enumerated, tol)?;

        let mut rows = Vec::new();
        let mut touch = vec![Vec::new(); order.len()];
        for row in m.rows.iter().chain(&resolver.derived_rows) {
            rows.push(Self::row_check(m, row, &pos, &values, tol, rows.len(), &mut touch));
        }

        let mut minors: Vec<Vec<Minor>> = (0..order.len()).map(|_| Vec::new()).collect();
        let mut integer_pencils = Vec::new();
        for (k, p) in m.pencils.iter().enumerate() {
            if p.vars().all(|v| enumerated[v]) {
                integer_pencils.push(k);
            }
            let mut entries: BTreeMap<(usize, usize), Entry> = BTreeMap::new();
            for (r, c, v) in p.constant.lower() {
                entries.entry((r, c)).or_insert(Entry { constant: 0.0, terms: vec![] }).constant += v;
            }
            for (var, a) in &p.terms {
                for (r, c, v) in a.lower() {
                    entries.entry((r, c)).or_insert(Entry { constant: 0.0, terms: vec![] }).terms.push((*var, v));
                }
            }
            let trigger = |es: &[&Entry]| -> Option<usize> {
                let mut t = None;
                for e in es {
                    for &(v, _) in &e.terms {
                        t = t.max(Some(pos[v]?));
                    }
                }
                t
            };
            let zero = Entry { constant: 0.0, terms: vec![] };
            for i in 0..p.order {
                let Some(a) = entries.get(&(i, i)) else { continue };
                if let Some(t) = trigger(&[a]) {
                    minors[t].push(Minor::Diag(a.clone()));
                }
                for j in 0..i {
                    let Some(c) = entries.get(&(i, j)) else { continue };
                    let b = entries.get(&(j, j)).unwrap_or(&zero);
                    if let Some(t) = trigger(&[a, b, c]) {
                        minors[t].push(Minor::Pair(a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        Ok(Plan {
            m,
            tol: *tol,
            collect: opts.collect_feasible,
            order,
            values,
            rows,
            touch,
            minors,
            integer_pencils,
            resolver,
        })
    }

    fn row_check(
        m: &MisdpModel,
        row: &LinearRow,
        pos: &[Option<usize>],
        values: &[Vec<f64>],
        tol: &Tolerances,
        index: usize,
        touch: &mut [Vec<(usize, usize)>],
    ) -> RowCheck {
        let (mut c_min, mut c_max) = (0.0, 0.0);
        let mut e: Vec<(usize, f64)> = Vec::new();
        for &(v, c) in &row.terms {
            match pos[v] {
                Some(p) => e.push((p, c)),
                None => {
                    let (lo, hi) = m.variables[v].domain.bounds();
                    let (a, b) = if c >= 0.0 { (c * lo, c * hi) } else { (c * hi, c * lo) };
                    c_min += if a.is_nan() { f64::NEG_INFINITY } else { a };
                    c_max += if b.is_nan() { f64::INFINITY } else { b };
                }
            }
        }
        e.sort_by_key(|t| t.0);
        let k = e.len();
        let mut suffix_min = vec![0.0; k + 1];
        let mut suffix_max = vec![0.0; k + 1];
        for i in (0..k).rev() {
            let (p, c) = e[i];
            let prods = values[p].iter().map(|&v| c * v);
            suffix_min[i] = suffix_min[i + 1] + prods.clone().fold(f64::INFINITY, f64::min);
            suffix_max[i] = suffix_max[i + 1] + prods.fold(f64::NEG_INFINITY, f64::max);
        }
        for (i, &(p, _)) in e.iter().enumerate() {
            touch[p].push((index, i));
        }
        RowCheck {
            rel: row.rel,
            rhs: row.rhs,
            slack: tol.linear_rel * row.rhs.abs().max(1.0),
            c_min,
            c_max,
            coefs: e.iter().map(|t| t.1).collect(),
            suffix_min,
            suffix_max,
        }
    }

    fn new_state(&self) -> State {
        State { x: vec![0.0; self.m.num_vars()], partial: vec![0.0; self.rows.len()] }
    }

    /// Applies the assignment at `pos` and reports whether the forward
    /// checks pass. The caller must [`Plan::unassign`] either way.
    fn assign(&self, pos: usize, val: f64, st: &mut State) -> bool {
        st.x[self.order[pos]] = val;
        for &(r, i) in &self.touch[pos] {
            st.partial[r] += self.rows[r].coefs[i] * val;
        }
        for &(r, i) in &self.touch[pos] {
            let row = &self.rows[r];
            let lo = st.partial[r] + row.suffix_min[i + 1] + row.c_min;
            let hi = st.partial[r] + row.suffix_max[i + 1] + row.c_max;
            let bad = match row.rel {
                Relation::Le => lo > row.rhs + row.slack,
                Relation::Ge => hi < row.rhs - row.slack,
                Relation::Eq => lo > row.rhs + row.slack || hi < row.rhs - row.slack,
            };
            if bad {
                return false;
            }
        }
        self.minors[pos].iter().all(|mi| mi.holds(&st.x))
    }

    fn unassign(&self, pos: usize, val: f64, st: &mut State) {
        for &(r, i) in &self.touch[pos] {
            st.partial[r] -= self.rows[r].coefs[i] * val;
        }
    }

    fn walk(&self, pos: usize, st: &mut State, acc: &mut Acc) -> Result<(), VerifyError> {
        acc.nodes += 1;
        if pos == self.order.len() {
            return self.leaf(st, acc);
        }
        for &val in &self.values[pos] {
            if self.assign(pos, val, st) {
                let r = self.walk(pos + 1, st, acc);
                if r.is_err() {
                    self.unassign(pos, val, st);
                    return r;
                }
            }
            self.unassign(pos, val, st);
        }
        Ok(())
    }

    fn leaf(&self, st: &mut State, acc: &mut Acc) -> Result<(), VerifyError> {
        for &k in &self.integer_pencils {
            if !is_psd(&self.m.pencil_matrix(k, &st.x), &self.tol) {
                return Ok(());
            }
        }
        let certain = match self.resolver.complete(self.m, &mut st.x, &self.tol)? {
            Completion::Infeasible => return Ok(()),
            Completion::Candidate { certain } => certain,
        };
        let ev = self.m.eval_point(&st.x, &self.tol)?;
        if !ev.feasible {
            if certain {
                return Err(VerifyError::Undecided(format!(
                    "constructed completion violates {:?}",
                    ev.violations.first()
                )));
            }
            return Ok(());
        }
        acc.count += 1;
        if self.collect {
            acc.feasible.push(FeasiblePoint { x: st.x.clone(), objective: ev.objective });
        }
        acc.offer(self.m.objective.min_form(&st.x), &st.x, &self.tol);
        Ok(())
    }

    /// Search below a fixed prefix of assignments (already known to pass the
    /// forward checks).
    fn run_from(&self, prefix: &[f64]) -> Result<Acc, VerifyError> {
        let mut st = self.new_state();
        let mut acc = Acc::default();
        for (p, &v) in prefix.iter().enumerate() {
            self.assign(p, v, &mut st);
        }
        self.walk(prefix.len(), &mut st, &mut acc)?;
        Ok(acc)
    }

    fn prefixes(&self, depth: usize) -> Vec<Vec<f64>> {
        fn go(plan: &Plan, pos: usize, depth: usize, st: &mut State, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
            if pos == depth {
                out.push(cur.clone());
                return;
            }
            for &val in &plan.values[pos] {
                if plan.assign(pos, val, st) {
                    cur.push(val);
                    go(plan, pos + 1, depth, st, cur, out);
                    cur.pop();
                }
                plan.unassign(pos, val, st);
            }
        }
        let mut out = Vec::new();
        go(self, 0, depth, &mut self.new_state(), &mut Vec::new(), &mut out);
        out
    }

    fn run_parallel(&self) -> Result<Acc, VerifyError> {
        let mut depth = 0;
        let mut width = 1usize;
        while depth < self.order.len() && width < 64 {
            width *= self.values[depth].len().max(1);
            depth += 1;
        }
        if depth == 0 || depth == self.order.len() {
            return self.run_from(&[]);
        }
        let parts: Vec<Result<Acc, VerifyError>> =
            self.prefixes(depth).par_iter().map(|p| self.run_from(p)).collect();
        let mut acc = Acc::default();
        for p in parts {
            acc.merge(p?, &self.tol);
        }
        Ok(acc)
    }
}
