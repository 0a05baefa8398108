//! Recovers the continuous part of a model once its integer variables are
//! fixed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;

use super::VerifyError;
use crate::linalg::{eigensym, is_psd, solve_unique, sqrt_psd, LinalgError, Mat, SymMat};
use crate::model::{LinearRow, MisdpModel, Relation, VarId};
use crate::schemes::cycle_recurrence;
use crate::tolerance::Tolerances;

pub(crate) enum Completion {
    Infeasible,
    /// Continuous values written into the assignment. With `certain`, a
    /// failing `eval_point` means the resolver is wrong, not that the point
    /// is infeasible.
    Candidate { certain: bool },
}

fn unsupported(msg: impl Into<String>) -> VerifyError {
    VerifyError::UnsupportedContinuousPattern(msg.into())
}

/// `var = c0 + Σ g·x_e` over enumerated variables.
struct Affine {
    var: VarId,
    c0: f64,
    terms: Vec<(VarId, f64)>,
}

struct Corner {
    pencil: usize,
    var: VarId,
    lo: f64,
    hi: f64,
}

struct Nuclear {
    pencil: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    /// `(block, i, j, var)` with block 0 for the left group.
    slots: Vec<(usize, usize, usize, VarId)>,
}

struct Schur {
    pencil: usize,
    t: Vec<usize>,
    h: Vec<usize>,
    b_vars: Vec<VarId>,
    c_vars: Vec<VarId>,
    /// Pencil positions `(a, b)`, `a ≤ b`, of the C block covered by
    /// variables.
    covered: Vec<(usize, usize)>,
    /// Diagonal positions of the C block with no variable.
    fixed_diag: Vec<usize>,
    neutral: bool,
}

struct Lee {
    n: usize,
    r: usize,
    /// `x[t][pair]` for `t = 0..r`, pairs `i < j` row-major.
    x: Vec<Vec<VarId>>,
    alpha: f64,
}

enum Step {
    Corner(Corner),
    Nuclear(Nuclear),
    Schur(Schur),
}

pub(crate) struct Resolver {
    affine: Vec<Affine>,
    fixed: Vec<(VarId, f64)>,
    steps: Vec<Step>,
    lee: Option<Lee>,
    /// Rows implied by the model that the search may use for pruning.
    pub derived_rows: Vec<LinearRow>,
}

fn clean(v: f64) -> f64 {
    if (v - v.round()).abs() < 1e-9 {
        v.round()
    } else {
        v
    }
}

impl Resolver {
    pub(crate) fn plan(m: &MisdpModel, enumerated: &[bool], _tol: &Tolerances) -> Result<Self, VerifyError> {
        let mut out = Resolver { affine: vec![], fixed: vec![], steps: vec![], lee: None, derived_rows: vec![] };
        let cont: Vec<VarId> = (0..m.num_vars()).filter(|&v| !enumerated[v]).collect();
        if cont.is_empty() {
            return Ok(out);
        }
        let mut determined = BTreeSet::new();
        out.affine = equality_elimination(m, enumerated, &cont);
        for a in &out.affine {
            determined.insert(a.var);
        }
        let rest: Vec<VarId> = cont.iter().copied().filter(|v| !determined.contains(v)).collect();
        if rest.is_empty() {
            return Ok(out);
        }
        if m.provenance == "tsp-lee" {
            let lee = Lee::plan(m, &rest)?;
            out.derived_rows = lee.degree_rows();
            out.lee = Some(lee);
            return Ok(out);
        }
        let rest_set: BTreeSet<VarId> = rest.iter().copied().collect();
        for row in &m.rows {
            if let Some(&(v, _)) = row.terms.iter().find(|(v, _)| rest_set.contains(v)) {
                return Err(unsupported(format!(
                    "`{}` appears in row `{}` but is not fixed by the equalities",
                    m.variables[v].name, row.name
                )));
            }
        }
        let obj: HashMap<VarId, f64> = m.objective.terms.iter().copied().collect();
        let mut by_pencil: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
        for &v in &rest {
            let ps: Vec<usize> = (0..m.pencils.len()).filter(|&k| m.pencils[k].vars().any(|u| u == v)).collect();
            match ps.len() {
                0 => {
                    let c = obj.get(&v).copied().unwrap_or(0.0);
                    let (lo, hi) = m.variables[v].domain.bounds();
                    let val = if c == 0.0 {
                        0.0f64.clamp(lo, hi)
                    } else if c > 0.0 && lo.is_finite() {
                        lo
                    } else if c < 0.0 && hi.is_finite() {
                        hi
                    } else {
                        return Err(unsupported(format!("`{}` is unbounded in the objective", m.variables[v].name)));
                    };
                    out.fixed.push((v, val));
                }
                1 => by_pencil.entry(ps[0]).or_default().push(v),
                _ => {
                    return Err(unsupported(format!("`{}` appears in {} pencils", m.variables[v].name, ps.len())));
                }
            }
        }
        for (k, vars) in by_pencil {
            if let Some(c) = Corner::plan(m, k, &vars, &obj) {
                out.steps.push(Step::Corner(c));
            } else if let Some(nu) = Nuclear::plan(m, k, &vars, &obj) {
                out.steps.push(Step::Nuclear(nu));
            } else {
                out.steps.push(Step::Schur(Schur::plan(m, k, &vars, &obj)?));
            }
        }
        Ok(out)
    }

    pub(crate) fn complete(&self, m: &MisdpModel, x: &mut [f64], tol: &Tolerances) -> Result<Completion, VerifyError> {
        for a in &self.affine {
            x[a.var] = clean(a.c0 + a.terms.iter().map(|&(v, g)| g * x[v]).sum::<f64>());
        }
        for &(v, val) in &self.fixed {
            x[v] = val;
        }
        for s in &self.steps {
            let ok = match s {
                Step::Corner(c) => c.complete(m, x, tol)?,
                Step::Nuclear(nu) => nu.complete(m, x, tol)?,
                Step::Schur(sc) => sc.complete(m, x, tol)?,
            };
            if !ok {
                return Ok(Completion::Infeasible);
            }
        }
        if let Some(lee) = &self.lee {
            return Ok(if lee.complete(x, tol) { Completion::Candidate { certain: true } } else { Completion::Infeasible });
        }
        Ok(Completion::Candidate { certain: false })
    }
}

/// Gauss-Jordan on the continuous columns of the equality rows. A pivot
/// variable is determined when its reduced row has no other continuous
/// variable left.
fn equality_elimination(m: &MisdpModel, enumerated: &[bool], cont: &[VarId]) -> Vec<Affine> {
    let col: HashMap<VarId, usize> = cont.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let eq: Vec<&LinearRow> = m
        .rows
        .iter()
        .filter(|r| r.rel == Relation::Eq && r.terms.iter().any(|(v, _)| !enumerated[*v]))
        .collect();
    let (nr, nc) = (eq.len(), cont.len());
    if nr == 0 {
        return vec![];
    }
    let mut a = vec![vec![0.0; nc]; nr];
    for (i, r) in eq.iter().enumerate() {
        for &(v, c) in &r.terms {
            if let Some(&j) = col.get(&v) {
                a[i][j] += c;
            }
        }
    }
    let scale = a.iter().flatten().fold(1.0f64, |s, v| s.max(v.abs()));
    let eps = 1e-10 * scale;
    let mut t: Vec<Vec<f64>> = (0..nr).map(|i| (0..nr).map(|j| (i == j) as u8 as f64).collect()).collect();
    let mut pivots = Vec::new();
    let mut rho = 0;
    for c in 0..nc {
        if rho == nr {
            break;
        }
        let p = (rho..nr).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c].abs() <= eps {
            continue;
        }
        a.swap(rho, p);
        t.swap(rho, p);
        let d = a[rho][c];
        for v in a[rho].iter_mut() {
            *v /= d;
        }
        for v in t[rho].iter_mut() {
            *v /= d;
        }
        for i in 0..nr {
            if i != rho && a[i][c] != 0.0 {
                let f = a[i][c];
                for j in 0..nc {
                    a[i][j] -= f * a[rho][j];
                }
                for j in 0..nr {
                    t[i][j] -= f * t[rho][j];
                }
            }
        }
        pivots.push((rho, c));
        rho += 1;
    }
    let mut out = Vec::new();
    for (r, c) in pivots {
        if (0..nc).any(|j| j != c && a[r][j].abs() > eps) {
            continue;
        }
        let mut c0 = 0.0;
        let mut g: BTreeMap<VarId, f64> = BTreeMap::new();
        for (i, row) in eq.iter().enumerate() {
            let w = t[r][i];
            if w == 0.0 {
                continue;
            }
            c0 += w * row.rhs;
            for &(v, coef) in &row.terms {
                if enumerated[v] {
                    *g.entry(v).or_insert(0.0) -= w * coef;
                }
            }
        }
        let terms = g.into_iter().map(|(v, x)| (v, clean(x))).filter(|t| t.1 != 0.0).collect();
        out.push(Affine { var: cont[c], c0: clean(c0), terms });
    }
    out
}

/// Pencil evaluated with the listed variables zeroed.
fn pencil_without(m: &MisdpModel, k: usize, x: &mut [f64], vars: &[VarId]) -> SymMat {
    for &v in vars {
        x[v] = 0.0;
    }
    m.pencil_matrix(k, x)
}

fn coef_positions(m: &MisdpModel, k: usize, v: VarId) -> Vec<(usize, usize, f64)> {
    m.pencils[k].terms.iter().find(|(u, _)| *u == v).map(|(_, a)| a.lower().collect()).unwrap_or_default()
}

impl Corner {
    fn plan(m: &MisdpModel, k: usize, vars: &[VarId], obj: &HashMap<VarId, f64>) -> Option<Corner> {
        let [v] = vars else { return None };
        let pos = coef_positions(m, k, *v);
        let [(a, b, alpha)] = pos[..] else { return None };
        if a != b || alpha <= 0.0 || obj.get(v).copied().unwrap_or(0.0) < 0.0 {
            return None;
        }
        let (lo, hi) = m.variables[*v].domain.bounds();
        Some(Corner { pencil: k, var: *v, lo, hi })
    }

    /// Smallest value of the corner keeping the pencil PSD: galloping to
    /// bracket it, then bisection.
    fn complete(&self, m: &MisdpModel, x: &mut [f64], tol: &Tolerances) -> Result<bool, VerifyError> {
        let tight = Tolerances { psd_rel: 1e-12, ..*tol };
        let ok = |z: f64, x: &mut [f64]| {
            x[self.var] = z;
            is_psd(&m.pencil_matrix(self.pencil, x), &tight)
        };
        const REACH: f64 = (1u64 << 40) as f64;
        let mut lo;
        if self.lo.is_finite() {
            if ok(self.lo, x) {
                x[self.var] = self.lo;
                return Ok(true);
            }
            lo = self.lo;
        } else if ok(0.0, x) {
            let mut step = 1.0;
            loop {
                if step > REACH {
                    return Err(unsupported(format!("`{}` is unbounded below", m.variables[self.var].name)));
                }
                if !ok(-step, x) {
                    lo = -step;
                    break;
                }
                step *= 2.0;
            }
        } else {
            lo = 0.0;
        }
        let mut step = 1.0;
        let mut hi = loop {
            if step > REACH {
                return Ok(false);
            }
            if ok(lo + step, x) {
                break lo + step;
            }
            step *= 2.0;
        };
        lo = (hi - step).max(lo);
        for _ in 0..60 {
            if hi - lo <= 1e-9 * hi.abs().max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if ok(mid, x) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if hi > self.hi {
            return Ok(false);
        }
        x[self.var] = hi;
        Ok(true)
    }
}

/// Occupancy of pencil positions: which variables (and whether a constant)
/// sit at each lower-triangle entry.
fn occupancy(m: &MisdpModel, k: usize) -> BTreeMap<(usize, usize), (bool, Vec<VarId>)> {
    let p = &m.pencils[k];
    let mut occ: BTreeMap<(usize, usize), (bool, Vec<VarId>)> = BTreeMap::new();
    for (r, c, _) in p.constant.lower() {
        occ.entry((r, c)).or_default().0 = true;
    }
    for (v, a) in &p.terms {
        for (r, c, _) in a.lower() {
            occ.entry((r, c)).or_default().1.push(*v);
        }
    }
    occ
}

impl Nuclear {
    fn plan(m: &MisdpModel, k: usize, vars: &[VarId], obj: &HashMap<VarId, f64>) -> Option<Nuclear> {
        let n = m.pencils[k].order;
        let occ = occupancy(m, k);
        let mut slot: BTreeMap<(usize, usize), VarId> = BTreeMap::new();
        for &v in vars {
            let pos = coef_positions(m, k, v);
            let [(a, b, c)] = pos[..] else { return None };
            let o = &occ[&(a, b)];
            if c != 1.0 || o.0 || o.1.len() != 1 {
                return None;
            }
            slot.insert((a, b), v);
        }
        // union-find over indices joined by a free slot
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for &(a, b) in slot.keys() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let groups: Vec<Vec<usize>> = groups.into_values().collect();
        if groups.len() != 2 {
            return None;
        }
        let mut slots = Vec::new();
        let mut diag_w = None;
        for (gi, g) in groups.iter().enumerate() {
            for (p, &a) in g.iter().enumerate() {
                for (q, &b) in g.iter().enumerate().take(p + 1) {
                    let &v = slot.get(&(a.max(b), a.min(b)))?;
                    let w = obj.get(&v).copied().unwrap_or(0.0);
                    if p == q {
                        if *diag_w.get_or_insert(w) != w {
                            return None;
                        }
                    } else if w != 0.0 {
                        return None;
                    }
                    slots.push((gi, p, q, v));
                }
            }
        }
        if diag_w.map_or(true, |w| w <= 0.0) {
            return None;
        }
        Some(Nuclear { pencil: k, left: groups[0].clone(), right: groups[1].clone(), slots })
    }

    /// `Z₁ = (XXᵀ)^½`, `Z₂ = (XᵀX)^½`, the minimal-trace completion.
    fn complete(&self, m: &MisdpModel, x: &mut [f64], tol: &Tolerances) -> Result<bool, VerifyError> {
        let vars: Vec<VarId> = self.slots.iter().map(|s| s.3).collect();
        let full = pencil_without(m, self.pencil, x, &vars);
        let xm = Mat::from_fn(self.left.len(), self.right.len(), |i, j| full.get(self.left[i], self.right[j]));
        let z1 = sqrt_psd(&SymMat::sym_part(&xm.mul(&xm.transpose())), tol)?;
        let z2 = sqrt_psd(&SymMat::sym_part(&xm.transpose().mul(&xm)), tol)?;
        for &(g, i, j, v) in &self.slots {
            x[v] = if g == 0 { z1.get(i, j) } else { z2.get(i, j) };
        }
        Ok(true)
    }
}

impl Schur {
    fn plan(m: &MisdpModel, k: usize, vars: &[VarId], obj: &HashMap<VarId, f64>) -> Result<Schur, VerifyError> {
        let name = &m.pencils[k].name;
        let n = m.pencils[k].order;
        let positions: Vec<(VarId, Vec<(usize, usize, f64)>)> = vars.iter().map(|&v| (v, coef_positions(m, k, v))).collect();
        let mut t: BTreeSet<usize> = positions.iter().flat_map(|(_, p)| p.iter().filter(|e| e.0 == e.1).map(|e| e.0)).collect();
        if t.is_empty() {
            t = positions.iter().flat_map(|(_, p)| p.iter().flat_map(|e| [e.0, e.1])).collect();
        }
        let h: Vec<usize> = (0..n).filter(|i| !t.contains(i)).collect();
        let (mut b_vars, mut c_vars) = (vec![], vec![]);
        let mut covered = BTreeSet::new();
        for (v, pos) in &positions {
            let ins = pos.iter().map(|e| (t.contains(&e.0) as u8) + (t.contains(&e.1) as u8)).collect::<BTreeSet<u8>>();
            match ins.iter().copied().collect::<Vec<_>>()[..] {
                [1] => b_vars.push(*v),
                [2] => {
                    c_vars.push(*v);
                    covered.extend(pos.iter().map(|e| (e.1, e.0)));
                }
                _ => {
                    return Err(unsupported(format!(
                        "`{}` in pencil `{name}` straddles the known and free blocks",
                        m.variables[*v].name
                    )))
                }
            }
        }
        let tv: Vec<usize> = t.iter().copied().collect();
        let mut fixed_diag = vec![];
        for (p, &a) in tv.iter().enumerate() {
            for &b in &tv[p..] {
                if !covered.contains(&(a, b)) {
                    if a != b {
                        return Err(unsupported(format!("pencil `{name}` has a fixed off-diagonal entry in its free block")));
                    }
                    fixed_diag.push(a);
                }
            }
        }
        let neutral = c_vars.iter().all(|v| obj.get(v).copied().unwrap_or(0.0) == 0.0);
        if !neutral && fixed_diag.len() != tv.len() {
            return Err(unsupported(format!("free block of pencil `{name}` carries objective weight")));
        }
        Ok(Schur { pencil: k, t: tv, h, b_vars, c_vars, covered: covered.into_iter().collect(), fixed_diag, neutral })
    }

    /// Fills the free block with `B K⁺ Bᵀ`, first solving the border
    /// unknowns from `B·null(K) = 0`.
    fn complete(&self, m: &MisdpModel, x: &mut [f64], tol: &Tolerances) -> Result<bool, VerifyError> {
        let name = &m.pencils[self.pencil].name;
        let all: Vec<VarId> = self.b_vars.iter().chain(&self.c_vars).copied().collect();
        let mut full = pencil_without(m, self.pencil, x, &all);
        let kk = full.principal(&self.h);
        if !self.h.is_empty() && !is_psd(&kk, tol) {
            return Ok(false);
        }
        let (null, kp) = if self.h.is_empty() {
            (Mat::zeros(0, 0), SymMat::zeros(0))
        } else {
            let e = eigensym(&kk, tol)?;
            let cut = tol.rank_rel * e.values.iter().fold(1.0f64, |s, l| s.max(l.abs()));
            let idx: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i].abs() <= cut).collect();
            let null = Mat::from_fn(self.h.len(), idx.len(), |r, c| e.vectors[(r, idx[c])]);
            (null, e.apply(|l| if l.abs() > cut { 1.0 / l } else { 0.0 }))
        };
        let hpos: HashMap<usize, usize> = self.h.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let tpos: HashMap<usize, usize> = self.t.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let scale = full.norm_inf().max(1.0);
        let nn = null.cols();
        if !self.b_vars.is_empty() {
            if nn == 0 {
                return Err(unsupported(format!("border of pencil `{name}` is not pinned down")));
            }
            let rows = self.t.len() * nn;
            let mut a = Mat::zeros(rows, self.b_vars.len());
            let mut rhs = vec![0.0; rows];
            for (ti, &tr) in self.t.iter().enumerate() {
                for c in 0..nn {
                    let eqn = ti * nn + c;
                    rhs[eqn] = -self.h.iter().enumerate().map(|(hi, &hc)| full.get(tr, hc) * null[(hi, c)]).sum::<f64>();
                }
            }
            for (u, &v) in self.b_vars.iter().enumerate() {
                for (r, cc, coef) in coef_positions(m, self.pencil, v) {
                    let (tr, hc) = if tpos.contains_key(&r) { (r, cc) } else { (cc, r) };
                    let (ti, hi) = (tpos[&tr], hpos[&hc]);
                    // lower() lists each off-diagonal slot once
                    for c in 0..nn {
                        a[(ti * nn + c, u)] += coef * null[(hi, c)];
                    }
                }
            }
            match solve_unique(&a, &rhs, 1e-7 * scale) {
                Ok(Some(y)) => {
                    for (u, &v) in self.b_vars.iter().enumerate() {
                        x[v] = clean(y[u]);
                    }
                }
                Ok(None) => return Ok(false),
                Err(LinalgError::Rank) => return Err(unsupported(format!("border of pencil `{name}` is not unique"))),
                Err(e) => return Err(e.into()),
            }
            full = m.pencil_matrix(self.pencil, x);
        } else if nn > 0 {
            for &tr in &self.t {
                for c in 0..nn {
                    let v: f64 = self.h.iter().enumerate().map(|(hi, &hc)| full.get(tr, hc) * null[(hi, c)]).sum();
                    if v.abs() > 1e-7 * scale {
                        return Ok(false);
                    }
                }
            }
        }
        let b = Mat::from_fn(self.t.len(), self.h.len(), |i, j| full.get(self.t[i], self.h[j]));
        let s = SymMat::sym_part(&b.mul(&kp.to_mat()).mul(&b.transpose()));
        for &a in &self.fixed_diag {
            let sv = s.get(tpos[&a], tpos[&a]);
            let slack = full.get(a, a) - sv;
            let eps = 1e-7 * sv.abs().max(1.0);
            if slack < -eps {
                return Ok(false);
            }
            if slack > eps && !self.neutral {
                return Err(unsupported(format!("free block of pencil `{name}` is not forced")));
            }
        }
        if !self.c_vars.is_empty() {
            let idx: HashMap<(usize, usize), usize> = self.covered.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let mut a = Mat::zeros(self.covered.len(), self.c_vars.len());
            let rhs: Vec<f64> = self
                .covered
                .iter()
                .map(|&(p, q)| s.get(tpos[&p], tpos[&q]) - full.get(p, q))
                .collect();
            for (u, &v) in self.c_vars.iter().enumerate() {
                for (r, c, coef) in coef_positions(m, self.pencil, v) {
                    a[(idx[&(c.min(r), c.max(r))], u)] += coef;
                }
            }
            match solve_unique(&a, &rhs, 1e-7 * scale) {
                Ok(Some(z)) => {
                    for (u, &v) in self.c_vars.iter().enumerate() {
                        x[v] = clean(z[u]);
                    }
                }
                Ok(None) | Err(LinalgError::Rank) => {
                    return Err(unsupported(format!("free block of pencil `{name}` cannot be matched")))
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(true)
    }
}

impl Lee {
    /// Reads the `X1 … Xr` layout back from the variable names; every
    /// variable not fixed by the equalities must belong to `X2 … Xr`.
    fn plan(m: &MisdpModel, rest: &[VarId]) -> Result<Lee, VerifyError> {
        let r = m.pencils.len();
        let n = m.pencils.first().map_or(0, |p| p.order);
        let pairs = n * n.saturating_sub(1) / 2;
        let mut x = vec![vec![usize::MAX; pairs]; r];
        for (v, var) in m.variables.iter().enumerate() {
            let parsed = (|| {
                let (head, tail) = var.name.strip_prefix('X')?.split_once('[')?;
                let (i, j) = tail.strip_suffix(']')?.split_once(',')?;
                Some((head.parse::<usize>().ok()?, i.parse::<usize>().ok()?, j.parse::<usize>().ok()?))
            })();
            let Some((t, i, j)) = parsed else { continue };
            if t == 0 || t > r || i == 0 || i >= j || j > n {
                continue;
            }
            let (i, j) = (i - 1, j - 1);
            x[t - 1][i * n - i * (i + 1) / 2 + (j - i - 1)] = v;
        }
        if x.iter().flatten().any(|&v| v == usize::MAX) {
            return Err(unsupported("cycle-scheme model with an unexpected layout"));
        }
        let later: BTreeSet<VarId> = x[1..].iter().flatten().copied().collect();
        if let Some(&v) = rest.iter().find(|v| !later.contains(v)) {
            return Err(unsupported(format!("`{}` is not part of X2 … Xr", m.variables[v].name)));
        }
        let alpha = 2.0 * (1.0 - (2.0 * PI / n as f64).cos());
        // The connectivity LMI 2I − X1 + α(J − I) must be a nonnegative
        // combination of the eigen pencils and J = I + ΣX_t.
        let mut a = Mat::zeros(r + 1, r + 1);
        let mut rhs = vec![0.0; r + 1];
        for j in 0..r {
            a[(0, j)] = 1.0;
            for t in 0..r {
                a[(t + 1, j)] = crate::problems::lee_cos(n, t + 1, j + 1);
            }
        }
        for row in 0..=r {
            a[(row, r)] = 1.0;
        }
        rhs[0] = 2.0;
        rhs[1] = alpha - 1.0;
        for v in rhs.iter_mut().skip(2) {
            *v = alpha;
        }
        let w = solve_unique(&a, &rhs, 1e-9)?.ok_or_else(|| unsupported("connectivity LMI is not implied"))?;
        if w.iter().any(|&v| v < -1e-12) {
            return Err(unsupported("connectivity LMI is not a nonnegative combination"));
        }
        Ok(Lee { n, r, x, alpha })
    }

    /// `X1·1 = 2·1`: summing the eigen pencils gives `½(nI − J)`, so each
    /// annihilates `1`, and the cosine matrix is invertible.
    fn degree_rows(&self) -> Vec<LinearRow> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let terms = (0..n).filter(|&j| j != i).map(|j| (self.x[0][self.pair(i, j)], 1.0)).collect();
                LinearRow { name: format!("derived-degree[{}]", i + 1), terms, rel: Relation::Eq, rhs: 2.0 }
            })
            .collect()
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        let (a, b) = (i.min(j), i.max(j));
        a * self.n - a * (a + 1) / 2 + (b - a - 1)
    }

    fn complete(&self, x: &mut [f64], tol: &Tolerances) -> bool {
        let n = self.n;
        let x1 = SymMat::from_fn(n, |i, j| if i == j { 0.0 } else { x[self.x[0][self.pair(i, j)]] });
        let conn = SymMat::from_fn(n, |i, j| if i == j { 2.0 } else { self.alpha - x1.get(i, j) });
        if !is_psd(&conn, tol) {
            return false;
        }
        let xs = cycle_recurrence(&x1, self.r);
        for t in 1..self.r {
            for i in 0..n {
                for j in i + 1..n {
                    x[self.x[t][self.pair(i, j)]] = clean(xs[t].get(i, j));
                }
            }
        }
        true
    }
}
