//! Brute-force optima of the source problems, by direct evaluation of their
//! objectives over every candidate solution.
//!
//! Solutions are reported as integer vectors: indicator vectors for subsets,
//! images for permutations, part labels (`-1` for uncovered) for packings and
//! partitions, row-major entries for matrices.

use serde::Serialize;

use super::VerifyError;
use crate::dpsd::{packings, Packing};
use crate::formulations::{Qmp2Instance, QcqpInstance, Qmp1Instance};
use crate::linalg::{nuclear_norm, Mat, SymMat};
use crate::model::Sense;
use crate::problems::{CompletionInstance, GppInstance, Graph, QapInstance, QbppInstance, QmkpInstance, SilsInstance};
use crate::tolerance::Tolerances;

pub const MAX_SUBSETS: u64 = 1 << 20;
pub const MAX_PERMUTATION_N: usize = 8;
pub const MAX_PARTITIONS: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// `None` when nothing is feasible.
    pub optimum: Option<f64>,
    pub feasible_count: u64,
    pub argmin: Vec<Vec<i64>>,
}

struct Best {
    maximize: bool,
    tol: Tolerances,
    out: OracleResult,
}

impl Best {
    fn new(sense: Sense, tol: &Tolerances) -> Self {
        Best {
            maximize: sense == Sense::Max,
            tol: *tol,
            out: OracleResult { optimum: None, feasible_count: 0, argmin: vec![] },
        }
    }

    fn offer(&mut self, value: f64, sol: impl FnOnce() -> Vec<i64>) {
        self.out.feasible_count += 1;
        match self.out.optimum {
            Some(b) if self.tol.same_value(b, value) => self.out.argmin.push(sol()),
            Some(b) if (value < b) == self.maximize => {}
            _ => {
                self.out.optimum = Some(value);
                self.out.argmin = vec![sol()];
            }
        }
    }
}

fn subsets_budget(bits: usize) -> Result<(), VerifyError> {
    if bits >= 64 || (1u64 << bits) > MAX_SUBSETS {
        return Err(VerifyError::BudgetExceeded { size: 2f64.powi(bits as i32), budget: MAX_SUBSETS });
    }
    Ok(())
}

fn bits(mask: u64, n: usize) -> Vec<f64> {
    (0..n).map(|i| ((mask >> i) & 1) as f64).collect()
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn perm_budget(n: usize) -> Result<(), VerifyError> {
    if n > MAX_PERMUTATION_N {
        let size: f64 = (1..=n).map(|v| v as f64).product();
        return Err(VerifyError::BudgetExceeded { size, budget: (1..=MAX_PERMUTATION_N as u64).product() });
    }
    Ok(())
}

fn packing_labels(p: &Packing) -> Vec<i64> {
    let mut l = vec![-1i64; p.n()];
    for (c, part) in p.parts().iter().enumerate() {
        for &i in part {
            l[i] = c as i64;
        }
    }
    l
}

fn packings_checked(n: usize, r: usize) -> Result<Vec<Packing>, VerifyError> {
    // Σ_{k ≤ r} S(n+1, k+1) packings; cap by the Bell number bound
    let bell = crate::dpsd::count_dnr(n, r.min(n)).map(|c| c.to_string().parse::<f64>().unwrap_or(f64::INFINITY));
    let size = bell.unwrap_or(f64::INFINITY);
    if size > MAX_PARTITIONS as f64 {
        return Err(VerifyError::BudgetExceeded { size, budget: MAX_PARTITIONS });
    }
    Ok(packings(n, r))
}

/// Largest stable set.
pub fn stable_set(g: &Graph, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let n = g.n();
    subsets_budget(n)?;
    let mut b = Best::new(Sense::Max, tol);
    for mask in 0..(1u64 << n) {
        let set: Vec<usize> = (0..n).filter(|i| (mask >> i) & 1 == 1).collect();
        if g.is_stable(&set) {
            b.offer(set.len() as f64, || bits(mask, n).iter().map(|&v| v as i64).collect());
        }
    }
    Ok(b.out)
}

/// Largest union of at most `k` disjoint stable sets; one solution per
/// packing (unlabeled).
pub fn mkcs(g: &Graph, k: usize, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let mut b = Best::new(Sense::Max, tol);
    for p in packings_checked(g.n(), k)? {
        if p.parts().iter().all(|s| g.is_stable(s)) {
            let size: usize = p.parts().iter().map(Vec::len).sum();
            b.offer(size as f64, || packing_labels(&p));
        }
    }
    Ok(b.out)
}

pub fn qcqp(q: &QcqpInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    subsets_budget(q.n)?;
    let mut b = Best::new(q.sense, tol);
    for mask in 0..(1u64 << q.n) {
        let x = bits(mask, q.n);
        if q.is_feasible(&x) {
            b.offer(q.objective(&x), || x.iter().map(|&v| v as i64).collect());
        }
    }
    Ok(b.out)
}

/// Over packings with at most `k` parts (partitions when the instance says
/// so); each `PPᵀ` counted once.
pub fn qmp1(q: &Qmp1Instance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let mut b = Best::new(q.sense, tol);
    for p in packings_checked(q.n, q.k)? {
        if q.partition && !p.uncovered().is_empty() {
            continue;
        }
        let x = p.matrix();
        if q.constraints.iter().any(|c| c.q.inner(&x) + c.d > 1e-9) {
            continue;
        }
        let fits = q.capacities.iter().all(|c| p.parts().iter().all(|s| s.iter().map(|&i| c.a[i]).sum::<f64>() <= c.b + 1e-9));
        if fits {
            b.offer(q.q0.inner(&x), || packing_labels(&p));
        }
    }
    Ok(b.out)
}

/// Label vectors: `labels[i] = Some(j)` puts row `i` of `P` in column `j`.
fn label_vectors(n: usize, k: usize, allow_none: bool) -> Result<Vec<Vec<Option<usize>>>, VerifyError> {
    let base = k + allow_none as usize;
    let size = (base as f64).powi(n as i32);
    if size > MAX_PARTITIONS as f64 * 10.0 {
        return Err(VerifyError::BudgetExceeded { size, budget: MAX_PARTITIONS * 10 });
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.iter().map(|&c| if allow_none { c.checked_sub(1) } else { Some(c) }).collect());
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < base {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn label_matrix(l: &[Option<usize>], k: usize) -> Mat {
    Mat::from_fn(l.len(), k, |i, j| (l[i] == Some(j)) as u8 as f64)
}

fn encode(l: &[Option<usize>]) -> Vec<i64> {
    l.iter().map(|c| c.map_or(-1, |c| c as i64)).collect()
}

/// Over packing (or partition) matrices `P`; each `P` counted once.
pub fn qmp2(q: &Qmp2Instance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let mut b = Best::new(q.sense, tol);
    for l in label_vectors(q.n, q.k, !q.partition)? {
        let p = label_matrix(&l, q.k);
        if q.exact_rank && (0..q.k).any(|j| !l.contains(&Some(j))) {
            continue;
        }
        if q.constraints.iter().any(|c| Qmp2Instance::form(&c.q, &c.b, c.d, &p) > 1e-9) {
            continue;
        }
        b.offer(Qmp2Instance::form(&q.q0, &q.b0, q.d0, &p), || encode(&l));
    }
    Ok(b.out)
}

/// Set partitions into bins of bounded weight; cost `c·#bins + ⟨D, X⟩`.
pub fn qbpp(q: &QbppInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let n = q.n();
    let mut b = Best::new(Sense::Min, tol);
    for p in packings_checked(n, n)? {
        if !p.uncovered().is_empty() {
            continue;
        }
        if p.parts().iter().any(|s| s.iter().map(|&i| q.weights[i]).sum::<f64>() > q.capacity + 1e-9) {
            continue;
        }
        let cost = q.bin_cost * p.len() as f64 + q.dissimilarity.inner(&p.matrix());
        b.offer(cost, || packing_labels(&p));
    }
    Ok(b.out)
}

/// Items into knapsacks (or left out); value `⟨R, PPᵀ⟩ + Σ p_i·[i packed]`.
pub fn qmkp(q: &QmkpInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let (n, k) = (q.n(), q.k());
    let mut b = Best::new(Sense::Max, tol);
    for l in label_vectors(n, k, true)? {
        let fits = (0..k).all(|j| (0..n).filter(|&i| l[i] == Some(j)).map(|i| q.weights[i]).sum::<f64>() <= q.capacities[j] + 1e-9);
        if !fits {
            continue;
        }
        let p = label_matrix(&l, k);
        let x = SymMat::sym_part(&p.mul(&p.transpose()));
        let value = q.revenue.inner(&x) + (0..n).filter(|&i| l[i].is_some()).map(|i| q.profits[i]).sum::<f64>();
        b.offer(value, || encode(&l));
    }
    Ok(b.out)
}

pub fn qap(q: &QapInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    perm_budget(q.n())?;
    let mut b = Best::new(Sense::Min, tol);
    for p in permutations(q.n()) {
        b.offer(q.cost(&p), || p.iter().map(|&v| v as i64).collect());
    }
    Ok(b.out)
}

/// Hamiltonian cycles, each listed once as a vertex sequence starting at 0
/// with `seq[1] < seq[n-1]`.
pub fn tours(n: usize) -> Vec<Vec<usize>> {
    if n < 3 {
        return vec![];
    }
    permutations(n - 1)
        .into_iter()
        .map(|p| std::iter::once(0).chain(p.into_iter().map(|v| v + 1)).collect::<Vec<_>>())
        .filter(|t| t[1] < t[n - 1])
        .collect()
}

pub fn tour_length(d: &SymMat, t: &[usize]) -> f64 {
    (0..t.len()).map(|i| d.get(t[i], t[(i + 1) % t.len()])).sum()
}

pub fn tsp(d: &SymMat, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    perm_budget(d.n().saturating_sub(1))?;
    let mut b = Best::new(Sense::Min, tol);
    for t in tours(d.n()) {
        b.offer(tour_length(d, &t), || t.iter().map(|&v| v as i64).collect());
    }
    Ok(b.out)
}

/// Labeled partitions with `|S_j| = m_j`; minimum cut weight.
pub fn gpp(inst: &GppInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let (n, k) = (inst.n(), inst.k());
    let mut b = Best::new(Sense::Min, tol);
    for l in label_vectors(n, k, false)? {
        let sizes_ok = (0..k).all(|j| l.iter().filter(|&&c| c == Some(j)).count() == inst.sizes[j]);
        if sizes_ok {
            let labels: Vec<usize> = l.iter().map(|c| c.unwrap()).collect();
            b.offer(inst.graph.cut_weight(&labels), || encode(&l));
        }
    }
    Ok(b.out)
}

/// Unlabeled equipartitions (each `X = PPᵀ` once); minimum cut weight.
pub fn equipartition(inst: &GppInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let n = inst.n();
    let mut b = Best::new(Sense::Min, tol);
    for p in packings_checked(n, inst.k())? {
        if !p.uncovered().is_empty() || p.len() != inst.k() {
            continue;
        }
        let mut sizes: Vec<usize> = p.parts().iter().map(Vec::len).collect();
        let mut want = inst.sizes.clone();
        sizes.sort_unstable();
        want.sort_unstable();
        if sizes != want {
            continue;
        }
        let labels: Vec<usize> = packing_labels(&p).iter().map(|&c| c as usize).collect();
        b.offer(inst.graph.cut_weight(&labels), || packing_labels(&p));
    }
    Ok(b.out)
}

/// Ternary `x` with at most `cap` nonzeros; minimum `(1/n)‖Mx − b‖²`.
pub fn sils(s: &SilsInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let k = s.k();
    let size = 3f64.powi(k as i32);
    if size > MAX_SUBSETS as f64 {
        return Err(VerifyError::BudgetExceeded { size, budget: MAX_SUBSETS });
    }
    let mut b = Best::new(Sense::Min, tol);
    for code in 0..size as u64 {
        let x: Vec<f64> = (0..k).map(|i| ((code / 3u64.pow(i as u32)) % 3) as f64 - 1.0).collect();
        if x.iter().filter(|v| **v != 0.0).count() <= s.cap {
            b.offer(s.residual(&x), || x.iter().map(|&v| v as i64).collect());
        }
    }
    Ok(b.out)
}

/// Every completion over the domain; minimum nuclear norm.
pub fn completion(c: &CompletionInstance, tol: &Tolerances) -> Result<OracleResult, VerifyError> {
    let free = c.free_positions();
    let vals = c.domain.values().ok_or_else(|| VerifyError::UnsupportedContinuousPattern("continuous domain".into()))?;
    let size = (vals.len() as f64).powi(free.len() as i32);
    if size > MAX_SUBSETS as f64 {
        return Err(VerifyError::BudgetExceeded { size, budget: MAX_SUBSETS });
    }
    let mut b = Best::new(Sense::Min, tol);
    let mut idx = vec![0usize; free.len()];
    loop {
        let chosen: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
        let x = c.complete(&chosen);
        b.offer(nuclear_norm(&x, tol)?, || x.as_slice().iter().map(|&v| v as i64).collect());
        let mut i = idx.len();
        loop {
            if i == 0 {
                return Ok(b.out);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < vals.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}
