//! Enumeration and counting of `D(n, r)`, the binary PSD matrices of order
//! `n` and rank at most `r`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{DpsdError, Packing};
use crate::linalg::SymMat;

pub const MAX_ENUMERATE_N: usize = 6;
pub const MAX_COUNT_N: usize = 60;

/// Every packing of `{0..n}` into at most `r` parts, in canonical form.
///
/// Elements are placed one at a time into "uncovered", an existing part or a
/// fresh part, which visits each packing exactly once.
pub fn packings(n: usize, r: usize) -> Vec<Packing> {
    fn walk(i: usize, n: usize, r: usize, labels: &mut Vec<Option<usize>>, used: usize, out: &mut Vec<Packing>) {
        if i == n {
            out.push(Packing::from_labels(labels));
            return;
        }
        labels.push(None);
        walk(i + 1, n, r, labels, used, out);
        labels.pop();
        for c in 0..used {
            labels.push(Some(c));
            walk(i + 1, n, r, labels, used, out);
            labels.pop();
        }
        if used < r {
            labels.push(Some(used));
            walk(i + 1, n, r, labels, used + 1, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    walk(0, n, r, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// All of `D(n, r)`, sorted by the upper triangle read row by row.
pub fn enumerate_dnr(n: usize, r: usize) -> Result<Vec<SymMat>, DpsdError> {
    if n > MAX_ENUMERATE_N {
        return Err(DpsdError::SizeLimit { n, max: MAX_ENUMERATE_N });
    }
    if r == 0 || r > n.max(1) {
        return Err(DpsdError::Precondition(format!("need 1 ≤ r ≤ n, got r = {r}")));
    }
    let mut keyed: Vec<(Vec<u8>, SymMat)> = packings(n, r)
        .into_iter()
        .map(|p| {
            let m = p.matrix();
            (m.upper_triangle().iter().map(|&v| v as u8).collect(), m)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, m)| m).collect())
}

/// Stirling numbers of the second kind `S(m, k)` for `0 ≤ k ≤ m`.
fn stirling2_row(m: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=m {
        let mut next = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let mut v = BigUint::from(k) * row.get(k).cloned().unwrap_or_default();
            v += &row[k - 1];
            next[k] = v;
        }
        row = next;
    }
    row
}

/// `|D(n, r)| = Σ_{k=1}^{r+1} S(n+1, k)`.
pub fn count_dnr(n: usize, r: usize) -> Result<BigUint, DpsdError> {
    if n > MAX_COUNT_N {
        return Err(DpsdError::SizeLimit { n, max: MAX_COUNT_N });
    }
    if r == 0 || r > n.max(1) {
        return Err(DpsdError::Precondition(format!("need 1 ≤ r ≤ n, got r = {r}")));
    }
    let row = stirling2_row(n + 1);
    Ok((1..=r + 1).filter_map(|k| row.get(k)).sum())
}
