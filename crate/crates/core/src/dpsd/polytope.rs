//! Exact membership in the polytopes `P(n, r) = conv D(n, r)` and the
//! relaxation `R(n, r)`.

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::enumerate::packings;
use super::{DpsdError, Packing};
use crate::linalg::SymMat;
use crate::lp::{feasibility, is_farkas_certificate, is_solution, q, q_from_f64, Feasibility, Q};

pub const MAX_MEMBERSHIP_N: usize = 5;

/// A valid inequality `Σ_{i≤j} c_ij X_ij ≤ bound` for the polytope that the
/// queried matrix violates.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// Coefficients on the upper triangle, row by row.
    pub coefficients: Vec<((usize, usize), Q)>,
    pub bound: Q,
}

impl Separation {
    /// Left-hand side evaluated at `x`.
    pub fn lhs(&self, x: &[Vec<Q>]) -> Q {
        self.coefficients.iter().fold(Q::zero(), |s, ((i, j), c)| s + c * &x[*i][*j])
    }

    pub fn separates(&self, x: &[Vec<Q>]) -> bool {
        self.lhs(x) > self.bound
    }

    /// Human-readable form with 1-based indices, e.g. `X11 - X12 + X22 ≤ 1`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for ((i, j), c) in &self.coefficients {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if mag != q(1) {
                s.push_str(&format!("{mag}·"));
            }
            s.push_str(&format!("X{}{}", i + 1, j + 1));
        }
        if s.is_empty() {
            s.push('0');
        }
        format!("{s} ≤ {}", self.bound)
    }
}

impl Serialize for Separation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.describe())
    }
}

/// Result of a membership query: a certified convex or conic combination when
/// the matrix belongs, a separating inequality otherwise.
#[derive(Debug, Clone)]
pub struct Membership<W> {
    pub member: bool,
    pub weights: Vec<(W, Q)>,
    pub separation: Option<Separation>,
    /// Raw Farkas multipliers over the LP rows, for independent re-checking.
    pub farkas: Option<Vec<Q>>,
    /// Full LP solution (every column, zeros included) when feasible.
    pub solution: Option<Vec<Q>>,
    /// The LP that was solved, rows then right-hand side.
    pub system: (Vec<Vec<Q>>, Vec<Q>),
}

impl<W> Membership<W> {
    /// Re-verifies whichever certificate came back, in exact arithmetic.
    pub fn certificate_holds(&self) -> bool {
        let (a, b) = &self.system;
        match (&self.farkas, &self.solution) {
            (Some(y), None) => !self.member && is_farkas_certificate(a, b, y),
            (None, Some(x)) => self.member && is_solution(a, b, x),
            _ => false,
        }
    }
}

/// Exact rational copy of a float matrix, as full rows.
pub fn rational_rows(x: &SymMat) -> Vec<Vec<Q>> {
    (0..x.n()).map(|i| (0..x.n()).map(|j| q_from_f64(x.get(i, j))).collect()).collect()
}

fn check_square_symmetric(x: &[Vec<Q>], n: usize) -> Result<(), DpsdError> {
    if n > MAX_MEMBERSHIP_N {
        return Err(DpsdError::SizeLimit { n, max: MAX_MEMBERSHIP_N });
    }
    if x.iter().any(|r| r.len() != n) {
        return Err(DpsdError::ShapeMismatch("matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if x[i][j] != x[j][i] {
                return Err(DpsdError::Precondition(format!("not symmetric at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Is `x` a convex combination of members of `D(n, r)`?
///
/// Solves `X = Σ_F λ_F E_F`, `Σ λ_F = 1`, `λ ≥ 0` exactly over all packings
/// `F` with at most `r` parts (the empty packing supplies the zero matrix).
pub fn membership_pnr(x: &[Vec<Q>], r: usize) -> Result<Membership<Packing>, DpsdError> {
    let n = x.len();
    check_square_symmetric(x, n)?;
    let cols = packings(n, r);
    let pairs = upper_pairs(n);
    let mats: Vec<SymMat> = cols.iter().map(Packing::matrix).collect();

    let mut a: Vec<Vec<Q>> = pairs
        .iter()
        .map(|&(i, j)| mats.iter().map(|m| q(m.get(i, j) as i64)).collect())
        .collect();
    a.push(vec![q(1); cols.len()]);
    let mut b: Vec<Q> = pairs.iter().map(|&(i, j)| x[i][j].clone()).collect();
    b.push(q(1));

    Ok(match feasibility(&a, &b) {
        Feasibility::Feasible(lambda) => Membership {
            member: true,
            weights: cols.into_iter().zip(lambda.iter().cloned()).filter(|(_, l)| !l.is_zero()).collect(),
            separation: None,
            farkas: None,
            solution: Some(lambda),
            system: (a, b),
        },
        Feasibility::Infeasible(y) => {
            let e = pairs.len();
            let sep = Separation {
                coefficients: pairs.iter().copied().zip(y[..e].iter().cloned()).collect(),
                bound: -y[e].clone(),
            };
            Membership { member: false, weights: Vec::new(), separation: Some(sep), farkas: Some(y), solution: None, system: (a, b) }
        }
    })
}

/// Is `x` in `R(n, r)`: `X = Σ_S θ_S 1_S 1_Sᵀ` over subsets `S`, with
/// `Σ θ_S = r`, `Σ_{S∋i} θ_S ≤ 1` and `θ ≥ 0`?
///
/// Weights are reported per subset (as ascending index lists).
pub fn membership_rnr(x: &[Vec<Q>], r: usize) -> Result<Membership<Vec<usize>>, DpsdError> {
    let n = x.len();
    check_square_symmetric(x, n)?;
    let subsets: Vec<Vec<usize>> = (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect();
    let pairs = upper_pairs(n);
    let contains = |s: &Vec<usize>, i: usize| s.contains(&i);

    // Columns: θ_S for every subset, then one slack per element cap.
    let ncols = subsets.len() + n;
    let mut a: Vec<Vec<Q>> = Vec::new();
    for &(i, j) in &pairs {
        let mut row = vec![q(0); ncols];
        for (c, s) in subsets.iter().enumerate() {
            if contains(s, i) && contains(s, j) {
                row[c] = q(1);
            }
        }
        a.push(row);
    }
    let mut sum_row = vec![q(0); ncols];
    for v in sum_row.iter_mut().take(subsets.len()) {
        *v = q(1);
    }
    a.push(sum_row);
    for i in 0..n {
        let mut row = vec![q(0); ncols];
        for (c, s) in subsets.iter().enumerate() {
            if contains(s, i) {
                row[c] = q(1);
            }
        }
        row[subsets.len() + i] = q(1);
        a.push(row);
    }
    let mut b: Vec<Q> = pairs.iter().map(|&(i, j)| x[i][j].clone()).collect();
    b.push(q(r as i64));
    b.extend(std::iter::repeat(q(1)).take(n));

    Ok(match feasibility(&a, &b) {
        Feasibility::Feasible(theta) => Membership {
            member: true,
            weights: subsets.into_iter().zip(theta.iter().cloned()).filter(|(_, t)| !t.is_zero()).collect(),
            separation: None,
            farkas: None,
            solution: Some(theta),
            system: (a, b),
        },
        Feasibility::Infeasible(y) => {
            let e = pairs.len();
            // Caps contribute Σ_i y_cap,i ≥ Σ_i y_cap,i θ-mass since y_cap ≤ 0.
            let caps: Q = y[e + 1..].iter().fold(Q::zero(), |s, v| s + v);
            let sep = Separation {
                coefficients: pairs.iter().copied().zip(y[..e].iter().cloned()).collect(),
                bound: -(q(r as i64) * &y[e]) - caps,
            };
            Membership { member: false, weights: Vec::new(), separation: Some(sep), farkas: Some(y), solution: None, system: (a, b) }
        }
    })
}
