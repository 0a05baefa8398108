//! Exact rational feasibility LP: find `λ ≥ 0` with `A λ = b`, or a Farkas
//! certificate `y` with `yᵀA ≤ 0` and `yᵀb > 0`.
//!
//! Phase one of the primal simplex method on a dense tableau of big
//! rationals, with Bland's rule so degenerate pivots cannot cycle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion of a finite float.
pub fn q_from_f64(v: f64) -> Q {
    Q::from_float(v).expect("finite value")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A nonnegative solution of `A λ = b`.
    Feasible(Vec<Q>),
    /// Farkas multipliers: `yᵀA_j ≤ 0` for every column and `yᵀb > 0`.
    Infeasible(Vec<Q>),
}

/// Solves the feasibility problem for a dense `m × n` matrix given by rows.
pub fn feasibility(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    assert_eq!(b.len(), m, "rhs length");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m;

    // Flip rows so the right-hand side is nonnegative; artificial columns then
    // form a feasible starting basis.
    let sign: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if sign[i] { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { Q::one() } else { Q::zero() });
        }
        t.push(row);
        rhs.push(if sign[i] { -b[i].clone() } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut d: Vec<Q> = vec![Q::zero(); width];
    for j in 0..n {
        let mut s = Q::zero();
        for row in &t {
            s += &row[j];
        }
        d[j] = -s;
    }
    let mut obj: Q = rhs.iter().fold(Q::zero(), |s, v| s + v);

    loop {
        let Some(enter) = (0..width).find(|&j| d[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (r, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut rhs, &mut d, &mut obj, r, enter);
        basis[r] = enter;
    }

    if obj.is_zero() {
        let mut x = vec![Q::zero(); n];
        for (i, &bj) in basis.iter().enumerate() {
            if bj < n {
                x[bj] = rhs[i].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        // The artificial column for row i has cost 1, so its reduced cost is
        // 1 - y_i.
        let y = (0..m)
            .map(|i| {
                let yi = Q::one() - &d[n + i];
                if sign[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(t: &mut [Vec<Q>], rhs: &mut [Q], d: &mut [Q], obj: &mut Q, r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    rhs[r] /= &p;
    let prow = t[r].clone();
    let prhs = rhs[r].clone();
    for i in 0..t.len() {
        if i == r || t[i][c].is_zero() {
            continue;
        }
        let f = t[i][c].clone();
        for (v, pv) in t[i].iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        rhs[i] -= &f * &prhs;
    }
    if !d[c].is_zero() {
        let f = d[c].clone();
        for (v, pv) in d.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
        *obj += &f * &prhs;
    }
}

/// Independent check of a Farkas certificate.
pub fn is_farkas_certificate(a: &[Vec<Q>], b: &[Q], y: &[Q]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    let yb: Q = y.iter().zip(b).map(|(u, v)| u * v).fold(Q::zero(), |s, v| s + v);
    if !yb.is_positive() {
        return false;
    }
    (0..n).all(|j| {
        let s = y.iter().zip(a).map(|(u, row)| u * &row[j]).fold(Q::zero(), |s, v| s + v);
        !s.is_positive()
    })
}

/// Independent check of a primal solution.
pub fn is_solution(a: &[Vec<Q>], b: &[Q], x: &[Q]) -> bool {
    if x.iter().any(|v| v.is_negative()) {
        return false;
    }
    a.iter().zip(b).all(|(row, bi)| {
        let s = row.iter().zip(x).map(|(u, v)| u * v).fold(Q::zero(), |s, v| s + v);
        s == *bi
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[i64]]) -> Vec<Vec<Q>> {
        r.iter().map(|row| row.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn finds_a_convex_combination() {
        // λ1 + λ2 = 1, λ1 - λ2 = 0
        let a = rows(&[&[1, 1], &[1, -1]]);
        let b = vec![q(1), q(0)];
        match feasibility(&a, &b) {
            Feasibility::Feasible(x) => {
                assert!(is_solution(&a, &b, &x));
                assert_eq!(x, vec![q_frac(1, 2), q_frac(1, 2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certifies_infeasibility() {
        // λ1 + λ2 = 1 and λ1 + λ2 = 2 cannot both hold.
        let a = rows(&[&[1, 1], &[1, 1]]);
        let b = vec![q(1), q(2)];
        match feasibility(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas_certificate(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_zero_rows() {
        // λ2 = 0, λ1 + λ2 = 1, λ2 + s = 1
        let a = rows(&[&[0, 1, 0], &[1, 1, 0], &[0, 1, 1]]);
        let b = vec![q(0), q(1), q(1)];
        match feasibility(&a, &b) {
            Feasibility::Feasible(x) => assert!(is_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_flipped_back() {
        // -λ = -1 feasible; -λ = 1 infeasible
        let a = rows(&[&[-1]]);
        assert!(matches!(feasibility(&a, &[q(-1)]), Feasibility::Feasible(_)));
        match feasibility(&a, &[q(1)]) {
            Feasibility::Infeasible(y) => assert!(is_farkas_certificate(&a, &[q(1)], &y)),
            other => panic!("{other:?}"),
        }
    }
}
