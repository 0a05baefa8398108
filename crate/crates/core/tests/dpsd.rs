use misdp::dpsd::*;
use misdp::linalg::{is_psd, num_rank, Mat, SymMat};
use misdp::lp::{q, q_frac};
use misdp::Tolerances;
use num_bigint::BigUint;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn parts(p: &Packing) -> Vec<Vec<usize>> {
    p.parts().iter().map(|s| s.iter().map(|v| v + 1).collect()).collect()
}

#[test]
fn decompose_examples() {
    assert_eq!(parts(&decompose01(&SymMat::identity(3)).unwrap()), vec![vec![1], vec![2], vec![3]]);
    // J₂ ⊕ J₃ with index i sent to sigma[i].
    let base = SymMat::ones(2).direct_sum(&SymMat::ones(3));
    let sigma = [3, 1, 4, 2, 5].map(|v| v - 1);
    let mut x = SymMat::zeros(5);
    for i in 0..5 {
        for j in 0..5 {
            x.set(sigma[i], sigma[j], base.get(i, j));
        }
    }
    assert_eq!(parts(&decompose01(&x).unwrap()), vec![vec![1, 3], vec![2, 4, 5]]);
    let bad = SymMat::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert_eq!(decompose01(&bad), Err(DpsdError::NotPsd));
    assert!(matches!(decompose01(&SymMat::identity(2).scale(2.0)), Err(DpsdError::Precondition(_))));
}

#[test]
fn block_forms() {
    let f = block_form01(&SymMat::ones(4)).unwrap();
    assert_eq!((f.sizes, f.zeros), (vec![4], 0));
    let f = block_form01(&SymMat::zeros(3)).unwrap();
    assert_eq!((f.sizes, f.zeros), (vec![], 3));
    let f = block_form01(&SymMat::identity(2).direct_sum(&SymMat::ones(2))).unwrap();
    assert_eq!((f.sizes, f.zeros), (vec![2, 1, 1], 0));
    assert_eq!(f.perm, vec![2, 3, 0, 1]);
}

#[test]
fn triangle_inequalities() {
    assert!(triangle_check01(&SymMat::ones(3)).unwrap().is_empty());
    assert!(triangle_check01(&SymMat::identity(4)).unwrap().is_empty());
    let x = SymMat::from_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0]]).unwrap();
    let v = triangle_check01(&x).unwrap();
    assert!(v.contains(&TriangleViolation::Triangle { i: 0, j: 1, k: 2 }), "{v:?}");
}

#[test]
fn rank_certificates() {
    let t = tol();
    assert!(rank_upper_certificate(&SymMat::identity(2), 2, &t));
    assert!(!rank_upper_certificate(&SymMat::identity(2), 1, &t));
    assert!(rank_upper_certificate(&SymMat::zeros(2), 0, &t));
    let i2 = Mat::identity(2);
    assert!(rank_exact_certificate(&SymMat::identity(2), &i2, &t).unwrap());
    let ones = Mat::from_rows(&[vec![1.0], vec![1.0]]);
    assert!(rank_exact_certificate(&SymMat::ones(2), &ones, &t).unwrap());
    let p = Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
    assert!(!rank_exact_certificate(&SymMat::identity(2), &p, &t).unwrap());
}

#[test]
fn rank_one_iff_binary_examples() {
    let t = tol();
    let x = [1.0, 0.0];
    let y = SymMat::outer(&x).bordered(1.0, &x);
    assert_eq!(rank1_iff_binary(&y, &t).unwrap(), (true, true));
    let mut c = SymMat::ones(3);
    c.set(0, 0, 4.0);
    assert_eq!(rank1_iff_binary(&c.scale(0.5), &t).unwrap(), (false, false));
    assert_eq!(rank1_iff_binary(&SymMat::ones(2), &t).unwrap(), (true, true));
    assert!(matches!(rank1_iff_binary(&SymMat::identity(2), &t), Err(DpsdError::Precondition(_))));
}

#[test]
fn signed_examples() {
    assert_eq!(decompose_pm1(&SymMat::ones(3)).unwrap(), vec![1, 1, 1]);
    let x = SymMat::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
    assert_eq!(decompose_pm1(&x).unwrap(), vec![1, -1]);
    let bad = SymMat::from_rows(&[vec![1.0, 1.0, -1.0], vec![1.0, 1.0, 1.0], vec![-1.0, 1.0, 1.0]]).unwrap();
    assert_eq!(decompose_pm1(&bad), Err(DpsdError::NotPsd));

    assert_eq!(pm1_to_01_rank2(&SymMat::ones(2)).unwrap(), SymMat::ones(2));
    assert_eq!(pm1_to_01_rank2(&x).unwrap(), SymMat::identity(2));
    let s = SymMat::outer(&[1.0, 1.0, -1.0]);
    let want = SymMat::ones(2).direct_sum(&SymMat::ones(1));
    assert_eq!(pm1_to_01_rank2(&s).unwrap(), want);
}

#[test]
fn ternary_examples() {
    let b = decompose_ternary(&SymMat::identity(2)).unwrap();
    assert_eq!(b.blocks.len(), 2);
    assert!(b.blocks.iter().all(|b| b.signs == vec![1]));
    let x = SymMat::from_rows(&[vec![1.0, -1.0, 0.0], vec![-1.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
    let b = decompose_ternary(&x).unwrap();
    assert_eq!((b.blocks.len(), b.zeros), (1, 1));
    assert_eq!(b.blocks[0].signs, vec![1, -1]);
    let bad = SymMat::from_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
    assert_eq!(decompose_ternary(&bad), Err(DpsdError::NotPsd));
}

#[test]
fn ternary_lift_examples() {
    let t = tol();
    let x = [1.0, -1.0, 0.0];
    assert!(ternary_rank1_check(&SymMat::outer(&x).bordered(1.0, &x), &t).unwrap());
    let y = SymMat::identity(2).bordered(1.0, &[1.0, 0.0]);
    assert!(matches!(ternary_rank1_check(&y, &t), Err(DpsdError::Precondition(_))));
    let anti = SymMat::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
    assert!(!ternary_rank1_check(&anti.bordered(1.0, &[1.0, 1.0]), &t).unwrap());
}

#[test]
fn enumeration_examples() {
    let d22 = enumerate_dnr(2, 2).unwrap();
    assert_eq!(d22.len(), 5);
    let e11 = SymMat::from_diag(&[1.0, 0.0]);
    let e22 = SymMat::from_diag(&[0.0, 1.0]);
    for m in [SymMat::zeros(2), e11, e22, SymMat::identity(2), SymMat::ones(2)] {
        assert!(d22.contains(&m), "missing\n{m}");
    }
    assert_eq!(enumerate_dnr(1, 1).unwrap(), vec![SymMat::zeros(1), SymMat::ones(1)]);
    assert_eq!(enumerate_dnr(3, 1).unwrap().len(), 8);
    assert!(matches!(enumerate_dnr(7, 2), Err(DpsdError::SizeLimit { .. })));
    assert!(matches!(enumerate_dnr(3, 0), Err(DpsdError::Precondition(_))));
}

#[test]
fn counting_examples() {
    assert_eq!(count_dnr(3, 3).unwrap(), BigUint::from(15u32));
    assert_eq!(count_dnr(4, 2).unwrap(), BigUint::from(41u32));
    for n in 1..=20 {
        assert_eq!(count_dnr(n, 1).unwrap(), BigUint::from(1u64 << n));
    }
    assert!(matches!(count_dnr(61, 1), Err(DpsdError::SizeLimit { .. })));
}

/// Oracle: count all symmetric binary matrices that decompose into at most
/// `r` parts.
fn brute_count(n: usize, r: usize) -> usize {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    (0u32..1 << cells.len())
        .filter(|mask| {
            let mut x = SymMat::zeros(n);
            for (b, &(i, j)) in cells.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    x.set(i, j, 1.0);
                }
            }
            decompose01(&x).is_ok_and(|p| p.len() <= r)
        })
        .count()
}

#[test]
fn counts_match_brute_force() {
    // Frozen from brute_count over n <= 4.
    const FROZEN: [(usize, usize, usize); 10] =
        [(1, 1, 2), (2, 1, 4), (2, 2, 5), (3, 1, 8), (3, 2, 14), (3, 3, 15), (4, 1, 16), (4, 2, 41), (4, 3, 51), (4, 4, 52)];
    for (n, r, c) in FROZEN {
        assert_eq!(brute_count(n, r), c, "oracle drifted at ({n}, {r})");
        assert_eq!(count_dnr(n, r).unwrap(), BigUint::from(c), "({n}, {r})");
    }
}

#[test]
fn polytope_examples() {
    for n in 1..=4 {
        let x: Vec<Vec<_>> = (0..n).map(|i| (0..n).map(|j| if i == j { q_frac(1, n as i64) } else { q(0) }).collect()).collect();
        let m = membership_pnr(&x, 1).unwrap();
        assert!(m.member && m.certificate_holds());
        let m = membership_rnr(&x, 1).unwrap();
        assert!(m.member && m.certificate_holds());
    }
    let i2 = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    let m = membership_pnr(&i2, 1).unwrap();
    assert!(!m.member && m.certificate_holds());
    assert!(m.separation.unwrap().separates(&i2));
    let m = membership_rnr(&i2, 1).unwrap();
    assert!(!m.member && m.certificate_holds());

    let half = vec![vec![q_frac(1, 2); 2]; 2];
    let m = membership_pnr(&half, 1).unwrap();
    assert!(m.member);
    let mut w: Vec<_> = m.weights.iter().map(|(p, l)| (p.len(), l.clone())).collect();
    w.sort();
    assert_eq!(w, vec![(0, q_frac(1, 2)), (1, q_frac(1, 2))]);
}

#[test]
fn relaxation_is_strict_for_rank_two() {
    // ½ on the subsets {1}, {2}, {1,2,3}, {3,4}. Found by searching all
    // half-weight subset quadruples for a point of R(4,2) outside P(4,2).
    let p = Mat::from_rows(&[vec![1.0, 0.0, 1.0, 0.0], vec![0.0, 1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 0.0, 0.0, 1.0]]);
    let x = SymMat::sym_part(&p.mul(&p.transpose())).scale(0.5);
    let rows = rational_rows(&x);
    let r = membership_rnr(&rows, 2).unwrap();
    assert!(r.member && r.certificate_holds());
    let m = membership_pnr(&rows, 2).unwrap();
    assert!(!m.member && m.certificate_holds());
    assert!(m.separation.unwrap().separates(&rows));
}

#[test]
fn packing_text_round_trip() {
    let p = decompose01(&SymMat::ones(2).direct_sum(&SymMat::zeros(1)).direct_sum(&SymMat::ones(1))).unwrap();
    let s = p.to_string();
    assert_eq!(s, "4; {1,2},{4}");
    assert_eq!(s.parse::<Packing>().unwrap(), p);
}

fn packing_strategy() -> impl Strategy<Value = (usize, Vec<Option<usize>>)> {
    (1usize..7).prop_flat_map(|n| (Just(n), proptest::collection::vec(proptest::option::of(0usize..4), n)))
}

proptest! {
    #[test]
    fn packings_round_trip_through_matrices((n, labels) in packing_strategy()) {
        let p = Packing::from_labels(&labels);
        prop_assert_eq!(p.n(), n);
        let x = p.matrix();
        prop_assert!(is_psd(&x, &tol()));
        prop_assert_eq!(num_rank(&x, &tol()).unwrap(), p.len());
        let back = decompose01(&x).unwrap();
        prop_assert_eq!(back.matrix(), x.clone());
        prop_assert!(triangle_check01(&x).unwrap().is_empty());
        prop_assert!(rank_upper_certificate(&x, p.len(), &tol()));
        if p.len() > 0 {
            prop_assert!(!rank_upper_certificate(&x, p.len() - 1, &tol()));
        }
        let form = block_form01(&x).unwrap();
        let permuted = x.permute(&form.perm);
        let blocks = form.sizes.iter().fold(SymMat::zeros(0), |acc, &s| acc.direct_sum(&SymMat::ones(s)));
        prop_assert_eq!(permuted, blocks.direct_sum(&SymMat::zeros(form.zeros)));
    }

    #[test]
    fn signed_vectors_decompose(signs in proptest::collection::vec(prop_oneof![Just(-1.0), Just(1.0)], 1..7)) {
        let x = SymMat::outer(&signs);
        let s = decompose_pm1(&x).unwrap();
        let s: Vec<f64> = s.iter().map(|&v| f64::from(v)).collect();
        prop_assert_eq!(SymMat::outer(&s), x.clone());
        let y = pm1_to_01_rank2(&x).unwrap();
        prop_assert!(decompose01(&y).is_ok_and(|p| p.len() <= 2));
    }

    #[test]
    fn count_matches_enumeration(n in 1usize..6, r in 1usize..6) {
        prop_assume!(r <= n);
        prop_assert_eq!(count_dnr(n, r).unwrap(), BigUint::from(enumerate_dnr(n, r).unwrap().len()));
    }
}
