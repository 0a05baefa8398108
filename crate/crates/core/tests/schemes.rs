use misdp::linalg::{num_rank, Mat, SymMat};
use misdp::problems::Graph;
use misdp::schemes::*;
use misdp::Tolerances;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn mat_close(a: &Mat, b: &Mat, eps: f64) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && a.max_abs_diff(b) <= eps
}

#[test]
fn complete_graph_scheme() {
    let n = 4;
    let mats = vec![SymMat::identity(n), SymMat::ones(n).sub(&SymMat::identity(n))];
    let s = verify_axioms(&mats, &tol()).unwrap();
    assert_eq!(s.r(), 1);
    assert_eq!(s.valencies, vec![1, 3]);
    assert_eq!(s.multiplicities, vec![1, 3]);
    assert_eq!(s.p_hij(0, 1, 1), 3);
    assert_eq!(s.p_hij(1, 1, 1), 2);
    assert_eq!(distance_matrices(&Graph::complete(4)).unwrap(), mats);
}

#[test]
fn complete_graph_idempotents() {
    let s = verify_axioms(&distance_matrices(&Graph::complete(3)).unwrap(), &tol()).unwrap();
    let (es, res) = idempotents(&s);
    assert!(res < 1e-12);
    let third = SymMat::ones(3).scale(1.0 / 3.0);
    assert!(es[0].sub(&third).norm_inf() < 1e-12);
    assert!(es[1].sub(&SymMat::identity(3).sub(&third)).norm_inf() < 1e-12);
}

#[test]
fn five_cycle_scheme() {
    let mats = distance_matrices(&Graph::cycle(5)).unwrap();
    assert_eq!(mats.len(), 3);
    assert_eq!(mats[1], Graph::cycle(5).adjacency());
    let s = verify_axioms(&mats, &tol()).unwrap();
    assert_eq!(s.r(), 2);
    let (es, res) = idempotents(&s);
    assert!(res < 1e-10);
    let ranks: Vec<usize> = es.iter().map(|e| num_rank(e, &tol()).unwrap()).collect();
    assert_eq!(ranks, vec![1, 2, 2]);
    assert_eq!(s.multiplicities, vec![1, 2, 2]);
}

#[test]
fn seven_cycle_idempotents_sum_to_identity() {
    let s = verify_axioms(&distance_matrices(&Graph::cycle(7)).unwrap(), &tol()).unwrap();
    let (es, res) = idempotents(&s);
    assert_eq!(es.len(), 4);
    assert!(res < 1e-10);
    let total = es.iter().fold(SymMat::zeros(7), |acc, e| acc.add(e));
    assert!(total.sub(&SymMat::identity(7)).norm_inf() < 1e-10);
}

#[test]
fn six_cycle_has_an_antipodal_matching() {
    let mats = distance_matrices(&Graph::cycle(6)).unwrap();
    assert_eq!(mats.len(), 4);
    let a3 = &mats[3];
    for i in 0..6 {
        let partners: Vec<usize> = (0..6).filter(|&j| a3.get(i, j) == 1.0).collect();
        assert_eq!(partners, vec![(i + 3) % 6]);
    }
    assert!(verify_axioms(&mats, &tol()).is_ok());
}

#[test]
fn path_relations_are_not_a_scheme() {
    let a = Graph::path(3).adjacency();
    let rest = SymMat::ones(3).sub(&SymMat::identity(3)).sub(&a);
    let err = verify_axioms(&[SymMat::identity(3), a, rest], &tol()).unwrap_err();
    assert!(matches!(err, SchemeError::AxiomViolation { axiom: Axiom::IV, .. }), "{err:?}");
}

#[test]
fn axiom_one_failures() {
    let err = verify_axioms(&[SymMat::identity(3), SymMat::ones(3)], &tol()).unwrap_err();
    assert!(matches!(err, SchemeError::AxiomViolation { axiom: Axiom::I, .. }));
    assert_eq!(verify_axioms(&[], &tol()).unwrap_err(), SchemeError::Shape);
    assert_eq!(distance_matrices(&Graph::empty(2)).unwrap_err(), SchemeError::Disconnected);
}

#[test]
fn lee_schemes() {
    let s = lee_scheme(5, &tol()).unwrap();
    assert_eq!(s.r(), 2);
    assert!((s.q[(0, 1)] - 2.0).abs() < 1e-10 && (s.q[(0, 2)] - 2.0).abs() < 1e-10);
    assert_eq!(lee_scheme(7, &tol()).unwrap().r(), 3);
    assert_eq!(lee_scheme(4, &tol()).unwrap_err(), SchemeError::EvenOrder(4));
    assert_eq!(lee_scheme(3, &tol()).unwrap_err(), SchemeError::TooSmall(3));
}

#[test]
fn lee_dual_eigenvalues_are_cosines() {
    for n in [5usize, 7, 9] {
        let s = lee_scheme(n, &tol()).unwrap();
        for i in 1..=s.r() {
            for j in 1..=s.r() {
                let want = 2.0 * (2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64).cos();
                assert!((s.q[(i, j)] - want).abs() < 1e-9, "n={n} Q[{i},{j}]");
            }
        }
    }
}

#[test]
fn cycle_recurrence_gives_distance_matrices() {
    for n in [5usize, 7, 9] {
        let d = distance_matrices(&Graph::cycle(n)).unwrap();
        assert_eq!(cycle_recurrence(&d[1], n / 2), d[1..].to_vec());
    }
}

#[test]
fn k_equipartition_eigenmatrix() {
    let want = Mat::from_rows(&[vec![1.0, 2.0, 1.0], vec![1.0, 0.0, -1.0], vec![1.0, -2.0, 1.0]]);
    assert_eq!(kep_scheme_eigen(2, 2), want);
    for (m, k) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let s = verify_axioms(&kep_matrices(m, k), &tol()).unwrap();
        assert!(mat_close(&s.q, &kep_scheme_eigen(m, k), 1e-9), "m={m} k={k}: {:?}", s.q);
    }
}

/// `p^h_{ij}` straight from the definition.
fn brute_intersection(mats: &[SymMat], h: usize, i: usize, j: usize) -> Option<i64> {
    let n = mats[0].n();
    let mut val = None;
    for x in 0..n {
        for y in 0..n {
            if mats[h].get(x, y) != 1.0 {
                continue;
            }
            let c = (0..n).filter(|&z| mats[i].get(x, z) == 1.0 && mats[j].get(z, y) == 1.0).count() as i64;
            match val {
                None => val = Some(c),
                Some(v) if v != c => return None,
                _ => {}
            }
        }
    }
    val
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cycle_intersection_numbers_match_counting(n in 3usize..12) {
        let mats = distance_matrices(&Graph::cycle(n)).unwrap();
        let s = verify_axioms(&mats, &tol()).unwrap();
        prop_assert!(s.idempotent_residual < 1e-8);
        for h in 0..mats.len() {
            for i in 0..mats.len() {
                for j in 0..mats.len() {
                    prop_assert_eq!(Some(s.p_hij(h, i, j)), brute_intersection(&mats, h, i, j));
                }
            }
        }
    }

    #[test]
    fn eigenmatrices_are_inverse_up_to_n(m in 2usize..4, k in 2usize..4) {
        let s = verify_axioms(&kep_matrices(m, k), &tol()).unwrap();
        let n = (m * k) as f64;
        let want = Mat::from_fn(3, 3, |a, b| if a == b { n } else { 0.0 });
        prop_assert!(mat_close(&s.p.mul(&s.q), &want, 1e-8));
    }
}
