use misdp::formulations::*;
use misdp::linalg::{Mat, SymMat};
use misdp::model::{MisdpModel, Sense};
use misdp::verify::{solve_by_enumeration, EnumOptions, Solution};
use misdp::Tolerances;
use proptest::prelude::*;

fn solve(m: &MisdpModel) -> Solution {
    let opts = EnumOptions { collect_feasible: true, parallel: false, ..EnumOptions::default() };
    solve_by_enumeration(m, &opts, &Tolerances::default()).unwrap()
}

fn optimum(m: &MisdpModel) -> Option<f64> {
    solve(m).optimum
}

fn ones(n: usize) -> SymMat {
    SymMat::ones(n)
}

#[test]
fn stable_set_k2_as_qcqp() {
    // max x1 + x2 subject to x1 x2 ≤ 0
    let edge = SymMat::from_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
    let q = QcqpInstance {
        n: 2,
        sense: Sense::Max,
        q0: SymMat::zeros(2),
        c0: vec![1.0, 1.0],
        constraints: vec![QuadConstraint { q: edge, c: vec![0.0, 0.0], d: 0.0 }],
        equalities: vec![],
    };
    let s = solve(&build_bsdp_qcqp(&q, false).unwrap());
    assert_eq!(s.optimum, Some(1.0));
    assert_eq!(s.feasible_count, 3);
}

#[test]
fn single_variable_qcqp() {
    let q = QcqpInstance {
        n: 1,
        sense: Sense::Min,
        q0: SymMat::zeros(1),
        c0: vec![1.0],
        constraints: vec![],
        equalities: vec![],
    };
    assert_eq!(optimum(&build_bsdp_qcqp(&q, false).unwrap()), Some(0.0));
}

fn two_equalities() -> QcqpInstance {
    QcqpInstance {
        n: 4,
        sense: Sense::Min,
        q0: SymMat::from_fn(4, |i, j| ((i + j) % 3) as f64 - 1.0),
        c0: vec![1.0, -2.0, 0.0, 3.0],
        constraints: vec![],
        equalities: vec![
            LinearEquality { a: vec![1.0, 1.0, 1.0, 1.0], b: 2.0 },
            LinearEquality { a: vec![1.0, -1.0, 0.0, 2.0], b: 1.0 },
        ],
    }
}

#[test]
fn compact_equalities_keep_the_feasible_set() {
    let q = two_equalities();
    let full = solve(&build_bsdp_qcqp(&q, false).unwrap());
    let compact = solve(&build_bsdp_qcqp(&q, true).unwrap());
    assert!(full.feasible_count > 0);
    let pts = |s: &Solution| s.feasible.iter().map(|p| p.x.clone()).collect::<Vec<_>>();
    assert_eq!(pts(&full), pts(&compact));
    assert_eq!(full.optimum, compact.optimum);
    // oracle: the source problem over all 16 binary points
    let feasible = (0..16u32)
        .map(|m| (0..4).map(|i| f64::from((m >> i) & 1)).collect::<Vec<_>>())
        .filter(|x| q.is_feasible(x))
        .count();
    assert_eq!(full.feasible_count, feasible as u64);
}

#[test]
fn max_k_colorable_triangle() {
    let q = Qmp1Instance {
        n: 3,
        k: 2,
        sense: Sense::Max,
        q0: SymMat::identity(3),
        constraints: vec![Qmp1Constraint { q: ones(3).sub(&SymMat::identity(3)), d: 0.0 }],
        capacities: vec![],
        partition: false,
    };
    assert_eq!(optimum(&build_bsdp_qmp1(&q).unwrap()), Some(2.0));
}

#[test]
fn max_trace_with_k_equal_n() {
    for n in 1..=3 {
        let q = Qmp1Instance {
            n,
            k: n,
            sense: Sense::Min,
            q0: SymMat::identity(n).scale(-1.0),
            constraints: vec![],
            capacities: vec![],
            partition: false,
        };
        assert_eq!(optimum(&build_bsdp_qmp1(&q).unwrap()), Some(-(n as f64)));
    }
}

#[test]
fn zero_capacity_leaves_only_the_empty_packing() {
    let q = Qmp1Instance {
        n: 2,
        k: 2,
        sense: Sense::Min,
        q0: SymMat::zeros(2),
        constraints: vec![],
        capacities: vec![Capacity { a: vec![1.0, 1.0], b: 0.0 }],
        partition: false,
    };
    let s = solve(&build_bsdp_qmp1(&q).unwrap());
    assert_eq!(s.feasible_count, 1);
    assert!(s.feasible[0].x.iter().all(|&v| v == 0.0));
}

#[test]
fn negative_capacity_is_rejected() {
    let q = Qmp1Instance {
        n: 1,
        k: 1,
        sense: Sense::Min,
        q0: SymMat::zeros(1),
        constraints: vec![],
        capacities: vec![Capacity { a: vec![1.0], b: -1.0 }],
        partition: false,
    };
    assert_eq!(build_bsdp_qmp1(&q).unwrap_err(), BuildError::NegativeCapacity { index: 1, value: -1.0 });
}

#[test]
fn knapsack_shape_via_qmp2() {
    // max pᵀP1 with one knapsack of capacity 1 and unit weights
    let q = Qmp2Instance {
        n: 2,
        k: 1,
        sense: Sense::Max,
        q0: SymMat::zeros(2),
        b0: Mat::from_rows(&[vec![0.5], vec![0.5]]),
        d0: 0.0,
        constraints: vec![Qmp2Constraint {
            q: SymMat::zeros(2),
            b: Mat::from_rows(&[vec![0.5], vec![0.5]]),
            d: -1.0,
        }],
        partition: false,
        exact_rank: false,
    };
    assert_eq!(optimum(&build_bsdp_qmp2(&q).unwrap()), Some(1.0));
}

#[test]
fn all_zero_qmp2() {
    let q = Qmp2Instance {
        n: 1,
        k: 1,
        sense: Sense::Min,
        q0: SymMat::zeros(1),
        b0: Mat::zeros(1, 1),
        d0: 0.0,
        constraints: vec![],
        partition: false,
        exact_rank: false,
    };
    assert_eq!(optimum(&build_bsdp_qmp2(&q).unwrap()), Some(0.0));
}

/// Partition of the path 1-2-3 into parts of sizes 2 and 1. Sizes enter as
/// `Σ_j (1ᵀP e_j − m_j)² ≤ 0`.
#[test]
fn graph_partition_of_a_path_via_qmp2() {
    let l = SymMat::from_rows(&[vec![1.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 1.0]]).unwrap();
    let sizes = [2.0, 1.0];
    let b = Mat::from_rows(&vec![vec![-sizes[0], -sizes[1]]; 3]);
    let q = Qmp2Instance {
        n: 3,
        k: 2,
        sense: Sense::Min,
        q0: l.scale(0.5),
        b0: Mat::zeros(3, 2),
        d0: 0.0,
        constraints: vec![Qmp2Constraint { q: ones(3), b, d: sizes.iter().map(|m| m * m).sum() }],
        partition: true,
        exact_rank: false,
    };
    let s = solve(&build_bsdp_qmp2(&q).unwrap());
    assert_eq!(s.optimum, Some(1.0));
    assert_eq!(s.feasible_count, 3);
}

#[test]
fn dimension_mismatches_are_reported() {
    let mut q = two_equalities();
    q.c0.pop();
    assert!(matches!(build_bsdp_qcqp(&q, false), Err(BuildError::DimensionMismatch(_))));
    let q = Qmp2Instance {
        n: 2,
        k: 1,
        sense: Sense::Min,
        q0: SymMat::zeros(2),
        b0: Mat::zeros(2, 2),
        d0: 0.0,
        constraints: vec![],
        partition: false,
        exact_rank: false,
    };
    assert!(matches!(build_bsdp_qmp2(&q), Err(BuildError::DimensionMismatch(_))));
}

fn small_int() -> impl Strategy<Value = f64> {
    (-3i32..=3).prop_map(f64::from)
}

fn qcqp_instance() -> impl Strategy<Value = QcqpInstance> {
    (1usize..=4).prop_flat_map(|n| {
        (
            proptest::collection::vec(small_int(), n * n),
            proptest::collection::vec(small_int(), n),
            proptest::collection::vec(small_int(), n * n),
            proptest::collection::vec(small_int(), n),
            0i32..4,
            any::<bool>(),
        )
            .prop_map(move |(q0, c0, q1, c1, d, max)| QcqpInstance {
                n,
                sense: if max { Sense::Max } else { Sense::Min },
                q0: SymMat::from_fn(n, |i, j| q0[i.min(j) * n + i.max(j)]),
                c0,
                constraints: vec![QuadConstraint {
                    q: SymMat::from_fn(n, |i, j| q1[i.min(j) * n + i.max(j)]),
                    c: c1,
                    d: f64::from(d),
                }],
                equalities: vec![],
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The lifted model and the source problem have the same optimum.
    #[test]
    fn qcqp_lift_matches_brute_force(q in qcqp_instance()) {
        let n = q.n;
        let vals: Vec<f64> = (0..1u32 << n)
            .map(|m| (0..n).map(|i| f64::from((m >> i) & 1)).collect::<Vec<_>>())
            .filter(|x| q.is_feasible(x))
            .map(|x| q.objective(&x))
            .collect();
        let best = match q.sense {
            Sense::Min => vals.iter().copied().reduce(f64::min),
            Sense::Max => vals.iter().copied().reduce(f64::max),
        };
        let s = solve(&build_bsdp_qcqp(&q, false).unwrap());
        prop_assert_eq!(s.optimum, best);
        prop_assert_eq!(s.feasible_count, vals.len() as u64);
    }
}
