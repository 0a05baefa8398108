use misdp::linalg::{num_rank, SymMat};
use misdp::model::VarDomain;
use misdp::problems::*;
use misdp::verify::suites::SuiteConfig;
use misdp::verify::*;
use misdp::Tolerances;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn j_minus_i(n: usize) -> SymMat {
    SymMat::ones(n).sub(&SymMat::identity(n))
}

#[test]
fn stable_sets_of_the_five_cycle() {
    let m = build_stable_set(&Graph::cycle(5));
    let s = solve_by_enumeration(&m, &EnumOptions::default(), &tol()).unwrap();
    assert_eq!(s.optimum, Some(2.0));
    assert_eq!(s.feasible_count, 11);
    assert_eq!(s.argmin.len(), 5);
    assert_eq!(s.max_residual, 0.0);
    let o = oracle::stable_set(&Graph::cycle(5), &tol()).unwrap();
    assert_eq!((o.optimum, o.feasible_count, o.argmin.len()), (Some(2.0), 11, 5));
}

#[test]
fn serial_and_parallel_search_agree() {
    let m = build_mkcs(&Graph::cycle(5), 2).unwrap();
    let par = solve_by_enumeration(&m, &EnumOptions { collect_feasible: true, ..EnumOptions::default() }, &tol()).unwrap();
    let ser = solve_by_enumeration(&m, &EnumOptions { collect_feasible: true, parallel: false, ..EnumOptions::default() }, &tol())
        .unwrap();
    // node counts depend on how the tree is split
    assert_eq!((par.optimum, &par.argmin, par.feasible_count), (ser.optimum, &ser.argmin, ser.feasible_count));
    assert_eq!(par.feasible, ser.feasible);
}

#[test]
fn bin_corner_is_resolved_by_bisection() {
    let q = QbppInstance { weights: vec![2.0, 2.0], capacity: 2.0, bin_cost: 1.0, dissimilarity: SymMat::zeros(2) };
    let m = build_qbpp(&q).unwrap();
    let s = solve_by_enumeration(&m, &EnumOptions::default(), &tol()).unwrap();
    assert_eq!(s.optimum, Some(2.0));
    let z = m.variables.iter().position(|v| v.name == "z").unwrap();
    assert_eq!(s.argmin.len(), 1);
    assert!((s.argmin[0][z] - 2.0).abs() < 1e-9, "{:?}", s.argmin);
}

#[test]
fn nuclear_norm_pair_is_resolved_in_closed_form() {
    let c = CompletionInstance {
        rows: 2,
        cols: 2,
        observed: vec![(0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)],
        domain: VarDomain::Binary,
    };
    let s = solve_by_enumeration(&build_matrix_completion(&c).unwrap(), &EnumOptions::default(), &tol()).unwrap();
    assert!((s.optimum.unwrap() - 2.0).abs() < 1e-9);
    assert!(s.max_residual < 1e-8);
}

#[test]
fn constant_objective_instances() {
    let opt = |m| solve_by_enumeration(&m, &EnumOptions::default(), &tol()).unwrap();
    let s = opt(build_tsp_lee(&j_minus_i(5)).unwrap());
    assert!((s.optimum.unwrap() - 5.0).abs() < 1e-9);
    assert_eq!(s.feasible_count, 12);
    let q = QapInstance::new(j_minus_i(3), j_minus_i(3), None).unwrap();
    let s = opt(build_qap(&q));
    assert_eq!(s.optimum, Some(6.0));
    assert_eq!(s.feasible_count, 6);
    let c4 = GppInstance::equipartition(Graph::cycle(4), 2).unwrap();
    assert_eq!(opt(build_gpp(&c4, GppVariant::Equipartition).unwrap()).optimum, Some(2.0));
}

#[test]
fn budget_is_enforced() {
    let m = build_stable_set(&Graph::cycle(5));
    // five vertex bits and ten implied-integer edge bits
    let err = solve_by_enumeration(&m, &EnumOptions { budget: 16, ..EnumOptions::default() }, &tol()).unwrap_err();
    assert_eq!(err, VerifyError::BudgetExceeded { size: 32768.0, budget: 16 });
    assert!(solve_by_enumeration(&m, &EnumOptions { budget: 1 << 15, ..EnumOptions::default() }, &tol()).is_ok());
}

#[test]
fn infeasible_models_have_no_optimum() {
    let q = QmkpInstance { weights: vec![1.0], capacities: vec![1.0], profits: vec![1.0], revenue: SymMat::zeros(1) };
    let mut m = build_qmkp(&q).unwrap();
    let p = m.variables.iter().position(|v| v.name.starts_with('P')).unwrap();
    m.add_row("force", vec![(p, 1.0)], misdp::model::Relation::Eq, 2.0);
    let s = solve_by_enumeration(&m, &EnumOptions::default(), &tol()).unwrap();
    assert_eq!(s.optimum, None);
    assert_eq!(s.feasible_count, 0);
}

#[test]
fn unknown_suite() {
    let err = run_suite("no-such-suite", &SuiteConfig::default()).unwrap_err();
    assert_eq!(err, VerifyError::UnknownSuite("no-such-suite".into()));
}

#[test]
fn every_listed_suite_is_known() {
    let names = suite_names();
    assert!(names.contains(&"acceptance"));
    assert!(names.contains(&"tsp-small"));
    let mut sorted = names.to_vec();
    sorted.dedup();
    assert_eq!(sorted.len(), names.len());
}

#[test]
fn suites_are_deterministic() {
    let cfg = SuiteConfig::default();
    let a = run_suite("tsp/n5-random-10", &cfg).unwrap();
    let b = run_suite("tsp/n5-random-10", &cfg).unwrap();
    assert_eq!(a.reports.len(), 10);
    assert!(a.passed());
    assert_eq!(a.to_json_lines(), b.to_json_lines());
    assert!(a.reports.iter().all(|r| r.wall_time_ms.is_none()));
    let other = run_suite("tsp/n5-random-10", &SuiteConfig { seed: Some(99), ..cfg }).unwrap();
    assert_ne!(other.to_json_lines(), a.to_json_lines());
}

#[test]
fn small_suites_pass() {
    let cfg = SuiteConfig::default();
    for name in ["gpp/cross-variant-K4", "tsp-small", "stable-set/iso-classes-n5"] {
        let out = run_suite(name, &cfg).unwrap();
        assert!(out.passed(), "{name}: {:?}", out.failures().collect::<Vec<_>>());
        assert!(!out.reports.is_empty());
    }
    let k4 = run_suite("gpp/cross-variant-K4", &cfg).unwrap();
    assert_eq!(k4.reports.len(), 4);
    assert!(k4.reports.iter().all(|r| r.misdp_optimum == Some(4.0)));
    let table = render_table(&k4);
    assert_eq!(table.lines().filter(|l| l.ends_with(" ok")).count(), 4, "{table}");
    assert!(table.ends_with("gpp/cross-variant-K4: 4 instances, 0 failed\n"));
}

fn qbpp_instance() -> impl Strategy<Value = QbppInstance> {
    (1usize..=4).prop_flat_map(|n| {
        (proptest::collection::vec(1i32..=3, n), 3i32..=5, 1i32..=4, proptest::collection::vec(0i32..=3, n * n)).prop_map(
            move |(w, cap, cost, d)| QbppInstance {
                weights: w.into_iter().map(f64::from).collect(),
                capacity: f64::from(cap),
                bin_cost: f64::from(cost),
                dissimilarity: SymMat::from_fn(n, |i, j| if i == j { 0.0 } else { f64::from(d[i * n + j]) }),
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// The bisected corner lands on the number of bins of the chosen packing.
    #[test]
    fn bisection_recovers_the_bin_count(q in qbpp_instance()) {
        let m = build_qbpp(&q).unwrap();
        let s = solve_by_enumeration(&m, &EnumOptions::default(), &tol()).unwrap();
        let o = oracle::qbpp(&q, &tol()).unwrap();
        prop_assert!(tol().same_value(s.optimum.unwrap(), o.optimum.unwrap()));
        let z = m.variables.iter().position(|v| v.name == "z").unwrap();
        let n = q.n();
        for x in &s.argmin {
            let xx = SymMat::from_fn(n, |i, j| {
                if i == j {
                    1.0
                } else {
                    let name = format!("X[{},{}]", i.max(j) + 1, i.min(j) + 1);
                    let alt = format!("X[{},{}]", i.min(j) + 1, i.max(j) + 1);
                    let v = m.variables.iter().position(|v| v.name == name || v.name == alt).unwrap();
                    x[v]
                }
            });
            let bins = num_rank(&xx, &tol()).unwrap() as f64;
            prop_assert!((x[z] - bins).abs() < 1e-8, "z = {} with {} bins", x[z], bins);
        }
    }
}
