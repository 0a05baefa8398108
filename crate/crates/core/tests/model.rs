use misdp::linalg::SymMat;
use misdp::model::*;
use misdp::problems::{build_stable_set, Graph};
use misdp::Tolerances;
use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn validate_reports_defects() {
    assert!(MisdpModel::new("empty").validate().is_empty());

    let mut m = MisdpModel::new("t");
    let x = m.add_var("x", VarDomain::Binary);
    let mut pb = PencilBuilder::new(2);
    pb.var(x + 5, 0, 0, 1.0);
    m.add_pencil(pb.build("p"));
    assert_eq!(m.validate().len(), 1);

    let mut m = MisdpModel::new("t");
    let x = m.add_var("x", VarDomain::Binary);
    m.add_pencil(MatrixPencil {
        name: "asym".into(),
        order: 2,
        constant: CoefMatrix::default(),
        terms: vec![(x, CoefMatrix { entries: vec![(0, 1, 1.0)] })],
    });
    assert_eq!(m.validate().len(), 1, "{:?}", m.validate());
}

fn k2_point(m: &MisdpModel, x: [f64; 2], big_x: [[f64; 2]; 2]) -> Vec<f64> {
    let mut vals = Vec::new();
    for v in &m.variables {
        let val = match v.name.as_str() {
            "x[1]" => x[0],
            "x[2]" => x[1],
            "X[1,2]" => big_x[0][1],
            other => panic!("unexpected variable {other}"),
        };
        vals.push(val);
    }
    vals
}

#[test]
fn stable_set_points() {
    let m = build_stable_set(&Graph::complete(2));
    let names: Vec<&str> = m.variables.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(names, ["x[1]", "x[2]", "X[1,2]"]);
    let r = m.eval_point(&k2_point(&m, [1.0, 0.0], [[1.0, 0.0], [0.0, 0.0]]), &tol()).unwrap();
    assert!(r.feasible && r.objective == 1.0, "{r:?}");
    let r = m.eval_point(&k2_point(&m, [1.0, 1.0], [[1.0, 1.0], [1.0, 1.0]]), &tol()).unwrap();
    assert!(!r.feasible);
    assert!(r.violations.iter().any(|v| matches!(v, Violation::Row { .. })));
    let r = m.eval_point(&vec![0.0; m.num_vars()], &tol()).unwrap();
    assert!(r.feasible && r.objective == 0.0);
    assert!(matches!(m.eval_point(&[0.0], &tol()), Err(ModelError::IncompleteAssignment(_))));
}

#[test]
fn single_binary_cbf() {
    let mut m = MisdpModel::new("one");
    let x = m.add_var("x", VarDomain::Binary);
    m.minimize(vec![(x, 1.0)], 0.0);
    let text = export_cbf(&m).unwrap().text;
    let lines: Vec<&str> = text.lines().collect();
    let i = lines.iter().position(|l| *l == "INT").expect("INT section");
    assert_eq!(lines[i + 1], "1");
    assert_eq!(lines[i + 2], "0");
}

#[test]
fn one_psd_constraint_per_pencil() {
    let mut m = MisdpModel::new("p3");
    let x = m.add_var("x", VarDomain::Binary);
    let mut pb = PencilBuilder::new(3);
    pb.constant(0, 0, 1.0).constant(1, 1, 1.0).constant(2, 2, 1.0).var(x, 1, 0, 1.0);
    m.add_pencil(pb.build("p"));
    let text = export_cbf(&m).unwrap().text;
    let lines: Vec<&str> = text.lines().collect();
    let i = lines.iter().position(|l| *l == "PSDCON").expect("PSDCON section");
    assert_eq!(&lines[i + 1..i + 3], &["1", "3"]);
}

#[test]
fn stable_set_c5_round_trips() {
    let m = build_stable_set(&Graph::cycle(5));
    let text = export_cbf(&m).unwrap().text;
    assert_eq!(import_cbf(&text).unwrap(), m);
    assert_eq!(import_json(&export_json(&m)).unwrap(), m);
}

#[test]
fn cbf_parse_errors_carry_lines() {
    assert!(matches!(import_cbf("VER\n3\nOBJSENSE\nSIDEWAYS\n"), Err(ModelError::Parse { line: 4, .. })));
}

#[test]
fn objective_sense_is_restored() {
    let mut m = MisdpModel::new("max");
    let x = m.add_var("x", VarDomain::IntegerRange { lo: 0, hi: 3 });
    m.maximize(vec![(x, 2.0)], 1.0);
    let r = m.eval_point(&[3.0], &tol()).unwrap();
    assert_eq!(r.objective, 7.0);
    assert_eq!(m.objective.min_form(&[3.0]), -7.0);
}

#[test]
fn pencil_evaluation() {
    let m = build_stable_set(&Graph::complete(2));
    let p = m.pencil_matrix(0, &k2_point(&m, [1.0, 0.0], [[1.0, 0.0], [0.0, 0.0]]));
    assert_eq!(p.n(), 3);
    assert_eq!(p, SymMat::from_rows(&[vec![1.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap());
}

fn arb_domain() -> impl Strategy<Value = VarDomain> {
    prop_oneof![
        Just(VarDomain::Binary),
        Just(VarDomain::Ternary),
        (-3i64..0, 0i64..3).prop_map(|(lo, hi)| VarDomain::IntegerRange { lo, hi }),
        Just(VarDomain::free()),
        Just(VarDomain::nonneg()),
        (-2.5f64..0.0, 0.0f64..4.0).prop_map(|(lo, hi)| VarDomain::interval(lo, hi)),
    ]
}

fn arb_model() -> impl Strategy<Value = MisdpModel> {
    (proptest::collection::vec(arb_domain(), 1..6), any::<u64>(), 1usize..4, any::<bool>()).prop_map(
        |(domains, seed, order, maximize)| {
            let mut m = MisdpModel::new("random");
            let ids: Vec<VarId> =
                domains.into_iter().enumerate().map(|(i, d)| m.add_var(format!("v{i}"), d)).collect();
            let mut s = seed;
            let mut next = |k: u64| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 33) % k
            };
            let coef = |v: u64| (v as f64 - 4.0) / 2.0;
            let terms: Vec<(VarId, f64)> = ids.iter().map(|&v| (v, coef(next(9)))).collect();
            if maximize {
                m.maximize(terms.clone(), coef(next(9)));
            } else {
                m.minimize(terms.clone(), 0.1 * coef(next(9)));
            }
            let rel = [Relation::Le, Relation::Eq, Relation::Ge][next(3) as usize];
            m.add_row("r0", terms, rel, coef(next(9)));
            let mut pb = PencilBuilder::new(order);
            for i in 0..order {
                pb.constant(i, i, 1.0 + next(3) as f64);
            }
            for &v in &ids {
                let i = next(order as u64) as usize;
                let j = next(order as u64) as usize;
                pb.var(v, i.max(j), i.min(j), coef(next(9)) / 3.0);
            }
            m.add_pencil(pb.build("p0"));
            m.canonicalize();
            m
        },
    )
}

proptest! {
    #[test]
    fn json_round_trip_is_byte_stable(m in arb_model()) {
        let text = export_json(&m);
        let back = import_json(&text).unwrap();
        prop_assert_eq!(export_json(&back), text);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn cbf_round_trip_is_byte_stable(m in arb_model()) {
        let text = export_cbf(&m).unwrap().text;
        let back = import_cbf(&text).unwrap();
        prop_assert_eq!(export_cbf(&back).unwrap().text, text);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn permuting_variables_preserves_evaluation(m in arb_model(), seed in any::<u64>()) {
        let n = m.num_vars();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed as usize) % n);
        let p = m.permute_vars(&perm);
        let x: Vec<f64> = (0..n).map(|i| (i % 2) as f64).collect();
        let px: Vec<f64> = perm.iter().map(|&o| x[o]).collect();
        let a = m.eval_point(&x, &tol()).unwrap();
        let b = p.eval_point(&px, &tol()).unwrap();
        prop_assert_eq!(a.feasible, b.feasible);
        prop_assert!((a.objective - b.objective).abs() < 1e-12);
    }
}
