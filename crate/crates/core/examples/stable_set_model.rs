//! Build the stable set model of C5, print it as CBF, evaluate a point and
//! solve it by enumeration.
//!
//!     cargo run --example stable_set_model

use misdp::model::export_cbf;
use misdp::problems::{build_stable_set, Graph};
use misdp::verify::{oracle, solve_by_enumeration, EnumOptions};
use misdp::Tolerances;

fn main() -> anyhow::Result<()> {
    let tol = Tolerances::default();
    let g = Graph::cycle(5);
    let m = build_stable_set(&g);

    let cbf = export_cbf(&m)?;
    print!("{}", cbf.text);
    println!("# {}", misdp::cli::summary(&m).trim_end());

    // {1, 3} is stable; X is the outer product of its indicator
    let point: Vec<f64> = m
        .variables
        .iter()
        .map(|v| match v.name.as_str() {
            "x[1]" | "x[3]" | "X[1,3]" => 1.0,
            _ => 0.0,
        })
        .collect();
    let r = m.eval_point(&point, &tol)?;
    println!("# point {{1,3}}: feasible={} objective={}", r.feasible, r.objective);

    let s = solve_by_enumeration(&m, &EnumOptions::default(), &tol)?;
    let o = oracle::stable_set(&g, &tol)?;
    println!(
        "# enumeration: optimum {:?} over {} feasible points; oracle {:?} over {}",
        s.optimum, s.feasible_count, o.optimum, o.feasible_count
    );
    Ok(())
}
