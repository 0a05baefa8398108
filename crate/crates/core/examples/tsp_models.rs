//! Three exact TSP models on a random 5-city instance, each solved by
//! enumeration and compared with the shortest of the 12 tours.
//!
//!     cargo run --release --example tsp_models

use misdp::linalg::SymMat;
use misdp::problems::{build_tsp_cvetkovic, build_tsp_lee, build_tsp_qap};
use misdp::verify::{oracle, solve_by_enumeration, EnumOptions};
use misdp::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 5;
    let mut d = SymMat::zeros(n);
    for i in 0..n {
        for j in 0..i {
            d.set(i, j, f64::from(rng.gen_range(1..=20)));
        }
    }
    print!("{}", misdp::linalg::write_symmat(&d));

    let best = oracle::tsp(&d, &tol)?;
    println!("shortest tour: {:?} (length {:?})", best.argmin.first(), best.optimum);

    let opts = EnumOptions { budget: 1 << 26, ..EnumOptions::default() };
    for (name, model) in [
        ("qap", build_tsp_qap(&d)?),
        ("cvetkovic", build_tsp_cvetkovic(&d)?),
        ("lee", build_tsp_lee(&d)?),
    ] {
        let s = solve_by_enumeration(&model, &opts, &tol)?;
        println!(
            "{name:<10} optimum {:?}  feasible {}  nodes {}  residual {:.1e}",
            s.optimum, s.feasible_count, s.nodes, s.max_residual
        );
    }
    Ok(())
}
