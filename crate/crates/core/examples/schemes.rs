//! Association schemes of odd cycles: intersection numbers, the dual
//! eigenmatrix and the idempotents.
//!
//!     cargo run --example schemes [n]

use misdp::linalg::num_rank;
use misdp::schemes::{idempotents, lee_scheme};
use misdp::Tolerances;

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(7);
    let tol = Tolerances::default();
    let s = lee_scheme(n, &tol)?;
    println!("C_{n}: r = {}, valencies {:?}", s.r(), s.valencies);

    println!("p^1_ij:");
    for i in 0..=s.r() {
        let row: Vec<String> = (0..=s.r()).map(|j| s.p_hij(1, i, j).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    println!("Q:");
    for i in 0..=s.r() {
        let row: Vec<String> = (0..=s.r()).map(|j| format!("{:>8.4}", s.q[(i, j)] + 0.0)).collect();
        println!("  {}", row.join(" "));
    }

    let (es, res) = idempotents(&s);
    let ranks: Vec<usize> = es.iter().map(|e| num_rank(e, &tol)).collect::<Result<_, _>>()?;
    println!("idempotent ranks {ranks:?}, residual {res:.1e}");
    Ok(())
}
