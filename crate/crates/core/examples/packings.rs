//! Binary PSD matrices as packings: decompose one, then count D(n, r) for
//! small n and compare the diagonal with the Bell numbers.
//!
//!     cargo run --example packings

use misdp::dpsd::{count_dnr, decompose01, enumerate_dnr, Packing};

fn main() -> anyhow::Result<()> {
    let p = Packing::new(5, vec![vec![0, 2], vec![1, 3, 4]])?;
    let x = p.matrix();
    println!("X = E_F for F = {p}");
    println!("decompose01(X) = {}", decompose01(&x)?);

    println!("\n|D(n, r)|");
    print!("{:>3}", "n");
    for r in 1..=6 {
        print!("{r:>8}");
    }
    println!();
    for n in 1..=6 {
        print!("{n:>3}");
        for r in 1..=n {
            print!("{:>8}", count_dnr(n, r)?);
        }
        println!();
    }

    let d22 = enumerate_dnr(2, 2)?;
    println!("\nD(2, 2) has {} members:", d22.len());
    for m in &d22 {
        println!("  {:?}", m.to_rows());
    }
    Ok(())
}
