//! Spectral checks on a few small matrices: eigenvalues, PSD, numerical rank.
//!
//!     cargo run --example spectrum

use misdp::linalg::{eigensym, is_psd, num_rank, SymMat};
use misdp::Tolerances;

fn main() -> anyhow::Result<()> {
    let tol = Tolerances::default();

    // ½(J₃ + 3E₁₁): PSD with rank 2 but not an integer matrix
    let mut y = SymMat::ones(3);
    y.set(0, 0, 4.0);
    let y = y.scale(0.5);

    let cases = [
        ("I_3", SymMat::identity(3)),
        ("J_3", SymMat::ones(3)),
        ("[[2,1],[1,2]]", SymMat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]])?),
        ("[[1,1],[1,0]]", SymMat::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]])?),
        ("(J_3+3E_11)/2", y),
    ];
    for (name, a) in &cases {
        let e = eigensym(a, &tol)?;
        let vals: Vec<String> = e.values.iter().map(|v| format!("{:.4}", v + 0.0)).collect();
        println!(
            "{name:<14} eig=[{}] psd={} rank={} integer={}",
            vals.join(", "),
            is_psd(a, &tol),
            num_rank(a, &tol)?,
            a.is_integer()
        );
    }
    Ok(())
}
