//! Exact membership in the convex hull of D(n, r), with a separating
//! inequality when the answer is no.
//!
//!     cargo run --example polytope

use misdp::dpsd::{membership_pnr, rational_rows, Packing};
use misdp::linalg::SymMat;

fn parts(p: &Packing) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let ps: Vec<String> = p
        .parts()
        .iter()
        .map(|s| format!("E{{{}}}", s.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    ps.join("+")
}

fn main() -> anyhow::Result<()> {
    let cases = [
        ("I_4 / 4", SymMat::identity(4).scale(0.25), 1),
        ("J_2 / 2", SymMat::ones(2).scale(0.5), 1),
        ("I_2", SymMat::identity(2), 1),
        ("I_2", SymMat::identity(2), 2),
    ];
    for (name, x, r) in cases {
        let m = membership_pnr(&rational_rows(&x), r)?;
        assert!(m.certificate_holds());
        if m.member {
            let parts: Vec<String> = m.weights.iter().map(|(p, w)| format!("{w}·({})", parts(p))).collect();
            println!("{name} in P(n={}, r={r}): {}", x.n(), parts.join(" + "));
        } else {
            let sep = m.separation.as_ref().expect("separation");
            println!("{name} not in P(n={}, r={r}): {}", x.n(), sep.describe());
        }
    }
    Ok(())
}
