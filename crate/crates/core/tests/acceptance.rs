//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use misdp::dpsd::{
    count_dnr, decompose01, decompose_pm1, decompose_ternary, enumerate_dnr, membership_pnr, membership_rnr,
    pm1_to_01_rank2, rank1_iff_binary, rank_upper_certificate, rational_rows, ternary_rank1_check, triangle_check01,
    DpsdError,
};
use misdp::linalg::{is_psd, num_rank, Mat, SymMat};
use misdp::lp::{q, q_frac, Q};
use misdp::model::{export_cbf, export_json, import_cbf, import_json, MisdpModel};
use misdp::problems::*;
use misdp::schemes::{distance_matrices, kep_matrices, kep_scheme_eigen, lee_scheme, verify_axioms};
use misdp::verify::{run_suite, suites::SuiteConfig};
use misdp::Tolerances;

type Outcome = Result<String, String>;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Every symmetric matrix of order `n` with entries from `alphabet`.
fn all_symmetric(n: usize, alphabet: &[f64]) -> Vec<SymMat> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let total = alphabet.len().pow(cells.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut m = SymMat::zeros(n);
            for &(i, j) in &cells {
                m.set(i, j, alphabet[code % alphabet.len()]);
                code /= alphabet.len();
            }
            m
        })
        .collect()
}

fn bell(n: usize) -> BigUint {
    // Bell triangle.
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![row.last().unwrap().clone()];
        for v in &row {
            let s = next.last().unwrap() + v;
            next.push(s);
        }
        row = next;
    }
    row[0].clone()
}

fn criterion_1() -> Outcome {
    let t = tol();
    let mut checked = 0;
    for n in 1..=5 {
        let binaries = all_symmetric(n, &[0.0, 1.0]);
        for r in 1..=n {
            let counted = count_dnr(n, r).map_err(|e| e.to_string())?;
            let listed = enumerate_dnr(n, r).map_err(|e| e.to_string())?.len();
            // Independent oracle: PSD binary matrices of numerical rank <= r.
            let brute = binaries.iter().filter(|x| is_psd(x, &t) && num_rank(x, &t).unwrap() <= r).count();
            if counted != BigUint::from(listed) || listed != brute {
                return Err(format!("n={n} r={r}: count {counted}, enumerate {listed}, brute force {brute}"));
            }
            if r == 1 && listed != 1 << n {
                return Err(format!("|D(n,1)| = {listed} for n={n}"));
            }
            if r == n && counted != bell(n + 1) {
                return Err(format!("|D(n,n)| = {counted}, Bell = {}", bell(n + 1)));
            }
            checked += 1;
        }
    }
    for (n, b) in [(3, 15u32), (4, 52), (5, 203)] {
        if bell(n + 1) != BigUint::from(b) {
            return Err(format!("Bell recurrence gave {} for B_{}", bell(n + 1), n + 1));
        }
    }
    Ok(format!("{checked} (n, r) pairs"))
}

fn criterion_2() -> Outcome {
    let t = tol();
    let mut total = 0;
    for n in 1..=4 {
        for x in all_symmetric(n, &[0.0, 1.0]) {
            total += 1;
            let parts = decompose01(&x).ok().map(|p| p.len());
            let psd = is_psd(&x, &t);
            let tri = triangle_check01(&x).unwrap().is_empty();
            let rank = num_rank(&x, &t).unwrap();
            for r in 1..=n {
                let a = parts.is_some_and(|p| p <= r);
                let b = psd && rank <= r;
                let c = tri && rank <= r;
                let d = rank_upper_certificate(&x, r, &t);
                if !(a == b && b == c && c == d) {
                    return Err(format!("r={r} disagreement {a}/{b}/{c}/{d} on\n{x}"));
                }
            }
        }
    }
    Ok(format!("{total} matrices, four predicates agree for every r"))
}

fn lift(x: &[f64], big_x: &SymMat) -> SymMat {
    big_x.bordered(1.0, x)
}

fn criterion_3() -> Outcome {
    let t = tol();
    let mut cases = 0;
    for n in 1..=3 {
        let lifts: Vec<SymMat> = (0..1u32 << n)
            .map(|mask| {
                let x: Vec<f64> = (0..n).map(|i| f64::from((mask >> i) & 1)).collect();
                lift(&x, &SymMat::outer(&x))
            })
            .collect();
        // Binary lifts: rank one and binary.
        for y in &lifts {
            cases += 1;
            if rank1_iff_binary(y, &t).map_err(|e| e.to_string())? != (true, true) {
                return Err(format!("binary lift not classified rank one:\n{y}"));
            }
        }
        // Midpoints of distinct lifts: PSD, rank two, fractional.
        for (a, ya) in lifts.iter().enumerate() {
            for yb in &lifts[a + 1..] {
                cases += 1;
                let y = ya.add(yb).scale(0.5);
                if rank1_iff_binary(&y, &t).map_err(|e| e.to_string())? != (false, false) {
                    return Err(format!("midpoint misclassified:\n{y}"));
                }
            }
        }
        // Every PSD binary bordered matrix with the diagonal condition is a lift.
        for xm in all_symmetric(n, &[0.0, 1.0]) {
            let y = lift(&xm.diag(), &xm);
            if !is_psd(&y, &t) {
                continue;
            }
            cases += 1;
            if rank1_iff_binary(&y, &t).map_err(|e| e.to_string())? != (true, true) {
                return Err(format!("binary PSD bordered matrix of rank > 1:\n{y}"));
            }
        }
    }
    let mut y = SymMat::ones(3);
    y.set(0, 0, 4.0);
    let y = y.scale(0.5);
    let classified = (is_psd(&y, &t), num_rank(&y, &t).unwrap(), y.is_integer());
    if classified != (true, 2, false) {
        return Err(format!("counterexample classified as {classified:?}"));
    }
    if rank1_iff_binary(&y, &t).map_err(|e| e.to_string())? != (false, false) {
        return Err("counterexample not (false, false)".into());
    }
    Ok(format!("{cases} bordered matrices plus the rank-2 counterexample"))
}

fn criterion_4() -> Outcome {
    let t = tol();
    let mut pm = 0;
    for n in 1..=4 {
        for x in all_symmetric(n, &[-1.0, 1.0]) {
            pm += 1;
            let dec = decompose_pm1(&x);
            if dec.is_ok() != is_psd(&x, &t) {
                return Err(format!("±1 decomposition disagrees with PSD on\n{x}"));
            }
            if let Ok(s) = dec {
                let s: Vec<f64> = s.iter().map(|&v| f64::from(v)).collect();
                if SymMat::outer(&s) != x {
                    return Err("s sᵀ does not reconstruct".into());
                }
                let y = pm1_to_01_rank2(&x).map_err(|e| e.to_string())?;
                let parts = decompose01(&y).map_err(|e| format!("transfer not binary PSD: {e}"))?;
                if parts.len() > 2 || num_rank(&y, &t).unwrap() > 2 {
                    return Err(format!("transfer has rank > 2:\n{y}"));
                }
            }
        }
    }
    let mut tern = 0;
    for n in 1..=3 {
        for x in all_symmetric(n, &[-1.0, 0.0, 1.0]) {
            tern += 1;
            let dec = decompose_ternary(&x);
            if dec.is_ok() != is_psd(&x, &t) {
                return Err(format!("ternary decomposition disagrees with PSD on\n{x}"));
            }
            if let Ok(b) = &dec {
                if b.reconstruct(n) != x {
                    return Err("ternary blocks do not reconstruct".into());
                }
            } else if !matches!(dec, Err(DpsdError::NotPsd)) {
                return Err(format!("unexpected error {dec:?}"));
            }
        }
    }
    // Bordered ternary lifts with matching supports.
    let mut lifts = 0;
    for n in 1..=2 {
        for xm in all_symmetric(n, &[-1.0, 0.0, 1.0]) {
            for code in 0..3usize.pow(n as u32) {
                let x: Vec<f64> = (0..n).map(|i| [-1.0, 0.0, 1.0][code / 3usize.pow(i as u32) % 3]).collect();
                if (0..n).any(|i| (xm.get(i, i) != 0.0) != (x[i] != 0.0)) {
                    continue;
                }
                lifts += 1;
                ternary_rank1_check(&lift(&x, &xm), &t).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(format!("{pm} ±1, {tern} ternary, {lifts} bordered ternary"))
}

fn criterion_5() -> Outcome {
    let cfg = SuiteConfig { tol: tol(), ..SuiteConfig::default() };
    let out = run_suite("acceptance", &cfg).map_err(|e| e.to_string())?;
    let expected = [
        ("stable-set/all-labeled-n5:", 1024),
        ("qbpp/random-20:", 20),
        ("qmkp/random-20:", 20),
        ("qap/n3-random-20:", 20),
        ("tsp/n5-random-10:", 10),
        ("gpp/cross-variant-K4:", 4),
        ("gpp/cross-variant-C4:", 4),
        ("completion/2x2-all-omega:", 32),
    ];
    for (prefix, n) in expected {
        let got = out.reports.iter().filter(|r| r.id.starts_with(prefix)).count();
        if got != n {
            return Err(format!("{prefix} has {got} reports, expected {n}"));
        }
    }
    // TSP reports must carry the Lee cross-check.
    if out.reports.iter().filter(|r| r.id.starts_with("tsp/")).any(|r| r.cross.is_empty()) {
        return Err("TSP report without Lee cross-check".into());
    }
    if let Some(r) = out.failures().next() {
        return Err(format!("{} failed: oracle {:?}, misdp {:?}, {:?}", r.id, r.oracle_optimum, r.misdp_optimum, r.error));
    }
    Ok(format!("{} instances", out.reports.len()))
}

fn criterion_6() -> Outcome {
    let t = tol();
    let n = 6;
    let m = build_tsp_cvetkovic(&SymMat::ones(n).sub(&SymMat::identity(n))).map_err(|e| e.to_string())?;
    let alpha = m.pencil_matrix(0, &vec![0.0; m.num_vars()]).get(0, 1);
    if (alpha - 1.0).abs() > 1e-12 {
        return Err(format!("off-diagonal coefficient {alpha}, expected 1"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let (mut cycles, mut triangles) = (0, 0);
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, edges.iter().copied()).map_err(|e| e.to_string())?;
        if (0..n).any(|v| g.neighbors(v).len() != 2) {
            continue;
        }
        let names: Vec<String> = pairs.iter().map(|(i, j)| format!("X[{},{}]", i + 1, j + 1)).collect();
        let vals: Vec<(&str, f64)> =
            names.iter().zip(&pairs).map(|(s, &(i, j))| (s.as_str(), f64::from(u8::from(g.has_edge(i, j))))).collect();
        let x = m.assignment(&vals).map_err(|e| e.to_string())?;
        let accepted = is_psd(&m.pencil_matrix(0, &x), &t);
        let hamiltonian = g.is_connected();
        if accepted != hamiltonian {
            return Err(format!("pencil {accepted} but Hamiltonian {hamiltonian} for {edges:?}"));
        }
        if hamiltonian {
            cycles += 1;
        } else {
            triangles += 1;
        }
    }
    if (cycles, triangles) != (60, 10) {
        return Err(format!("found {cycles} 6-cycles and {triangles} triangle pairs, expected 60 and 10"));
    }
    Ok("60 six-cycles accepted, 10 triangle pairs rejected".into())
}

fn criterion_7() -> Outcome {
    let t = tol();
    for n in [5usize, 7, 9] {
        let mats = distance_matrices(&Graph::cycle(n)).map_err(|e| e.to_string())?;
        let s = verify_axioms(&mats, &t).map_err(|e| e.to_string())?;
        if s.r() != n / 2 {
            return Err(format!("C_{n}: r = {}", s.r()));
        }
        // Intersection numbers by counting walks on the cycle.
        let dist = |a: usize, b: usize| {
            let d = a.abs_diff(b);
            d.min(n - d)
        };
        for h in 0..=s.r() {
            let (x, y) = (0, h);
            for i in 0..=s.r() {
                for j in 0..=s.r() {
                    let count = (0..n).filter(|&z| dist(x, z) == i && dist(z, y) == j).count() as i64;
                    if s.p_hij(h, i, j) != count {
                        return Err(format!("C_{n}: p^{h}_{i}{j} = {}, counted {count}", s.p_hij(h, i, j)));
                    }
                }
            }
        }
        if s.idempotent_residual > 1e-8 {
            return Err(format!("C_{n}: idempotent residual {}", s.idempotent_residual));
        }
        let lee = lee_scheme(n, &t).map_err(|e| e.to_string())?;
        for i in 0..=lee.r() {
            for j in 0..=lee.r() {
                let want = match (i, j) {
                    (_, 0) => 1.0,
                    (0, _) => 2.0,
                    _ => 2.0 * lee_cos(n, i, j),
                };
                if (lee.q[(i, j)] - want).abs() > 1e-8 {
                    return Err(format!("C_{n}: Q[{i}][{j}] = {}, expected {want}", lee.q[(i, j)]));
                }
            }
        }
    }
    for (m, k) in [(2usize, 2usize), (2, 3), (3, 2)] {
        let s = verify_axioms(&kep_matrices(m, k), &t).map_err(|e| e.to_string())?;
        let closed = kep_scheme_eigen(m, k);
        let oracle = kep_q_by_vectors(m, k);
        for i in 0..3 {
            for j in 0..3 {
                let (a, b, c) = (s.q[(i, j)], closed[(i, j)], oracle[i][j]);
                if (a - b).abs() > 1e-8 || (b - c).abs() > 1e-8 {
                    return Err(format!("k-EP ({m},{k}) Q[{i}][{j}]: scheme {a}, closed form {b}, oracle {c}"));
                }
            }
        }
    }
    Ok("C_5, C_7, C_9 and three k-EP schemes".into())
}

/// `Q = n P⁻¹` with `P` read off explicit eigenvectors of the k-EP relations:
/// the all-ones vector, a within-part difference and a between-part
/// difference.
fn kep_q_by_vectors(m: usize, k: usize) -> Vec<Vec<f64>> {
    let n = m * k;
    let a = kep_matrices(m, k);
    let mut vecs = vec![vec![1.0; n], vec![0.0; n], vec![0.0; n]];
    vecs[1][0] = 1.0;
    vecs[1][1] = -1.0;
    for v in 0..m {
        vecs[2][v] = 1.0;
        vecs[2][m + v] = -1.0;
    }
    // P[j][i]: eigenvalue of A_i on eigenspace j.
    let p: Vec<Vec<f64>> = vecs
        .iter()
        .map(|v| {
            let lead = v.iter().position(|&e| e != 0.0).unwrap();
            a.iter().map(|ai| ai.mul_vec(v)[lead] / v[lead]).collect()
        })
        .collect();
    let p = Mat::from_rows(&p);
    let sol = misdp::linalg::pinv(&SymMat::sym_part(&p.transpose().mul(&p)), &tol()).unwrap();
    // P⁻¹ = (PᵀP)⁻¹Pᵀ for the square invertible P.
    let inv = sol.to_mat().mul(&p.transpose());
    (0..3).map(|i| (0..3).map(|j| n as f64 * inv[(i, j)]).collect()).collect()
}

fn criterion_8() -> Outcome {
    for x in enumerate_dnr(4, 2).map_err(|e| e.to_string())? {
        let res = membership_rnr(&rational_rows(&x), 2).map_err(|e| e.to_string())?;
        if !res.member || !res.certificate_holds() {
            return Err(format!("member of D(4,2) not certified in R(4,2):\n{x}"));
        }
    }
    let i2: Vec<Vec<Q>> = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
    let res = membership_pnr(&i2, 1).map_err(|e| e.to_string())?;
    let sep = res.separation.as_ref().ok_or("no separating inequality for I_2")?;
    if res.member || !res.certificate_holds() || !sep.separates(&i2) {
        return Err("I_2 in P(2,1) or its certificate fails".into());
    }
    for vertex in enumerate_dnr(2, 1).map_err(|e| e.to_string())? {
        if sep.separates(&rational_rows(&vertex)) {
            return Err(format!("separating inequality {} cuts off a vertex", sep.describe()));
        }
    }
    for n in 1..=4 {
        let x: Vec<Vec<Q>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { q_frac(1, n as i64) } else { q(0) }).collect()).collect();
        for r in 1..=n {
            let res = membership_pnr(&x, r).map_err(|e| e.to_string())?;
            if !res.member || !res.certificate_holds() {
                return Err(format!("I_{n}/{n} not certified in P({n},{r})"));
            }
        }
    }
    Ok(format!("separator for I_2: {}", sep.describe()))
}

fn random_models() -> Vec<MisdpModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e71a1);
    let mut out = Vec::new();
    let sym = |rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64| {
        SymMat::from_fn(n, |i, j| if i == j { 0.0 } else { rng.gen_range(lo..=hi) as f64 })
    };
    while out.len() < 50 {
        let n = rng.gen_range(3..=6);
        let g = Graph::from_mask(n, rng.gen_range(0..1u64 << (n * (n - 1) / 2)));
        match out.len() % 10 {
            0 => out.push(build_stable_set(&g)),
            1 => out.push(build_mkcs(&g, rng.gen_range(1..=n)).unwrap()),
            2 => out.push(build_tsp_cvetkovic(&sym(&mut rng, n, 1, 9)).unwrap()),
            3 => out.push(build_tsp_lee(&sym(&mut rng, 5, 1, 9)).unwrap()),
            4 => out.push(build_tsp_qap(&sym(&mut rng, 4, 1, 9)).unwrap()),
            5 => {
                let a = sym(&mut rng, 3, 0, 3);
                let b = sym(&mut rng, 3, 0, 3);
                out.push(build_qap(&QapInstance::new(a, b, None).unwrap()));
            }
            6 => {
                let inst = GppInstance::equipartition(Graph::from_mask(4, rng.gen_range(0..64)), 2).unwrap();
                out.push(build_gpp(&inst, GppVariant::ALL[rng.gen_range(0..4)]).unwrap());
            }
            7 => {
                let inst = GppInstance::equipartition(Graph::from_mask(4, rng.gen_range(0..64)), 2).unwrap();
                out.push(build_kep_assoc(&inst, KepOptions { row_form: rng.gen_bool(0.5) }).unwrap());
            }
            8 => {
                let w: Vec<f64> = (0..3).map(|_| rng.gen_range(1..=4) as f64).collect();
                out.push(
                    build_qbpp(&QbppInstance {
                        weights: w,
                        capacity: 5.0,
                        bin_cost: rng.gen_range(1..=3) as f64,
                        dissimilarity: sym(&mut rng, 3, 0, 3),
                    })
                    .unwrap(),
                );
            }
            _ => {
                let m = Mat::from_fn(3, 2, |_, _| rng.gen_range(-2..=2) as f64 / 2.0);
                out.push(build_sils(&SilsInstance { m, b: vec![0.5, -1.0, 1.25], cap: 1 }).unwrap());
            }
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let models = random_models();
    for (i, m) in models.iter().enumerate() {
        let j1 = export_json(m);
        let back = import_json(&j1).map_err(|e| format!("model {i}: {e}"))?;
        if export_json(&back) != j1 || &back != m {
            return Err(format!("model {i} ({}): JSON round trip changed the model", m.provenance));
        }
        let c1 = export_cbf(m).map_err(|e| format!("model {i}: {e}"))?.text;
        let back = import_cbf(&c1).map_err(|e| format!("model {i}: {e}"))?;
        if export_cbf(&back).map_err(|e| e.to_string())?.text != c1 {
            return Err(format!("model {i} ({}): CBF round trip not byte-stable", m.provenance));
        }
        if &back != m {
            return Err(format!("model {i} ({}): CBF round trip changed the model", m.provenance));
        }
    }
    Ok(format!("{} models", models.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("counting", criterion_1, 10),
        ("binary characterization", criterion_2, 30),
        ("rank one iff binary", criterion_3, 1),
        ("signed and ternary", criterion_4, 60),
        ("formulation equivalences", criterion_5, 600),
        ("Hamiltonicity pencil", criterion_6, 60),
        ("association schemes", criterion_7, 60),
        ("polytope membership", criterion_8, 60),
        ("serialization", criterion_9, 5),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut res = f();
        let took = start.elapsed();
        if res.is_ok() && took > Duration::from_secs(*limit) {
            res = Err(format!("took {:.1}s, limit {limit}s", took.as_secs_f64()));
        }
        match res {
            Ok(msg) => println!("criterion {}: PASS {name} ({msg}; {:.2}s)", k + 1, took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
