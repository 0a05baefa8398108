//! Named desk-scale instance families. Every report compares the optimum of
//! one or more compiled models with a brute-force oracle.
//!
//! Random instances come from `ChaCha8Rng::seed_from_u64(base + i)` with a
//! fixed base per suite, so two runs produce identical reports.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::oracle::{self, OracleResult};
use super::report::{CrossCheck, SuiteOutcome, VerificationReport};
use super::{solve_by_enumeration, EnumOptions, VerifyError};
use crate::formulations::{
    build_bsdp_qcqp, build_bsdp_qmp1, build_bsdp_qmp2, BuildError, Capacity, LinearEquality, QcqpInstance,
    Qmp1Constraint, Qmp1Instance, Qmp2Constraint, Qmp2Instance, QuadConstraint,
};
use crate::linalg::{Mat, SymMat};
use crate::model::{MisdpModel, Sense, VarDomain};
use crate::problems::*;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub tol: Tolerances,
    pub budget: u64,
    /// Replaces every suite's base seed.
    pub seed: Option<u64>,
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { tol: Tolerances::from_env(), budget: super::DEFAULT_BUDGET, seed: None, timing: false }
    }
}

type Build = Result<MisdpModel, BuildError>;

struct Case {
    id: String,
    seed: Option<u64>,
    /// Bijection between model points and oracle solutions is expected.
    bijection: bool,
    run: Box<dyn Fn(&Tolerances) -> (Vec<Build>, Result<OracleResult, VerifyError>) + Send + Sync>,
}

fn case<F>(id: impl Into<String>, seed: Option<u64>, bijection: bool, f: F) -> Case
where
    F: Fn(&Tolerances) -> (Vec<Build>, Result<OracleResult, VerifyError>) + Send + Sync + 'static,
{
    Case { id: id.into(), seed, bijection, run: Box::new(f) }
}

const SUITES: &[&str] = &[
    "stable-set/small",
    "stable-set/all-labeled-n5",
    "stable-set/iso-classes-n5",
    "mkcs/n4-k3",
    "qcqp/random-20",
    "qmp1/random-20",
    "qmp2/random-20",
    "qbpp/random-20",
    "qmkp/random-20",
    "qap/n3-random-20",
    "tsp/n5-random-10",
    "tsp-qap/n4-random-10",
    "tsp/lee-n7",
    "tsp-small",
    "gpp/small",
    "gpp/cross-variant-K4",
    "gpp/cross-variant-C4",
    "kep/bijection-n4",
    "sils/k2-k3",
    "completion/2x2-all-omega",
    "acceptance",
];

/// Suites bundled in `acceptance`.
const ACCEPTANCE: &[&str] = &[
    "stable-set/all-labeled-n5",
    "mkcs/n4-k3",
    "qbpp/random-20",
    "qmkp/random-20",
    "qap/n3-random-20",
    "tsp/n5-random-10",
    "gpp/cross-variant-K4",
    "gpp/cross-variant-C4",
    "kep/bijection-n4",
    "sils/k2-k3",
    "completion/2x2-all-omega",
];

pub fn suite_names() -> &'static [&'static str] {
    SUITES
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteOutcome, VerifyError> {
    let cases = if name == "acceptance" {
        let mut all = Vec::new();
        for s in ACCEPTANCE {
            all.extend(cases(s, cfg)?.into_iter().map(|mut c| {
                c.id = format!("{s}:{}", c.id);
                c
            }));
        }
        all
    } else {
        cases(name, cfg)?
    };
    let reports = cases.par_iter().map(|c| evaluate(c, cfg)).collect();
    Ok(SuiteOutcome { suite: name.to_string(), reports })
}

fn evaluate(c: &Case, cfg: &SuiteConfig) -> VerificationReport {
    let start = Instant::now();
    let tol = &cfg.tol;
    let opts = EnumOptions { budget: cfg.budget, ..EnumOptions::default() };
    let (models, oracle) = (c.run)(tol);
    let mut rep = VerificationReport {
        id: c.id.clone(),
        seed: c.seed,
        model: String::new(),
        oracle_optimum: None,
        misdp_optimum: None,
        integer_feasible: 0,
        oracle_feasible: 0,
        bijection: None,
        max_residual: 0.0,
        cross: vec![],
        matches: false,
        error: None,
        wall_time_ms: None,
    };
    let mut errors = Vec::new();
    match oracle {
        Ok(o) => {
            rep.oracle_optimum = o.optimum;
            rep.oracle_feasible = o.feasible_count;
        }
        Err(e) => errors.push(format!("oracle: {e}")),
    }
    let same = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (None, None) => true,
        (Some(a), Some(b)) => tol.same_value(a, b),
        _ => false,
    };
    let mut all_match = true;
    for (i, built) in models.into_iter().enumerate() {
        let m = match built {
            Ok(m) => m,
            Err(e) => {
                errors.push(format!("build: {e}"));
                all_match = false;
                continue;
            }
        };
        match solve_by_enumeration(&m, &opts, tol) {
            Ok(s) => {
                all_match &= same(s.optimum, rep.oracle_optimum);
                if i == 0 {
                    rep.model = m.provenance.clone();
                    rep.misdp_optimum = s.optimum;
                    rep.integer_feasible = s.feasible_count;
                    rep.max_residual = s.max_residual;
                } else {
                    rep.cross.push(CrossCheck {
                        model: m.provenance.clone(),
                        optimum: s.optimum,
                        integer_feasible: s.feasible_count,
                    });
                    rep.max_residual = rep.max_residual.max(s.max_residual);
                }
            }
            Err(e) => {
                errors.push(format!("{}: {e}", m.provenance));
                all_match = false;
            }
        }
    }
    if c.bijection && errors.is_empty() {
        rep.bijection = Some(rep.integer_feasible == rep.oracle_feasible);
    }
    rep.matches = all_match && errors.is_empty();
    if !errors.is_empty() {
        rep.error = Some(errors.join("; "));
    }
    if cfg.timing {
        rep.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rep
}

fn sym_int(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64, zero_diag: bool) -> SymMat {
    let mut a = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            if i == j && zero_diag {
                continue;
            }
            a.set(i, j, rng.gen_range(lo..=hi) as f64);
        }
    }
    a
}

fn vec_int(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect()
}

fn mat_int(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: i64, hi: i64) -> Mat {
    Mat::from_fn(r, c, |_, _| rng.gen_range(lo..=hi) as f64)
}

fn seeded(cfg: &SuiteConfig, base: u64, count: usize) -> Vec<(u64, ChaCha8Rng)> {
    let base = cfg.seed.unwrap_or(base);
    (0..count as u64).map(|i| (base + i, ChaCha8Rng::seed_from_u64(base + i))).collect()
}

fn cases(name: &str, cfg: &SuiteConfig) -> Result<Vec<Case>, VerifyError> {
    Ok(match name {
        "stable-set/small" => {
            let graphs = [("K3", Graph::complete(3)), ("C5", Graph::cycle(5)), ("empty3", Graph::empty(3)), ("P4", Graph::path(4))];
            graphs.into_iter().map(|(id, g)| stable_case(id.to_string(), g)).collect()
        }
        "stable-set/all-labeled-n5" => {
            all_labeled_graphs(5).enumerate().map(|(i, g)| stable_case(format!("mask{i:04}"), g)).collect()
        }
        "stable-set/iso-classes-n5" => {
            graphs_up_to_isomorphism(5).into_iter().map(|g| stable_case(format!("mask{:04}", g.mask()), g)).collect()
        }
        "mkcs/n4-k3" => {
            let mut out = Vec::new();
            for n in 1..=4 {
                for g in graphs_up_to_isomorphism(n) {
                    for k in 1..=n.min(3) {
                        let g = g.clone();
                        out.push(case(format!("n{n}-mask{}-k{k}", g.mask()), None, true, move |tol| {
                            (vec![build_mkcs(&g, k)], oracle::mkcs(&g, k, tol))
                        }));
                    }
                }
            }
            out
        }
        "qcqp/random-20" => seeded(cfg, 0x9c9c_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let q = random_qcqp(&mut rng);
                let compact = seed % 2 == 1;
                case(format!("qcqp-{seed:x}"), Some(seed), true, move |tol| {
                    (vec![build_bsdp_qcqp(&q, compact)], oracle::qcqp(&q, tol))
                })
            })
            .collect(),
        "qmp1/random-20" => seeded(cfg, 0x9301_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let q = random_qmp1(&mut rng);
                case(format!("qmp1-{seed:x}"), Some(seed), true, move |tol| (vec![build_bsdp_qmp1(&q)], oracle::qmp1(&q, tol)))
            })
            .collect(),
        "qmp2/random-20" => seeded(cfg, 0x9302_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let q = random_qmp2(&mut rng);
                case(format!("qmp2-{seed:x}"), Some(seed), true, move |tol| (vec![build_bsdp_qmp2(&q)], oracle::qmp2(&q, tol)))
            })
            .collect(),
        "qbpp/random-20" => seeded(cfg, 0xb1b0_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let n = rng.gen_range(1..=3);
                let weights = vec_int(&mut rng, n, 1, 4);
                let wmax = weights.iter().copied().fold(0.0, f64::max) as i64;
                let q = QbppInstance {
                    capacity: rng.gen_range(wmax..=wmax + 3) as f64,
                    bin_cost: rng.gen_range(1..=5) as f64,
                    dissimilarity: sym_int(&mut rng, n, 0, 3, true),
                    weights,
                };
                case(format!("qbpp-{seed:x}"), Some(seed), false, move |tol| (vec![build_qbpp(&q)], oracle::qbpp(&q, tol)))
            })
            .collect(),
        "qmkp/random-20" => seeded(cfg, 0x9a9c_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let n = rng.gen_range(2..=3);
                let k = rng.gen_range(1..=2);
                let q = QmkpInstance {
                    weights: vec_int(&mut rng, n, 1, 4),
                    capacities: vec_int(&mut rng, k, 0, 6),
                    profits: vec_int(&mut rng, n, 0, 5),
                    revenue: sym_int(&mut rng, n, 0, 4, true),
                };
                case(format!("qmkp-{seed:x}"), Some(seed), true, move |tol| (vec![build_qmkp(&q)], oracle::qmkp(&q, tol)))
            })
            .collect(),
        "qap/n3-random-20" => seeded(cfg, 0x9a90_0000, 20)
            .into_iter()
            .map(|(seed, mut rng)| {
                let a = sym_int(&mut rng, 3, 0, 3, false);
                let b = sym_int(&mut rng, 3, 0, 3, false);
                let c = mat_int(&mut rng, 3, 3, 0, 3);
                let q = QapInstance::new(a, b, Some(c)).expect("orders match");
                case(format!("qap-{seed:x}"), Some(seed), true, move |tol| (vec![Ok(build_qap(&q))], oracle::qap(&q, tol)))
            })
            .collect(),
        "tsp/n5-random-10" => seeded(cfg, 0x7590_0000, 10)
            .into_iter()
            .map(|(seed, mut rng)| {
                let d = sym_int(&mut rng, 5, 1, 9, true);
                tsp_case(format!("tsp5-{seed:x}"), Some(seed), d)
            })
            .collect(),
        "tsp-qap/n4-random-10" => seeded(cfg, 0x7591_0000, 10)
            .into_iter()
            .map(|(seed, mut rng)| {
                let d = sym_int(&mut rng, 4, 1, 9, true);
                case(format!("tspqap4-{seed:x}"), Some(seed), false, move |tol| (vec![build_tsp_qap(&d)], oracle::tsp(&d, tol)))
            })
            .collect(),
        "tsp/lee-n7" => seeded(cfg, 0x7597_0000, 1)
            .into_iter()
            .map(|(seed, mut rng)| {
                let d = sym_int(&mut rng, 7, 1, 9, true);
                case(format!("lee7-{seed:x}"), Some(seed), true, move |tol| (vec![build_tsp_lee(&d)], oracle::tsp(&d, tol)))
            })
            .collect(),
        "tsp-small" => {
            let ones5 = SymMat::ones(5).sub(&SymMat::identity(5));
            let metric4 = SymMat::from_fn(4, |i, j| {
                let d = i.abs_diff(j);
                d.min(4 - d) as f64
            });
            let mut out = vec![
                tsp_case("J5".into(), None, ones5),
                case("cycle-metric4", None, false, move |tol| (vec![build_tsp_qap(&metric4)], oracle::tsp(&metric4, tol))),
            ];
            out.extend(seeded(cfg, 0x7596_0000, 2).into_iter().map(|(seed, mut rng)| {
                let d = sym_int(&mut rng, 6, 1, 9, true);
                case(format!("tsp6-{seed:x}"), Some(seed), true, move |tol| (vec![build_tsp_cvetkovic(&d)], oracle::tsp(&d, tol)))
            }));
            out
        }
        "gpp/small" => {
            let c4 = GppInstance::equipartition(Graph::cycle(4), 2)?;
            let p3 = GppInstance::new(Graph::path(3), vec![1, 2])?;
            vec![
                case("C4/equipartition", None, false, move |tol| {
                    (vec![build_gpp(&c4, GppVariant::Equipartition)], oracle::gpp(&c4, tol))
                }),
                case("P3/bisection", None, false, move |tol| {
                    (vec![build_gpp(&p3, GppVariant::Bisection), build_gpp(&p3, GppVariant::General)], oracle::gpp(&p3, tol))
                }),
            ]
        }
        "gpp/cross-variant-K4" => cross_variant("K4", Graph::complete(4))?,
        "gpp/cross-variant-C4" => cross_variant("C4", Graph::cycle(4))?,
        "kep/bijection-n4" => {
            let mut graphs = vec![("C4".to_string(), None, Graph::cycle(4)), ("K4".to_string(), None, Graph::complete(4)), ("P4".to_string(), None, Graph::path(4))];
            for (seed, mut rng) in seeded(cfg, 0x4e90_0000, 3) {
                let w = sym_int(&mut rng, 4, 0, 5, true);
                graphs.push((format!("W4-{seed:x}"), Some(seed), Graph::from_weights(w).expect("zero diagonal")));
            }
            let mut out = Vec::new();
            for (id, seed, g) in graphs {
                let inst = GppInstance::equipartition(g, 2)?;
                for row_form in [false, true] {
                    let inst = inst.clone();
                    let id = format!("{id}{}", if row_form { "/rows" } else { "" });
                    out.push(case(id, seed, true, move |tol| {
                        let models = vec![
                            build_kep_assoc(&inst, KepOptions { row_form }),
                            build_gpp(&inst, GppVariant::Equipartition),
                        ];
                        (models, oracle::equipartition(&inst, tol))
                    }));
                }
            }
            out
        }
        "sils/k2-k3" => seeded(cfg, 0x5115_0000, 12)
            .into_iter()
            .map(|(seed, mut rng)| {
                let k = if seed % 2 == 0 { 2 } else { 3 };
                let s = SilsInstance {
                    m: mat_int(&mut rng, 3, k, -2, 2),
                    b: vec_int(&mut rng, 3, -3, 3),
                    cap: rng.gen_range(0..=k),
                };
                case(format!("sils-k{k}-{seed:x}"), Some(seed), false, move |tol| (vec![build_sils(&s)], oracle::sils(&s, tol)))
            })
            .collect(),
        "completion/2x2-all-omega" => {
            let data = [("I", [[1.0, 0.0], [0.0, 1.0]]), ("U", [[1.0, 1.0], [0.0, 1.0]])];
            let mut out = Vec::new();
            for (dn, d) in data {
                for mask in 0..16u32 {
                    let observed: Vec<(usize, usize, f64)> =
                        (0..4).filter(|b| (mask >> b) & 1 == 1).map(|b| (b / 2, b % 2, d[b / 2][b % 2])).collect();
                    let c = CompletionInstance { rows: 2, cols: 2, observed, domain: VarDomain::Binary };
                    out.push(case(format!("{dn}-omega{mask:02}"), None, false, move |tol| {
                        (vec![build_matrix_completion(&c)], oracle::completion(&c, tol))
                    }));
                }
            }
            out
        }
        _ => return Err(VerifyError::UnknownSuite(name.to_string())),
    })
}

fn stable_case(id: String, g: Graph) -> Case {
    case(id, None, true, move |tol| (vec![Ok(build_stable_set(&g))], oracle::stable_set(&g, tol)))
}

fn tsp_case(id: String, seed: Option<u64>, d: SymMat) -> Case {
    case(id, seed, true, move |tol| (vec![build_tsp_cvetkovic(&d), build_tsp_lee(&d)], oracle::tsp(&d, tol)))
}

fn cross_variant(name: &str, g: Graph) -> Result<Vec<Case>, VerifyError> {
    let inst = GppInstance::equipartition(g, 2)?;
    Ok(GppVariant::ALL
        .into_iter()
        .map(|v| {
            let inst = inst.clone();
            case(format!("{name}/{}", v.name()), None, false, move |tol| (vec![build_gpp(&inst, v)], oracle::gpp(&inst, tol)))
        })
        .collect())
}

fn random_binary(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0..=1) as f64).collect()
}

fn random_qcqp(rng: &mut ChaCha8Rng) -> QcqpInstance {
    let n = rng.gen_range(2..=4);
    let x0 = random_binary(rng, n);
    let q = sym_int(rng, n, -2, 2, false);
    let c = vec_int(rng, n, -2, 2);
    let at_x0 = crate::formulations::quad(&q, &x0) + crate::formulations::dot(&c, &x0);
    let a = vec_int(rng, n, 0, 2);
    let b = crate::formulations::dot(&a, &x0);
    QcqpInstance {
        n,
        sense: if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max },
        q0: sym_int(rng, n, -3, 3, false),
        c0: vec_int(rng, n, -3, 3),
        constraints: vec![QuadConstraint { q, c, d: at_x0 + rng.gen_range(0..=2) as f64 }],
        equalities: if rng.gen_bool(0.5) { vec![LinearEquality { a, b }] } else { vec![] },
    }
}

fn random_qmp1(rng: &mut ChaCha8Rng) -> Qmp1Instance {
    let n = rng.gen_range(3..=4);
    let k = rng.gen_range(2..=3);
    let q = sym_int(rng, n, -1, 1, false);
    let bound = rng.gen_range(0..=3) as f64;
    let a = vec_int(rng, n, 1, 3);
    Qmp1Instance {
        n,
        k,
        sense: if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max },
        q0: sym_int(rng, n, -3, 3, false),
        constraints: vec![Qmp1Constraint { q, d: -bound }],
        capacities: vec![Capacity { a, b: rng.gen_range(3..=6) as f64 }],
        partition: rng.gen_bool(0.5),
    }
}

fn random_qmp2(rng: &mut ChaCha8Rng) -> Qmp2Instance {
    let n = rng.gen_range(3..=4);
    let k = rng.gen_range(2..=3);
    let q = sym_int(rng, n, -1, 1, false);
    let b = mat_int(rng, n, k, -1, 1);
    Qmp2Instance {
        n,
        k,
        sense: if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max },
        q0: sym_int(rng, n, -3, 3, false),
        b0: mat_int(rng, n, k, -2, 2),
        d0: rng.gen_range(-3..=3) as f64,
        constraints: vec![Qmp2Constraint { q, b, d: -(rng.gen_range(0..=4) as f64) }],
        partition: rng.gen_bool(0.5),
        exact_rank: rng.gen_bool(0.3),
    }
}
