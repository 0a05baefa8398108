//! Command-line front end. The `misdp` binary only calls [`main_with_args`].

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::dpsd::{self, count_dnr, enumerate_dnr, Packing};
use crate::formulations::{build_bsdp_qcqp, build_bsdp_qmp1, build_bsdp_qmp2};
use crate::linalg::{is_psd, num_rank, parse_symmat, write_symmat, Discreteness, SymMat};
use crate::model::{export_cbf, export_json, import_cbf, import_json, MisdpModel};
use crate::problems::*;
use crate::schemes::{distance_matrices, verify_axioms, AssociationScheme, SchemeError};
use crate::verify::{render_table, run_suite, suite_names, suites::SuiteConfig, DEFAULT_BUDGET};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Cbf,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub tol: Tolerances,
    pub budget: u64,
    pub format: Format,
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Tolerance profile (default, strict, loose); falls back to MISDP_TOLERANCE.
    #[arg(long, global = true)]
    tolerance: Option<String>,
    #[arg(long, global = true)]
    psd_rel: Option<f64>,
    #[arg(long, global = true)]
    rank_rel: Option<f64>,
    #[arg(long, global = true)]
    objective_rel: Option<f64>,
    /// Enumeration budget (product of integer domain sizes).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Output format. `build` defaults to CBF, or JSON when `--out` ends in `.json`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl GlobalArgs {
    fn config(&self, default_format: Format) -> Result<CliConfig> {
        let mut tol = match &self.tolerance {
            Some(p) => Tolerances::profile(p).with_context(|| format!("unknown tolerance profile {p:?}"))?,
            None => Tolerances::from_env(),
        };
        if let Some(v) = self.psd_rel {
            tol.psd_rel = v;
        }
        if let Some(v) = self.rank_rel {
            tol.rank_rel = v;
        }
        if let Some(v) = self.objective_rel {
            tol.objective_rel = v;
        }
        if self.budget == 0 {
            bail!("--budget must be positive");
        }
        Ok(CliConfig { tol, budget: self.budget, format: self.format.unwrap_or(default_format), seed: self.seed })
    }
}

#[derive(Debug, Parser)]
#[command(name = "misdp", version, about = "Discrete PSD matrices and exact MISDP formulations")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    StableSet,
    Mkcs,
    Qcqp,
    Qmp1,
    Qmp2,
    Qbpp,
    Qmkp,
    Qap,
    TspQap,
    TspCvetkovic,
    TspLee,
    Gpp,
    KepAssoc,
    Sils,
    Completion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compile a problem instance into an MISDP model (CBF or JSON).
    Build {
        #[arg(value_enum)]
        problem: Problem,
        /// DIMACS graph (stable-set, mkcs, gpp, kep-assoc).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Dense symmetric distance matrix (tsp-*).
        #[arg(long)]
        dist: Option<PathBuf>,
        /// Expected order of the distance matrix.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        qaplib: Option<PathBuf>,
        /// JSON instance (qcqp, qmp1, qmp2, qbpp, qmkp, sils, completion).
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Number of parts (mkcs, gpp, kep-assoc).
        #[arg(long)]
        k: Option<usize>,
        /// Part sizes for gpp, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// gpp variant: general, equipartition, bisection, orthogonal.
        #[arg(long, default_value = "general")]
        variant: GppVariant,
        /// Use the compact (diagonal-eliminated) QCQP encoding.
        #[arg(long)]
        compact: bool,
        /// Write kep-assoc constraints as rows instead of the eigen pencils.
        #[arg(long)]
        row_form: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a dense symmetric matrix.
    Check {
        #[arg(long)]
        matrix: PathBuf,
        /// Subset of psd, rank, discreteness, decomposition, triangle.
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
    },
    /// List every matrix of D(n, r).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Exact size of D(n, r).
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Run a named verification suite against brute-force oracles.
    Verify {
        #[arg(long, required_unless_present = "list")]
        suite: Option<String>,
        #[arg(long)]
        list: bool,
        /// Record wall time in the reports.
        #[arg(long)]
        timing: bool,
    },
    /// Check association scheme axioms.
    Scheme {
        /// Distance scheme of the n-cycle.
        #[arg(long, conflicts_with = "mats")]
        cycle: Option<usize>,
        /// JSON list of 0/1 matrices `[A_0, A_1, ...]`, each a list of rows.
        #[arg(long)]
        mats: Option<PathBuf>,
    },
    /// Convert a model between CBF and JSON, by file extension.
    Convert {
        input: PathBuf,
        output: PathBuf,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code: 0 on success, 1 when a check or suite
/// fails, 2 on errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut out = String::new();
    let code = match run(&cli, &mut out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            print!("{out}");
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    print!("{out}");
    code
}

/// Runs a parsed command, appending stdout text to `out`. `Ok(false)` means
/// the command ran but a check failed.
pub fn run(cli: &Cli, out: &mut String) -> Result<bool> {
    let default_format = match &cli.command {
        Command::Build { out: Some(p), .. } if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
        Command::Build { .. } => Format::Cbf,
        _ => Format::Table,
    };
    let cfg = cli.global.config(default_format)?;
    match &cli.command {
        Command::Build { problem, graph, dist, n, qaplib, instance, k, sizes, variant, compact, row_form, out: path } => {
            let src = BuildSource { graph, dist, n: *n, qaplib, instance, k: *k, sizes, variant: *variant };
            let m = build_model(*problem, &src, *compact, *row_form)?;
            cmd_build(&m, path.as_deref(), &cfg, out)?;
            Ok(true)
        }
        Command::Check { matrix, props } => cmd_check(&read(matrix)?, props, &cfg, out),
        Command::Enumerate { n, r } => {
            let mats = enumerate_dnr(*n, *r)?;
            if cfg.format == Format::Json {
                let rows: Vec<_> = mats.iter().map(SymMat::to_rows).collect();
                out.push_str(&serde_json::to_string(&rows)?);
                out.push('\n');
            } else {
                for (i, m) in mats.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    out.push_str(&write_symmat(m));
                }
            }
            Ok(true)
        }
        Command::Count { n, r } => {
            let c = count_dnr(*n, *r)?;
            if cfg.format == Format::Json {
                out.push_str(&json!({"n": n, "r": r, "count": c.to_string()}).to_string());
                out.push('\n');
            } else {
                out.push_str(&format!("{c}\n"));
            }
            Ok(true)
        }
        Command::Verify { suite, list, timing } => {
            if *list {
                for s in suite_names() {
                    out.push_str(s);
                    out.push('\n');
                }
                return Ok(true);
            }
            let name = suite.as_deref().expect("clap requires --suite");
            let scfg = SuiteConfig { tol: cfg.tol, budget: cfg.budget, seed: cfg.seed, timing: *timing };
            let outcome = run_suite(name, &scfg)?;
            if cfg.format == Format::Json {
                out.push_str(&outcome.to_json_lines());
            } else {
                out.push_str(&render_table(&outcome));
            }
            Ok(outcome.passed())
        }
        Command::Scheme { cycle, mats } => {
            let matrices = match (cycle, mats) {
                (Some(n), _) => distance_matrices(&Graph::cycle(*n))?,
                (None, Some(p)) => {
                    let rows: Vec<Vec<Vec<f64>>> = read_json(p)?;
                    rows.iter().map(|r| SymMat::from_rows(r)).collect::<Result<_, _>>()?
                }
                (None, None) => bail!("scheme needs --cycle or --mats"),
            };
            match verify_axioms(&matrices, &cfg.tol) {
                Ok(s) => {
                    write_scheme(&s, &cfg, out)?;
                    Ok(true)
                }
                Err(SchemeError::AxiomViolation { axiom, detail }) => {
                    if cfg.format == Format::Json {
                        let v = json!({"n": matrices[0].n(), "valid": false, "axiom": axiom.to_string(), "detail": detail});
                        out.push_str(&v.to_string());
                        out.push('\n');
                    } else {
                        out.push_str(&format!("n={} invalid: AxiomViolation({axiom}): {detail}\n", matrices[0].n()));
                    }
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Convert { input, output } => {
            let text = read(input)?;
            let m = if is_cbf(input) { import_cbf(&text)? } else { import_json(&text)? };
            let data = if is_cbf(output) {
                let e = export_cbf(&m)?;
                for w in &e.warnings {
                    eprintln!("warning: {w}");
                }
                e.text
            } else {
                export_json(&m)
            };
            fs::write(output, data).with_context(|| format!("writing {}", output.display()))?;
            out.push_str(&summary(&m));
            Ok(true)
        }
    }
}

struct BuildSource<'a> {
    graph: &'a Option<PathBuf>,
    dist: &'a Option<PathBuf>,
    n: Option<usize>,
    qaplib: &'a Option<PathBuf>,
    instance: &'a Option<PathBuf>,
    k: Option<usize>,
    sizes: &'a [usize],
    variant: GppVariant,
}

impl BuildSource<'_> {
    fn graph(&self) -> Result<Graph> {
        let p = self.graph.as_ref().context("--graph is required")?;
        Ok(Graph::parse_dimacs(&read(p)?)?)
    }

    fn dist(&self) -> Result<SymMat> {
        let p = self.dist.as_ref().context("--dist is required")?;
        let d = parse_symmat(&read(p)?)?;
        if let Some(n) = self.n {
            if d.n() != n {
                bail!("--n {n} but the distance matrix has order {}", d.n());
            }
        }
        Ok(d)
    }

    fn instance<T: DeserializeOwned>(&self) -> Result<T> {
        read_json(self.instance.as_ref().context("--instance is required")?)
    }

    fn k(&self) -> Result<usize> {
        self.k.context("--k is required")
    }

    fn gpp(&self) -> Result<GppInstance> {
        let g = self.graph()?;
        Ok(if self.sizes.is_empty() { GppInstance::equipartition(g, self.k()?)? } else { GppInstance::new(g, self.sizes.to_vec())? })
    }
}

fn build_model(problem: Problem, src: &BuildSource, compact: bool, row_form: bool) -> Result<MisdpModel> {
    Ok(match problem {
        Problem::StableSet => build_stable_set(&src.graph()?),
        Problem::Mkcs => build_mkcs(&src.graph()?, src.k()?)?,
        Problem::Qcqp => build_bsdp_qcqp(&src.instance()?, compact)?,
        Problem::Qmp1 => build_bsdp_qmp1(&src.instance()?)?,
        Problem::Qmp2 => build_bsdp_qmp2(&src.instance()?)?,
        Problem::Qbpp => build_qbpp(&src.instance()?)?,
        Problem::Qmkp => build_qmkp(&src.instance()?)?,
        Problem::Qap => {
            let p = src.qaplib.as_ref().context("--qaplib is required")?;
            build_qap(&QapInstance::parse_qaplib(&read(p)?)?)
        }
        Problem::TspQap => build_tsp_qap(&src.dist()?)?,
        Problem::TspCvetkovic => build_tsp_cvetkovic(&src.dist()?)?,
        Problem::TspLee => build_tsp_lee(&src.dist()?)?,
        Problem::Gpp => build_gpp(&src.gpp()?, src.variant)?,
        Problem::KepAssoc => build_kep_assoc(&src.gpp()?, KepOptions { row_form })?,
        Problem::Sils => build_sils(&src.instance()?)?,
        Problem::Completion => build_matrix_completion(&src.instance()?)?,
    })
}

/// One-line shape summary of a model.
pub fn summary(m: &MisdpModel) -> String {
    let orders: Vec<String> = m.pencils.iter().map(|p| p.order.to_string()).collect();
    let ints = m.variables.iter().filter(|v| !v.domain.is_continuous()).count();
    format!(
        "{}: {} variables ({} integer), {} rows, {} pencils of order [{}]\n",
        m.provenance,
        m.num_vars(),
        ints,
        m.rows.len(),
        m.pencils.len(),
        orders.join(", ")
    )
}

fn cmd_build(m: &MisdpModel, path: Option<&Path>, cfg: &CliConfig, out: &mut String) -> Result<()> {
    let text = match cfg.format {
        Format::Json => export_json(m),
        Format::Cbf => {
            let e = export_cbf(m)?;
            for w in &e.warnings {
                eprintln!("warning: {w}");
            }
            e.text
        }
        Format::Table => String::new(),
    };
    match path {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            out.push_str(&summary(m));
        }
        None => {
            out.push_str(&text);
            eprint!("{}", summary(m));
            if cfg.format == Format::Table {
                out.push_str(&summary(m));
            }
        }
    }
    Ok(())
}

const ALL_PROPS: [&str; 5] = ["psd", "rank", "discreteness", "decomposition", "triangle"];

fn cmd_check(text: &str, props: &[String], cfg: &CliConfig, out: &mut String) -> Result<bool> {
    let x = parse_symmat(text)?;
    let props: Vec<&str> = if props.is_empty() { ALL_PROPS.to_vec() } else { props.iter().map(String::as_str).collect() };
    let tol = &cfg.tol;
    let d = x.discreteness();
    let mut fields: Vec<(&str, serde_json::Value)> = Vec::new();
    for p in props {
        match p {
            "psd" => fields.push(("psd", is_psd(&x, tol).into())),
            "rank" => fields.push(("rank", num_rank(&x, tol)?.into())),
            "discreteness" => {
                fields.push(("binary", (d == Discreteness::Binary).into()));
                fields.push(("integer", x.is_integer().into()));
            }
            "decomposition" => {
                let v = match d {
                    Discreteness::Binary => decomposition(dpsd::decompose01(&x).map(|p: Packing| packing_str(&p))),
                    Discreteness::Signed => decomposition(dpsd::decompose_pm1(&x).map(|v| {
                        let s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                        format!("[{}]", s.join(","))
                    })),
                    Discreteness::Ternary => decomposition(dpsd::decompose_ternary(&x).map(|b| {
                        let vs: Vec<String> = b
                            .vectors(x.n())
                            .iter()
                            .map(|v| format!("[{}]", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")))
                            .collect();
                        vs.join(" ")
                    })),
                    Discreteness::General => serde_json::Value::Null,
                };
                let key = match d {
                    Discreteness::Binary => "packing",
                    _ => "factors",
                };
                fields.push((key, v));
            }
            "triangle" => {
                let v = if d == Discreteness::Binary {
                    (dpsd::triangle_check01(&x)?.is_empty()).into()
                } else {
                    serde_json::Value::Null
                };
                fields.push(("triangle", v));
            }
            other => bail!("unknown property {other:?}; expected one of {}", ALL_PROPS.join(", ")),
        }
    }
    if cfg.format == Format::Json {
        let obj: serde_json::Map<String, serde_json::Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        out.push_str(&serde_json::Value::Object(obj).to_string());
        out.push('\n');
    } else {
        let parts: Vec<String> = fields
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| match v {
                serde_json::Value::String(s) => format!("{k}={s}"),
                v => format!("{k}={v}"),
            })
            .collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    Ok(true)
}

fn decomposition(r: Result<String, dpsd::DpsdError>) -> serde_json::Value {
    match r {
        Ok(s) => s.into(),
        Err(dpsd::DpsdError::NotPsd) => "none".into(),
        Err(e) => format!("error: {e}").into(),
    }
}

/// Parts as `{1,2,3}{4}`, vertices 1-based.
fn packing_str(p: &Packing) -> String {
    if p.is_empty() {
        return "{}".into();
    }
    p.parts()
        .iter()
        .map(|part| format!("{{{}}}", part.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

fn write_scheme(s: &AssociationScheme, cfg: &CliConfig, out: &mut String) -> Result<()> {
    if cfg.format == Format::Json {
        let v = json!({
            "n": s.n,
            "r": s.r(),
            "valid": true,
            "valencies": s.valencies,
            "multiplicities": s.multiplicities,
            "intersection": s.intersection,
            "p": s.p,
            "q": s.q,
            "idempotent_residual": s.idempotent_residual,
        });
        out.push_str(&v.to_string());
        out.push('\n');
        return Ok(());
    }
    out.push_str(&format!("n={} r={} valid\n", s.n, s.r()));
    out.push_str(&format!("valencies: {:?}\nmultiplicities: {:?}\n", s.valencies, s.multiplicities));
    for (name, m) in [("P", &s.p), ("Q", &s.q)] {
        out.push_str(name);
        out.push_str(":\n");
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| format!("{:>10.6}", clean(m[(i, j)]))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    Ok(())
}

/// Drops float noise so `-0.000000` does not appear.
fn clean(v: f64) -> f64 {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn is_cbf(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("cbf"))
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn read_json<T: DeserializeOwned>(p: &Path) -> Result<T> {
    serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display()))
}
