//! Run a named verification suite and print its table.
//!
//!     cargo run --release --example verify_suite [suite]

use misdp::verify::suites::SuiteConfig;
use misdp::verify::{render_table, run_suite, suite_names};

fn main() -> anyhow::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "gpp/cross-variant-C4".into());
    if !suite_names().contains(&name.as_str()) {
        eprintln!("known suites: {}", suite_names().join(", "));
    }
    let outcome = run_suite(&name, &SuiteConfig::default())?;
    print!("{}", render_table(&outcome));
    std::process::exit(if outcome.passed() { 0 } else { 1 });
}
