use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use sheafhist::{execute, Command, RunOptions};
use sheafhist_core::presheaf::DEFAULT_SEARCH_CAP;
use sheafhist_core::settings;

/// Sieve-valued truth values for quantum propositions and histories.
#[derive(Debug, Parser)]
#[command(name = "sheafhist", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Numerical tolerance for floating-point arithmetic.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Cap on candidates examined by the global-section search.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
    max_sections: usize,
    /// Sample count for the verify commands.
    #[arg(long)]
    samples: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(eps) = args.epsilon {
        if !(eps.is_finite() && eps > 0.0) {
            eprintln!("error: --epsilon must be a positive number");
            return ExitCode::from(1);
        }
        settings::set_epsilon(eps);
    }
    let opts = RunOptions { max_sections: args.max_sections, samples: args.samples };
    let report = match execute(args.command, args.scenario.as_deref(), args.exact, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    print!("{}", report.render());
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(if report.passed() { 0 } else { 2 })
}
