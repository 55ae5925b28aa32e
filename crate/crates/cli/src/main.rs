//! `norbrack`: run verification suites over curve families and emit a
//! JSON-lines pass/fail report.

mod config;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{ConfigError, Overrides, RawConfig, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "norbrack", version, about = "Numerical checks for normal-bundle brackets on curve spaces")]
struct Cli {
    /// Suite to run; falls back to the `suite` field of the config.
    #[arg(value_enum)]
    suite: Option<Suite>,
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid size.
    #[arg(long = "n")]
    grid_n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Print available suites and exit.
    #[arg(long)]
    list: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn load(cli: &Cli) -> Result<SuiteConfig, ConfigError> {
    let raw = match &cli.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    let overrides = Overrides { suite: cli.suite, out: cli.out.clone(), grid_n: cli.grid_n, seed: cli.seed };
    SuiteConfig::resolve(raw, overrides)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for s in Suite::ALL {
            println!("{:<10} {}", s.name(), s.summary());
        }
        return ExitCode::SUCCESS;
    }
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let records = suites::run_suite(&cfg);
    let written = match &cfg.out {
        Some(path) => report::emit_report(&records, path),
        None => report::print_report(&records),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_FAIL);
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        eprintln!("{failed} of {} records failed", records.len());
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}
