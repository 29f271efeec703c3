use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qfric::scenarios::{self, RunConfig, Scenario};
use qfric::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Which {
    Figure1,
    LambdaTable,
    WorkScan,
    Plate,
    Validate,
}

impl From<Which> for Scenario {
    fn from(w: Which) -> Self {
        match w {
            Which::Figure1 => Scenario::Figure1,
            Which::LambdaTable => Scenario::LambdaTable,
            Which::WorkScan => Scenario::WorkScan,
            Which::Plate => Scenario::Plate,
            Which::Validate => Scenario::Validate,
        }
    }
}

/// Quantum friction scenarios; writes one CSV table per run.
#[derive(Debug, Parser)]
#[command(name = "qfric", version)]
struct Cli {
    scenario: Which,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Loosen the relative tolerance of validation checks to at least this.
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match RunConfig::load(&cli.config, cli.tol) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("qfric: config error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = scenarios::run(cli.scenario.into(), &cfg).and_then(|(t, ok)| {
        t.write(&cli.out)?;
        Ok((t.rows.len(), ok))
    });
    match result {
        Ok((rows, true)) => {
            eprintln!("qfric: wrote {rows} rows to {}", cli.out.display());
            ExitCode::SUCCESS
        }
        Ok((rows, false)) => {
            eprintln!("qfric: validation failed ({rows} checks in {})", cli.out.display());
            ExitCode::from(1)
        }
        Err(e @ Error::Config(_)) => {
            eprintln!("qfric: config error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("qfric: {e}");
            ExitCode::from(1)
        }
    }
}
