use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use cmeasure::dsl::{self, Mode, RunConfig};
use cmeasure::premeasure::DEFAULT_MAX_CARRIER;

#[derive(Parser)]
#[command(name = "cmeasure", version, about = "Run instance files through the exact measure-theory checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Largest carrier a space may be built over.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CARRIER)]
    max_carrier: usize,

    /// Seed for generated batteries.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Run declarations and `check` directives only.
    Check { file: PathBuf },
    /// Run every directive.
    Eval { file: PathBuf },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let (mode, file) = match &cli.command {
        Command::Check { file } => (Mode::Check, file),
        Command::Eval { file } => (Mode::Eval, file),
    };
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let program = dsl::parse(&text).with_context(|| format!("in {}", file.display()))?;
    let cfg = RunConfig { mode, max_carrier: cli.max_carrier, seed: cli.seed };
    let report = dsl::run(&program, &cfg);
    let json = report.to_json();
    match &cli.report {
        Some(path) => fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    let s = &report.summary;
    eprintln!("{} entries, {} holds, {} fails, {} errors", s.entries, s.holds, s.fails, s.errors);
    Ok(report.ok())
}
