//! `qavg`: sweeps, oracle comparisons, collapse scans and Ehrenfest fits.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qavg_core::closed_form::Guard;
use qavg_core::harness::{self, OutputFormat, Report, RunConfig};
use qavg_core::{Error, Result};

#[derive(Parser)]
#[command(name = "qavg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (flat `key = value` file).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Add the Fock-basis oracle to `evolve`.
    #[arg(long, global = true, value_enum)]
    oracle: Option<Switch>,

    /// Collapse guard as a fraction of the collapse-time spacing.
    #[arg(long, global = true)]
    guard: Option<f64>,

    /// Reserved for sampled property sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Closed-form, classical and optionally oracle series on the time grid.
    Evolve,
    /// Closed form against the oracle on the time grid.
    Compare,
    /// |f| approaching each collapse time in ell_min..=ell_max.
    CollapseScan,
    /// Breakdown time for each hbar in hbar_list, with log and power fits.
    Ehrenfest,
    /// Dispersion regime, exact and approximate values on the time grid.
    DispersionRegimes,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy)]
enum Switch {
    On,
    Off,
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let mut c = RunConfig::load(path)?;
    if let Some(f) = cli.format {
        c.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(o) = cli.oracle {
        c.oracle = matches!(o, Switch::On);
    }
    if let Some(g) = cli.guard {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Config(format!("--guard must be positive, got {g}")));
        }
        c.guard = Guard::relative(g);
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.out.is_some() {
        c.out.clone_from(&cli.out);
    }
    Ok(c)
}

fn run(cli: &Cli) -> Result<Report> {
    let c = load(cli)?;
    let report = match cli.command {
        Command::Evolve => harness::cmd_evolve(&c)?.report,
        Command::Compare => harness::cmd_compare(&c)?.report,
        Command::CollapseScan => harness::cmd_collapse_scan(&c)?,
        Command::Ehrenfest => harness::cmd_ehrenfest(&c)?.1,
        Command::DispersionRegimes => harness::cmd_dispersion_regimes(&c)?,
    };
    let text = report.table.render(c.format);
    match &c.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let code = report.exit_code();
            if code != 0 {
                eprintln!("qavg: some rows failed (status {})", report.worst.label());
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("qavg: {e}");
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
