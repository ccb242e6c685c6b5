use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gravwit_cli::{
    fig2, fig4, fig5, fig6, phases, witness_check, CliError, ExperimentConfig, Format, Overrides,
    PhaseMethodArg, Table, WitnessMode,
};

#[derive(Parser)]
#[command(
    name = "gravwit",
    version,
    about = "Figure data for gravitationally induced entanglement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Path-pair phases over the sweep
    Phases(Common),
    /// Negativity curves
    Fig2(Common),
    /// Witness expectation and negativity
    Fig4(Common),
    /// Damped negativity curves
    Fig5(Common),
    /// Damped witness curves
    Fig6(Common),
    /// Witness soundness on seeded separable channels
    WitnessCheck(Common),
}

#[derive(Args)]
struct Common {
    /// Flat JSON config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Witness expectation: direct trace, or the published sign arrangement
    #[arg(long, value_enum)]
    mode: Option<WitnessMode>,
    /// Phase evaluation
    #[arg(long, value_enum)]
    method: Option<PhaseMethodArg>,
    /// Separable channels sampled by witness-check
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.apply(&Overrides {
            out: self.out.clone(),
            format: self.format,
            seed: self.seed,
            witness_mode: self.mode,
            phase_method: self.method,
            samples: self.samples,
        });
        Ok(cfg)
    }
}

fn emit(cfg: &ExperimentConfig, table: &Table) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(cfg.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            table.write(cfg.format, stdout.lock())?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    type Sweep = fn(&ExperimentConfig) -> Result<Table, CliError>;
    let (common, sweep): (&Common, Sweep) = match &cli.command {
        Command::Phases(c) => (c, phases),
        Command::Fig2(c) => (c, fig2),
        Command::Fig4(c) => (c, fig4),
        Command::Fig5(c) => (c, fig5),
        Command::Fig6(c) => (c, fig6),
        Command::WitnessCheck(c) => {
            let cfg = c.config()?;
            let report = witness_check(&cfg)?;
            emit(&cfg, &report.table)?;
            if !report.violations.is_empty() {
                return Err(CliError::Numerical(report.violations.join("; ")));
            }
            return Ok(());
        }
    };
    let cfg = common.config()?;
    emit(&cfg, &sweep(&cfg)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gravwit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
