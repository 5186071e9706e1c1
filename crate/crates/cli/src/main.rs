//! `scqc`: pulse design, protocol simulation and noise sweeps.
//!
//! Every command reads an optional JSON config (unknown keys are rejected),
//! writes CSV/JSON files into `--out` and prints its JSON summary on stdout.
//! Exit status is 0 on success, 1 when a quantitative check fails and 2 on
//! usage, parse or I/O errors.

mod commands;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use run::{Outcome, RunContext};

#[derive(Parser, Debug)]
#[command(name = "scqc", version, about = "Noise-robust pulses from space curves on a dual-rail qubit")]
struct Cli {
    /// JSON config for the command; defaults to `{}`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "scqc-out")]
    out: PathBuf,

    /// Worker threads for sweeps and optimizer restarts.
    #[arg(long, global = true, env = "SCQC_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure, area and implemented gate of a pulse's error curve.
    CheckCurve(commands::check_curve::Args),
    /// Crosstalk infidelity of a square-pulse pair versus ξ.
    CrosstalkSweep,
    /// Joint-parity erasure check statistics over a noise grid.
    Jp,
    /// Logical ZZ(θ) from two joint-parity checks.
    Zz,
    /// Synthesize a robust ancilla pulse.
    Design,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use scqc::Error::*;
    match err.downcast_ref::<scqc::Error>() {
        Some(AncillaEntangled { .. } | NotConverged(_) | OpenCurve { .. } | DegenerateFrame { .. } | NotUnitary { .. }) => 1,
        _ => 2,
    }
}

fn execute(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(n) = cli.threads {
        anyhow::ensure!(n > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let raw = run::read_config(cli.config.as_deref())?;
    let base = cli.config.as_deref().and_then(|p| p.parent()).map(PathBuf::from).unwrap_or_default();
    let ctx = |name: &str| RunContext::new(name, cli.seed, &cli.out, &base);
    match cli.command {
        Command::CheckCurve(args) => commands::check_curve::run(ctx("check-curve"), &raw, args),
        Command::CrosstalkSweep => commands::crosstalk::run(ctx("crosstalk-sweep"), &raw),
        Command::Jp => commands::jp::run(ctx("jp"), &raw),
        Command::Zz => commands::zz::run(ctx("zz"), &raw),
        Command::Design => commands::design::run(ctx("design"), &raw),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(outcome) => {
            let _ = writeln!(std::io::stdout(), "{}", outcome.summary);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
