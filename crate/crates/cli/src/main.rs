use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ifba_cli::{emit_csv_summary, run_and_write, Command, RunConfig, UsageError, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "ifba",
    version,
    about = "Checks and series inversions over intuitionistic fuzzy normed algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Triangular axioms and idempotency of a t-norm or t-conorm on a grid.
    CheckTnorm(RunConfig),
    /// Sampled axiom check of an induced fuzzy-norm model.
    CheckAxioms(RunConfig),
    /// Fuzzy convergence verdict of a sequence.
    Converge(RunConfig),
    /// Fuzzy Cauchy verdict of a sequence.
    Cauchy(RunConfig),
    /// Convergence of a product of two convergent sequences.
    ProductLimit(RunConfig),
    /// Neumann series for (e − x)⁻¹.
    Neumann(RunConfig),
    /// x⁻¹ via the Neumann series of e − x.
    Inverse(RunConfig),
    /// Resolvent series for (λe − x)⁻¹.
    Resolvent(RunConfig),
    /// Samples a fuzzy ball around an invertible element.
    ProbeOpen(RunConfig),
    /// Limits of sequences of non-invertible elements.
    ProbeClosed(RunConfig),
    /// Continuity inequality of inversion near x0.
    ProbeContinuity(RunConfig),
    /// Divisor-of-zero witness for one element.
    Tdz(RunConfig),
    /// Witness-implies-singular check over a seeded matrix population.
    TdzPopulation(RunConfig),
    /// Runs a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Flattens reports of one command into a CSV file.
    Summarize {
        #[arg(long)]
        out: PathBuf,
        /// Command kind, needed for the header when no reports are given.
        #[arg(long)]
        kind: Option<String>,
        reports: Vec<PathBuf>,
    },
}

fn with(command: Command, mut c: RunConfig) -> RunConfig {
    c.command = command;
    c
}

fn dispatch(cmd: Cmd) -> Result<i32, UsageError> {
    let config = match cmd {
        Cmd::CheckTnorm(c) => with(Command::CheckTnorm, c),
        Cmd::CheckAxioms(c) => with(Command::CheckAxioms, c),
        Cmd::Converge(c) => with(Command::Converge, c),
        Cmd::Cauchy(c) => with(Command::Cauchy, c),
        Cmd::ProductLimit(c) => with(Command::ProductLimit, c),
        Cmd::Neumann(c) => with(Command::Neumann, c),
        Cmd::Inverse(c) => with(Command::Inverse, c),
        Cmd::Resolvent(c) => with(Command::Resolvent, c),
        Cmd::ProbeOpen(c) => with(Command::ProbeOpen, c),
        Cmd::ProbeClosed(c) => with(Command::ProbeClosed, c),
        Cmd::ProbeContinuity(c) => with(Command::ProbeContinuity, c),
        Cmd::Tdz(c) => with(Command::Tdz, c),
        Cmd::TdzPopulation(c) => with(Command::TdzPopulation, c),
        Cmd::Run { config, output } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| UsageError::new(format!("config: {}: {e}", config.display())))?;
            let mut c = RunConfig::from_json(&text)?;
            if output.is_some() {
                c.output = output;
            }
            c
        }
        Cmd::Summarize { out, kind, reports } => {
            let kind = kind
                .map(|k| {
                    Command::parse(&k)
                        .ok_or_else(|| UsageError::new(format!("kind: unknown command {k:?}")))
                })
                .transpose()?;
            emit_csv_summary(&reports, &out, kind)?;
            return Ok(0);
        }
    };
    run_and_write(&config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
