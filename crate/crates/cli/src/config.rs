use std::fmt;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[default]
    CheckTnorm,
    CheckAxioms,
    Converge,
    Cauchy,
    ProductLimit,
    Neumann,
    Inverse,
    Resolvent,
    ProbeOpen,
    ProbeClosed,
    ProbeContinuity,
    Tdz,
    TdzPopulation,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::CheckTnorm,
        Command::CheckAxioms,
        Command::Converge,
        Command::Cauchy,
        Command::ProductLimit,
        Command::Neumann,
        Command::Inverse,
        Command::Resolvent,
        Command::ProbeOpen,
        Command::ProbeClosed,
        Command::ProbeContinuity,
        Command::Tdz,
        Command::TdzPopulation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CheckTnorm => "check-tnorm",
            Command::CheckAxioms => "check-axioms",
            Command::Converge => "converge",
            Command::Cauchy => "cauchy",
            Command::ProductLimit => "product-limit",
            Command::Neumann => "neumann",
            Command::Inverse => "inverse",
            Command::Resolvent => "resolvent",
            Command::ProbeOpen => "probe-open",
            Command::ProbeClosed => "probe-closed",
            Command::ProbeContinuity => "probe-continuity",
            Command::Tdz => "tdz",
            Command::TdzPopulation => "tdz-population",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Parameters the command reads besides `command` and `output`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::CheckTnorm => &["tnorm", "tconorm", "table", "grid"],
            Command::CheckAxioms => &["model", "seed", "samples", "tnorm", "tconorm"],
            Command::Converge => &[
                "model", "sequence", "x", "a", "limit", "input", "horizon", "r", "t",
            ],
            Command::Cauchy => &[
                "model", "sequence", "x", "a", "input", "horizon", "r", "t", "p_max",
            ],
            Command::ProductLimit => &[
                "model",
                "sequence",
                "x",
                "a",
                "limit",
                "y_sequence",
                "y",
                "b",
                "y_limit",
                "horizon",
                "r",
                "t",
            ],
            Command::Neumann => &["model", "x", "tol", "max_terms", "r", "t"],
            Command::Inverse => &["model", "x", "tol", "max_terms"],
            Command::Resolvent => &["model", "x", "lambda", "tol", "max_terms"],
            Command::ProbeOpen => &["model", "x0", "t", "r", "samples", "seed"],
            Command::ProbeClosed => &["model", "samples", "seed"],
            Command::ProbeContinuity => &["model", "x0", "epsilon", "samples", "seed"],
            Command::Tdz => &["model", "z", "r", "t", "horizon", "side"],
            Command::TdzPopulation => &["model", "samples", "seed"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One run of one command. Every field but `command` is optional on input;
/// [`RunConfig::resolve`] fills command defaults, and the resolved config is
/// echoed into the report.
///
/// Element arguments (`x`, `y`, `z`, `x0`, `a`, `b`, `limit`, `y_limit`) take a
/// literal such as `0.5`, `1,0;0,1`, `e` or `theta`, or `@path` to read the
/// model's CSV layout from a file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    pub command: Command,
    /// Model spec: scalar, matrix:n=N, series:d=D or nullprod:m=M.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    /// Seed; falls back to IFBA_SEED, then 0.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[arg(long, alias = "p_max")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
    #[arg(long, alias = "max_terms")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_terms: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<String>,
    /// Direction of the x + a/n family.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    /// Direction of the second sequence's y + b/n family.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<String>,
    #[arg(long, alias = "y_limit", allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_limit: Option<String>,
    /// constant, perturbed, powers, partial-sums, alternating or explicit.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<String>,
    #[arg(long, alias = "y_sequence")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_sequence: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tnorm: Option<String>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tconorm: Option<String>,
    /// CSV table for a tabulated operation.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// left (z·zₙ) or right (zₙ·z).
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    /// Sequence CSV, one element per row.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Report path; the report goes to stdout when absent.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn fill<T>(slot: &mut Option<T>, default: T) {
    if slot.is_none() {
        *slot = Some(default);
    }
}

fn env_seed() -> Result<u64, UsageError> {
    match std::env::var("IFBA_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| {
            UsageError::new(format!("seed: IFBA_SEED={s:?} is not an unsigned integer"))
        }),
        Err(_) => Ok(0),
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError::new(format!("config: {e}")))
    }

    fn present_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! note {
            ($($f:ident),*) => { $( if self.$f.is_some() { keys.push(stringify!($f)); } )* };
        }
        note!(
            model, seed, samples, tol, r, t, epsilon, lambda, horizon, p_max, max_terms, x, y, z,
            x0, a, b, limit, y_limit, sequence, y_sequence, tnorm, tconorm, table, grid, side,
            input
        );
        keys
    }

    /// Rejects parameters the command does not read and fills defaults.
    pub fn resolve(&self) -> Result<Self, UsageError> {
        let allowed = self.command.keys();
        if let Some(k) = self
            .present_keys()
            .into_iter()
            .find(|k| !allowed.contains(k))
        {
            return Err(UsageError::new(format!(
                "{k}: not a parameter of {}",
                self.command
            )));
        }
        let mut c = self.clone();
        if allowed.contains(&"seed") && c.seed.is_none() {
            c.seed = Some(env_seed()?);
        }
        match c.command {
            Command::CheckTnorm => {
                if c.tnorm.is_none() && c.tconorm.is_none() {
                    c.tnorm = Some("minimum".into());
                }
                fill(&mut c.grid, 11);
            }
            Command::CheckAxioms => {
                fill(&mut c.samples, 10_000);
                fill(&mut c.tnorm, "minimum".into());
                fill(&mut c.tconorm, "maximum".into());
            }
            Command::Converge => {
                fill(&mut c.r, 0.1);
                fill(&mut c.t, 1.0);
            }
            Command::Cauchy => {
                fill(&mut c.r, 0.1);
                fill(&mut c.t, 1.0);
                fill(&mut c.p_max, ifba_core::convergence::DEFAULT_P_MAX);
            }
            Command::ProductLimit => {
                fill(&mut c.r, 0.1);
                fill(&mut c.t, 1.0);
            }
            Command::Neumann | Command::Inverse | Command::Resolvent => {
                fill(&mut c.tol, 1e-8);
                fill(&mut c.max_terms, ifba_core::inversion::DEFAULT_MAX_TERMS);
            }
            Command::ProbeOpen => {
                fill(&mut c.x0, "e".into());
                fill(&mut c.t, 1.0);
                fill(&mut c.samples, 1_000);
            }
            Command::ProbeClosed => fill(&mut c.samples, 100),
            Command::ProbeContinuity => {
                fill(&mut c.x0, "e".into());
                fill(&mut c.epsilon, 1.0);
                fill(&mut c.samples, 1_000);
            }
            Command::Tdz => {
                fill(&mut c.r, ifba_core::divisors::DEFAULT_R);
                fill(&mut c.t, ifba_core::divisors::DEFAULT_T);
                fill(&mut c.horizon, ifba_core::divisors::DEFAULT_HORIZON);
                fill(&mut c.side, "left".into());
            }
            Command::TdzPopulation => fill(&mut c.samples, 1_000),
        }
        if allowed.contains(&"model") && c.model.is_none() {
            return Err(UsageError::new(format!("model: required by {}", c.command)));
        }
        Ok(c)
    }
}
