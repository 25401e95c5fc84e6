use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bicomplex::DEFAULT_CLASSIFY_EPS;
use crate::error::InputError;
use crate::orlicz::{Grid, ProbeConfig, DEFAULT_LUX_TOL};

pub const DEFAULT_TRIALS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BcOp {
    Add,
    Sub,
    Mul,
    ConjBar,
    ConjDagger,
    ConjStar,
    Norm,
    Classify,
    Invert,
    Convert,
    PolyRoots,
    Indicator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Composition,
    Multiplication,
}

/// A fully resolved invocation. Echoed verbatim in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandConfig,
    pub lux_tol: f64,
    pub eps_inv: f64,
    /// Overrides the truncation budget of lazy spaces.
    pub n_max: Option<usize>,
    pub probe_block: usize,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
    pub strict: bool,
}

impl RunConfig {
    pub fn probe(&self) -> ProbeConfig {
        ProbeConfig {
            block: self.probe_block,
            ..ProbeConfig::default()
        }
    }

    fn validate(&self) -> Result<(), InputError> {
        let bad = |field: &str, message: String| InputError::Schema {
            context: field.to_string(),
            message,
        };
        for (name, v) in [("lux_tol", self.lux_tol), ("eps_inv", self.eps_inv)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(bad(name, format!("tolerance must be positive and finite, got {v}")));
            }
        }
        for (name, v) in [
            ("n_max", self.n_max.unwrap_or(1)),
            ("probe_block", self.probe_block),
            ("trials", self.trials),
        ] {
            if v == 0 {
                return Err(bad(name, "budget must be at least 1".into()));
            }
        }
        if let CommandConfig::PhiClassify { grid, .. } = &self.command {
            if !(grid.min > 0.0 && grid.max > grid.min && grid.max.is_finite() && grid.points >= 2) {
                return Err(bad("grid", "need 0 < grid-min < grid-max and at least 2 points".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandConfig {
    BcEval {
        op: BcOp,
        lhs: Option<String>,
        rhs: Option<String>,
        coeffs: Option<String>,
        sets: Option<String>,
    },
    Norm {
        phi: String,
        space: String,
        seq: String,
    },
    OpApply {
        operator: String,
        space: String,
        seq: String,
    },
    OpCheck {
        kind: CheckKind,
        space: String,
        phi: Option<String>,
        map: Option<String>,
        theta: Option<String>,
        seq: Vec<String>,
    },
    OpInvert {
        operator: String,
    },
    OpNorm {
        operator: String,
        space: String,
        phi: String,
    },
    PhiClassify {
        phi: String,
        grid: Grid,
    },
    Schauder {
        seq: String,
        p: f64,
        n: Vec<usize>,
    },
    Pairing {
        lhs: String,
        rhs: String,
        space: String,
    },
}

/// Optional defaults read from the file named by `BCORLICZ_CONFIG`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    pub lux_tol: Option<f64>,
    pub eps_inv: Option<f64>,
    pub n_max: Option<usize>,
    pub probe_block: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub format: Option<Format>,
    pub strict: Option<bool>,
}

pub fn parse_config(text: &str, context: &str) -> Result<Defaults, InputError> {
    serde_json::from_str(text).map_err(|source| InputError::Json {
        context: context.to_string(),
        source,
    })
}

#[derive(Debug, Parser)]
#[command(name = "bcorlicz", version, about = "Bicomplex Orlicz sequence spaces and operators")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Relative tolerance of the Luxemburg bisection
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Zero-divisor tolerance for classify and invert
    #[arg(long, global = true)]
    eps_inv: Option<f64>,
    /// Truncation budget for lazily generated spaces
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Block size of the convergence probe
    #[arg(long, global = true)]
    probe_block: Option<usize>,
    /// Seed for the random trials
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random trials for empirical operator norms
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Report format on stdout
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Exit with status 2 on an unbounded verdict or an error certificate
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Bicomplex arithmetic
    Bc {
        #[command(subcommand)]
        cmd: BcCmd,
    },
    /// Modular, Luxemburg norms and the bicomplex norm of a sequence
    Norm {
        /// Orlicz function: power:p=<p>, exp or entropy
        #[arg(long)]
        phi: String,
        /// Measure space file
        #[arg(long)]
        space: String,
        #[arg(long)]
        seq: String,
    },
    /// Operators on sequence spaces
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// Orlicz function probes
    Phi {
        #[command(subcommand)]
        cmd: PhiCmd,
    },
    /// l^p tail norms of the coordinate expansion
    Schauder {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        p: f64,
        /// Cut-off indices; all of 0..=len when omitted
        #[arg(long, num_args = 1..)]
        n: Vec<usize>,
    },
    /// Bicomplex duality pairing of two sequences
    Pairing {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Measure space file
        #[arg(long)]
        space: String,
    },
}

#[derive(Debug, Subcommand)]
enum BcCmd {
    Eval {
        #[arg(long, value_enum)]
        op: BcOp,
        #[arg(long)]
        lhs: Option<String>,
        #[arg(long)]
        rhs: Option<String>,
        /// Ascending polynomial coefficients
        #[arg(long)]
        coeffs: Option<String>,
        /// Component sets for the indicator
        #[arg(long)]
        sets: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum OpCmd {
    Apply {
        #[arg(long)]
        operator: String,
        /// Measure space file
        #[arg(long)]
        space: String,
        #[arg(long)]
        seq: String,
    },
    Check {
        #[arg(long, value_enum)]
        kind: CheckKind,
        /// Measure space file
        #[arg(long)]
        space: String,
        /// Orlicz function: power:p=<p>, exp or entropy
        #[arg(long)]
        phi: Option<String>,
        /// Transformation; defaults to the map in the space file
        #[arg(long)]
        map: Option<String>,
        /// Multiplier sequence file
        #[arg(long)]
        theta: Option<String>,
        /// Sample sequences for the lambda search
        #[arg(long)]
        seq: Vec<String>,
    },
    Invert {
        #[arg(long)]
        operator: String,
    },
    /// Empirical operator norm over random inputs
    Norm {
        #[arg(long)]
        operator: String,
        /// Measure space file
        #[arg(long)]
        space: String,
        /// Orlicz function: power:p=<p>, exp or entropy
        #[arg(long)]
        phi: String,
    },
}

#[derive(Debug, Subcommand)]
enum PhiCmd {
    Classify {
        /// Orlicz function: power:p=<p>, exp or entropy
        #[arg(long)]
        phi: String,
        #[arg(long)]
        grid_min: Option<f64>,
        #[arg(long)]
        grid_max: Option<f64>,
        #[arg(long)]
        grid_points: Option<usize>,
    },
}

impl Cmd {
    fn into_config(self) -> CommandConfig {
        match self {
            Cmd::Bc {
                cmd: BcCmd::Eval { op, lhs, rhs, coeffs, sets },
            } => CommandConfig::BcEval { op, lhs, rhs, coeffs, sets },
            Cmd::Norm { phi, space, seq } => CommandConfig::Norm { phi, space, seq },
            Cmd::Op { cmd } => match cmd {
                OpCmd::Apply { operator, space, seq } => CommandConfig::OpApply { operator, space, seq },
                OpCmd::Check {
                    kind,
                    space,
                    phi,
                    map,
                    theta,
                    seq,
                } => CommandConfig::OpCheck {
                    kind,
                    space,
                    phi,
                    map,
                    theta,
                    seq,
                },
                OpCmd::Invert { operator } => CommandConfig::OpInvert { operator },
                OpCmd::Norm { operator, space, phi } => CommandConfig::OpNorm { operator, space, phi },
            },
            Cmd::Phi {
                cmd:
                    PhiCmd::Classify {
                        phi,
                        grid_min,
                        grid_max,
                        grid_points,
                    },
            } => {
                let d = Grid::default();
                CommandConfig::PhiClassify {
                    phi,
                    grid: Grid {
                        min: grid_min.unwrap_or(d.min),
                        max: grid_max.unwrap_or(d.max),
                        points: grid_points.unwrap_or(d.points),
                    },
                }
            }
            Cmd::Schauder { seq, p, n } => CommandConfig::Schauder { seq, p, n },
            Cmd::Pairing { lhs, rhs, space } => CommandConfig::Pairing { lhs, rhs, space },
        }
    }
}

/// Resolves parsed flags against the defaults file; flags win.
pub fn resolve(cli: Cli, defaults: &Defaults) -> Result<RunConfig, InputError> {
    let g = cli.global;
    let probe_default = ProbeConfig::default().block;
    let cfg = RunConfig {
        command: cli.command.into_config(),
        lux_tol: g.tol.or(defaults.lux_tol).unwrap_or(DEFAULT_LUX_TOL),
        eps_inv: g.eps_inv.or(defaults.eps_inv).unwrap_or(DEFAULT_CLASSIFY_EPS),
        n_max: g.n_max.or(defaults.n_max),
        probe_block: g.probe_block.or(defaults.probe_block).unwrap_or(probe_default),
        seed: g.seed.or(defaults.seed).unwrap_or(0),
        trials: g.trials.or(defaults.trials).unwrap_or(DEFAULT_TRIALS),
        format: g.format.or(defaults.format).unwrap_or(Format::Text),
        strict: g.strict || defaults.strict.unwrap_or(false),
    };
    cfg.validate()?;
    Ok(cfg)
}
