//! Argument parsing for the `rotalg` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rotalg_sandbox::rotation_sandbox::Mode;

use crate::jobs::{Job, JobOptions, Suite, SuiteParams, Verb};

#[derive(Debug, Parser)]
#[command(name = "rotalg", version, about = "Ideal functions of irrational rotation algebras and their sandboxes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Angle: `golden`, `sqrt2`, or a JSON descriptor. Overrides the inputs.
    #[arg(long, global = true)]
    pub angle: Option<String>,
    /// Index window for values and checks.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub window: Option<i64>,
    /// Refinement budget of the closure operator.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Bound for the main numeric claim of a sandbox suite.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Exit with status 3 when any certificate is only an upper bound.
    #[arg(long, global = true)]
    pub require_exact: bool,
    /// Write the report or figure here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fejer,
    RingLaws,
    Averaging,
    Derivative,
    Center,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Values of an ideal function on the window.
    Eval {
        input: String,
        /// Only these indices (comma separated).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        at: Vec<i64>,
    },
    /// Symmetry and product laws on the window.
    CheckClosed { input: String },
    /// Pointwise union of the inputs.
    Meet {
        #[arg(num_args = 2..)]
        inputs: Vec<String>,
    },
    /// Closed join of the inputs.
    Join {
        #[arg(num_args = 2..)]
        inputs: Vec<String>,
    },
    /// Closure of one input.
    Close { input: String },
    /// Critical indices and the basic functions that re-join to the input.
    Decompose { input: String },
    /// Support, residual/small class, intersection set and Ω.
    Classify { input: String },
    /// Simplicity verdict with its witness ideal.
    Simplicity { input: String },
    /// Seeded checks in the rotation-algebra sandbox.
    SandboxVerify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest Fejér index.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long)]
        triples: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        q: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        rs: Option<Vec<i64>>,
        #[arg(long)]
        eps: Option<f64>,
        /// Search bound for phase matches.
        #[arg(long)]
        bound: Option<u64>,
        /// Number of best denominators tried.
        #[arg(long)]
        steps: Option<usize>,
        /// Grid points for commutator norms.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Finite-group checks; with `--action`, the intermediate algebra of that action.
    GroupVerify {
        #[arg(long)]
        action: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// SVG of a circle set, or of an ideal function's values on the window.
    Plot {
        input: String,
        #[arg(long, default_value_t = 200)]
        size: u32,
    },
    /// JSON schema of the report documents.
    Schema,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Fejer => Suite::Fejer,
            SuiteArg::RingLaws => Suite::RingLaws,
            SuiteArg::Averaging => Suite::Averaging,
            SuiteArg::Derivative => Suite::Derivative,
            SuiteArg::Center => Suite::Center,
        }
    }
}

impl Cli {
    pub fn into_job(self, default_angle: Option<String>) -> (Job, Option<PathBuf>) {
        let verb = match self.command {
            Command::Eval { input, at } => Verb::Eval { input, at },
            Command::CheckClosed { input } => Verb::CheckClosed { input },
            Command::Meet { inputs } => Verb::Meet { inputs },
            Command::Join { inputs } => Verb::Join { inputs },
            Command::Close { input } => Verb::Close { input },
            Command::Decompose { input } => Verb::Decompose { input },
            Command::Classify { input } => Verb::Classify { input },
            Command::Simplicity { input } => Verb::Simplicity { input },
            Command::SandboxVerify { suite, seed, n, degree, triples, samples, q, rs, eps, bound, steps, grid } => Verb::SandboxVerify {
                suite: suite.into(),
                params: SuiteParams { seed, n, degree, triples, samples, q, rs, eps, bound, steps, grid },
            },
            Command::GroupVerify { action, samples, seed } => Verb::GroupVerify { action, samples, seed },
            Command::Plot { input, size } => Verb::Plot { input, size },
            Command::Schema => Verb::Schema,
        };
        let options = JobOptions {
            angle: self.angle,
            default_angle,
            window: self.window,
            depth: self.depth,
            tolerance: self.tolerance,
            mode: self.mode.map(|m| match m {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            }),
            require_exact: self.require_exact,
        };
        (Job { verb, options }, self.output)
    }
}
