//! Command-line definitions.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cssqkd",
    version,
    about = "Error exponents, key rates, decoding error probabilities and BB84 simulations",
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Error exponent E(R, p0, p1) in closed form, optionally cross-checked on a grid.
    Exponent(ExponentArgs),
    /// Key-rate curves 1 - 2H(p) and 1 - H(p) - H(2p) with their thresholds.
    Keyrate(KeyrateArgs),
    /// Decoding error probability of a code pair, exact or Monte Carlo.
    Perr(PerrArgs),
    /// Finite-length bound on the eavesdropper's mutual information.
    Bound(BoundArgs),
    /// Simulate BB84 sessions, one CSV row per session.
    Simulate(SimulateArgs),
    /// Sample a random code or a random supercode.
    SampleCode(SampleCodeArgs),
    /// Run every section of a key=value batch file.
    Batch(BatchArgs),
}

impl Command {
    pub fn common(&self) -> Option<&Common> {
        match self {
            Command::Exponent(a) => Some(&a.common),
            Command::Keyrate(a) => Some(&a.common),
            Command::Perr(a) => Some(&a.common),
            Command::Bound(a) => Some(&a.common),
            Command::Simulate(a) => Some(&a.common),
            Command::SampleCode(a) => Some(&a.common),
            Command::Batch(_) => None,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExponentArgs {
    /// Code rate R in [0, 1].
    #[arg(long = "R", visible_alias = "rate")]
    pub r: f64,
    #[arg(long)]
    pub p0: f64,
    #[arg(long)]
    pub p1: f64,
    /// Also minimize the objective numerically and report the difference.
    #[arg(long)]
    pub check_grid: bool,
    #[arg(long, default_value_t = 1000)]
    pub grid_steps: usize,
    /// Block length for the finite-n error probability bound.
    #[arg(long, requires = "mu")]
    pub n: Option<usize>,
    /// Slack in the finite-n bound.
    #[arg(long, requires = "n")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct KeyrateArgs {
    #[arg(long, default_value_t = 0.25)]
    pub p_max: f64,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// C2⊥ against phase errors, p1 on the first block.
    Phase,
    /// C1 against bit errors, p0 on the first block.
    Bit,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("supercode").required(true).args(["c2_dual", "m"])))]
pub struct PerrArgs {
    /// C1⊥ in the text code format.
    #[arg(long)]
    pub c1_dual: PathBuf,
    /// C2⊥ in the text code format; must contain C1⊥.
    #[arg(long)]
    pub c2_dual: Option<PathBuf>,
    /// Sample C2⊥ as a random supercode of this extra dimension.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub p0: f64,
    #[arg(long)]
    pub p1: f64,
    #[arg(long, value_enum, default_value_t = Orientation::Phase)]
    pub orientation: Orientation,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Largest n summed exhaustively.
    #[arg(long, default_value_t = 20)]
    pub cap: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub delta: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Noiseless,
    Bsc,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveKind {
    None,
    InterceptResend,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.02)]
    pub delta: f64,
    #[arg(long, default_value = "rm")]
    pub registry: String,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ChannelKind::Noiseless)]
    pub channel: ChannelKind,
    /// Flip probability for qubits sent in the Z basis.
    #[arg(long, default_value_t = 0.0)]
    pub pz: f64,
    /// Flip probability for qubits sent in the X basis.
    #[arg(long, default_value_t = 0.0)]
    pub px: f64,
    #[arg(long, value_enum, default_value_t = EveKind::None)]
    pub eve: EveKind,
    #[arg(long, default_value_t = 1.0)]
    pub eve_fraction: f64,
    /// Session i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub sessions: u64,
    /// Write every transcript as key=value text to this file.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("shape").required(true).args(["k", "c1_dual"])))]
pub struct SampleCodeArgs {
    /// Length of a uniformly random code.
    #[arg(long, requires = "k")]
    pub n: Option<usize>,
    /// Dimension of a uniformly random code.
    #[arg(long, requires = "n")]
    pub k: Option<usize>,
    /// Sample a supercode of this code instead.
    #[arg(long, requires = "m", conflicts_with_all = ["n", "k"])]
    pub c1_dual: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BatchArgs {
    /// Batch file: key=value lines, sections separated by blank lines.
    pub config: PathBuf,
    /// Number of sections run concurrently.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
}
