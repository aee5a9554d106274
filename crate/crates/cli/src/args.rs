use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "qaoa-ring", version, about = "QAOA and digitized annealing experiments on the Ising ring")]
pub struct Cli {
    #[command(flatten)]
    pub globals: Globals,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Globals {
    /// Ring size N (even, at least 4). Each subcommand has its own default.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Circuit depth P.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Halting gap to the residual bound for saturation runs.
    #[arg(long = "tol-bound", global = true, default_value_t = 1e-7)]
    pub tol_bound: f64,
    /// Halting gap used by the iteration-cost scan.
    #[arg(long = "tol-iter", global = true, default_value_t = 1e-5)]
    pub tol_iter: f64,
    /// Single-threaded execution.
    #[arg(long, global = true)]
    pub serial: bool,
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Optimize angles at one depth and compare with the residual bound.
    Optimize(OptimizeArgs),
    /// Build regular solutions level by level and dump their s-profiles.
    Regular(RegularArgs),
    /// Enumerate the degenerate minima by multistart and clustering.
    Minima(MinimaArgs),
    /// Residual energy against annealing time for one schedule family.
    Scaling(ScalingArgs),
    /// Shannon-entropy adiabaticity of regular, linear and random-init solutions.
    Entropy(EntropyArgs),
    /// Scaling-collapse distance of regular s-profiles over an exponent grid.
    Collapse(CollapseArgs),
    /// Self-checks against the state-vector oracle and analytic identities.
    Verify(VerifyArgs),
    /// BFGS iterations needed to reach the bound, per depth.
    Cost(CostArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Optimize(_) => "optimize",
            Command::Regular(_) => "regular",
            Command::Minima(_) => "minima",
            Command::Scaling(_) => "scaling",
            Command::Entropy(_) => "entropy",
            Command::Collapse(_) => "collapse",
            Command::Verify(_) => "verify",
            Command::Cost(_) => "cost",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitArg {
    Random,
    Iterative,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, default_value_t = InitArg::Random)]
    pub mode: InitArg,
    #[arg(long, default_value_t = 100)]
    pub starts: usize,
    #[arg(long = "max-iter", default_value_t = 20000)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RegularArgs {
    /// Deepest level; a power of two, at least 2.
    #[arg(long = "p-max", default_value_t = 64)]
    pub p_max: usize,
    /// Use the ring N = 2P at every level.
    #[arg(long)]
    pub controllable: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MinimaArgs {
    #[arg(long, default_value_t = 10000)]
    pub starts: usize,
    /// Max-norm clustering radius after reduction to the period cell.
    #[arg(long = "cluster-tol", default_value_t = 1e-4)]
    pub cluster_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Linear,
    RolandCerf,
    PowerLaw,
    /// Regular QAOA solutions placed at τ = Σ(γ + β).
    Regular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingArg {
    Midpoint,
    RightEndpoint,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScalingArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    pub family: FamilyArg,
    /// Smallest τ; the grid doubles up to `--tau-max`.
    #[arg(long = "tau-min", default_value_t = 32.0)]
    pub tau_min: f64,
    #[arg(long = "tau-max", default_value_t = 1024.0)]
    pub tau_max: f64,
    /// Step duration of the digitized schedules.
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    /// Fixed family parameter; optimized per τ when absent.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum)]
    pub sampling: Option<SamplingArg>,
    /// Integrate the continuous schedule instead of digitizing it.
    #[arg(long)]
    pub continuous: bool,
    /// RK4 step for `--continuous`.
    #[arg(long, default_value_t = qaoa_ring::dynamics::RK4_STEP)]
    pub step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long = "p-list", value_delimiter = ',', default_value = "16,32,64,128")]
    pub p_list: Vec<usize>,
    /// Iteration cap of the random-init optimizations.
    #[arg(long = "max-iter", default_value_t = 200000)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollapseFamily {
    Regular,
    /// Regular solutions on the ring N = 2P.
    Controllable,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CollapseArgs {
    #[arg(long, value_enum, default_value_t = CollapseFamily::Regular)]
    pub family: CollapseFamily,
    /// Depths to collapse; defaults to 32,64,128 (regular) or 64,128,256.
    #[arg(long = "p-list", value_delimiter = ',')]
    pub p_list: Option<Vec<usize>>,
    #[arg(long = "alpha-min", default_value_t = 0.5)]
    pub alpha_min: f64,
    #[arg(long = "alpha-max", default_value_t = 2.5)]
    pub alpha_max: f64,
    #[arg(long = "alpha-step", default_value_t = 0.025)]
    pub alpha_step: f64,
    /// Fraction of t/τ dropped at each end.
    #[arg(long, default_value_t = qaoa_ring::schedules::COLLAPSE_EDGE)]
    pub edge: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Pseudo-spin residual against the 2^N state vector.
    Oracle,
    /// Reduced-chain boundary freedom and anti-periodic translation.
    Reduction,
    /// The eight landscape identities.
    Symmetry,
    /// Effective-field reconstruction and digital criticality.
    EffectiveField,
    /// Analytic gradient against finite differences.
    Gradient,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Check that a schedule with 2P >= N reaches zero residual
    /// (the closed form unless `--schedule` is given).
    #[arg(long)]
    pub controllable: bool,
    /// Angle schedule file to check against the state vector.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Sample count override for the randomized suites.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    Random,
    Iterative,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CostArgs {
    #[arg(long = "p-list", value_delimiter = ',', default_value = "4,8,16,32,64")]
    pub p_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = CostMode::Both)]
    pub mode: CostMode,
    /// Random starts per depth.
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long = "max-iter", default_value_t = 200000)]
    pub max_iter: usize,
}
