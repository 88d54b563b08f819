use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qmetro", version, about = "Quantum Fisher information, entanglement and metrology bound audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum Fisher information of a family member or a state file.
    Qfi(QfiArgs),
    /// Geometric measure of entanglement.
    Gme(GmeArgs),
    /// Check every applicable bound on a state, a pair, or random pairs.
    Audit(AuditArgs),
    /// Sweep a scheduled family over N and fit the QFI exponent.
    Scaling(ScalingArgs),
    /// E_G curves of white-noise GHZ states against p.
    FigureEg(FigureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QfiRoute {
    /// Spectral formula on the dense state.
    Eigen,
    /// Tr ρL² with the symmetric logarithmic derivative.
    Sld,
    /// Optimal purification.
    Purification,
    /// Closed form only; no dense state is built.
    Analytic,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default, Args)]
pub struct Common {
    /// key=value file; command-line flags take precedence over it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Largest dense dimension (default 4096, or $QMETRO_DENSE_CAP).
    #[arg(long, value_name = "DIM")]
    pub dense_cap: Option<usize>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    /// ghz, non-max, tailored-pure, werner, tailored-werner, product, maximally-mixed.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON state file instead of a family member.
    #[arg(long, value_name = "FILE")]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QfiArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum)]
    pub method: Option<QfiRoute>,
    /// Repetitions for the Cramér–Rao bound.
    #[arg(long)]
    pub nu: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GmeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Random restarts of the alternating optimisation (pure states).
    #[arg(long)]
    pub restarts: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Producibility level for the k-producible caps.
    #[arg(long)]
    pub k: Option<usize>,
    /// Second state file; audits the continuity relations on the pair.
    #[arg(long, value_name = "FILE")]
    pub against: Option<PathBuf>,
    /// Audit the state against itself.
    #[arg(long)]
    pub self_audit: bool,
    /// Audit this many random N-qubit pairs instead.
    #[arg(long, value_name = "COUNT")]
    pub random_pairs: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub eps1: Option<f64>,
    #[arg(long)]
    pub eps2: Option<f64>,
    /// Comma-separated sizes, or "default" for 10^2, 10^2.5, …, 10^6.
    #[arg(long, value_name = "LIST")]
    pub n_grid: Option<String>,
    /// Smallest N included in the fit.
    #[arg(long)]
    pub fit_min_n: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Comma-separated N values (default 3,4,10).
    #[arg(long, value_name = "LIST")]
    pub n_grid: Option<String>,
    /// Spacing of the p grid on [0, 1].
    #[arg(long)]
    pub p_step: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}
