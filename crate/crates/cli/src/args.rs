use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "triwork", version, about = "Extractable work as an entanglement witness")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Also write a run manifest (config hash, version, timing, results) to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    /// Read all angle arguments in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Great-circle (or whole-sphere) average work of a two-qubit state, |00> by default.
    BipartiteBound(BipartiteBoundArgs),
    /// Three-axis work report for one measurement axis.
    Work(WorkArgs),
    /// Global max or min of the work over the measurement axis.
    Scan(ScanArgs),
    /// Mixing threshold of one Werner-type family for one criterion.
    Threshold(ThresholdArgs),
    /// All thresholds next to their published values.
    Table1(Table1Args),
    /// Shot-level Monte Carlo of the extraction protocol.
    Simulate(SimulateArgs),
    /// Which of separable / W / GHZ the work range is consistent with.
    Classify(ClassifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BipartiteBound(_) => "bipartite-bound",
            Command::Work(_) => "work",
            Command::Scan(_) => "scan",
            Command::Threshold(_) => "threshold",
            Command::Table1(_) => "table1",
            Command::Simulate(_) => "simulate",
            Command::Classify(_) => "classify",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BipartiteBoundArgs {
    /// Average over the whole Bloch sphere instead of the best great circle.
    #[arg(long)]
    pub sphere: bool,
    /// Circle nodes (great circle) or cos-theta nodes (sphere, twice as many in phi).
    #[arg(long, value_name = "N")]
    pub resolution: Option<usize>,
    /// Two-qubit state: product, singlet, mixed or a JSON state file.
    #[arg(long, default_value = "product")]
    pub state: String,
}

#[derive(Debug, Args, Serialize)]
pub struct WorkArgs {
    /// ghz, w, product, mixed or a JSON state file.
    #[arg(long)]
    pub state: String,
    /// Measurement axis as THETA,PHI.
    #[arg(long, value_name = "THETA,PHI", allow_hyphen_values = true)]
    pub z: String,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveArg {
    /// Frame angle tied to the azimuth of the axis.
    Coupled,
    /// Frame angle maximized separately for each axis.
    FrameMax,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Max)]
    pub mode: ModeArg,
    /// Coarse grid as THETAxPHI cells.
    #[arg(long, default_value = "32x64")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Coupled)]
    pub objective: ObjectiveArg,
    /// Write the coarse-grid values (theta, phi, W) as CSV.
    #[arg(long, value_name = "PATH.csv")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    GhzWerner,
    WWerner,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionArg {
    Thermo3,
    ThermoSphere,
    Mermin,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, value_enum)]
    pub criterion: CriterionArg,
    /// Final bracket width in p.
    #[arg(long, default_value_t = 5e-4)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct Table1Args {
    /// Print CSV instead of text.
    #[arg(long)]
    pub csv: bool,
    /// Leave out the two slow sphere-averaged cells.
    #[arg(long)]
    pub no_sphere: bool,
    #[arg(long, default_value_t = 5e-4)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolArg {
    Tripartite,
    Bipartite,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorArg {
    PlugIn,
    MillerMadow,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteArg {
    A,
    B,
    C,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value_t = ProtocolArg::Tripartite)]
    pub protocol: ProtocolArg,
    /// Tripartite: axis of the measuring party. Bipartite: Alice's direction.
    #[arg(long, value_name = "THETA,PHI", default_value = "0,0", allow_hyphen_values = true)]
    pub z: String,
    /// Tripartite: direction of the other two parties. Bipartite: Bob's direction.
    #[arg(long, value_name = "THETA,PHI", default_value = "0,0", allow_hyphen_values = true)]
    pub u: String,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = EstimatorArg::PlugIn)]
    pub estimator: EstimatorArg,
    /// Sample one measurement at a time from post-measurement states.
    #[arg(long)]
    pub sequential: bool,
    /// Extracting party (tripartite).
    #[arg(long, value_enum, default_value_t = SiteArg::C)]
    pub extractor: SiteArg,
    /// Party measuring along z (tripartite).
    #[arg(long, value_enum, default_value_t = SiteArg::A)]
    pub z_site: SiteArg,
    /// Write one JSON line per shot to PATH.
    #[arg(long, value_name = "PATH")]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    /// ghz, w, product, mixed or a JSON state file.
    #[arg(long)]
    pub state: String,
}
