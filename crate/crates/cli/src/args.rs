use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "threeprimes",
    version,
    about = "Three primes in short intervals: Buchstab constants, sieve majorants, exponential sums, transference and desk-scale scans",
    arg_required_else_help = true,
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Flat JSON object of option values; explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Seed for every random draw of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "THREEPRIMES_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Single worker thread, for byte-identical reruns.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Output file; stdout when absent. A manifest is written next to it.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Manifest path (default: <out>.manifest.json).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Buchstab function ω and the constant α⁺.
    #[command(subcommand)]
    Buchstab(BuchstabCmd),
    /// Shortcut for `buchstab alpha-plus`.
    AlphaPlus(AlphaPlusArgs),
    /// Windowed factorization, ρ and ρ⁺.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Arc classification and short-interval exponential sums.
    #[command(subcommand)]
    Arcs(ArcsCmd),
    /// Dense-model combinatorics.
    #[command(subcommand)]
    Transfer(TransferCmd),
    /// Representations n = p₁ + p₂ + p₃ with almost equal parts.
    #[command(subcommand)]
    Ternary(TernaryCmd),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuchstabCmd {
    /// ω(u) as JSON.
    Eval(EvalArgs),
    /// α⁺ with quadrature error and breakdown, as JSON.
    AlphaPlus(AlphaPlusArgs),
    /// Grid values of ω as CSV (u, omega).
    Table(TableArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct TableOpts {
    #[arg(long, default_value_t = 20.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub u: Option<f64>,
    #[command(flatten)]
    pub table: TableOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct AlphaPlusArgs {
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub table: TableOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    #[command(flatten)]
    pub table: TableOpts,
    /// Keep every k-th grid point.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffArg {
    Strict,
    Inclusive,
}

#[derive(Debug, Args, Serialize)]
pub struct ParamOpts {
    #[arg(long, default_value_t = 1_000_000)]
    pub x: u64,
    #[arg(long, default_value_t = 0.65)]
    pub theta: f64,
    /// Overrides ⌊x^{1/10}⌋.
    #[arg(long)]
    pub z: Option<u64>,
    /// Overrides ⌊x^{1/4}⌋.
    #[arg(long)]
    pub y4: Option<u64>,
    /// Overrides w (W = ∏_{p ≤ w} p).
    #[arg(long)]
    pub w: Option<u64>,
    #[arg(long, value_enum, default_value_t = CutoffArg::Strict)]
    pub cutoff: CutoffArg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SieveCmd {
    /// CSV of n, rho, rho_plus over [lo, hi) (default: [x, x + x^θ]).
    Majorant(MajorantArgs),
    /// Violations of Buchstab's identity on [lo, hi), as JSON.
    IdentityCheck(IdentityArgs),
    /// Empirical prime density in a window and residue class, as JSON.
    Density(DensityArgs),
    /// Truncated Möbius expansion error over [lo, hi), as JSON.
    FundamentalError(FundamentalArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MajorantArgs {
    #[command(flatten)]
    pub params: ParamOpts,
    #[arg(long)]
    pub lo: Option<u64>,
    #[arg(long)]
    pub hi: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 2)]
    pub lo: u64,
    #[arg(long, default_value_t = 10_000)]
    pub hi: u64,
    #[arg(long, default_value_t = 3)]
    pub w: u64,
    #[arg(long, default_value_t = 100)]
    pub z: u64,
    #[arg(long, value_enum, default_value_t = CutoffArg::Strict)]
    pub cutoff: CutoffArg,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub lo: u64,
    #[arg(long, default_value_t = 2_000_000)]
    pub hi: u64,
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub c: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct FundamentalArgs {
    #[command(flatten)]
    pub params: ParamOpts,
    #[arg(long)]
    pub lo: Option<u64>,
    #[arg(long)]
    pub hi: Option<u64>,
    /// The ω cutoff (default exp((log x)^{9/10})).
    #[arg(long)]
    pub omega: Option<u64>,
    /// Divisor bound D = x^eps.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    Rho,
    RhoPlus,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcsCmd {
    /// (a, q, λ) and major/minor status of γ, as JSON.
    Classify(ClassifyArgs),
    /// Both sides of the main-term equation over a γ grid, as CSV.
    Compare(CompareArgs),
    /// Measured η of condition (1) over a γ grid, as CSV.
    Eta(EtaArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ArcOpts {
    /// Log-power exponent A.
    #[arg(long, default_value_t = 1.0)]
    pub a_exp: f64,
    /// Overrides the major-arc threshold.
    #[arg(long)]
    pub q_threshold: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub x: u64,
    #[arg(long, default_value_t = 0.65)]
    pub theta: f64,
    #[command(flatten)]
    pub arc: ArcOpts,
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GridOpts {
    /// Explicit frequencies; when given, the Farey/random grid is skipped.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub gamma: Vec<f64>,
    /// Farey points a/q with q ≤ qmax.
    #[arg(long, default_value_t = 10)]
    pub qmax: u64,
    /// Extra seeded random frequencies.
    #[arg(long, default_value_t = 50)]
    pub random: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub params: ParamOpts,
    #[command(flatten)]
    pub arc: ArcOpts,
    #[command(flatten)]
    pub grid: GridOpts,
    #[arg(long, value_enum, default_value_t = KernelArg::RhoPlus)]
    pub kernel: KernelArg,
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    #[arg(long, default_value_t = 0)]
    pub c: u64,
    #[arg(long, default_value_t = 0.05)]
    pub taper: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EtaArgs {
    #[command(flatten)]
    pub params: ParamOpts,
    #[command(flatten)]
    pub arc: ArcOpts,
    #[command(flatten)]
    pub grid: GridOpts,
    /// Residue b modulo W.
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    /// α⁺; computed from the Buchstab table when absent.
    #[arg(long)]
    pub alpha_plus: Option<f64>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferCmd {
    /// Minimum of f₁*f₂*f₃(n)/N² over dense-model trials, as JSON.
    KneserDense(KneserArgs),
    /// Popular-sum sizes against 4α, as JSON.
    Doubling4(DoublingArgs),
    /// Decomposition f = g + h of a random sparse f, as CSV (n, f, g, h).
    Decompose(DecomposeArgs),
    /// Distribution of ξp mod 1 over window primes, as JSON.
    BohrDemo(BohrArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct KneserArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.05)]
    pub eta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DoublingArgs {
    #[arg(long, default_value_t = 120)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub instances: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub alpha: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Probability that f(n) is nonzero.
    #[arg(long, default_value_t = 0.05)]
    pub density: f64,
    /// η for the AP-mean property.
    #[arg(long, default_value_t = 0.1)]
    pub ap_eta: f64,
    #[arg(long, default_value_t = 2.5)]
    pub q_exp: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BohrArgs {
    /// ξ (default: golden ratio conjugate).
    #[arg(long, default_value_t = 0.618_033_988_749_894_9)]
    pub xi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub start: f64,
    #[arg(long, default_value_t = 0.3)]
    pub length: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub lo: u64,
    #[arg(long, default_value_t = 1_010_000)]
    pub hi: u64,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TernaryCmd {
    /// Every odd n in [lo, hi] at H = ⌈n^θ⌉, as CSV.
    Scan(ScanArgs),
    /// Ordered count against the singular-series prediction, as JSON.
    Predict(PredictArgs),
    /// Count, minimal window and a witness triple, as JSON.
    Stats(StatsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 9)]
    pub lo: u64,
    #[arg(long, default_value_t = 999)]
    pub hi: u64,
    #[arg(long, default_value_t = 0.55)]
    pub theta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub n: Option<u64>,
    /// Half-width; defaults to ⌈n^θ⌉.
    #[arg(long)]
    pub h: Option<u64>,
    #[arg(long, default_value_t = 0.7)]
    pub theta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub h: Option<u64>,
    #[arg(long, default_value_t = 0.55)]
    pub theta: f64,
}
