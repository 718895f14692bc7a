use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use raintensity::{ModelKind, ParametricFamily};

#[derive(Debug, Parser)]
#[command(
    name = "raintensity",
    version,
    about = "Generalized reversed aging intensity analysis of lifetime data"
)]
pub struct Cli {
    /// Write every artifact into this directory instead of printing the primary one.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate cdf, pdf, quantiles and GRAI of a catalog family.
    DistEval(DistEvalArgs),
    /// Tabulate the exact GRAI curve of a catalog family.
    GraiCurve(GraiCurveArgs),
    /// Rebuild a distribution function from a GRAI curve.
    Reconstruct(ReconstructArgs),
    /// Empirical GRAI curve of a sample through a kernel density estimate.
    Estimate(EstimateArgs),
    /// Fit a GRAI model to a sample and identify the distribution.
    Fit(FitArgs),
    /// Chi-square or Kolmogorov-Smirnov goodness of fit.
    Gof(GofArgs),
    /// Compare two catalog families in the alpha-RAI order.
    Order(OrderArgs),
    /// Draw a seeded sample from a catalog family.
    Simulate(SimulateArgs),
}

/// Family string such as `invllog(gamma=4,lambda=0.5)`.
fn family(s: &str) -> Result<ParametricFamily, String> {
    s.parse().map_err(|e: raintensity::Error| e.to_string())
}

fn pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}`: expected two comma-separated numbers"))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{v}` is not a number"))
    };
    Ok((num(a)?, num(b)?))
}

#[derive(Debug, Args)]
pub struct DistEvalArgs {
    #[arg(value_parser = family)]
    pub family: ParametricFamily,
    /// Abscissae at which to evaluate.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Probabilities at which to evaluate the quantile function.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Also evaluate the alpha-GRAI at each abscissa.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GraiCurveArgs {
    #[arg(value_parser = family)]
    pub family: ParametricFamily,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// `lo,hi`; defaults to the 0.001 and 0.999 quantiles.
    #[arg(long, value_parser = pair)]
    pub range: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct CurveSource {
    /// Exact GRAI of a catalog family at `--alpha`.
    #[arg(long, value_parser = family, group = "source")]
    pub family: Option<ParametricFamily>,
    /// Tabulated curve as written by `grai-curve` or `estimate`.
    #[arg(long, group = "source")]
    pub curve: Option<PathBuf>,
    /// Constant curve.
    #[arg(long, group = "source")]
    pub constant: Option<f64>,
    /// Affine curve `intercept,slope`.
    #[arg(long, value_parser = pair, group = "source")]
    pub affine: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub source: CurveSource,
    /// Defaults to the alpha recorded in a `--curve` file.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// `a,k`; required for alpha <= 0.
    #[arg(long, value_parser = pair)]
    pub anchor: Option<(f64, f64)>,
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    /// `lo,hi`, log-spaced with `--points`.
    #[arg(long, value_parser = pair)]
    pub range: Option<(f64, f64)>,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = raintensity::characterize::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Kernel bandwidth; defaults to the normal-reference rule.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Empirical quantile band `p_lo,p_hi` of the evaluation grid.
    #[arg(long, value_parser = pair, default_value = "0.05,0.95")]
    pub band: (f64, f64),
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Grid points whose estimated cdf is outside `[eps, 1 - eps]` are dropped.
    #[arg(long, default_value_t = raintensity::estimate::DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// One value per line.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// constant, affine or through-origin.
    #[arg(long, value_parser = |s: &str| s.parse::<ModelKind>().map_err(|e| e.to_string()))]
    pub model: ModelKind,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestArg {
    Chi2,
    Ks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KsMethodArg {
    Stephens,
    Exact,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[arg(value_parser = family)]
    pub family: ParametricFamily,
    #[arg(long, value_enum)]
    pub test: TestArg,
    #[arg(long, conflicts_with = "counts")]
    pub input: Option<PathBuf>,
    /// Observed class counts, instead of `--input` (chi-square only).
    #[arg(long, value_delimiter = ',', requires = "total")]
    pub counts: Vec<u64>,
    /// Sample size behind `--counts`.
    #[arg(long)]
    pub total: Option<u64>,
    /// Number of classes; defaults to the length of `--counts`, else 20.
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub nparams: usize,
    #[arg(long, default_value_t = 5.0)]
    pub merge_threshold: f64,
    /// Drop observations beyond the last class instead of counting them in it.
    #[arg(long)]
    pub no_fold_overflow: bool,
    /// Add the model mass beyond the last class to its expected count.
    #[arg(long)]
    pub tail_in_expected: bool,
    #[arg(long, value_enum, default_value_t = KsMethodArg::Stephens)]
    pub ks_pvalue: KsMethodArg,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[arg(value_parser = family)]
    pub x: ParametricFamily,
    #[arg(value_parser = family)]
    pub y: ParametricFamily,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = raintensity::orders::DEFAULT_GRID_POINTS)]
    pub grid: usize,
    /// Treat `--alpha` as beta and check the implied orders.
    #[arg(long)]
    pub implication: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_parser = family)]
    pub family: ParametricFamily,
    #[arg(long)]
    pub n: usize,
    #[arg(long, env = "RAINTENSITY_SEED", default_value_t = 0)]
    pub seed: u64,
}
