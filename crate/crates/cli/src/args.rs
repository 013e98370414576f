use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use multisim_core::experiments::Experiment;
use multisim_core::{AlphaScaling, FeatureVector, Method, SimilarityParams};

#[derive(Debug, Parser)]
#[command(
    name = "multisim",
    version,
    about = "Multiset similarity kernels, neurons and experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two vectors given inline, e.g. `kernel --method jaccard -- 1,2 2,2`.
    Kernel(KernelArgs),
    /// Run an experiment sweep and write its curves as CSV.
    Bench(BenchArgs),
    /// Evaluate a kernel over a 2-D grid against a reference vector.
    Map2d(Map2dArgs),
    /// Closed-form extents of a Jaccard equisimilarity region.
    Equisim(EquisimArgs),
    /// Segment a binary PPM image from seed pixels; writes a PGM mask.
    Segment(SegmentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelOpts {
    /// Kernel: crosscorr, interiority, jaccard or coincidence.
    #[arg(long, default_value = "jaccard", value_parser = parse_method)]
    pub method: Method,
    /// Strictness exponent D (>= 0).
    #[arg(long, default_value_t = 1.0)]
    pub d_power: f64,
    /// Weight of same-sign pairs in [0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// How α is scaled: doubled or plain.
    #[arg(long, default_value = "doubled", value_parser = parse_scaling)]
    pub alpha_scaling: AlphaScaling,
}

impl KernelOpts {
    pub fn params(&self) -> multisim_core::Result<SimilarityParams> {
        SimilarityParams::new(self.method)
            .with_d_power(self.d_power)?
            .with_alpha(self.alpha, self.alpha_scaling)
    }
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub kernel: KernelOpts,
    /// First vector, comma separated.
    #[arg(allow_hyphen_values = true, value_parser = parse_vector)]
    pub x: FeatureVector,
    /// Second vector, comma separated.
    #[arg(allow_hyphen_values = true, value_parser = parse_vector)]
    pub y: FeatureVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Displacement,
    Intensity,
    Width,
    Noise,
    Interference,
    Strictness,
    Sensitivity,
    Angles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrictnessBase {
    Displacement,
    Intensity,
    Width,
    Noise,
    Interference,
}

impl From<StrictnessBase> for Experiment {
    fn from(b: StrictnessBase) -> Self {
        match b {
            StrictnessBase::Displacement => Experiment::Displacement,
            StrictnessBase::Intensity => Experiment::Intensity,
            StrictnessBase::Width => Experiment::Width,
            StrictnessBase::Noise => Experiment::Noise,
            StrictnessBase::Interference => Experiment::Interference,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    pub experiment: BenchKind,
    /// σ of the reference Gaussian in pixels [default: 100].
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Raster size as WxH [default: 200x200].
    #[arg(long, value_parser = parse_size)]
    pub size: Option<(usize, usize)>,
    /// Seed of the random streams [default: 2022].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Trials per sweep point [default: 20 noise, 50 interference, 10000 sensitivity, 1 otherwise].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated kernels to compare [default: all four].
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub method: Vec<Method>,
    /// Comma-separated sweep values, overriding the experiment's default sweep.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<f64>,
    /// Sweep repeated by `strictness`.
    #[arg(long, value_enum, default_value = "displacement")]
    pub base: StrictnessBase,
    /// Strictness exponents for `strictness`.
    #[arg(long, value_delimiter = ',', default_value = "1,3,5,7,9,11")]
    pub d_values: Vec<f64>,
    /// σ of each interfering Gaussian [default: 5].
    #[arg(long)]
    pub interference_sigma: Option<f64>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Map2dArgs {
    #[command(flatten)]
    pub kernel: KernelOpts,
    /// Reference vector (two components).
    #[arg(long, default_value = "1,2", allow_hyphen_values = true, value_parser = parse_vector)]
    pub reference: FeatureVector,
    /// Grid bounds `lo,hi`, applied to both axes.
    #[arg(long, default_value = "-4,4", allow_hyphen_values = true, value_parser = parse_bounds)]
    pub bounds: (f64, f64),
    /// Grid points per axis.
    #[arg(long, default_value_t = 161)]
    pub resolution: usize,
    /// CSV output (`x,y,value`); standard output when neither --out nor --pgm is given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the map as an 8-bit PGM (min-max scaled, top row = highest y).
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquisimArgs {
    /// Reference vector (two components).
    #[arg(long, default_value = "1,2", allow_hyphen_values = true, value_parser = parse_vector)]
    pub reference: FeatureVector,
    /// Similarity level d in (0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub level: f64,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Binary PPM (P6, maxval 255) input image.
    pub image: PathBuf,
    #[command(flatten)]
    pub kernel: KernelOpts,
    /// Text file of `x y` seed lines; `#` starts a comment.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Seed pixel `x,y`; repeatable.
    #[arg(long = "sample", value_parser = parse_pixel)]
    pub sample: Vec<(usize, usize)>,
    /// Firing threshold [default: 0.8, or 0.75 for coincidence].
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    /// Window radius w; templates cover (2w+1)² pixels.
    #[arg(long, default_value_t = 1)]
    pub window: usize,
    /// Output PGM mask; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: multisim_core::Error| e.to_string())
}

fn parse_scaling(s: &str) -> Result<AlphaScaling, String> {
    s.parse().map_err(|e: multisim_core::Error| e.to_string())
}

fn parse_vector(s: &str) -> Result<FeatureVector, String> {
    s.parse().map_err(|e: multisim_core::Error| e.to_string())
}

fn parse_pair<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> Result<(T, T), String> {
    let (a, b) = s
        .split_once(sep)
        .ok_or_else(|| format!("expected {what}, got {s:?}"))?;
    match (a.trim().parse(), b.trim().parse()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => Err(format!("expected {what}, got {s:?}")),
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    parse_pair(&s.to_ascii_lowercase(), 'x', "WxH")
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    parse_pair(s, ',', "lo,hi")
}

fn parse_pixel(s: &str) -> Result<(usize, usize), String> {
    parse_pair(s, ',', "x,y")
}
