//! Parameter sweeps comparing the kernels on Gaussian stimuli and on small
//! synthetic vectors. Every sweep is a pure function of its [`SweepConfig`].

mod geometry;
mod perturbation;
mod sensitivity;
mod table;

use std::fmt;
use std::str::FromStr;

pub use geometry::{equisimilarity_extents, run_angle_sweep, similarity_map_2d, EquisimExtents};
pub use perturbation::{
    run_displacement, run_intensity, run_interference, run_noise, run_strictness, run_width,
};
pub use sensitivity::{
    jaccard_gradient_simplified, run_sensitivity, SensitivitySample, SENSITIVITY_MEASURES,
};
pub use table::{write_csv, write_csv_file, CurveRow, CurveTable};

use crate::error::{Error, Result};
use crate::simkernel::{similarity, FeatureVector, Method, SimilarityParams};

pub const DEFAULT_SIZE: usize = 200;
pub const DEFAULT_SIGMA: f64 = 100.0;
pub const DEFAULT_SEED: u64 = 2022;
pub const NOISE_LEVELS: u32 = 20;
pub const STRICTNESS_D_VALUES: [f64; 6] = [1.0, 3.0, 5.0, 7.0, 9.0, 11.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    Displacement,
    Intensity,
    Width,
    Noise,
    Interference,
    Sensitivity,
    Angles,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Displacement,
        Experiment::Intensity,
        Experiment::Width,
        Experiment::Noise,
        Experiment::Interference,
        Experiment::Sensitivity,
        Experiment::Angles,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Displacement => "displacement",
            Experiment::Intensity => "intensity",
            Experiment::Width => "width",
            Experiment::Noise => "noise",
            Experiment::Interference => "interference",
            Experiment::Sensitivity => "sensitivity",
            Experiment::Angles => "angles",
        }
    }

    pub fn run(self, cfg: &SweepConfig) -> Result<CurveTable> {
        match self {
            Experiment::Displacement => run_displacement(cfg),
            Experiment::Intensity => run_intensity(cfg),
            Experiment::Width => run_width(cfg),
            Experiment::Noise => run_noise(cfg),
            Experiment::Interference => run_interference(cfg),
            Experiment::Sensitivity => run_sensitivity(cfg),
            Experiment::Angles => run_angle_sweep(cfg),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown experiment {s:?}")))
    }
}

/// Sweep description shared by all experiments.
///
/// Fields that only matter for one experiment are ignored by the others.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub width: usize,
    pub height: usize,
    /// σ of the reference Gaussian, in pixels.
    pub sigma: f64,
    pub methods: Vec<SimilarityParams>,
    /// Ordered sample points of the swept parameter.
    pub values: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Diagonal offset of the probe in the intensity sweep.
    pub probe_shift: f64,
    pub noise_levels: u32,
    /// σ of each interfering Gaussian.
    pub interference_sigma: f64,
    /// Vector length in the sensitivity study.
    pub sensitivity_dim: usize,
}

fn all_methods() -> Vec<SimilarityParams> {
    Method::ALL
        .iter()
        .map(|&m| SimilarityParams::new(m))
        .collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl SweepConfig {
    /// Defaults for `experiment`: 200×200 support, σ = 100, all four kernels.
    pub fn for_experiment(experiment: Experiment) -> Self {
        let mut cfg = SweepConfig {
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            sigma: DEFAULT_SIGMA,
            methods: all_methods(),
            values: Vec::new(),
            trials: 1,
            seed: DEFAULT_SEED,
            probe_shift: 2.0,
            noise_levels: NOISE_LEVELS,
            interference_sigma: 5.0,
            sensitivity_dim: 100,
        };
        match experiment {
            Experiment::Displacement => cfg.values = (0..=30).map(f64::from).collect(),
            Experiment::Intensity => cfg.values = (0..=30).map(|i| i as f64 / 10.0).collect(),
            Experiment::Width => cfg.values = (0..=20).map(|i| 5.0 * i as f64).collect(),
            Experiment::Noise => {
                cfg.values = (0..=NOISE_LEVELS).map(f64::from).collect();
                cfg.trials = 20;
            }
            Experiment::Interference => {
                cfg.values = (0..=5).map(f64::from).collect();
                cfg.trials = 50;
            }
            Experiment::Sensitivity => {
                cfg.values = (0..=10).map(|i| i as f64 / 10.0).collect();
                cfg.trials = 10_000;
                cfg.methods = Vec::new();
            }
            Experiment::Angles => {
                cfg.values = linspace(0.0, std::f64::consts::PI, 181);
                cfg.methods = vec![
                    SimilarityParams::new(Method::CrossCorrelation),
                    SimilarityParams::new(Method::Coincidence),
                ];
            }
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParam("raster size must be positive".into()));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::InvalidParam(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParam("trials must be >= 1".into()));
        }
        if self.values.is_empty() {
            return Err(Error::InvalidParam("sweep needs at least one value".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParam("sweep values must be finite".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParam(
                "sweep values must be strictly increasing".into(),
            ));
        }
        if !(self.interference_sigma.is_finite() && self.interference_sigma > 0.0) {
            return Err(Error::InvalidParam("interference sigma must be > 0".into()));
        }
        Ok(())
    }

    pub(crate) fn require_methods(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::InvalidParam(
                "at least one method is required".into(),
            ));
        }
        Ok(())
    }
}

/// Kernel value where a null comparison (an all-zero operand against a
/// kernel that cannot handle it) scores 0 instead of failing the sweep.
pub(crate) fn score(x: &FeatureVector, y: &FeatureVector, p: &SimilarityParams) -> Result<f64> {
    match similarity(x, y, p) {
        Err(Error::NullComparison) => Ok(0.0),
        other => other,
    }
}

/// Population mean and standard deviation.
pub(crate) fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
