//! Response of Jaccard, cosine and normalized Euclidean distance to a
//! perturbation of one vector component.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::{mean_std, CurveTable, SweepConfig};
use crate::error::{Error, Result};
use crate::simkernel::{
    cosine, normalized_euclidean, vector_jaccard, FeatureVector, SimilarityParams,
};
use crate::stimuli::RandomSource;

/// Labels of the three measures, in output order.
pub const SENSITIVITY_MEASURES: [&str; 3] = ["jaccard", "crosscorr", "euclidean"];

/// One random trial: a vector pair and the component to perturb.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivitySample {
    pub x: FeatureVector,
    pub y: FeatureVector,
    pub index: usize,
}

impl SensitivitySample {
    /// `x_i ~ N(10, 3)`, `y = x + 0.1·n` with `n_i ~ N(1, 5)`, and a uniform
    /// component index.
    pub fn draw(dim: usize, src: &RandomSource) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let mut rng = src.rng();
        let xs = Normal::new(10.0, 3.0).expect("valid normal");
        let ns = Normal::new(1.0, 5.0).expect("valid normal");
        let x: Vec<f64> = (0..dim).map(|_| xs.sample(&mut rng)).collect();
        let y = x.iter().map(|&xi| xi + 0.1 * ns.sample(&mut rng)).collect();
        let index = rng.random_range(0..dim);
        Ok(SensitivitySample {
            x: FeatureVector::new(x)?,
            y: FeatureVector::new(y)?,
            index,
        })
    }

    /// `x` with `delta` added to the selected component.
    pub fn perturbed(&self, delta: f64) -> Result<FeatureVector> {
        let mut v = self.x.as_slice().to_vec();
        v[self.index] += delta;
        FeatureVector::new(v)
    }

    fn measures(&self, x: &FeatureVector) -> Result<[f64; 3]> {
        Ok([
            vector_jaccard(x, &self.y, &SimilarityParams::default())?,
            cosine(x, &self.y)?,
            normalized_euclidean(x, &self.y)?,
        ])
    }

    /// `|m(x′, y) − m(x, y)| / |m(x, y)|` for each measure.
    pub fn relative_variation(&self, delta: f64) -> Result<[f64; 3]> {
        let before = self.measures(&self.x)?;
        let after = self.measures(&self.perturbed(delta)?)?;
        let mut out = [0.0; 3];
        for k in 0..3 {
            if before[k] == 0.0 {
                return Err(Error::Domain(format!(
                    "{} is zero before perturbation",
                    SENSITIVITY_MEASURES[k]
                )));
            }
            out[k] = (after[k] - before[k]).abs() / before[k].abs();
        }
        Ok(out)
    }
}

/// `∂J/∂x_i = 1/Σy` for the Jaccard index of an all-positive pair with
/// `x < y` componentwise.
pub fn jaccard_gradient_simplified(y: &FeatureVector) -> f64 {
    1.0 / y.as_slice().iter().sum::<f64>()
}

/// Monte-Carlo sweep over perturbation magnitudes (`cfg.values`).
///
/// Trial `t` draws its sample from stream `t`, so every magnitude sees the
/// same set of vectors and the curves differ only through the perturbation.
pub fn run_sensitivity(cfg: &SweepConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let samples: Vec<SensitivitySample> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            SensitivitySample::draw(cfg.sensitivity_dim, &RandomSource::new(cfg.seed, t as u64))
        })
        .collect::<Result<_>>()?;

    let mut table = CurveTable::default();
    for &delta in &cfg.values {
        let variations: Vec<[f64; 3]> = samples
            .par_iter()
            .map(|s| s.relative_variation(delta))
            .collect::<Result<_>>()?;
        for (k, label) in SENSITIVITY_MEASURES.iter().enumerate() {
            let column: Vec<f64> = variations.iter().map(|v| v[k]).collect();
            let (mean, std) = mean_std(&column);
            table.push(delta, *label, mean, std);
        }
    }
    Ok(table)
}
