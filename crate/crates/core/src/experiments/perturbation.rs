//! Single-neuron sweeps on a Gaussian reference stimulus.

use rayon::prelude::*;

use super::{mean_std, score, CurveTable, Experiment, SweepConfig};
use crate::error::{Error, Result};
use crate::simkernel::{Method, SimilarityParams};
use crate::stimuli::{
    add_interference, add_uniform_noise, gaussian_pattern, scale_intensity, GaussianSpec,
    RandomSource, Raster, MIN_SIGMA,
};

fn reference(cfg: &SweepConfig) -> Result<(GaussianSpec, Raster)> {
    let spec = GaussianSpec::centered(cfg.width, cfg.height, cfg.sigma)?;
    let raster = gaussian_pattern(cfg.width, cfg.height, &spec)?;
    Ok((spec, raster))
}

/// Runs `trial` for every (sweep point, trial index) and aggregates the
/// per-method scores. Sweep points run in parallel; the table is assembled
/// in sweep order, so the result does not depend on scheduling.
fn sweep<F>(cfg: &SweepConfig, trials: usize, probe: F) -> Result<CurveTable>
where
    F: Fn(usize, f64, usize) -> Result<Raster> + Sync,
{
    cfg.validate()?;
    cfg.require_methods()?;
    let (_, reference) = reference(cfg)?;
    let per_point: Vec<Vec<(f64, f64)>> = cfg
        .values
        .par_iter()
        .enumerate()
        .map(|(idx, &v)| {
            let mut scores = vec![Vec::with_capacity(trials); cfg.methods.len()];
            for t in 0..trials {
                let p = probe(idx, v, t)?;
                for (m, params) in cfg.methods.iter().enumerate() {
                    scores[m].push(score(reference.features(), p.features(), params)?);
                }
            }
            Ok(scores.iter().map(|s| mean_std(s)).collect())
        })
        .collect::<Result<_>>()?;

    let mut table = CurveTable::default();
    for (&v, stats) in cfg.values.iter().zip(per_point) {
        for (params, (mean, std)) in cfg.methods.iter().zip(stats) {
            table.push(v, params.label(), mean, std);
        }
    }
    Ok(table)
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v < 0.0 || v.fract() != 0.0 {
        return Err(Error::InvalidParam(format!(
            "{what} must be a non-negative integer, got {v}"
        )));
    }
    Ok(v as usize)
}

/// Reference against a copy displaced by `(s, s)` pixels for each sweep
/// value `s`.
pub fn run_displacement(cfg: &SweepConfig) -> Result<CurveTable> {
    let base = GaussianSpec::centered(cfg.width, cfg.height, cfg.sigma)?;
    sweep(cfg, 1, |_, s, _| {
        as_count(s, "displacement")?;
        gaussian_pattern(cfg.width, cfg.height, &base.shifted(s, s)?)
    })
}

/// Reference against `k` times a copy shifted by `probe_shift` along both
/// axes, for each sweep value `k`.
pub fn run_intensity(cfg: &SweepConfig) -> Result<CurveTable> {
    let base = GaussianSpec::centered(cfg.width, cfg.height, cfg.sigma)?;
    let shifted = gaussian_pattern(
        cfg.width,
        cfg.height,
        &base.shifted(cfg.probe_shift, cfg.probe_shift)?,
    )?;
    sweep(cfg, 1, |_, k, _| scale_intensity(&shifted, k))
}

/// Reference against a concentric Gaussian of width σ = sweep value. A
/// width of 0 is sampled at [`MIN_SIGMA`].
pub fn run_width(cfg: &SweepConfig) -> Result<CurveTable> {
    let base = GaussianSpec::centered(cfg.width, cfg.height, cfg.sigma)?;
    sweep(cfg, 1, |_, sigma, _| {
        if sigma < 0.0 {
            return Err(Error::InvalidParam(format!(
                "width must be >= 0, got {sigma}"
            )));
        }
        let sigma = if sigma == 0.0 { MIN_SIGMA } else { sigma };
        gaussian_pattern(cfg.width, cfg.height, &base.with_sigma(sigma)?)
    })
}

/// Reference against itself plus uniform noise of level `i / noise_levels`,
/// averaged over `trials` independent draws per level.
pub fn run_noise(cfg: &SweepConfig) -> Result<CurveTable> {
    let (_, reference) = reference(cfg)?;
    sweep(cfg, cfg.trials, |idx, level, t| {
        let level = as_count(level, "noise level")?;
        let level = u32::try_from(level)
            .map_err(|_| Error::InvalidParam(format!("noise level {level} too large")))?;
        add_uniform_noise(
            &reference,
            level,
            cfg.noise_levels,
            &RandomSource::for_trial(cfg.seed, idx, t),
        )
    })
}

/// Reference against itself plus `n` randomly placed, randomly signed
/// Gaussians, averaged over `trials` draws per count.
pub fn run_interference(cfg: &SweepConfig) -> Result<CurveTable> {
    let (_, reference) = reference(cfg)?;
    let pattern = GaussianSpec::new(cfg.interference_sigma, (0.0, 0.0), 1.0)?;
    sweep(cfg, cfg.trials, |idx, n, t| {
        let n = as_count(n, "interference count")?;
        add_interference(
            &reference,
            n,
            &pattern,
            &RandomSource::for_trial(cfg.seed, idx, t),
        )
    })
}

/// Repeats a base sweep with the coincidence kernel at each strictness
/// exponent in `d_values`. Columns are labelled `coincidence_D{d}`
/// (`coincidence` for D = 1).
pub fn run_strictness(base: Experiment, cfg: &SweepConfig, d_values: &[f64]) -> Result<CurveTable> {
    if d_values.is_empty() {
        return Err(Error::InvalidParam(
            "at least one strictness exponent is required".into(),
        ));
    }
    if matches!(base, Experiment::Sensitivity | Experiment::Angles) {
        return Err(Error::InvalidParam(format!(
            "strictness sweep is not defined for the {base} experiment"
        )));
    }
    let methods = d_values
        .iter()
        .map(|&d| SimilarityParams::new(Method::Coincidence).with_d_power(d))
        .collect::<Result<Vec<_>>>()?;
    let cfg = SweepConfig {
        methods,
        ..cfg.clone()
    };
    base.run(&cfg)
}
