//! Low-dimensional views of the kernels: angle sweeps, 2-D similarity maps
//! and the size of equisimilarity regions.

use super::{score, CurveTable, SweepConfig};
use crate::error::{Error, Result};
use crate::neuron::Grid2d;
use crate::simkernel::{FeatureVector, SimilarityParams};
use crate::stimuli::Raster;

/// Compares the unit vector at angle θ (sweep value, radians) with `[0, 1]`.
pub fn run_angle_sweep(cfg: &SweepConfig) -> Result<CurveTable> {
    cfg.validate()?;
    cfg.require_methods()?;
    let reference = FeatureVector::new(vec![0.0, 1.0])?;
    let mut table = CurveTable::default();
    for &theta in &cfg.values {
        let versor = FeatureVector::new(vec![theta.cos(), theta.sin()])?;
        for p in &cfg.methods {
            table.push(theta, p.label(), score(&versor, &reference, p)?, 0.0);
        }
    }
    Ok(table)
}

/// Kernel value of every grid point against `reference`.
///
/// The raster is `nx` wide and `ny` high; raster row 0 is the lowest `y`.
/// Null comparisons map to 0.
pub fn similarity_map_2d(
    reference: &FeatureVector,
    grid: &Grid2d,
    p: &SimilarityParams,
) -> Result<Raster> {
    if reference.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: reference.len(),
        });
    }
    let values = grid.evaluate(|x, y| {
        let v = FeatureVector::new(vec![x, y])?;
        score(&v, reference, p)
    });
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    Raster::new(grid.nx, grid.ny, values)
}

/// Extent of the region where the Jaccard index against a 2-D reference
/// stays at or above `level`, measured along an axis through the reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquisimExtents {
    /// Reach beyond the reference (away from the origin).
    pub c: f64,
    /// Reach towards the origin.
    pub e: f64,
    pub level: f64,
}

/// `c = S(1 − d)/d` and `e = S(1 − d)` with `S = |y₁| + |y₂|`.
pub fn equisimilarity_extents(reference: &FeatureVector, level: f64) -> Result<EquisimExtents> {
    if reference.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: reference.len(),
        });
    }
    if !(level > 0.0 && level <= 1.0) {
        return Err(Error::Domain(format!(
            "level must lie in (0, 1], got {level}"
        )));
    }
    let s: f64 = reference.as_slice().iter().map(|v| v.abs()).sum();
    Ok(EquisimExtents {
        c: s * (1.0 - level) / level,
        e: s * (1.0 - level),
        level,
    })
}
