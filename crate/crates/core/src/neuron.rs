//! Multiset neurons: a stored template compared against the input through a
//! similarity kernel, followed by a hard-limit output.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simkernel::{similarity, FeatureVector, SimilarityParams};

/// Anything that produces a similarity response and fires on a threshold.
pub trait Neuron {
    /// Length of the input vector the neuron accepts.
    fn input_len(&self) -> usize;

    /// Kernel value before the output nonlinearity.
    fn response(&self, input: &FeatureVector) -> Result<f64>;

    fn threshold(&self) -> f64;

    /// Hard-limit output; the threshold is inclusive.
    fn fire(&self, input: &FeatureVector) -> Result<bool> {
        Ok(self.response(input)? >= self.threshold())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultisetNeuron {
    template: FeatureVector,
    params: SimilarityParams,
    threshold: f64,
}

impl MultisetNeuron {
    /// Fails with [`Error::NullTemplate`] for an all-zero template.
    ///
    /// Any finite threshold is accepted; one above the kernel's attainable
    /// maximum simply never fires.
    pub fn new(template: FeatureVector, params: SimilarityParams, threshold: f64) -> Result<Self> {
        if template.is_zero() {
            return Err(Error::NullTemplate { index: 0 });
        }
        if !threshold.is_finite() {
            return Err(Error::InvalidParam(format!(
                "threshold must be finite, got {threshold}"
            )));
        }
        Ok(MultisetNeuron {
            template,
            params,
            threshold,
        })
    }

    pub fn template(&self) -> &FeatureVector {
        &self.template
    }

    pub fn params(&self) -> &SimilarityParams {
        &self.params
    }
}

impl Neuron for MultisetNeuron {
    fn input_len(&self) -> usize {
        self.template.len()
    }

    fn response(&self, input: &FeatureVector) -> Result<f64> {
        similarity(&self.template, input, &self.params)
    }

    fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Multiset neuron whose inputs are multiplied by per-input synaptic weights
/// before the comparison with the template.
#[derive(Debug, Clone, PartialEq)]
pub struct GeminiNeuron {
    base: MultisetNeuron,
    weights: FeatureVector,
}

impl GeminiNeuron {
    pub fn new(base: MultisetNeuron, weights: FeatureVector) -> Result<Self> {
        if weights.len() != base.template.len() {
            return Err(Error::LengthMismatch {
                left: base.template.len(),
                right: weights.len(),
            });
        }
        Ok(GeminiNeuron { base, weights })
    }

    /// A gemini with all weights equal to one.
    pub fn unit(base: MultisetNeuron) -> Self {
        let weights = FeatureVector::new(vec![1.0; base.template.len()]).expect("finite");
        GeminiNeuron { base, weights }
    }

    pub fn base(&self) -> &MultisetNeuron {
        &self.base
    }

    pub fn weights(&self) -> &FeatureVector {
        &self.weights
    }
}

impl Neuron for GeminiNeuron {
    fn input_len(&self) -> usize {
        self.weights.len()
    }

    fn response(&self, input: &FeatureVector) -> Result<f64> {
        let weighted = self.weights.hadamard(input)?;
        self.base.response(&weighted)
    }

    fn threshold(&self) -> f64 {
        self.base.threshold
    }
}

/// Axis-aligned sampling grid over a 2-D box.
///
/// Sample points include both bounds: `x_i = lo + i·(hi − lo)/(nx − 1)`.
/// Each point is the center of a cell one spacing wide. Row `j` holds the
/// points with `y = y_j`, so row 0 is the lowest `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2d {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid2d {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParam(format!(
                "grid resolution must be at least 2x2, got {nx}x{ny}"
            )));
        }
        let finite = [x_range.0, x_range.1, y_range.0, y_range.1]
            .iter()
            .all(|v| v.is_finite());
        if !finite || x_range.0 >= x_range.1 || y_range.0 >= y_range.1 {
            return Err(Error::InvalidParam(
                "grid bounds must be finite and increasing".into(),
            ));
        }
        Ok(Grid2d {
            x_range,
            y_range,
            nx,
            ny,
        })
    }

    /// Square grid `[lo, hi]²` with `n` points per axis.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Grid2d::new((lo, hi), (lo, hi), n, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / (self.ny - 1) as f64
    }

    pub fn x(&self, col: usize) -> f64 {
        self.x_range.0 + col as f64 * self.dx()
    }

    pub fn y(&self, row: usize) -> f64 {
        self.y_range.0 + row as f64 * self.dy()
    }

    /// Column whose sample point is nearest to `x`, clamped to the grid.
    pub fn col_of(&self, x: f64) -> usize {
        let c = ((x - self.x_range.0) / self.dx()).round();
        c.clamp(0.0, (self.nx - 1) as f64) as usize
    }

    pub fn row_of(&self, y: f64) -> usize {
        let r = ((y - self.y_range.0) / self.dy()).round();
        r.clamp(0.0, (self.ny - 1) as f64) as usize
    }

    /// Evaluates `f` at every grid point in row-major order.
    pub fn evaluate<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(f64, f64) -> T + Sync,
    {
        (0..self.ny)
            .into_par_iter()
            .flat_map_iter(|row| {
                let y = self.y(row);
                let f = &f;
                (0..self.nx).map(move |col| f(self.x(col), y))
            })
            .collect()
    }
}

/// Rasterized firing pattern of a two-input neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRegion {
    pub grid: Grid2d,
    /// Row-major, `grid.ny` rows of `grid.nx` cells.
    pub mask: Vec<bool>,
}

impl DecisionRegion {
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.mask[row * self.grid.nx + col]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Contiguous run of fired cells along `row` that contains `col`, as
    /// inclusive `(first, last)` column indices.
    pub fn row_run(&self, row: usize, col: usize) -> Option<(usize, usize)> {
        if !self.get(col, row) {
            return None;
        }
        let mut lo = col;
        while lo > 0 && self.get(lo - 1, row) {
            lo -= 1;
        }
        let mut hi = col;
        while hi + 1 < self.grid.nx && self.get(hi + 1, row) {
            hi += 1;
        }
        Some((lo, hi))
    }

    /// Contiguous run of fired cells along `col` that contains `row`.
    pub fn col_run(&self, col: usize, row: usize) -> Option<(usize, usize)> {
        if !self.get(col, row) {
            return None;
        }
        let mut lo = row;
        while lo > 0 && self.get(col, lo - 1) {
            lo -= 1;
        }
        let mut hi = row;
        while hi + 1 < self.grid.ny && self.get(col, hi + 1) {
            hi += 1;
        }
        Some((lo, hi))
    }
}

/// Fires the neuron at every grid point. Kernel errors count as "not fired".
pub fn decision_region<N: Neuron + Sync>(neuron: &N, grid: &Grid2d) -> Result<DecisionRegion> {
    if neuron.input_len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: neuron.input_len(),
        });
    }
    let mask = grid.evaluate(|x, y| {
        FeatureVector::new(vec![x, y])
            .and_then(|v| neuron.fire(&v))
            .unwrap_or(false)
    });
    Ok(DecisionRegion { grid: *grid, mask })
}
