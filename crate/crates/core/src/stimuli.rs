//! Gaussian stimulus rasters and their perturbations.
//!
//! Pixel `(x, y)` sits at integer coordinates, `x` the column and `y` the
//! row; data is stored row-major.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simkernel::FeatureVector;

/// σ used in place of a zero width.
pub const MIN_SIGMA: f64 = 1e-6;

/// Row-major grid of finite intensities.
///
/// The pixels are held as a [`FeatureVector`], so a raster feeds the kernels
/// directly in its flattened row-major form.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    data: FeatureVector,
}

impl Raster {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParam(format!(
                "raster must be non-empty, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::LengthMismatch {
                left: width * height,
                right: data.len(),
            });
        }
        Ok(Raster {
            width,
            height,
            data: FeatureVector::new(data)?,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Raster::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data.as_slice()[y * self.width + x]
    }

    pub fn values(&self) -> &[f64] {
        self.data.as_slice()
    }

    pub fn features(&self) -> &FeatureVector {
        &self.data
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values()
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn sum(&self) -> f64 {
        self.values().iter().sum()
    }

    fn map(&self, f: impl Fn(usize, f64) -> f64) -> Result<Raster> {
        let data = self
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| f(i, v))
            .collect();
        Raster::new(self.width, self.height, data)
    }

    fn zip_add(&self, other: &Raster) -> Result<Raster> {
        self.map(|i, v| v + other.values()[i])
    }
}

/// Circularly symmetric Gaussian bump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    sigma: f64,
    center: (f64, f64),
    amplitude: f64,
}

impl GaussianSpec {
    pub fn new(sigma: f64, center: (f64, f64), amplitude: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParam(format!(
                "sigma must be > 0, got {sigma}"
            )));
        }
        if !(center.0.is_finite() && center.1.is_finite() && amplitude.is_finite()) {
            return Err(Error::InvalidParam(
                "gaussian center and amplitude must be finite".into(),
            ));
        }
        Ok(GaussianSpec {
            sigma,
            center,
            amplitude,
        })
    }

    /// Unit-amplitude Gaussian centered on a `width`×`height` support at
    /// `((w−1)/2, (h−1)/2)`.
    pub fn centered(width: usize, height: usize, sigma: f64) -> Result<Self> {
        GaussianSpec::new(sigma, raster_center(width, height), 1.0)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn shifted(self, dx: f64, dy: f64) -> Result<Self> {
        GaussianSpec::new(
            self.sigma,
            (self.center.0 + dx, self.center.1 + dy),
            self.amplitude,
        )
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        GaussianSpec::new(sigma, self.center, self.amplitude)
    }

    pub fn with_center(self, center: (f64, f64)) -> Result<Self> {
        GaussianSpec::new(self.sigma, center, self.amplitude)
    }

    pub fn with_amplitude(self, amplitude: f64) -> Result<Self> {
        GaussianSpec::new(self.sigma, self.center, amplitude)
    }

    #[inline]
    fn at(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center.0, y - self.center.1);
        self.amplitude * (-0.5 * (dx * dx + dy * dy) / (self.sigma * self.sigma)).exp()
    }
}

pub fn raster_center(width: usize, height: usize) -> (f64, f64) {
    ((width as f64 - 1.0) / 2.0, (height as f64 - 1.0) / 2.0)
}

/// Samples `amplitude · exp(−½ d²/σ²)` at every integer pixel.
pub fn gaussian_pattern(width: usize, height: usize, spec: &GaussianSpec) -> Result<Raster> {
    Raster::from_fn(width, height, |x, y| spec.at(x as f64, y as f64))
}

pub fn scale_intensity(r: &Raster, k: f64) -> Result<Raster> {
    if !k.is_finite() {
        return Err(Error::InvalidParam(format!(
            "intensity factor must be finite, got {k}"
        )));
    }
    r.map(|_, v| v * k)
}

/// Seed and stream selecting one reproducible random sequence.
///
/// Backed by ChaCha8, a counter-based generator: the `n`-th output of a given
/// `(seed, stream)` is fixed regardless of which thread draws it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        RandomSource { seed, stream }
    }

    /// Stream for one trial of one sweep point.
    pub fn for_trial(seed: u64, sweep_index: usize, trial: usize) -> Self {
        RandomSource::new(seed, ((sweep_index as u64) << 32) | trial as u64)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Adds `(level/n_levels) · (u − ½)` to every pixel, `u` uniform on `[0, 1)`.
///
/// Pixel `k` consumes the `k`-th draw of the stream, so the output depends on
/// nothing but the raster and `rng`.
pub fn add_uniform_noise(
    r: &Raster,
    level: u32,
    n_levels: u32,
    rng: &RandomSource,
) -> Result<Raster> {
    if n_levels == 0 || level > n_levels {
        return Err(Error::InvalidParam(format!(
            "noise level {level} outside 0..={n_levels}"
        )));
    }
    if level == 0 {
        return Ok(r.clone());
    }
    let scale = level as f64 / n_levels as f64;
    let mut gen = rng.rng();
    let data = r
        .values()
        .iter()
        .map(|&v| v + scale * (gen.random::<f64>() - 0.5))
        .collect();
    Raster::new(r.width, r.height, data)
}

/// Where one interfering pattern lands and with which sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub center: (f64, f64),
    pub sign: f64,
}

/// Draws `count` uniform pixel positions and fair ±1 signs.
pub fn interference_placements(
    count: usize,
    width: usize,
    height: usize,
    rng: &RandomSource,
) -> Vec<Placement> {
    let mut gen = rng.rng();
    (0..count)
        .map(|_| {
            let x = gen.random_range(0..width) as f64;
            let y = gen.random_range(0..height) as f64;
            let sign = if gen.random::<bool>() { 1.0 } else { -1.0 };
            Placement {
                center: (x, y),
                sign,
            }
        })
        .collect()
}

/// Adds `count` signed copies of `pattern` at random pixel positions.
///
/// Only the width and amplitude of `pattern` are used; centers come from
/// [`interference_placements`]. Patterns near the border are truncated.
pub fn add_interference(
    r: &Raster,
    count: usize,
    pattern: &GaussianSpec,
    rng: &RandomSource,
) -> Result<Raster> {
    let mut out = r.clone();
    for p in interference_placements(count, r.width, r.height, rng) {
        let spec = pattern
            .with_center(p.center)?
            .with_amplitude(p.sign * pattern.amplitude)?;
        out = out.zip_add(&gaussian_pattern(r.width, r.height, &spec)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkernel::{
        coincidence, cosine, interiority, vector_jaccard, Method, SimilarityParams,
    };

    fn reference() -> Raster {
        let spec = GaussianSpec::centered(200, 200, 100.0).unwrap();
        gaussian_pattern(200, 200, &spec).unwrap()
    }

    #[test]
    fn raster_validates_shape() {
        assert!(Raster::new(0, 3, vec![]).is_err());
        assert!(matches!(
            Raster::new(2, 2, vec![1.0; 3]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(Raster::new(1, 1, vec![f64::NAN]).is_err());
        assert!(GaussianSpec::new(0.0, (0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn gaussian_peak_and_falloff() {
        let spec = GaussianSpec::new(100.0, (100.0, 100.0), 1.0).unwrap();
        let g = gaussian_pattern(200, 200, &spec).unwrap();
        assert_eq!(g.get(100, 100), 1.0);
        assert!((g.get(0, 100) - (-0.5f64).exp()).abs() < 1e-15);
        let spec = spec.with_amplitude(2.5).unwrap();
        let g = gaussian_pattern(200, 200, &spec).unwrap();
        assert!((g.get(100, 0) - 2.5 * (-0.5f64).exp()).abs() < 1e-15);
        let zero = gaussian_pattern(10, 7, &spec.with_amplitude(0.0).unwrap()).unwrap();
        assert!(zero.features().is_zero());
    }

    #[test]
    fn gaussian_is_radially_symmetric() {
        let spec = GaussianSpec::new(7.0, (20.0, 20.0), 1.0).unwrap();
        let g = gaussian_pattern(41, 41, &spec).unwrap();
        for (dx, dy) in [(3, 4), (5, 0), (0, 5), (4, 3)] {
            let v = g.get(20 + dx, 20 + dy);
            assert_eq!(v, g.get(20 - dx, 20 - dy));
            assert_eq!(v, g.get(20 + dx, 20 - dy));
            assert_eq!(v, g.get(20 + 5, 20));
        }
    }

    #[test]
    fn default_center_is_support_midpoint() {
        let g = reference();
        assert_eq!(g.get(99, 99), g.get(100, 100));
        assert_eq!(g.get(0, 0), g.get(199, 199));
    }

    #[test]
    fn noise_level_zero_is_identity() {
        let g = reference();
        let out = add_uniform_noise(&g, 0, 20, &RandomSource::new(1, 0)).unwrap();
        assert_eq!(out, g);
        assert!(add_uniform_noise(&g, 21, 20, &RandomSource::new(1, 0)).is_err());
        assert!(add_uniform_noise(&g, 0, 0, &RandomSource::new(1, 0)).is_err());
    }

    #[test]
    fn full_noise_stays_within_half_unit() {
        let g = reference();
        let src = RandomSource::new(42, 3);
        let out = add_uniform_noise(&g, 20, 20, &src).unwrap();
        let deltas: Vec<f64> = out
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| a - b)
            .collect();
        assert!(deltas.iter().all(|d| (-0.5..0.5).contains(d)));
        let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
        assert!(mean.abs() < 0.01);
        assert_eq!(out, add_uniform_noise(&g, 20, 20, &src).unwrap());
        assert_ne!(
            out,
            add_uniform_noise(&g, 20, 20, &RandomSource::new(42, 4)).unwrap()
        );
    }

    #[test]
    fn interference_count_zero_is_identity() {
        let g = reference();
        let spec = GaussianSpec::centered(200, 200, 5.0).unwrap();
        assert_eq!(
            add_interference(&g, 0, &spec, &RandomSource::new(9, 0)).unwrap(),
            g
        );
    }

    #[test]
    fn positive_interference_raises_the_maximum() {
        let g = gaussian_pattern(40, 40, &GaussianSpec::centered(40, 40, 10.0).unwrap()).unwrap();
        let spec = GaussianSpec::centered(40, 40, 3.0).unwrap();
        let src = (0..100)
            .map(|s| RandomSource::new(s, 0))
            .find(|src| interference_placements(1, 40, 40, src)[0].sign > 0.0)
            .expect("some seed draws a positive sign");
        let out = add_interference(&g, 1, &spec, &src).unwrap();
        assert!(out.min_max().1 >= g.min_max().1);
        assert!(out.values().iter().zip(g.values()).all(|(a, b)| a >= b));
    }

    #[test]
    fn interference_is_unbiased() {
        let (w, h) = (20, 20);
        let g = gaussian_pattern(w, h, &GaussianSpec::centered(w, h, 6.0).unwrap()).unwrap();
        let spec = GaussianSpec::centered(w, h, 3.0).unwrap();
        let base = g.sum();
        let diffs: Vec<f64> = (0..1000)
            .map(|s| {
                add_interference(&g, 1, &spec, &RandomSource::new(s, 0))
                    .unwrap()
                    .sum()
                    - base
            })
            .collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn intensity_scaling_laws() {
        let g = reference();
        assert_eq!(scale_intensity(&g, 1.0).unwrap(), g);
        let jp = SimilarityParams::new(Method::RealJaccard);
        let cp = SimilarityParams::new(Method::Coincidence);
        for k in [0.25, 0.5, 2.0, 3.0] {
            let s = scale_intensity(&g, k).unwrap();
            let ratio = k.min(1.0) / k.max(1.0);
            let j = vector_jaccard(s.features(), g.features(), &jp).unwrap();
            let c = coincidence(s.features(), g.features(), &cp).unwrap();
            assert!((j - ratio).abs() < 1e-12);
            assert!((c - ratio * ratio).abs() < 1e-12);
            assert!((cosine(s.features(), g.features()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn narrower_pattern_overlap_is_its_mass_ratio() {
        // A narrower bump lies pointwise inside the reference, so Σmin is its
        // own mass and interiority reduces to the mass ratio, same as Jaccard.
        let g = reference();
        let base = GaussianSpec::centered(200, 200, 100.0).unwrap();
        let jp = SimilarityParams::new(Method::RealJaccard);
        for sigma in [1.0, 30.0, 99.0, 100.0] {
            let narrow = gaussian_pattern(200, 200, &base.with_sigma(sigma).unwrap()).unwrap();
            let i = interiority(narrow.features(), g.features()).unwrap();
            let ratio = narrow.sum() / g.sum();
            assert!((i - ratio).abs() < 1e-12);
            assert!(
                (vector_jaccard(narrow.features(), g.features(), &jp).unwrap() - i).abs() < 1e-12
            );
        }
    }
}
