//! Shared inputs for the benchmarks.

use multisim_core::stimuli::gaussian_pattern;
use multisim_core::{ColorImage, FeatureVector, GaussianSpec, SeedSample};

/// A centered Gaussian and a copy displaced by `shift` pixels along both axes.
pub fn gaussian_pair(size: usize, sigma: f64, shift: f64) -> (FeatureVector, FeatureVector) {
    let spec = GaussianSpec::centered(size, size, sigma).expect("valid sigma");
    let a = gaussian_pattern(size, size, &spec).expect("valid raster");
    let b = gaussian_pattern(size, size, &spec.shifted(shift, shift).expect("finite"))
        .expect("valid raster");
    (a.features().clone(), b.features().clone())
}

/// Deterministic signed test vector of length `n`.
pub fn ramp(n: usize, phase: f64) -> FeatureVector {
    FeatureVector::new((0..n).map(|i| (i as f64 * 0.37 + phase).sin()).collect())
        .expect("finite values")
}

/// Two flat color halves with a small fixed texture, plus three seeds in
/// the left half.
pub fn two_region_image(size: usize) -> (ColorImage, Vec<SeedSample>) {
    let pixels = (0..size * size)
        .map(|k| {
            let (x, y) = (k % size, k / size);
            let t = 0.05 * (((x * 7 + y * 13) % 11) as f64 / 10.0 - 0.5);
            let base = if x < size / 2 {
                [0.8, 0.2, 0.2]
            } else {
                [0.2, 0.3, 0.8]
            };
            base.map(|c| (c + t).clamp(0.0, 1.0))
        })
        .collect();
    let img = ColorImage::new(size, size, pixels).expect("valid image");
    let q = size / 4;
    let seeds = vec![
        SeedSample::new(q, q, 1),
        SeedSample::new(q, 2 * q, 1),
        SeedSample::new(q, 3 * q, 1),
    ];
    (img, seeds)
}
