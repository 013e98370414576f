//! Supervised color segmentation with an ensemble of multiset neurons.
//!
//! Each seed sample becomes one neuron whose template is the RGB window
//! around the sample. A pixel belongs to the object when at least one neuron
//! fires on the window around that pixel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::neuron::{MultisetNeuron, Neuron};
use crate::simkernel::{FeatureVector, Method, SimilarityParams};

/// Threshold used with Jaccard neurons unless overridden.
pub const DEFAULT_JACCARD_THRESHOLD: f64 = 0.8;
/// Threshold used with coincidence neurons unless overridden.
pub const DEFAULT_COINCIDENCE_THRESHOLD: f64 = 0.75;
pub const DEFAULT_WINDOW_RADIUS: usize = 1;

pub fn default_threshold(method: Method) -> f64 {
    match method {
        Method::Coincidence => DEFAULT_COINCIDENCE_THRESHOLD,
        _ => DEFAULT_JACCARD_THRESHOLD,
    }
}

/// RGB image with channels in `[0, 1]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    width: usize,
    height: usize,
    pixels: Vec<[f64; 3]>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[f64; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParam(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                left: width * height,
                right: pixels.len(),
            });
        }
        if pixels.iter().flatten().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::InvalidParam(
                "channel values must lie in [0, 1]".into(),
            ));
        }
        Ok(ColorImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        self.pixels[y * self.width + x]
    }

    /// Multiplies every channel by `k`, which must keep channels in `[0, 1]`.
    pub fn scaled(&self, k: f64) -> Result<ColorImage> {
        let pixels = self
            .pixels
            .iter()
            .map(|p| [p[0] * k, p[1] * k, p[2] * k])
            .collect();
        ColorImage::new(self.width, self.height, pixels)
    }

    /// Window of radius `r` around `(x, y)`: rows top to bottom, pixels left
    /// to right, channels interleaved. Coordinates outside the image are
    /// clamped to the nearest edge pixel.
    fn window(&self, x: usize, y: usize, r: usize, out: &mut Vec<f64>) {
        out.clear();
        let (x, y, r) = (x as isize, y as isize, r as isize);
        let (wmax, hmax) = (self.width as isize - 1, self.height as isize - 1);
        for dy in -r..=r {
            let yy = (y + dy).clamp(0, hmax) as usize;
            for dx in -r..=r {
                let xx = (x + dx).clamp(0, wmax) as usize;
                out.extend_from_slice(&self.pixels[yy * self.width + xx]);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSample {
    pub x: usize,
    pub y: usize,
    pub window_radius: usize,
}

impl SeedSample {
    pub fn new(x: usize, y: usize, window_radius: usize) -> Self {
        SeedSample {
            x,
            y,
            window_radius,
        }
    }

    pub fn template_len(&self) -> usize {
        let side = 2 * self.window_radius + 1;
        3 * side * side
    }
}

/// Parses `x y` lines into samples; blank lines and `#` comments are skipped.
pub fn parse_samples(text: &str, window_radius: usize) -> Result<Vec<SeedSample>> {
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad =
            || Error::InvalidParam(format!("line {}: expected `x y`, got {line:?}", lineno + 1));
        let mut parts = line
            .split(|c: char| c.is_ascii_whitespace() || c == ',')
            .filter(|s| !s.is_empty());
        let x = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let y = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        samples.push(SeedSample::new(x, y, window_radius));
    }
    Ok(samples)
}

/// RGB values of the window around `s`, see [`ColorImage`] for the layout.
pub fn extract_template(img: &ColorImage, s: &SeedSample) -> Result<FeatureVector> {
    if s.x >= img.width || s.y >= img.height {
        return Err(Error::OutOfBounds {
            x: s.x,
            y: s.y,
            width: img.width,
            height: img.height,
        });
    }
    let mut buf = Vec::with_capacity(s.template_len());
    img.window(s.x, s.y, s.window_radius, &mut buf);
    FeatureVector::new(buf)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmenter {
    neurons: Vec<MultisetNeuron>,
    threshold: f64,
    params: SimilarityParams,
    window_radius: usize,
}

impl Segmenter {
    pub fn neurons(&self) -> &[MultisetNeuron] {
        &self.neurons
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn params(&self) -> &SimilarityParams {
        &self.params
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }
}

/// One neuron per sample, all sharing `params` and `threshold`. Duplicate
/// samples give duplicate neurons.
pub fn build_segmenter(
    img: &ColorImage,
    samples: &[SeedSample],
    params: SimilarityParams,
    threshold: f64,
) -> Result<Segmenter> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidParam("at least one seed sample is required".into()))?;
    let window_radius = first.window_radius;
    let mut neurons = Vec::with_capacity(samples.len());
    for (index, s) in samples.iter().enumerate() {
        if s.window_radius != window_radius {
            return Err(Error::InvalidParam(format!(
                "sample {index} has window radius {}, expected {window_radius}",
                s.window_radius
            )));
        }
        let template = extract_template(img, s)?;
        if template.is_zero() {
            return Err(Error::NullTemplate { index });
        }
        neurons.push(MultisetNeuron::new(template, params, threshold)?);
    }
    Ok(Segmenter {
        neurons,
        threshold,
        params,
        window_radius,
    })
}

/// Row-major binary image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::LengthMismatch {
                left: width * height,
                right: bits.len(),
            });
        }
        Ok(Mask {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

/// Marks every pixel on which at least one neuron fires. Kernel failures at
/// a pixel (an all-black window against a cross-correlation neuron, say)
/// count as "not fired".
pub fn segment(img: &ColorImage, seg: &Segmenter) -> Result<Mask> {
    let expected = SeedSample::new(0, 0, seg.window_radius).template_len();
    if let Some(n) = seg.neurons.iter().find(|n| n.input_len() != expected) {
        return Err(Error::LengthMismatch {
            left: expected,
            right: n.input_len(),
        });
    }
    let bits: Vec<bool> = (0..img.height)
        .into_par_iter()
        .flat_map_iter(|y| {
            let mut buf = Vec::with_capacity(expected);
            (0..img.width)
                .map(|x| {
                    img.window(x, y, seg.window_radius, &mut buf);
                    let input = match FeatureVector::try_from(buf.as_slice()) {
                        Ok(v) => v,
                        Err(_) => return false,
                    };
                    seg.neurons.iter().any(|n| n.fire(&input).unwrap_or(false))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Mask::new(img.width, img.height, bits)
}
