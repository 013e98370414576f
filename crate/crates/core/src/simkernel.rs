//! Scalar and vector similarity kernels on real-valued multisets.
//!
//! Vectors are treated as real-valued multisets: each coordinate is a
//! (possibly negative) multiplicity. Pairwise minima of absolute values
//! carry the sign product of the two operands, so aligned features add to
//! the similarity and anti-aligned ones subtract from it.
//!
//! All accumulations run in index-ascending order in `f64`, so results are
//! bit-reproducible for a given input.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(FeatureVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Elementwise product. Lengths must match.
    pub fn hadamard(&self, other: &FeatureVector) -> Result<FeatureVector> {
        check_lengths(self, other)?;
        let values = self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect();
        FeatureVector::new(values)
    }

    /// Multiplies every element by `k`.
    pub fn scaled(&self, k: f64) -> Result<FeatureVector> {
        FeatureVector::new(self.0.iter().map(|v| v * k).collect())
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        FeatureVector::new(values)
    }
}

impl TryFrom<&[f64]> for FeatureVector {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        FeatureVector::new(values.to_vec())
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl FromStr for FeatureVector {
    type Err = Error;

    /// Parses a comma-separated list such as `1,-2.5,3`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<f64>()
                    .map_err(|_| Error::InvalidParam(format!("not a number: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FeatureVector::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Cosine of the two vectors, the normalized inner product.
    CrossCorrelation,
    Interiority,
    RealJaccard,
    Coincidence,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::CrossCorrelation,
        Method::Interiority,
        Method::RealJaccard,
        Method::Coincidence,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::CrossCorrelation => "crosscorr",
            Method::Interiority => "interiority",
            Method::RealJaccard => "jaccard",
            Method::Coincidence => "coincidence",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crosscorr" | "cosine" => Ok(Method::CrossCorrelation),
            "interiority" => Ok(Method::Interiority),
            "jaccard" => Ok(Method::RealJaccard),
            "coincidence" => Ok(Method::Coincidence),
            other => Err(Error::InvalidParam(format!("unknown method {other:?}"))),
        }
    }
}

/// How the α weights are normalized when α ≠ 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AlphaScaling {
    /// `2(αP − (1−α)N) / den`; continuous with the parameterless index at α = 0.5.
    #[default]
    Doubled,
    /// `(αP − (1−α)N) / den`.
    Plain,
}

impl FromStr for AlphaScaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "doubled" => Ok(AlphaScaling::Doubled),
            "plain" => Ok(AlphaScaling::Plain),
            other => Err(Error::InvalidParam(format!(
                "unknown alpha scaling {other:?}"
            ))),
        }
    }
}

/// Kernel selection plus its strictness exponent and sign asymmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityParams {
    method: Method,
    d_power: f64,
    alpha: f64,
    alpha_scaling: AlphaScaling,
}

impl SimilarityParams {
    pub fn new(method: Method) -> Self {
        SimilarityParams {
            method,
            d_power: 1.0,
            alpha: 0.5,
            alpha_scaling: AlphaScaling::Doubled,
        }
    }

    pub fn with_d_power(mut self, d_power: f64) -> Result<Self> {
        if !(d_power.is_finite() && d_power >= 0.0) {
            return Err(Error::InvalidParam(format!(
                "strictness exponent must be finite and >= 0, got {d_power}"
            )));
        }
        self.d_power = d_power;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64, scaling: AlphaScaling) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParam(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        self.alpha = alpha;
        self.alpha_scaling = scaling;
        Ok(self)
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn d_power(&self) -> f64 {
        self.d_power
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_scaling(&self) -> AlphaScaling {
        self.alpha_scaling
    }

    /// Column label used in experiment tables, e.g. `coincidence_D3`.
    pub fn label(&self) -> String {
        let mut s = self.method.label().to_owned();
        if self.d_power != 1.0 {
            s.push_str(&format!("_D{}", self.d_power));
        }
        if self.alpha != 0.5 {
            let tag = match self.alpha_scaling {
                AlphaScaling::Doubled => "d",
                AlphaScaling::Plain => "p",
            };
            s.push_str(&format!("_a{}{}", self.alpha, tag));
        }
        s
    }

    /// Largest magnitude the configured kernel can return.
    pub fn max_magnitude(&self) -> f64 {
        let base = match (self.method, self.alpha_scaling) {
            (Method::RealJaccard | Method::Coincidence, _) if self.alpha == 0.5 => 1.0,
            (Method::RealJaccard | Method::Coincidence, AlphaScaling::Doubled) => {
                2.0 * self.alpha.max(1.0 - self.alpha)
            }
            (Method::RealJaccard | Method::Coincidence, AlphaScaling::Plain) => {
                self.alpha.max(1.0 - self.alpha)
            }
            _ => 1.0,
        };
        if self.d_power == 0.0 {
            1.0
        } else {
            base.powf(self.d_power)
        }
    }
}

impl Default for SimilarityParams {
    fn default() -> Self {
        SimilarityParams::new(Method::RealJaccard)
    }
}

/// Sign with the convention `sign(0) = +1`.
#[inline]
pub fn sign0(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Signed minimum: the smaller magnitude, carrying the product of the signs.
#[inline]
pub fn smin(x: f64, y: f64) -> f64 {
    sign0(x) * sign0(y) * x.abs().min(y.abs())
}

/// Raises `s` to `d_power` while keeping its sign.
///
/// For odd integer exponents this is plain `s^D`; for even or fractional ones
/// the sign of `s` is carried over unchanged.
#[inline]
pub fn power_sharpen(s: f64, d_power: f64) -> f64 {
    if d_power == 1.0 {
        return s;
    }
    sign0(s) * s.abs().powf(d_power)
}

/// Real-valued Jaccard index of two scalars, sharpened by `d_power`.
pub fn scalar_jaccard(x: f64, y: f64, d_power: f64) -> Result<f64> {
    let den = x.abs().max(y.abs());
    if den == 0.0 {
        return Err(Error::NullComparison);
    }
    Ok(power_sharpen(smin(x, y) / den, d_power))
}

/// Kronecker delta that also reports exact anti-alignment as −1.
pub fn signed_kronecker(x: f64, y: f64) -> f64 {
    if x == y {
        1.0
    } else if x == -y {
        -1.0
    } else {
        0.0
    }
}

fn check_lengths(x: &FeatureVector, y: &FeatureVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Pairwise sums shared by the Jaccard, interiority and coincidence kernels.
#[derive(Debug, Clone, Copy, Default)]
struct MultisetSums {
    /// Σ min(|x|,|y|) over pairs with equal signs (zeros excluded).
    aligned: f64,
    /// Σ min(|x|,|y|) over pairs with opposite signs.
    opposed: f64,
    /// Σ min(|x|,|y|) over all pairs.
    min_sum: f64,
    /// Σ max(|x|,|y|).
    max_sum: f64,
    abs_x: f64,
    abs_y: f64,
}

impl MultisetSums {
    fn of(x: &[f64], y: &[f64]) -> Self {
        let mut s = MultisetSums::default();
        for (&a, &b) in x.iter().zip(y) {
            let (ma, mb) = (a.abs(), b.abs());
            let lo = ma.min(mb);
            if sign0(a) == sign0(b) {
                s.aligned += lo;
            } else {
                s.opposed += lo;
            }
            s.min_sum += lo;
            s.max_sum += ma.max(mb);
            s.abs_x += ma;
            s.abs_y += mb;
        }
        s
    }

    fn jaccard_raw(&self, alpha: f64, scaling: AlphaScaling) -> Result<f64> {
        if self.max_sum == 0.0 {
            return Err(Error::NullComparison);
        }
        let num = if alpha == 0.5 {
            self.aligned - self.opposed
        } else {
            let weighted = alpha * self.aligned - (1.0 - alpha) * self.opposed;
            match scaling {
                AlphaScaling::Doubled => 2.0 * weighted,
                AlphaScaling::Plain => weighted,
            }
        };
        Ok(num / self.max_sum)
    }

    fn interiority(&self) -> Result<f64> {
        let den = self.abs_x.max(self.abs_y);
        if den == 0.0 {
            return Err(Error::NullComparison);
        }
        Ok(self.min_sum / den)
    }
}

/// Real-valued Jaccard index of two vectors.
///
/// With `P` the summed minima of same-sign pairs, `N` that of opposite-sign
/// pairs and `den = Σ max(|x_i|, |y_i|)`, the raw index is `(P − N)/den` at
/// α = 0.5 (for either scaling). Other α values weight the two sums, see
/// [`AlphaScaling`]. The result is then sharpened by the strictness exponent.
pub fn vector_jaccard(x: &FeatureVector, y: &FeatureVector, p: &SimilarityParams) -> Result<f64> {
    check_lengths(x, y)?;
    let raw = MultisetSums::of(x.as_slice(), y.as_slice()).jaccard_raw(p.alpha, p.alpha_scaling)?;
    Ok(power_sharpen(raw, p.d_power))
}

/// Interiority (overlap) index: `Σ min(|x_i|,|y_i|) / max(Σ|x_i|, Σ|y_i|)`.
pub fn interiority(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    check_lengths(x, y)?;
    MultisetSums::of(x.as_slice(), y.as_slice()).interiority()
}

/// Coincidence index: the α-aware Jaccard times the interiority, with the
/// strictness exponent applied once to the product.
pub fn coincidence(x: &FeatureVector, y: &FeatureVector, p: &SimilarityParams) -> Result<f64> {
    check_lengths(x, y)?;
    let sums = MultisetSums::of(x.as_slice(), y.as_slice());
    let j = sums.jaccard_raw(p.alpha, p.alpha_scaling)?;
    let i = sums.interiority()?;
    Ok(power_sharpen(j * i, p.d_power))
}

/// Cosine similarity, the normalized cross-correlation of the two vectors.
pub fn cosine(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    check_lengths(x, y)?;
    let (mut dot, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.as_slice().iter().zip(y.as_slice()) {
        dot += a * b;
        xx += a * a;
        yy += b * b;
    }
    if xx == 0.0 || yy == 0.0 {
        return Err(Error::NullComparison);
    }
    Ok((dot / (xx * yy).sqrt()).clamp(-1.0, 1.0))
}

/// Euclidean distance divided by the mean of the two norms:
/// `2‖x − y‖ / (‖x‖ + ‖y‖)`.
pub fn normalized_euclidean(x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    check_lengths(x, y)?;
    let (mut dd, mut xx, mut yy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.as_slice().iter().zip(y.as_slice()) {
        dd += (a - b) * (a - b);
        xx += a * a;
        yy += b * b;
    }
    let den = xx.sqrt() + yy.sqrt();
    if den == 0.0 {
        return Err(Error::NullComparison);
    }
    Ok(2.0 * dd.sqrt() / den)
}

/// Evaluates the kernel selected by `p`.
///
/// The strictness exponent applies to every method; for cross-correlation
/// and interiority it is applied to the kernel value directly.
pub fn similarity(x: &FeatureVector, y: &FeatureVector, p: &SimilarityParams) -> Result<f64> {
    match p.method {
        Method::RealJaccard => vector_jaccard(x, y, p),
        Method::Coincidence => coincidence(x, y, p),
        Method::Interiority => Ok(power_sharpen(interiority(x, y)?, p.d_power)),
        Method::CrossCorrelation => Ok(power_sharpen(cosine(x, y)?, p.d_power)),
    }
}
