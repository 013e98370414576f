//! Multiset similarity kernels and the neurons built on them.
//!
//! [`simkernel`] holds the kernels (real-valued Jaccard, interiority,
//! coincidence and the cosine baseline). [`neuron`] wraps them as
//! thresholded units, [`stimuli`] generates Gaussian test patterns,
//! [`experiments`] runs the comparison sweeps and [`segmentation`]
//! classifies image pixels from a handful of seed windows.

pub mod error;
pub mod experiments;
pub mod fmt;
pub mod netpbm;
pub mod neuron;
pub mod segmentation;
pub mod simkernel;
pub mod stimuli;

pub use error::{Error, Result};
pub use experiments::{CurveRow, CurveTable, Experiment, SweepConfig};
pub use neuron::{decision_region, DecisionRegion, GeminiNeuron, Grid2d, MultisetNeuron, Neuron};
pub use segmentation::{build_segmenter, segment, ColorImage, Mask, SeedSample, Segmenter};
pub use simkernel::{similarity, AlphaScaling, FeatureVector, Method, SimilarityParams};
pub use stimuli::{GaussianSpec, RandomSource, Raster};
