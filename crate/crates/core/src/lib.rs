//! Lossless predictive image compression with gradient predictors.
//!
//! The pipeline is: causal [`predictors`] estimate each sample, the
//! [`codec`] range codes the wrapped residuals under a gradient-bucket
//! context model, and [`bench`] measures the result over a corpus of PNGs.

pub mod bench;
pub mod codec;
pub mod image;
pub mod predictors;

pub use codec::{decode_image, encode_image, CodecError, CompressedContainer};
pub use image::{BitDepth, RasterImage};
pub use predictors::{predict, CausalNeighborhood, PredictorKind};
