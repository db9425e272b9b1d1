use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{ImageError, RasterImage};

/// Gaussian noise parameters. `variance` is on the normalized `[0, 1]`
/// intensity scale, so 0.1 means a standard deviation of `sqrt(0.1) * max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub variance: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(variance: f64, seed: u64) -> Result<Self, ImageError> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(ImageError::InvalidVariance(variance));
        }
        Ok(NoiseSpec { variance, seed })
    }
}

/// Adds independent zero-mean Gaussian noise to every sample.
///
/// Each output sample is `clamp(round(x + n * max), 0, max)`. Draws are taken
/// in stored sample order from a ChaCha8 stream seeded with `spec.seed`, so
/// the result is a pure function of `(img, spec)`.
pub fn add_gaussian_noise(img: &RasterImage, spec: NoiseSpec) -> Result<RasterImage, ImageError> {
    let spec = NoiseSpec::new(spec.variance, spec.seed)?;
    if spec.variance == 0.0 {
        return Ok(img.clone());
    }
    let max = img.bit_depth().max_value() as f64;
    let normal = Normal::new(0.0, spec.variance.sqrt())
        .map_err(|_| ImageError::InvalidVariance(spec.variance))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let samples = img
        .samples()
        .iter()
        .map(|&x| {
            let n: f64 = normal.sample(&mut rng);
            (x as f64 + n * max).round().clamp(0.0, max) as u16
        })
        .collect();
    RasterImage::new(img.width(), img.height(), img.channels(), img.bit_depth(), samples)
}
