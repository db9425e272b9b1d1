use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BitDepth, ImageError, RasterImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Axis-aligned constant-color rectangles over a constant background.
    FlatEdges,
    /// Horizontal linear gradient from 0 at the left to max at the right.
    Ramp,
    /// Independent uniformly distributed samples.
    UniformNoise,
}

impl SyntheticKind {
    pub fn tag(self) -> &'static str {
        match self {
            SyntheticKind::FlatEdges => "flat_edges",
            SyntheticKind::Ramp => "ramp",
            SyntheticKind::UniformNoise => "uniform_noise",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "flat_edges" => Some(SyntheticKind::FlatEdges),
            "ramp" => Some(SyntheticKind::Ramp),
            "uniform_noise" => Some(SyntheticKind::UniformNoise),
            _ => None,
        }
    }
}

pub const MIN_RECTANGLES: u32 = 4;
pub const MAX_RECTANGLES: u32 = 32;

/// Parameters for a deterministic synthetic test image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Synthetic {
    pub kind: SyntheticKind,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub bit_depth: BitDepth,
    pub seed: u64,
    /// Rectangle count for `FlatEdges`; drawn from 4..=32 when `None`.
    pub rectangles: Option<u32>,
}

impl Synthetic {
    pub fn new(kind: SyntheticKind, width: u32, height: u32, seed: u64) -> Self {
        Synthetic {
            kind,
            width,
            height,
            channels: 1,
            bit_depth: BitDepth::Eight,
            seed,
            rectangles: None,
        }
    }

    pub fn channels(mut self, channels: u8) -> Self {
        self.channels = channels;
        self
    }

    pub fn bit_depth(mut self, bit_depth: BitDepth) -> Self {
        self.bit_depth = bit_depth;
        self
    }

    pub fn rectangles(mut self, count: u32) -> Self {
        self.rectangles = Some(count);
        self
    }

    pub fn generate(&self) -> Result<RasterImage, ImageError> {
        if self.width == 0 || self.height == 0 {
            return Err(ImageError::Invalid(format!(
                "synthetic image must be at least 1x1, got {}x{}",
                self.width, self.height
            )));
        }
        let (w, h) = (self.width as usize, self.height as usize);
        let plane_len = w * h;
        let max = self.bit_depth.max_value();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut samples = vec![0u16; plane_len * self.channels as usize];

        match self.kind {
            SyntheticKind::Ramp => {
                for plane in samples.chunks_exact_mut(plane_len) {
                    for (i, s) in plane.iter_mut().enumerate() {
                        let x = (i % w) as u64;
                        *s = if w == 1 {
                            0
                        } else {
                            (x * max as u64 / (w as u64 - 1)) as u16
                        };
                    }
                }
            }
            SyntheticKind::UniformNoise => {
                for s in samples.iter_mut() {
                    *s = rng.random_range(0..=max);
                }
            }
            SyntheticKind::FlatEdges => {
                let count = self
                    .rectangles
                    .unwrap_or_else(|| rng.random_range(MIN_RECTANGLES..=MAX_RECTANGLES));
                let background: Vec<u16> = (0..self.channels)
                    .map(|_| rng.random_range(0..=max))
                    .collect();
                for (plane, &bg) in samples.chunks_exact_mut(plane_len).zip(&background) {
                    plane.fill(bg);
                }
                for _ in 0..count {
                    let x0 = rng.random_range(0..w);
                    let y0 = rng.random_range(0..h);
                    let x1 = rng.random_range(x0 + 1..=w);
                    let y1 = rng.random_range(y0 + 1..=h);
                    for plane in samples.chunks_exact_mut(plane_len) {
                        let color = rng.random_range(0..=max);
                        for row in plane.chunks_exact_mut(w).take(y1).skip(y0) {
                            row[x0..x1].fill(color);
                        }
                    }
                }
            }
        }
        RasterImage::new(self.width, self.height, self.channels, self.bit_depth, samples)
    }
}

/// 8-bit grayscale synthetic image.
pub fn generate_synthetic(
    kind: SyntheticKind,
    width: u32,
    height: u32,
    seed: u64,
) -> Result<RasterImage, ImageError> {
    Synthetic::new(kind, width, height, seed).generate()
}
