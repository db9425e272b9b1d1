//! Raster image model plus PNG I/O, synthetic test images and noise injection.
//!
//! Samples are stored channel-planar: all of channel 0 in row-major order,
//! then all of channel 1, and so on. The codec compresses each plane on its
//! own, so this layout lets it borrow a plane as one contiguous slice.

mod noise;
mod png_io;
mod synthetic;

pub use noise::{add_gaussian_noise, NoiseSpec};
pub use png_io::{load_png, save_png};
pub use synthetic::{generate_synthetic, Synthetic, SyntheticKind};

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("invalid image: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed PNG {path}: {message}")]
    Decode { path: PathBuf, message: String },
    #[error("unsupported PNG {path}: {feature}")]
    Unsupported {
        path: PathBuf,
        feature: UnsupportedFeature,
    },
    #[error("PNG encoding failed for {path}: {message}")]
    Encode { path: PathBuf, message: String },
    #[error("invalid noise variance {0}")]
    InvalidVariance(f64),
}

/// PNG features this codec refuses to ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnsupportedFeature {
    Palette,
    Alpha,
    Interlaced,
    BitDepth(u8),
}

impl fmt::Display for UnsupportedFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnsupportedFeature::Palette => f.write_str("palette (indexed) color"),
            UnsupportedFeature::Alpha => f.write_str("alpha channel"),
            UnsupportedFeature::Interlaced => f.write_str("Adam7 interlacing"),
            UnsupportedFeature::BitDepth(d) => write!(f, "{d}-bit samples"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn from_bits(bits: u8) -> Option<Self> {
        match bits {
            8 => Some(BitDepth::Eight),
            16 => Some(BitDepth::Sixteen),
            _ => None,
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }

    /// Largest representable sample, `2^bits - 1`.
    pub fn max_value(self) -> u16 {
        match self {
            BitDepth::Eight => u8::MAX as u16,
            BitDepth::Sixteen => u16::MAX,
        }
    }

    pub fn bytes_per_sample(self) -> usize {
        match self {
            BitDepth::Eight => 1,
            BitDepth::Sixteen => 2,
        }
    }
}

/// A decoded image: 1 or 3 channels of 8- or 16-bit samples in planar order.
#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    channels: u8,
    bit_depth: BitDepth,
    samples: Vec<u16>,
}

impl RasterImage {
    /// Builds an image, checking every invariant of the sample buffer.
    pub fn new(
        width: u32,
        height: u32,
        channels: u8,
        bit_depth: BitDepth,
        samples: Vec<u16>,
    ) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::Invalid(format!(
                "dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(ImageError::Invalid(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        let expected = (width as usize)
            .checked_mul(height as usize)
            .and_then(|n| n.checked_mul(channels as usize))
            .ok_or_else(|| ImageError::Invalid("sample count overflows".into()))?;
        if samples.len() != expected {
            return Err(ImageError::Invalid(format!(
                "expected {expected} samples for {width}x{height}x{channels}, got {}",
                samples.len()
            )));
        }
        let max = bit_depth.max_value();
        if let Some(pos) = samples.iter().position(|&s| s > max) {
            return Err(ImageError::Invalid(format!(
                "sample {} at index {pos} exceeds {}-bit range",
                samples[pos],
                bit_depth.bits()
            )));
        }
        Ok(RasterImage {
            width,
            height,
            channels,
            bit_depth,
            samples,
        })
    }

    /// A single-valued image.
    pub fn filled(
        width: u32,
        height: u32,
        channels: u8,
        bit_depth: BitDepth,
        value: u16,
    ) -> Result<Self, ImageError> {
        let n = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, bit_depth, vec![value; n])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u16> {
        self.samples
    }

    pub fn plane_len(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Samples of one channel, row-major.
    pub fn plane(&self, channel: usize) -> &[u16] {
        let len = self.plane_len();
        &self.samples[channel * len..(channel + 1) * len]
    }

    pub fn sample(&self, channel: usize, x: u32, y: u32) -> u16 {
        self.plane(channel)[y as usize * self.width as usize + x as usize]
    }

    /// Size of the samples when stored uncompressed.
    pub fn raw_size_bytes(&self) -> usize {
        self.samples.len() * self.bit_depth.bytes_per_sample()
    }
}

impl fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RasterImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .field("bit_depth", &self.bit_depth.bits())
            .field("samples", &format_args!("[{} samples]", self.samples.len()))
            .finish()
    }
}
