//! Lossless encoder and decoder.
//!
//! Each channel plane is scanned in raster order. For every sample the causal
//! neighborhood yields a prediction and a gradient-activity context; the
//! wrapped residual is zigzag-folded and range coded with the adaptive table
//! of that context. The decoder rebuilds the same neighborhoods from samples
//! it has already reconstructed, so the two sides stay in lockstep.
//!
//! 8-bit codes are coded directly over a 256-symbol alphabet. A 16-bit code is
//! split into its high byte, coded in the pixel's context, and its low byte,
//! coded in a table selected by the context and whether the high byte was 0.

mod container;
mod context;
mod model;
mod range_coder;
mod residual;

pub use container::{CompressedContainer, ContainerHeader, HEADER_LEN, MAGIC, VERSION};
pub use context::{context_of, CONTEXT_COUNT};
pub use model::{ContextModel, FrequencyTable, COUNT_INCREMENT, MAX_ALPHABET, RESCALE_CEILING};
pub use range_coder::{range_decode, range_encode, RangeDecodeError, RangeDecoder, RangeEncoder};
pub use residual::{fold_residual, reconstruct, residual, unfold_residual, Residual};

use thiserror::Error;

use crate::image::{BitDepth, RasterImage};
use crate::predictors::{predict, CausalNeighborhood, PredictorKind};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("bad magic: not a GPX1 container")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated payload")]
    Truncated,
    #[error("invalid header: {0}")]
    InvalidHeader(String),
    #[error("{0} trailing bytes after the last channel payload")]
    TrailingData(usize),
    #[error("channel {channel}: {source}")]
    Desync {
        channel: usize,
        #[source]
        source: RangeDecodeError,
    },
    #[error("checksum mismatch: header says {expected:#010x}, decoded samples give {actual:#010x}")]
    ChecksumMismatch { expected: u32, actual: u32 },
}

/// Predictor, context and residual for every sample of one plane.
struct PlaneScan<'a> {
    width: usize,
    depth: BitDepth,
    kind: PredictorKind,
    plane: &'a [u16],
}

const SYMBOLS: usize = 256;

/// Per-plane adaptive statistics.
struct PlaneModel {
    depth: BitDepth,
    primary: ContextModel,
    low_bytes: ContextModel,
}

impl PlaneModel {
    fn new(depth: BitDepth) -> Self {
        let low_contexts = match depth {
            BitDepth::Eight => 0,
            BitDepth::Sixteen => 2 * CONTEXT_COUNT,
        };
        PlaneModel {
            depth,
            primary: ContextModel::new(CONTEXT_COUNT, SYMBOLS),
            low_bytes: ContextModel::new(low_contexts, SYMBOLS),
        }
    }

    fn encode(&mut self, enc: &mut RangeEncoder, ctx: usize, code: u16) {
        match self.depth {
            BitDepth::Eight => enc.encode_symbol(self.primary.table_mut(ctx), code as usize),
            BitDepth::Sixteen => {
                let (hi, lo) = ((code >> 8) as usize, (code & 0xFF) as usize);
                enc.encode_symbol(self.primary.table_mut(ctx), hi);
                enc.encode_symbol(self.low_bytes.table_mut(low_context(ctx, hi)), lo);
            }
        }
    }

    fn decode(&mut self, dec: &mut RangeDecoder<'_>, ctx: usize) -> Result<u16, RangeDecodeError> {
        match self.depth {
            BitDepth::Eight => Ok(dec.decode_symbol(self.primary.table_mut(ctx))? as u16),
            BitDepth::Sixteen => {
                let hi = dec.decode_symbol(self.primary.table_mut(ctx))?;
                let lo = dec.decode_symbol(self.low_bytes.table_mut(low_context(ctx, hi)))?;
                Ok(((hi << 8) | lo) as u16)
            }
        }
    }
}

fn low_context(ctx: usize, high_byte: usize) -> usize {
    2 * ctx + usize::from(high_byte != 0)
}

impl PlaneScan<'_> {
    fn neighborhood(&self, index: usize) -> CausalNeighborhood {
        CausalNeighborhood::from_plane(
            self.plane,
            self.width,
            index % self.width,
            index / self.width,
            self.depth,
        )
    }
}

fn encode_plane(plane: &[u16], width: usize, depth: BitDepth, kind: PredictorKind) -> Vec<u8> {
    let scan = PlaneScan {
        width,
        depth,
        kind,
        plane,
    };
    let mut model = PlaneModel::new(depth);
    let mut enc = RangeEncoder::new();
    for (i, &actual) in plane.iter().enumerate() {
        let n = scan.neighborhood(i);
        let predicted = predict(scan.kind, &n);
        let code = fold_residual(residual(actual, predicted, depth), depth);
        model.encode(&mut enc, context_of(&n), code);
    }
    enc.finish()
}

fn decode_plane(
    payload: &[u8],
    width: usize,
    len: usize,
    depth: BitDepth,
    kind: PredictorKind,
    out: &mut Vec<u16>,
) -> Result<(), RangeDecodeError> {
    let mut model = PlaneModel::new(depth);
    let mut dec = RangeDecoder::new(payload);
    let start = out.len();
    for i in 0..len {
        let plane = &out[start..];
        let n = CausalNeighborhood::from_plane(plane, width, i % width, i / width, depth);
        let predicted = predict(kind, &n);
        let code = model.decode(&mut dec, context_of(&n))?;
        out.push(reconstruct(unfold_residual(code, depth), predicted, depth));
    }
    dec.finish()
}

/// CRC-32 of the samples in stored order (16-bit samples little-endian).
pub fn sample_checksum(samples: &[u16], depth: BitDepth) -> u32 {
    let mut hasher = crc32fast::Hasher::new();
    match depth {
        BitDepth::Eight => {
            let bytes: Vec<u8> = samples.iter().map(|&s| s as u8).collect();
            hasher.update(&bytes);
        }
        BitDepth::Sixteen => {
            let bytes: Vec<u8> = samples.iter().flat_map(|s| s.to_le_bytes()).collect();
            hasher.update(&bytes);
        }
    }
    hasher.finalize()
}

/// Compresses `img` with the given predictor.
pub fn encode_image(img: &RasterImage, kind: PredictorKind) -> CompressedContainer {
    let depth = img.bit_depth();
    let width = img.width() as usize;
    let payloads = (0..img.channels() as usize)
        .map(|c| encode_plane(img.plane(c), width, depth, kind))
        .collect();
    CompressedContainer {
        header: ContainerHeader {
            version: VERSION,
            width: img.width(),
            height: img.height(),
            channels: img.channels(),
            bit_depth: depth.bits(),
            predictor_id: kind.id(),
            ged_threshold: kind.ged_threshold(),
            checksum: sample_checksum(img.samples(), depth),
        },
        payloads,
    }
}

/// Reconstructs the image stored in `c`, verifying its checksum.
pub fn decode_image(c: &CompressedContainer) -> Result<RasterImage, CodecError> {
    let h = &c.header;
    if h.version != VERSION {
        return Err(CodecError::UnsupportedVersion(h.version));
    }
    let depth = BitDepth::from_bits(h.bit_depth)
        .ok_or_else(|| CodecError::InvalidHeader(format!("bit depth {}", h.bit_depth)))?;
    let kind = PredictorKind::from_id(h.predictor_id, h.ged_threshold)
        .map_err(|e| CodecError::InvalidHeader(e.to_string()))?;
    if h.width == 0 || h.height == 0 {
        return Err(CodecError::InvalidHeader(format!(
            "dimensions {}x{}",
            h.width, h.height
        )));
    }
    if c.payloads.len() != h.channels as usize || !(h.channels == 1 || h.channels == 3) {
        return Err(CodecError::InvalidHeader(format!(
            "{} channels with {} payloads",
            h.channels,
            c.payloads.len()
        )));
    }
    let width = h.width as usize;
    let plane_len = width
        .checked_mul(h.height as usize)
        .ok_or_else(|| CodecError::InvalidHeader("dimensions overflow".into()))?;

    // A corrupted header can claim far more pixels than the payload holds;
    // the buffer grows as samples are decoded instead of being sized upfront.
    let mut samples = Vec::with_capacity(plane_len.min(1 << 24));
    for (channel, payload) in c.payloads.iter().enumerate() {
        decode_plane(payload, width, plane_len, depth, kind, &mut samples)
            .map_err(|source| CodecError::Desync { channel, source })?;
    }

    let actual = sample_checksum(&samples, depth);
    if actual != h.checksum {
        return Err(CodecError::ChecksumMismatch {
            expected: h.checksum,
            actual,
        });
    }
    RasterImage::new(h.width, h.height, h.channels, depth, samples)
        .map_err(|e| CodecError::InvalidHeader(e.to_string()))
}

pub fn encode_to_bytes(img: &RasterImage, kind: PredictorKind) -> Vec<u8> {
    encode_image(img, kind).to_bytes()
}

pub fn decode_from_bytes(bytes: &[u8]) -> Result<RasterImage, CodecError> {
    decode_image(&CompressedContainer::from_bytes(bytes)?)
}
