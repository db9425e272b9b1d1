use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use super::{BitDepth, ImageError, RasterImage, UnsupportedFeature};

/// Reads an 8- or 16-bit grayscale or RGB PNG.
///
/// Palette, alpha and interlaced images are rejected rather than converted,
/// so the samples returned are always exactly those stored in the file.
pub fn load_png(path: impl AsRef<Path>) -> Result<RasterImage, ImageError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| ImageError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let decode_err = |e: png::DecodingError| match e {
        png::DecodingError::IoError(source) => ImageError::Read {
            path: path.to_path_buf(),
            source,
        },
        other => ImageError::Decode {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    };
    let unsupported = |feature| ImageError::Unsupported {
        path: path.to_path_buf(),
        feature,
    };

    let mut reader = png::Decoder::new(BufReader::new(file))
        .read_info()
        .map_err(decode_err)?;
    let info = reader.info();
    let (width, height) = (info.width, info.height);
    let channels: u8 = match info.color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::Rgb => 3,
        png::ColorType::Indexed => return Err(unsupported(UnsupportedFeature::Palette)),
        png::ColorType::GrayscaleAlpha | png::ColorType::Rgba => {
            return Err(unsupported(UnsupportedFeature::Alpha))
        }
    };
    let depth = match info.bit_depth {
        png::BitDepth::Eight => BitDepth::Eight,
        png::BitDepth::Sixteen => BitDepth::Sixteen,
        other => return Err(unsupported(UnsupportedFeature::BitDepth(other as u8))),
    };
    if info.interlaced {
        return Err(unsupported(UnsupportedFeature::Interlaced));
    }

    let size = reader.output_buffer_size().ok_or_else(|| ImageError::Decode {
        path: path.to_path_buf(),
        message: "image too large".into(),
    })?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(decode_err)?;
    buf.truncate(frame.buffer_size());

    let interleaved: Vec<u16> = match depth {
        BitDepth::Eight => buf.iter().map(|&b| b as u16).collect(),
        BitDepth::Sixteen => buf
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect(),
    };
    let samples = deinterleave(&interleaved, channels as usize);
    RasterImage::new(width, height, channels, depth, samples)
}

/// Writes `img` as a non-interlaced PNG that [`load_png`] reads back exactly.
pub fn save_png(img: &RasterImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| ImageError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    let encode_err = |e: png::EncodingError| match e {
        png::EncodingError::IoError(source) => ImageError::Write {
            path: path.to_path_buf(),
            source,
        },
        other => ImageError::Encode {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    };

    let mut encoder = png::Encoder::new(BufWriter::new(file), img.width(), img.height());
    encoder.set_color(if img.channels() == 1 {
        png::ColorType::Grayscale
    } else {
        png::ColorType::Rgb
    });
    encoder.set_depth(match img.bit_depth() {
        BitDepth::Eight => png::BitDepth::Eight,
        BitDepth::Sixteen => png::BitDepth::Sixteen,
    });
    let mut writer = encoder.write_header().map_err(encode_err)?;

    let interleaved = interleave(img);
    let bytes: Vec<u8> = match img.bit_depth() {
        BitDepth::Eight => interleaved.iter().map(|&s| s as u8).collect(),
        BitDepth::Sixteen => interleaved.iter().flat_map(|s| s.to_be_bytes()).collect(),
    };
    writer.write_image_data(&bytes).map_err(encode_err)?;
    writer.finish().map_err(encode_err)
}

fn deinterleave(pixels: &[u16], channels: usize) -> Vec<u16> {
    if channels == 1 {
        return pixels.to_vec();
    }
    let plane_len = pixels.len() / channels;
    let mut out = vec![0u16; pixels.len()];
    for (i, px) in pixels.chunks_exact(channels).enumerate() {
        for (c, &s) in px.iter().enumerate() {
            out[c * plane_len + i] = s;
        }
    }
    out
}

fn interleave(img: &RasterImage) -> Vec<u16> {
    let channels = img.channels() as usize;
    if channels == 1 {
        return img.samples().to_vec();
    }
    let plane_len = img.plane_len();
    let mut out = Vec::with_capacity(img.samples().len());
    for i in 0..plane_len {
        for c in 0..channels {
            out.push(img.samples()[c * plane_len + i]);
        }
    }
    out
}
