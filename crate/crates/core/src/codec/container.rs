//! Byte layout of a compressed image. All integers are little-endian:
//!
//! ```text
//! "GPX1" | version u8 | width u32 | height u32 | channels u8 | bit_depth u8
//!        | predictor_id u8 | ged_threshold i16 | sample_crc32 u32
//!        | per channel: payload_len u32, payload
//! ```

use super::CodecError;

pub const MAGIC: [u8; 4] = *b"GPX1";
pub const VERSION: u8 = 1;
/// Bytes before the first channel's length field.
pub const HEADER_LEN: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub version: u8,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    pub bit_depth: u8,
    pub predictor_id: u8,
    pub ged_threshold: i16,
    /// CRC-32 of the samples in stored order; 16-bit samples little-endian.
    pub checksum: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedContainer {
    pub header: ContainerHeader,
    pub payloads: Vec<Vec<u8>>,
}

impl CompressedContainer {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&MAGIC);
        out.push(h.version);
        out.extend_from_slice(&h.width.to_le_bytes());
        out.extend_from_slice(&h.height.to_le_bytes());
        out.push(h.channels);
        out.push(h.bit_depth);
        out.push(h.predictor_id);
        out.extend_from_slice(&h.ged_threshold.to_le_bytes());
        out.extend_from_slice(&h.checksum.to_le_bytes());
        for p in &self.payloads {
            let len = u32::try_from(p.len()).expect("channel payload exceeds 4 GiB");
            out.extend_from_slice(&len.to_le_bytes());
            out.extend_from_slice(p);
        }
        out
    }

    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.payloads.iter().map(|p| 4 + p.len()).sum::<usize>()
    }

    /// Parses the framing only; payload contents are checked by the decoder.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(CodecError::BadMagic);
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(CodecError::UnsupportedVersion(version));
        }
        let header = ContainerHeader {
            version,
            width: r.u32()?,
            height: r.u32()?,
            channels: r.u8()?,
            bit_depth: r.u8()?,
            predictor_id: r.u8()?,
            ged_threshold: i16::from_le_bytes(r.array()?),
            checksum: r.u32()?,
        };
        if header.channels != 1 && header.channels != 3 {
            return Err(CodecError::InvalidHeader(format!(
                "channel count {}",
                header.channels
            )));
        }
        let mut payloads = Vec::with_capacity(header.channels as usize);
        for _ in 0..header.channels {
            let len = r.u32()? as usize;
            payloads.push(r.take(len)?.to_vec());
        }
        if r.pos != bytes.len() {
            return Err(CodecError::TrailingData(bytes.len() - r.pos));
        }
        Ok(CompressedContainer { header, payloads })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], CodecError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or(CodecError::Truncated)?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N], CodecError> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_le_bytes(self.array()?))
    }
}
