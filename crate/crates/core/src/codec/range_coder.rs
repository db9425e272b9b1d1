//! Carry-less byte-oriented range coder (Subbotin style).
//!
//! `low` and `range` are 32-bit. Whenever the top byte of `low` is settled,
//! or the range has shrunk below [`BOT`], a byte is shifted out; in the latter
//! case the range is first trimmed so no carry can propagate into bytes
//! already written. The decoder mirrors every step and therefore reads exactly
//! as many bytes as the encoder wrote.

use thiserror::Error;

use super::model::{ContextModel, FrequencyTable};

const TOP: u32 = 1 << 24;
/// Frequency totals must not exceed this.
pub const BOT: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RangeDecodeError {
    #[error("range-coder desync: payload exhausted early")]
    Exhausted,
    #[error("range-coder desync: decoded value outside the model")]
    OutOfModel,
    #[error("range-coder desync: {0} unread trailing bytes")]
    TrailingBytes(usize),
}

#[derive(Debug, Clone)]
pub struct RangeEncoder {
    low: u32,
    range: u32,
    out: Vec<u8>,
    symbols: usize,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        RangeEncoder {
            low: 0,
            range: u32::MAX,
            out: Vec::new(),
            symbols: 0,
        }
    }

    /// Codes the interval `[cum, cum + freq)` out of `total`.
    pub fn encode(&mut self, cum: u32, freq: u32, total: u32) {
        debug_assert!(freq > 0 && cum + freq <= total && total <= BOT);
        let r = self.range / total;
        self.low = self.low.wrapping_add(cum * r);
        self.range = r * freq;
        self.normalize();
        self.symbols += 1;
    }

    /// Codes `symbol` with `table`'s statistics, then updates the table.
    pub fn encode_symbol(&mut self, table: &mut FrequencyTable, symbol: usize) {
        let cum = table.cumulative(symbol);
        self.encode(cum, table.count(symbol), table.total());
        table.update(symbol);
    }

    fn normalize(&mut self) {
        loop {
            if (self.low ^ self.low.wrapping_add(self.range)) >= TOP {
                if self.range >= BOT {
                    break;
                }
                self.range = self.low.wrapping_neg() & (BOT - 1);
            }
            self.out.push((self.low >> 24) as u8);
            self.low <<= 8;
            self.range <<= 8;
        }
    }

    /// Flushes the final state. A stream with no symbols is empty.
    pub fn finish(mut self) -> Vec<u8> {
        if self.symbols > 0 {
            for _ in 0..4 {
                self.out.push((self.low >> 24) as u8);
                self.low <<= 8;
            }
        }
        self.out
    }
}

#[derive(Debug, Clone)]
pub struct RangeDecoder<'a> {
    low: u32,
    range: u32,
    code: u32,
    input: &'a [u8],
    pos: usize,
    primed: bool,
}

impl<'a> RangeDecoder<'a> {
    /// Input bytes are only consumed once the first symbol is decoded.
    pub fn new(input: &'a [u8]) -> Self {
        RangeDecoder {
            low: 0,
            range: u32::MAX,
            code: 0,
            input,
            pos: 0,
            primed: false,
        }
    }

    fn next_byte(&mut self) -> Result<u8, RangeDecodeError> {
        let b = *self
            .input
            .get(self.pos)
            .ok_or(RangeDecodeError::Exhausted)?;
        self.pos += 1;
        Ok(b)
    }

    /// Scales the range by `total` and returns the target frequency.
    pub fn decode_freq(&mut self, total: u32) -> Result<u32, RangeDecodeError> {
        if !self.primed {
            for _ in 0..4 {
                self.code = (self.code << 8) | self.next_byte()? as u32;
            }
            self.primed = true;
        }
        self.range /= total;
        let value = self.code.wrapping_sub(self.low) / self.range;
        if value >= total {
            return Err(RangeDecodeError::OutOfModel);
        }
        Ok(value)
    }

    /// Consumes the interval chosen after [`decode_freq`](Self::decode_freq).
    pub fn decode_update(&mut self, cum: u32, freq: u32) -> Result<(), RangeDecodeError> {
        self.low = self.low.wrapping_add(cum * self.range);
        self.range *= freq;
        loop {
            if (self.low ^ self.low.wrapping_add(self.range)) >= TOP {
                if self.range >= BOT {
                    break;
                }
                self.range = self.low.wrapping_neg() & (BOT - 1);
            }
            self.code = (self.code << 8) | self.next_byte()? as u32;
            self.low <<= 8;
            self.range <<= 8;
        }
        Ok(())
    }

    pub fn decode_symbol(&mut self, table: &mut FrequencyTable) -> Result<usize, RangeDecodeError> {
        let target = self.decode_freq(table.total())?;
        let (symbol, cum) = table.find(target);
        self.decode_update(cum, table.count(symbol))?;
        table.update(symbol);
        Ok(symbol)
    }

    /// Fails unless every input byte has been consumed.
    pub fn finish(self) -> Result<(), RangeDecodeError> {
        match self.input.len() - self.pos {
            0 => Ok(()),
            n => Err(RangeDecodeError::TrailingBytes(n)),
        }
    }
}

/// Codes `(context, symbol)` pairs with an adaptive model.
pub fn range_encode(symbols: &[(usize, u16)], model: &mut ContextModel) -> Vec<u8> {
    let mut enc = RangeEncoder::new();
    for &(ctx, sym) in symbols {
        enc.encode_symbol(model.table_mut(ctx), sym as usize);
    }
    enc.finish()
}

/// Decodes one symbol per entry of `contexts`. The model must start in the
/// same state the encoder's did.
pub fn range_decode(
    bytes: &[u8],
    contexts: &[usize],
    model: &mut ContextModel,
) -> Result<Vec<u16>, RangeDecodeError> {
    let mut dec = RangeDecoder::new(bytes);
    let out = contexts
        .iter()
        .map(|&ctx| dec.decode_symbol(model.table_mut(ctx)).map(|s| s as u16))
        .collect::<Result<Vec<_>, _>>()?;
    dec.finish()?;
    Ok(out)
}
