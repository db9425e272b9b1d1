use crate::image::BitDepth;

/// Prediction error wrapped into `[0, 2^bits)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residual(u16);

impl Residual {
    pub fn new(value: u16, depth: BitDepth) -> Self {
        debug_assert!(value <= depth.max_value());
        Residual(value)
    }

    pub fn value(self) -> u16 {
        self.0
    }
}

/// `(actual - predicted) mod 2^bits`.
pub fn residual(actual: u16, predicted: u16, depth: BitDepth) -> Residual {
    Residual(actual.wrapping_sub(predicted) & depth.max_value())
}

/// `(predicted + r) mod 2^bits`; inverse of [`residual`].
pub fn reconstruct(r: Residual, predicted: u16, depth: BitDepth) -> u16 {
    predicted.wrapping_add(r.0) & depth.max_value()
}

/// Zigzag code of the residual read as a signed value in
/// `[-2^(bits-1), 2^(bits-1))`: 0, -1, 1, -2, ... map to 0, 1, 2, 3, ...
pub fn fold_residual(r: Residual, depth: BitDepth) -> u16 {
    let bits = depth.bits() as u32;
    let half = 1u32 << (bits - 1);
    let r = r.0 as u32;
    if r < half {
        (2 * r) as u16
    } else {
        // v = r - 2^bits < 0, code = -2v - 1
        (2 * ((1u32 << bits) - r) - 1) as u16
    }
}

pub fn unfold_residual(code: u16, depth: BitDepth) -> Residual {
    let code = code as u32;
    let mask = depth.max_value() as u32;
    let value = if code.is_multiple_of(2) {
        code / 2
    } else {
        ((1u32 << depth.bits()) - code.div_ceil(2)) & mask
    };
    Residual(value as u16)
}
