use crate::predictors::CausalNeighborhood;

/// Number of gradient-activity buckets.
pub const CONTEXT_COUNT: usize = 9;

/// Upper bounds of buckets 0..=7; anything larger lands in bucket 8.
const BUCKET_LIMITS: [i64; 8] = [0, 1, 2, 4, 8, 16, 32, 64];

/// Quantized local activity `|W-NW| + |NW-N| + |N-NE|`.
pub fn context_of(n: &CausalNeighborhood) -> usize {
    let (w, north, nw, ne) = (n.w as i64, n.n as i64, n.nw as i64, n.ne as i64);
    let g = (w - nw).abs() + (nw - north).abs() + (north - ne).abs();
    BUCKET_LIMITS
        .iter()
        .position(|&limit| g <= limit)
        .unwrap_or(CONTEXT_COUNT - 1)
}
