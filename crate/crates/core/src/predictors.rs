//! Causal neighborhoods and the pixel predictors.
//!
//! All arithmetic is done in `i64` with floor division, and every prediction
//! is clamped to the sample range of the image it came from.
//!
//! Naming of the causal pixels, relative to the current pixel `X`:
//!
//! ```text
//!            NN   NNE
//!       NW   N    NE
//!  WW   W    X
//! ```
//!
//! Gradient-edge detection uses letters `A..E`; these are bound as
//! `A = W`, `B = N`, `C = NW`, `D = WW`, `E = NN`. Median edge detection uses
//! `A = W`, `B = N`, `C = NW`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::image::{BitDepth, RasterImage};

pub const DEFAULT_GED_THRESHOLD: i16 = 8;

/// The seven causal samples around a pixel, plus the sample range they live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CausalNeighborhood {
    pub w: u16,
    pub n: u16,
    pub nw: u16,
    pub ne: u16,
    pub ww: u16,
    pub nn: u16,
    pub nne: u16,
    pub bit_depth: BitDepth,
}

impl CausalNeighborhood {
    pub fn uniform(value: u16, bit_depth: BitDepth) -> Self {
        CausalNeighborhood {
            w: value,
            n: value,
            nw: value,
            ne: value,
            ww: value,
            nn: value,
            nne: value,
            bit_depth,
        }
    }

    /// Gathers the neighborhood of `(x, y)` from a row-major plane.
    ///
    /// Only samples strictly before `(x, y)` in raster order are read, so the
    /// plane may be partially reconstructed. Missing neighbors are filled in:
    ///
    /// * the first pixel sees all zeros;
    /// * on the top row everything above takes the value of `W`;
    /// * in the left column `W` and `NW` take the value of `N`;
    /// * `NE` in the right column takes `N`, and `WW` for `x < 2` takes `W`;
    /// * on the second row `NN` takes `N` and `NNE` takes `NE`; below that,
    ///   `NNE` in the right column takes `N`.
    pub fn from_plane(plane: &[u16], width: usize, x: usize, y: usize, bit_depth: BitDepth) -> Self {
        let at = |xx: usize, yy: usize| plane[yy * width + xx];
        if y == 0 {
            if x == 0 {
                return Self::uniform(0, bit_depth);
            }
            let w = at(x - 1, 0);
            let ww = if x >= 2 { at(x - 2, 0) } else { w };
            return CausalNeighborhood {
                w,
                n: w,
                nw: w,
                ne: w,
                ww,
                nn: w,
                nne: w,
                bit_depth,
            };
        }

        let right_edge = x + 1 >= width;
        let n = at(x, y - 1);
        let (w, nw) = if x > 0 {
            (at(x - 1, y), at(x - 1, y - 1))
        } else {
            (n, n)
        };
        let ne = if right_edge { n } else { at(x + 1, y - 1) };
        let ww = if x >= 2 { at(x - 2, y) } else { w };
        let (nn, nne) = if y >= 2 {
            let nne = if right_edge { n } else { at(x + 1, y - 2) };
            (at(x, y - 2), nne)
        } else {
            (n, ne)
        };
        CausalNeighborhood {
            w,
            n,
            nw,
            ne,
            ww,
            nn,
            nne,
            bit_depth,
        }
    }

    fn clamp(&self, p: i64) -> u16 {
        p.clamp(0, self.bit_depth.max_value() as i64) as u16
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("pixel ({x}, {y}) channel {channel} is outside a {width}x{height}x{channels} image")]
pub struct OutOfBounds {
    pub x: u32,
    pub y: u32,
    pub channel: usize,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
}

/// Causal neighborhood of one pixel of `img`.
pub fn neighborhood_at(
    img: &RasterImage,
    channel: usize,
    x: u32,
    y: u32,
) -> Result<CausalNeighborhood, OutOfBounds> {
    if x >= img.width() || y >= img.height() || channel >= img.channels() as usize {
        return Err(OutOfBounds {
            x,
            y,
            channel,
            width: img.width(),
            height: img.height(),
            channels: img.channels(),
        });
    }
    Ok(CausalNeighborhood::from_plane(
        img.plane(channel),
        img.width() as usize,
        x as usize,
        y as usize,
        img.bit_depth(),
    ))
}

/// Horizontal and vertical gradient sums of a gradient predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradientPair {
    pub g_v: i64,
    pub g_h: i64,
}

impl GradientPair {
    pub fn difference(self) -> i64 {
        self.g_v - self.g_h
    }

    pub fn gap(hood: &CausalNeighborhood) -> Self {
        let (w, n, nw, ne, ww, nn, nne) = widen(hood);
        GradientPair {
            g_v: (w - ww).abs() + (n - nw).abs() + (n - ne).abs(),
            g_h: (w - nw).abs() + (n - nn).abs() + (ne - nne).abs(),
        }
    }

    pub fn ged(n: &CausalNeighborhood) -> Self {
        let (a, b, c, d, e) = (
            n.w as i64,
            n.n as i64,
            n.nw as i64,
            n.ww as i64,
            n.nn as i64,
        );
        GradientPair {
            g_v: (c - a).abs() + (e - b).abs(),
            g_h: (d - a).abs() + (c - b).abs(),
        }
    }
}

fn widen(n: &CausalNeighborhood) -> (i64, i64, i64, i64, i64, i64, i64) {
    (
        n.w as i64,
        n.n as i64,
        n.nw as i64,
        n.ne as i64,
        n.ww as i64,
        n.nn as i64,
        n.nne as i64,
    )
}

/// The "corrected" median edge detector, with the branch order as published:
/// a `C` at or above both neighbors predicts the larger of them.
pub fn predict_med(n: &CausalNeighborhood) -> u16 {
    let (a, b, c) = (n.w as i64, n.n as i64, n.nw as i64);
    let (lo, hi) = (a.min(b), a.max(b));
    let p = if c >= hi {
        hi
    } else if c <= lo {
        lo
    } else {
        a + b - c
    };
    n.clamp(p)
}

/// Gradient-adjusted prediction with thresholds 80 / 32 / 8.
pub fn predict_gap(n: &CausalNeighborhood) -> u16 {
    let (w, north, nw, ne, ..) = widen(n);
    let d = GradientPair::gap(n).difference();
    let p = if d > 80 {
        w
    } else if d < -80 {
        north
    } else {
        let p = (w + north).div_euclid(2) + (ne - nw).div_euclid(4);
        if d > 32 {
            (p + w).div_euclid(2)
        } else if d > 8 {
            (3 * p + w).div_euclid(4)
        } else if d < -32 {
            (p + north).div_euclid(2)
        } else if d < -8 {
            (3 * p + north).div_euclid(4)
        } else {
            p
        }
    };
    n.clamp(p)
}

/// Gradient edge detection. The blend `3(A+B)/8 + (C+D+E)/12` is evaluated
/// over the common denominator 24.
pub fn predict_ged(n: &CausalNeighborhood, threshold: i32) -> u16 {
    let t = threshold as i64;
    let (a, b, c, d, e) = (
        n.w as i64,
        n.n as i64,
        n.nw as i64,
        n.ww as i64,
        n.nn as i64,
    );
    let diff = GradientPair::ged(n).difference();
    let p = if diff > t {
        a
    } else if diff < -t {
        b
    } else {
        (9 * (a + b) + 2 * (c + d + e)).div_euclid(24)
    };
    n.clamp(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredictorKind {
    Zero,
    West,
    North,
    Average,
    MedCorrected,
    Ged { threshold: i16 },
    Gap,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PredictorParseError {
    #[error("unknown predictor `{0}` (expected zero, west, north, average, med, ged or gap)")]
    UnknownTag(String),
    #[error("unknown predictor id {0}")]
    UnknownId(u8),
}

impl PredictorKind {
    pub const ALL_DEFAULT: [PredictorKind; 7] = [
        PredictorKind::Zero,
        PredictorKind::West,
        PredictorKind::North,
        PredictorKind::Average,
        PredictorKind::MedCorrected,
        PredictorKind::Ged {
            threshold: DEFAULT_GED_THRESHOLD,
        },
        PredictorKind::Gap,
    ];

    pub const GRADIENT: [PredictorKind; 3] = [
        PredictorKind::MedCorrected,
        PredictorKind::Ged {
            threshold: DEFAULT_GED_THRESHOLD,
        },
        PredictorKind::Gap,
    ];

    pub fn ged_default() -> Self {
        PredictorKind::Ged {
            threshold: DEFAULT_GED_THRESHOLD,
        }
    }

    /// Identifier stored in container headers.
    pub fn id(self) -> u8 {
        match self {
            PredictorKind::Zero => 0,
            PredictorKind::West => 1,
            PredictorKind::North => 2,
            PredictorKind::Average => 3,
            PredictorKind::MedCorrected => 4,
            PredictorKind::Ged { .. } => 5,
            PredictorKind::Gap => 6,
        }
    }

    /// Inverse of [`id`](Self::id). The threshold only matters for GED.
    pub fn from_id(id: u8, ged_threshold: i16) -> Result<Self, PredictorParseError> {
        Ok(match id {
            0 => PredictorKind::Zero,
            1 => PredictorKind::West,
            2 => PredictorKind::North,
            3 => PredictorKind::Average,
            4 => PredictorKind::MedCorrected,
            5 => PredictorKind::Ged {
                threshold: ged_threshold,
            },
            6 => PredictorKind::Gap,
            other => return Err(PredictorParseError::UnknownId(other)),
        })
    }

    /// Threshold recorded in the container header; zero for non-GED kinds.
    pub fn ged_threshold(self) -> i16 {
        match self {
            PredictorKind::Ged { threshold } => threshold,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PredictorKind::Zero => "zero",
            PredictorKind::West => "west",
            PredictorKind::North => "north",
            PredictorKind::Average => "average",
            PredictorKind::MedCorrected => "med",
            PredictorKind::Ged { .. } => "ged",
            PredictorKind::Gap => "gap",
        }
    }

    /// Parses a command-line tag, applying `ged_threshold` to `ged`.
    pub fn from_tag(tag: &str, ged_threshold: i16) -> Result<Self, PredictorParseError> {
        Ok(match tag {
            "zero" => PredictorKind::Zero,
            "west" => PredictorKind::West,
            "north" => PredictorKind::North,
            "average" => PredictorKind::Average,
            "med" => PredictorKind::MedCorrected,
            "ged" => PredictorKind::Ged {
                threshold: ged_threshold,
            },
            "gap" => PredictorKind::Gap,
            other => return Err(PredictorParseError::UnknownTag(other.to_string())),
        })
    }
}

/// `ged` with the default threshold prints as plain `ged`; any other
/// threshold is appended, e.g. `ged:16`.
impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PredictorKind::Ged { threshold } if threshold != DEFAULT_GED_THRESHOLD => {
                write!(f, "ged:{threshold}")
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for PredictorKind {
    type Err = PredictorParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some(("ged", t)) => t
                .parse()
                .map(|threshold| PredictorKind::Ged { threshold })
                .map_err(|_| PredictorParseError::UnknownTag(s.to_string())),
            Some(_) => Err(PredictorParseError::UnknownTag(s.to_string())),
            None => Self::from_tag(s, DEFAULT_GED_THRESHOLD),
        }
    }
}

pub fn predict(kind: PredictorKind, n: &CausalNeighborhood) -> u16 {
    match kind {
        PredictorKind::Zero => 0,
        PredictorKind::West => n.w,
        PredictorKind::North => n.n,
        PredictorKind::Average => ((n.w as u32 + n.n as u32) / 2) as u16,
        PredictorKind::MedCorrected => predict_med(n),
        PredictorKind::Ged { threshold } => predict_ged(n, threshold as i32),
        PredictorKind::Gap => predict_gap(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D8: BitDepth = BitDepth::Eight;

    fn hood(w: u16, n: u16, nw: u16, ne: u16, ww: u16, nn: u16, nne: u16) -> CausalNeighborhood {
        CausalNeighborhood {
            w,
            n,
            nw,
            ne,
            ww,
            nn,
            nne,
            bit_depth: D8,
        }
    }

    fn abc(a: u16, b: u16, c: u16) -> CausalNeighborhood {
        hood(a, b, c, 0, 0, 0, 0)
    }

    #[test]
    fn first_pixel_is_all_zero() {
        let img = RasterImage::new(3, 3, 1, D8, (10..19).collect()).unwrap();
        assert_eq!(neighborhood_at(&img, 0, 0, 0).unwrap(), CausalNeighborhood::uniform(0, D8));
    }

    #[test]
    fn left_column_takes_north() {
        let img = RasterImage::new(3, 3, 1, D8, (10..19).collect()).unwrap();
        for y in 1..3 {
            let n = neighborhood_at(&img, 0, 0, y).unwrap();
            assert_eq!(n.w, n.n);
            assert_eq!(n.n, img.sample(0, 0, y - 1));
        }
    }

    #[test]
    fn centre_of_3x3() {
        let img = RasterImage::new(3, 3, 1, D8, (0..9).collect()).unwrap();
        let n = neighborhood_at(&img, 0, 1, 1).unwrap();
        assert_eq!(n, hood(3, 1, 0, 2, 3, 1, 2));
    }

    #[test]
    fn top_row_and_right_edge() {
        let img = RasterImage::new(3, 3, 1, D8, (0..9).collect()).unwrap();
        let top = neighborhood_at(&img, 0, 2, 0).unwrap();
        assert_eq!(top, hood(1, 1, 1, 1, 0, 1, 1));
        let right = neighborhood_at(&img, 0, 2, 2).unwrap();
        // N=5, NE -> N, NN=2, NNE -> N on the right edge.
        assert_eq!(right, hood(7, 5, 4, 5, 6, 2, 5));
    }

    #[test]
    fn out_of_bounds_rejected() {
        let img = RasterImage::new(3, 3, 1, D8, (0..9).collect()).unwrap();
        assert!(neighborhood_at(&img, 0, 3, 0).is_err());
        assert!(neighborhood_at(&img, 0, 0, 3).is_err());
        assert!(neighborhood_at(&img, 1, 0, 0).is_err());
    }

    #[test]
    fn med_examples() {
        assert_eq!(predict_med(&abc(10, 20, 25)), 20);
        assert_eq!(predict_med(&abc(10, 20, 15)), 15);
        assert_eq!(predict_med(&abc(10, 20, 5)), 10);
        assert_eq!(predict_med(&abc(77, 77, 77)), 77);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(predict_gap(&CausalNeighborhood::uniform(100, D8)), 100);

        let edge = hood(10, 200, 10, 200, 10, 200, 200);
        assert_eq!(GradientPair::gap(&edge), GradientPair { g_v: 190, g_h: 0 });
        assert_eq!(predict_gap(&edge), 10);

        let soft = hood(100, 120, 110, 120, 100, 120, 120);
        assert_eq!(GradientPair::gap(&soft), GradientPair { g_v: 10, g_h: 10 });
        assert_eq!(predict_gap(&soft), 112);
    }

    #[test]
    fn gap_clamps_overshoot() {
        // (255 + 255) / 2 + (255 - 0) / 4 = 318 before clamping.
        let n = hood(255, 255, 0, 255, 255, 255, 255);
        assert_eq!(predict_gap(&n), 255);
    }

    #[test]
    fn ged_examples() {
        assert_eq!(predict_ged(&CausalNeighborhood::uniform(50, D8), 8), 50);

        // A=W, B=N, C=NW, D=WW, E=NN
        let edge = hood(10, 200, 10, 0, 10, 200, 0);
        assert_eq!(GradientPair::ged(&edge), GradientPair { g_v: 0, g_h: 190 });
        assert_eq!(predict_ged(&edge, 8), 200);

        let mild = hood(100, 110, 100, 0, 100, 110, 0);
        assert_eq!(predict_ged(&mild, 8), 110);
    }

    #[test]
    fn ged_degenerate_thresholds() {
        let mild = hood(100, 110, 100, 0, 100, 110, 0);
        // floor((9*210 + 2*310) / 24) = floor(2510 / 24) = 104
        assert_eq!(predict_ged(&mild, i32::MAX), 104);
        let flat = CausalNeighborhood::uniform(60, D8);
        // diff = 0 > -1, so the blend branch is never reached.
        assert_eq!(predict_ged(&flat, -1), flat.w);
    }

    #[test]
    fn dispatch() {
        let n = hood(10, 20, 0, 0, 0, 0, 0);
        assert_eq!(predict(PredictorKind::Zero, &n), 0);
        assert_eq!(predict(PredictorKind::Average, &n), 15);
        assert_eq!(predict(PredictorKind::West, &n), 10);
        assert_eq!(predict(PredictorKind::North, &n), 20);
        assert_eq!(predict(PredictorKind::Gap, &CausalNeighborhood::uniform(100, D8)), 100);
    }

    #[test]
    fn tags_and_ids() {
        for kind in PredictorKind::ALL_DEFAULT {
            assert_eq!(kind.to_string().parse::<PredictorKind>().unwrap(), kind);
            assert_eq!(PredictorKind::from_id(kind.id(), kind.ged_threshold()).unwrap(), kind);
        }
        assert_eq!("ged:-3".parse::<PredictorKind>().unwrap(), PredictorKind::Ged { threshold: -3 });
        assert_eq!(PredictorKind::Ged { threshold: 12 }.to_string(), "ged:12");
        assert!("loco".parse::<PredictorKind>().is_err());
        assert!(PredictorKind::from_id(7, 0).is_err());
    }

    fn arb_hood(depth: BitDepth) -> impl Strategy<Value = CausalNeighborhood> {
        let max = depth.max_value();
        proptest::collection::vec(0..=max, 7).prop_map(move |v| CausalNeighborhood {
            w: v[0],
            n: v[1],
            nw: v[2],
            ne: v[3],
            ww: v[4],
            nn: v[5],
            nne: v[6],
            bit_depth: depth,
        })
    }

    proptest! {
        #[test]
        fn predictions_stay_in_range(
            n in prop_oneof![arb_hood(BitDepth::Eight), arb_hood(BitDepth::Sixteen)],
            t in -300i16..300,
        ) {
            let mut kinds = PredictorKind::ALL_DEFAULT.to_vec();
            kinds.push(PredictorKind::Ged { threshold: t });
            for kind in kinds {
                prop_assert!(predict(kind, &n) <= n.bit_depth.max_value());
            }
        }

        #[test]
        fn uniform_is_fixed_point(x in 0u16..=u16::MAX, t in -100i16..100) {
            let n = CausalNeighborhood::uniform(x, BitDepth::Sixteen);
            for kind in PredictorKind::ALL_DEFAULT.into_iter().chain([PredictorKind::Ged { threshold: t }]) {
                if kind != PredictorKind::Zero {
                    prop_assert_eq!(predict(kind, &n), x);
                }
            }
        }

        #[test]
        fn med_interior_branch_translates(a in 0u16..200, b in 0u16..200, c in 0u16..200, k in 0u16..56) {
            let (lo, hi) = (a.min(b), a.max(b));
            prop_assume!(c > lo && c < hi);
            prop_assert_eq!(predict_med(&abc(a + k, b + k, c + k)), predict_med(&abc(a, b, c)) + k);
        }
    }
}
