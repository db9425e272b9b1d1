//! Test-only helpers shared by the integration suites.

#![allow(dead_code)]

pub mod oracle;

use gradpix::image::{BitDepth, RasterImage, Synthetic, SyntheticKind};

/// Small deterministic generator so the suites do not depend on the
/// library's RNG choices.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Mixed corpus: every synthetic kind at both depths, gray and RGB, several
/// sizes including degenerate strips.
pub fn mixed_corpus() -> Vec<(String, RasterImage)> {
    let kinds = [
        SyntheticKind::FlatEdges,
        SyntheticKind::Ramp,
        SyntheticKind::UniformNoise,
    ];
    let sizes = [(1, 1), (1, 17), (23, 1), (64, 48), (97, 61)];
    let mut out = Vec::new();
    let mut seed = 0u64;
    for kind in kinds {
        for depth in [BitDepth::Eight, BitDepth::Sixteen] {
            for channels in [1u8, 3] {
                for &(w, h) in &sizes {
                    seed += 1;
                    let img = Synthetic::new(kind, w, h, seed)
                        .channels(channels)
                        .bit_depth(depth)
                        .generate()
                        .unwrap();
                    let name = format!(
                        "{}_{}bit_{}ch_{w}x{h}_s{seed}",
                        kind.tag(),
                        depth.bits(),
                        channels
                    );
                    out.push((name, img));
                }
            }
        }
    }
    out
}
