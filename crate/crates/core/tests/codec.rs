mod support;

use gradpix::codec::{decode_from_bytes, encode_to_bytes, CompressedContainer};
use gradpix::image::{BitDepth, Synthetic, SyntheticKind};
use gradpix::{encode_image, PredictorKind};
use proptest::prelude::*;

#[test]
fn encoding_is_deterministic() {
    for (name, img) in support::mixed_corpus() {
        for kind in PredictorKind::ALL_DEFAULT {
            assert_eq!(
                encode_to_bytes(&img, kind),
                encode_to_bytes(&img, kind),
                "{name}/{kind}"
            );
        }
    }
}

#[test]
fn flat_edges_compress_below_raw_size() {
    for seed in 0..5 {
        let img = Synthetic::new(SyntheticKind::FlatEdges, 128, 128, seed)
            .generate()
            .unwrap();
        for kind in PredictorKind::ALL_DEFAULT {
            let len = encode_to_bytes(&img, kind).len();
            assert!(len < img.raw_size_bytes(), "seed {seed} {kind}: {len}");
        }
    }
}

#[test]
fn container_bytes_round_trip_through_parser() {
    let img = Synthetic::new(SyntheticKind::Ramp, 10, 4, 0)
        .channels(3)
        .generate()
        .unwrap();
    let c = encode_image(&img, PredictorKind::Ged { threshold: -3 });
    let parsed = CompressedContainer::from_bytes(&c.to_bytes()).unwrap();
    assert_eq!(parsed, c);
    assert_eq!(parsed.header.ged_threshold, -3);
    assert_eq!(parsed.payloads.len(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arbitrary_images_round_trip(
        w in 1u32..24,
        h in 1u32..24,
        rgb in any::<bool>(),
        deep in any::<bool>(),
        seed in any::<u64>(),
        kind_id in 0u8..7,
        threshold in -20i16..200,
    ) {
        let depth = if deep { BitDepth::Sixteen } else { BitDepth::Eight };
        let img = Synthetic::new(SyntheticKind::UniformNoise, w, h, seed)
            .channels(if rgb { 3 } else { 1 })
            .bit_depth(depth)
            .generate()
            .unwrap();
        let kind = PredictorKind::from_id(kind_id, threshold).unwrap();
        let back = decode_from_bytes(&encode_to_bytes(&img, kind)).unwrap();
        prop_assert_eq!(back, img);
    }
}
