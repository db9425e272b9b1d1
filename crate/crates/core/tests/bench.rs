use std::fs;
use std::path::Path;
use std::time::Instant;

use gradpix::bench::{read_csv, run_bench, summarize, BenchConfig, BenchError};
use gradpix::codec::HEADER_LEN;
use gradpix::image::{save_png, Synthetic, SyntheticKind};
use gradpix::PredictorKind;

fn write_corpus(dir: &Path, kind: SyntheticKind, count: u64, size: u32) {
    fs::create_dir_all(dir).unwrap();
    for i in 0..count {
        let img = Synthetic::new(kind, size, size, 500 + i).generate().unwrap();
        save_png(&img, dir.join(format!("{}_{i:03}.png", kind.tag()))).unwrap();
    }
}

fn strip_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(5);
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn single_image_single_predictor() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::FlatEdges, 1, 64);
    let out = dir.path().join("out");
    let csv = dir.path().join("r.csv");
    let mut cfg = BenchConfig::new(&input, &out, &csv);
    cfg.predictors = vec![PredictorKind::Gap];

    let rep = run_bench(&cfg).unwrap();
    assert_eq!(rep.records.len(), 1);
    assert!(rep.failures.is_empty());
    let r = &rep.records[0];
    let container = out.join("flat_edges_000.gap.gpx");
    assert_eq!(fs::metadata(&container).unwrap().len(), r.compressed_size_bytes);
    let png_len = fs::metadata(input.join("flat_edges_000.png")).unwrap().len();
    assert_eq!(r.original_size_bytes, png_len);
    assert_eq!(
        r.compression_ratio,
        r.original_size_bytes as f64 / r.compressed_size_bytes as f64
    );
    assert!(r.compressed_size_bytes >= HEADER_LEN as u64);
    assert_eq!(read_csv(&csv).unwrap().len(), 1);
}

#[test]
fn worker_count_does_not_change_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::Ramp, 3, 32);
    write_corpus(&input, SyntheticKind::FlatEdges, 4, 40);
    let mut outputs = Vec::new();
    for workers in [1, 10] {
        let csv = dir.path().join(format!("w{workers}.csv"));
        let mut cfg = BenchConfig::new(&input, dir.path().join(format!("o{workers}")), &csv);
        cfg.workers = workers;
        run_bench(&cfg).unwrap();
        outputs.push(strip_timing(&fs::read_to_string(&csv).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].lines().count(), 1 + 7 * 3);
}

#[test]
fn gap_beats_med_on_flat_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::FlatEdges, 20, 128);
    let cfg = BenchConfig::new(&input, dir.path().join("out"), dir.path().join("r.csv"));
    let rep = run_bench(&cfg).unwrap();
    assert_eq!(rep.records.len(), 60);
    let summary = summarize(&rep.records).unwrap();
    let ratio = |tag: &str| {
        summary
            .iter()
            .find(|s| s.predictor == tag)
            .unwrap()
            .mean_ratio
    };
    let (gap, med) = (ratio("gap"), ratio("med"));
    println!("mean ratio: gap {gap:.3}, med {med:.3}, ged {:.3}", ratio("ged"));
    assert!(gap > med, "gap {gap} <= med {med}");
}

// Matches the tamper hook's signature.
#[allow(clippy::ptr_arg)]
fn flip_checksum(bytes: &mut Vec<u8>) {
    bytes[HEADER_LEN - 1] ^= 0x01;
}

fn drop_last_byte(bytes: &mut Vec<u8>) {
    bytes.pop();
}

#[test]
fn verification_catches_damaged_containers() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::FlatEdges, 2, 48);
    let mut cfg = BenchConfig::new(&input, dir.path().join("out"), dir.path().join("r.csv"));
    for tamper in [flip_checksum as fn(&mut Vec<u8>), drop_last_byte] {
        cfg.tamper = Some(tamper);
        match run_bench(&cfg) {
            Err(BenchError::Verification { .. }) => {}
            other => panic!("expected a verification error, got {other:?}"),
        }
    }

    // Without verification the damage goes unnoticed by the runner.
    cfg.verify = false;
    assert_eq!(run_bench(&cfg).unwrap().records.len(), 6);
}

#[test]
fn unreadable_images_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::Ramp, 1, 16);
    fs::write(input.join("broken.png"), b"not a png").unwrap();
    let cfg = BenchConfig::new(&input, dir.path().join("out"), dir.path().join("r.csv"));
    let rep = run_bench(&cfg).unwrap();
    assert_eq!(rep.records.len(), 3);
    assert_eq!(rep.failures.len(), 3);
    assert!(rep.failures.iter().all(|f| f.filename == "broken.png"));
}

#[test]
fn empty_corpus_and_zero_workers_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = BenchConfig::new(dir.path(), dir.path().join("out"), dir.path().join("r.csv"));
    assert!(matches!(run_bench(&cfg), Err(BenchError::EmptyCorpus(_))));
    cfg.workers = 0;
    assert!(matches!(run_bench(&cfg), Err(BenchError::NoWorkers)));
}

/// Soft property: reported, never fails.
#[test]
fn throughput_scaling_report() {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    if threads < 4 {
        println!("throughput: skipped, {threads} hardware threads");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, SyntheticKind::FlatEdges, 40, 128);
    let mut times = Vec::new();
    for workers in [1, 4] {
        let mut cfg = BenchConfig::new(&input, dir.path().join("out"), dir.path().join("r.csv"));
        cfg.workers = workers;
        let start = Instant::now();
        run_bench(&cfg).unwrap();
        times.push(start.elapsed().as_secs_f64());
    }
    let share = times[1] / times[0];
    println!(
        "throughput: workers=1 {:.3}s, workers=4 {:.3}s ({:.0}% of serial, target <= 60%)",
        times[0],
        times[1],
        share * 100.0
    );
}
