//! Parallel compression benchmark.
//!
//! Every `(image, predictor)` pair is an independent task run on a pool of
//! `workers` threads. Each task loads its PNG, times the encode, writes the
//! container and, when asked, reads it back and checks that it decodes to the
//! exact source samples. Records are sorted by filename and predictor before
//! they are returned or written, so output does not depend on scheduling.

mod boxplot;
mod report;
mod summary;

pub use boxplot::{plot_boxplot, render_boxplot_svg, BoxStats, Metric, PlotError};
pub use report::{format_csv, read_csv, write_csv, CSV_HEADER};
pub use summary::{summarize, PredictorSummary};

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::codec::{decode_from_bytes, encode_to_bytes};
use crate::image::load_png;
use crate::predictors::PredictorKind;

pub const DEFAULT_WORKERS: usize = 10;

/// Metrics for one image compressed with one predictor.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub filename: String,
    pub width: u32,
    pub height: u32,
    /// Size of the source PNG file on disk.
    pub original_size_bytes: u64,
    pub compressed_size_bytes: u64,
    /// Wall-clock encode time, excluding PNG decoding.
    pub time_seconds: f64,
    pub percent_of_original: f64,
    pub compression_ratio: f64,
    pub predictor: String,
}

impl BenchRecord {
    pub fn new(
        filename: String,
        width: u32,
        height: u32,
        original_size_bytes: u64,
        compressed_size_bytes: u64,
        time_seconds: f64,
        predictor: String,
    ) -> Self {
        let original = original_size_bytes as f64;
        let compressed = compressed_size_bytes as f64;
        BenchRecord {
            filename,
            width,
            height,
            original_size_bytes,
            compressed_size_bytes,
            time_seconds,
            percent_of_original: 100.0 * compressed / original,
            compression_ratio: original / compressed,
            predictor,
        }
    }
}

/// A task that could not produce a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchFailure {
    pub filename: String,
    pub predictor: String,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    /// Unreadable images, one entry per skipped task.
    pub failures: Vec<BenchFailure>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no PNG images found in {0}")]
    EmptyCorpus(PathBuf),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("no predictors selected")]
    NoPredictors,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("verification failed for {filename} with {predictor}: {reason}")]
    Verification {
        filename: String,
        predictor: String,
        reason: String,
    },
    #[error("cannot write CSV {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub csv_path: PathBuf,
    pub predictors: Vec<PredictorKind>,
    pub workers: usize,
    pub verify: bool,
    /// Applied to each container before it is written; used to check that
    /// verification catches damaged output.
    #[doc(hidden)]
    pub tamper: Option<fn(&mut Vec<u8>)>,
}

impl BenchConfig {
    /// Defaults: the corrected MED, GED and GAP predictors, 10 workers,
    /// verification on.
    pub fn new(
        input_dir: impl Into<PathBuf>,
        output_dir: impl Into<PathBuf>,
        csv_path: impl Into<PathBuf>,
    ) -> Self {
        BenchConfig {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            csv_path: csv_path.into(),
            predictors: PredictorKind::GRADIENT.to_vec(),
            workers: DEFAULT_WORKERS,
            verify: true,
            tamper: None,
        }
    }
}

/// PNG files directly inside `dir`, sorted by name.
pub fn scan_corpus(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let io_err = |source| BenchError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        let is_png = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| e.eq_ignore_ascii_case("png"));
        if is_png && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn container_name(image: &Path, kind: PredictorKind) -> String {
    let stem = image
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    format!("{stem}.{}.gpx", kind.to_string().replace(':', "_"))
}

enum TaskOutcome {
    Record(BenchRecord),
    Skipped(BenchFailure),
}

fn run_task(cfg: &BenchConfig, image: &Path, kind: PredictorKind) -> Result<TaskOutcome, BenchError> {
    let filename = image
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let predictor = kind.to_string();

    let img = match load_png(image) {
        Ok(img) => img,
        Err(e) => {
            log::warn!("skipping {}: {e}", image.display());
            return Ok(TaskOutcome::Skipped(BenchFailure {
                filename,
                predictor,
                message: e.to_string(),
            }));
        }
    };
    let original_size_bytes = fs::metadata(image)
        .map_err(|source| BenchError::Io {
            path: image.to_path_buf(),
            source,
        })?
        .len();

    let start = Instant::now();
    let mut bytes = encode_to_bytes(&img, kind);
    let time_seconds = start.elapsed().as_secs_f64();

    if let Some(tamper) = cfg.tamper {
        tamper(&mut bytes);
    }
    let out_path = cfg.output_dir.join(container_name(image, kind));
    fs::write(&out_path, &bytes).map_err(|source| BenchError::Io {
        path: out_path.clone(),
        source,
    })?;

    if cfg.verify {
        let stored = fs::read(&out_path).map_err(|source| BenchError::Io {
            path: out_path.clone(),
            source,
        })?;
        let fail = |reason: String| BenchError::Verification {
            filename: filename.clone(),
            predictor: predictor.clone(),
            reason,
        };
        match decode_from_bytes(&stored) {
            Ok(decoded) if decoded == img => {}
            Ok(_) => return Err(fail("decoded samples differ from the source".into())),
            Err(e) => return Err(fail(e.to_string())),
        }
    }

    Ok(TaskOutcome::Record(BenchRecord::new(
        filename,
        img.width(),
        img.height(),
        original_size_bytes,
        bytes.len() as u64,
        time_seconds,
        predictor,
    )))
}

/// Runs the benchmark and writes the CSV report to `cfg.csv_path`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    if cfg.workers == 0 {
        return Err(BenchError::NoWorkers);
    }
    if cfg.predictors.is_empty() {
        return Err(BenchError::NoPredictors);
    }
    let images = scan_corpus(&cfg.input_dir)?;
    if images.is_empty() {
        return Err(BenchError::EmptyCorpus(cfg.input_dir.clone()));
    }
    fs::create_dir_all(&cfg.output_dir).map_err(|source| BenchError::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;

    let tasks: Vec<(&PathBuf, PredictorKind)> = images
        .iter()
        .flat_map(|img| cfg.predictors.iter().map(move |&k| (img, k)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()?;
    let outcomes: Vec<TaskOutcome> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(img, kind)| run_task(cfg, img, *kind))
            .collect::<Result<_, _>>()
    })?;

    let mut report = BenchReport::default();
    for outcome in outcomes {
        match outcome {
            TaskOutcome::Record(r) => report.records.push(r),
            TaskOutcome::Skipped(f) => report.failures.push(f),
        }
    }
    report.records.sort_by(|a, b| {
        (a.filename.as_str(), a.predictor.as_str()).cmp(&(b.filename.as_str(), b.predictor.as_str()))
    });
    report
        .failures
        .sort_by(|a, b| (&a.filename, &a.predictor).cmp(&(&b.filename, &b.predictor)));

    write_csv(&cfg.csv_path, &report.records).map_err(|source| BenchError::Csv {
        path: cfg.csv_path.clone(),
        source,
    })?;
    Ok(report)
}
