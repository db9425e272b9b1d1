//! `gradpix`: encode, decode, benchmark and inspect gradient-predicted images.
//!
//! Every subcommand ends its output with one line of `key=value` pairs so it
//! can be scripted. Exit status is 0 on success, 1 on runtime failure and 2
//! on a usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gradpix::bench::{self, BenchConfig, Metric};
use gradpix::codec::{decode_from_bytes, encode_image, CompressedContainer};
use gradpix::image::{
    add_gaussian_noise, load_png, save_png, NoiseSpec, Synthetic, SyntheticKind,
};
use gradpix::predictors::{PredictorKind, DEFAULT_GED_THRESHOLD};
use gradpix::BitDepth;

#[derive(Parser, Debug)]
#[command(name = "gradpix", version, about = "Lossless gradient-predictive image codec and benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress a PNG into a .gpx container.
    Encode(EncodeArgs),
    /// Decompress a .gpx container into a PNG.
    Decode(DecodeArgs),
    /// Compress every PNG in a directory with each predictor and write a CSV report.
    Bench(BenchArgs),
    /// Write Gaussian-noised copies of every PNG in a directory.
    Noise(NoiseArgs),
    /// Write synthetic test images.
    Generate(GenerateArgs),
    /// Draw a boxplot SVG of one metric from a benchmark CSV.
    Plot(PlotArgs),
    /// Decode a container and compare it bit for bit with a reference PNG.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PredictorTag {
    Zero,
    West,
    North,
    Average,
    Med,
    Ged,
    Gap,
}

impl PredictorTag {
    fn kind(self, ged_threshold: i16) -> PredictorKind {
        match self {
            PredictorTag::Zero => PredictorKind::Zero,
            PredictorTag::West => PredictorKind::West,
            PredictorTag::North => PredictorKind::North,
            PredictorTag::Average => PredictorKind::Average,
            PredictorTag::Med => PredictorKind::MedCorrected,
            PredictorTag::Ged => PredictorKind::Ged {
                threshold: ged_threshold,
            },
            PredictorTag::Gap => PredictorKind::Gap,
        }
    }
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// Source PNG (8/16-bit grayscale or RGB).
    input: PathBuf,
    /// Container to write.
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = PredictorTag::Gap)]
    predictor: PredictorTag,
    /// GED decision threshold.
    #[arg(long, default_value_t = DEFAULT_GED_THRESHOLD, allow_negative_numbers = true)]
    ged_threshold: i16,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of source PNGs (not searched recursively).
    #[arg(long = "in")]
    input: PathBuf,
    /// Directory for the compressed containers.
    #[arg(long = "out")]
    output: PathBuf,
    /// CSV report path. `original_size_bytes` is the PNG file size on disk,
    /// so ratios compare against PNG, not raw samples.
    #[arg(long)]
    csv: PathBuf,
    /// Worker threads.
    #[arg(long, env = "GRADPIX_WORKERS", default_value_t = bench::DEFAULT_WORKERS,
          value_parser = parse_workers)]
    workers: usize,
    /// Predictors to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PredictorTag::Med, PredictorTag::Ged, PredictorTag::Gap])]
    predictors: Vec<PredictorTag>,
    /// GED decision threshold.
    #[arg(long, default_value_t = DEFAULT_GED_THRESHOLD, allow_negative_numbers = true)]
    ged_threshold: i16,
    /// Skip decoding each container back and comparing it with its source.
    #[arg(long)]
    no_verify: bool,
}

fn parse_workers(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_variance(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    NoiseSpec::new(v, 0)
        .map(|spec| spec.variance)
        .map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// Noise variance on the normalized [0, 1] intensity scale.
    #[arg(long, required = true, value_parser = parse_variance)]
    variance: f64,
    /// Base RNG seed; each file mixes in a hash of its name.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    FlatEdges,
    Ramp,
    UniformNoise,
}

impl From<KindArg> for SyntheticKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::FlatEdges => SyntheticKind::FlatEdges,
            KindArg::Ramp => SyntheticKind::Ramp,
            KindArg::UniformNoise => SyntheticKind::UniformNoise,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = KindArg::FlatEdges)]
    kind: KindArg,
    /// Number of images; image i uses seed + i.
    #[arg(long, default_value_t = 1)]
    count: u32,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(1..))]
    width: u32,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u32).range(1..))]
    height: u32,
    #[arg(long, default_value = "1", value_parser = ["1", "3"])]
    channels: String,
    #[arg(long, default_value = "8", value_parser = ["8", "16"])]
    bit_depth: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "out")]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    CompressionRatio,
    TimeSeconds,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricArg::CompressionRatio)]
    metric: MetricArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    container: PathBuf,
    reference: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Bench(a) => run_bench(a),
        Command::Noise(a) => noise(a),
        Command::Generate(a) => generate(a),
        Command::Plot(a) => plot(a),
        Command::Verify(a) => verify(a),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|e| match e.downcast::<Mismatch>() {
        Ok(Mismatch) => Ok(ExitCode::FAILURE),
        Err(e) => Err(e),
    })
}

fn encode(a: EncodeArgs) -> Result<()> {
    let kind = a.predictor.kind(a.ged_threshold);
    let img = load_png(&a.input)?;
    let original = fs::metadata(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?
        .len();
    let bytes = encode_image(&img, kind).to_bytes();
    fs::write(&a.output, &bytes).with_context(|| format!("writing {}", a.output.display()))?;
    let ratio = original as f64 / bytes.len() as f64;
    println!("original size:   {original} bytes");
    println!("compressed size: {} bytes", bytes.len());
    println!("ratio:           {ratio:.6}");
    println!(
        "original_bytes={original} compressed_bytes={} ratio={ratio:.6} predictor={kind}",
        bytes.len()
    );
    Ok(())
}

fn read_container(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn decode(a: DecodeArgs) -> Result<()> {
    let img = decode_from_bytes(&read_container(&a.input)?)?;
    save_png(&img, &a.output)?;
    println!(
        "width={} height={} channels={} bit_depth={}",
        img.width(),
        img.height(),
        img.channels(),
        img.bit_depth().bits()
    );
    Ok(())
}

fn run_bench(a: BenchArgs) -> Result<()> {
    let mut predictors: Vec<PredictorKind> = a
        .predictors
        .iter()
        .map(|p| p.kind(a.ged_threshold))
        .collect();
    predictors.dedup();
    let cfg = BenchConfig {
        predictors,
        workers: a.workers,
        verify: !a.no_verify,
        ..BenchConfig::new(&a.input, &a.output, &a.csv)
    };
    let report = bench::run_bench(&cfg)?;
    for f in &report.failures {
        eprintln!("skipped {} ({}): {}", f.filename, f.predictor, f.message);
    }
    if let Some(summary) = bench::summarize(&report.records) {
        println!(
            "{:<10} {:>7} {:>18} {:>12} {:>12}",
            "predictor", "images", "mean_compressed_B", "mean_ratio", "mean_time_s"
        );
        for s in summary {
            println!(
                "{:<10} {:>7} {:>18.2} {:>12.6} {:>12.6}",
                s.predictor, s.images, s.mean_compressed_size, s.mean_ratio, s.mean_time_seconds
            );
        }
    }
    println!(
        "records={} failures={} workers={} csv={}",
        report.records.len(),
        report.failures.len(),
        cfg.workers,
        a.csv.display()
    );
    Ok(())
}

/// FNV-1a, used to give each file of a corpus its own noise stream.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn noise(a: NoiseArgs) -> Result<()> {
    let files = bench::scan_corpus(&a.input)?;
    if files.is_empty() {
        bail!("no PNG images found in {}", a.input.display());
    }
    fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    for path in &files {
        let name = path.file_name().expect("scanned files have names");
        let seed = a.seed ^ name_hash(&name.to_string_lossy());
        let img = load_png(path)?;
        let noisy = add_gaussian_noise(&img, NoiseSpec::new(a.variance, seed)?)?;
        save_png(&noisy, a.output.join(name))?;
    }
    println!("images={} variance={} seed={}", files.len(), a.variance, a.seed);
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let kind = SyntheticKind::from(a.kind);
    let channels: u8 = a.channels.parse()?;
    let depth = BitDepth::from_bits(a.bit_depth.parse()?).expect("restricted by parser");
    fs::create_dir_all(&a.output).with_context(|| format!("creating {}", a.output.display()))?;
    for i in 0..a.count {
        let img = Synthetic::new(kind, a.width, a.height, a.seed.wrapping_add(i as u64))
            .channels(channels)
            .bit_depth(depth)
            .generate()?;
        save_png(&img, a.output.join(format!("{}_{i:03}.png", kind.tag())))?;
    }
    println!("images={} kind={} out={}", a.count, kind.tag(), a.output.display());
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    let metric = match a.metric {
        MetricArg::CompressionRatio => Metric::CompressionRatio,
        MetricArg::TimeSeconds => Metric::TimeSeconds,
    };
    bench::plot_boxplot(&a.csv, &a.output, metric)?;
    println!("svg={} metric={}", a.output.display(), metric.column());
    Ok(())
}

#[derive(Debug)]
struct Mismatch;

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("mismatch")
    }
}

impl std::error::Error for Mismatch {}

fn verify(a: VerifyArgs) -> Result<()> {
    let container = CompressedContainer::from_bytes(&read_container(&a.container)?)?;
    let decoded = gradpix::decode_image(&container)?;
    let reference = load_png(&a.reference)?;
    if decoded == reference {
        println!("MATCH");
        println!("result=MATCH");
        Ok(())
    } else {
        println!("MISMATCH");
        println!("result=MISMATCH");
        Err(Mismatch.into())
    }
}
