//! `sim`, `detect` and `bench` subcommands.

use std::fs::File;
use std::hint::black_box;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::detect::{
    stick_ratio, stick_ratio_classify, DetectorConfig, DEFAULT_MU, DEFAULT_SR_THRESHOLD,
};
use crate::error::Result;
use crate::eval::{compare_detectors, MetricsReport};
use crate::format::{labels_path, read_sequence, write_sequence};
use crate::grid::{
    ForceFrame, TaxelGridSpec, DEFAULT_CONTACT_EPSILON, DEFAULT_N, DEFAULT_PITCH_MM,
};
use crate::sim::{generate_scenario, ContactParams, ScenarioSpec, DEFAULT_NOISE_SIGMA};
use crate::trace::{write_report, write_trace_csv};

#[derive(Debug, Parser)]
#[command(
    name = "taxslip",
    version,
    about = "Tactile slip detection: simulate, detect, benchmark"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labeled frame sequence from a scenario preset.
    Sim(SimArgs),
    /// Run slip detectors over a frame file.
    Detect(DetectArgs),
    /// Measure stick-ratio throughput over a frame file.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Preset name: ttrtt, translate-only, rotate-only, hold.
    #[arg(long)]
    pub scenario: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output frame file; labels go to the same path with a `.labels` extension.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_N)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_PITCH_MM)]
    pub pitch: f64,
    /// Contact radius at full load, mm.
    #[arg(long, default_value_t = 12.0)]
    pub radius: f64,
    /// Full normal load, N.
    #[arg(long, default_value_t = 5.0)]
    pub load: f64,
    #[arg(long, default_value_t = DEFAULT_MU)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center_x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub center_y: f64,
    /// Per-taxel Gaussian noise, N.
    #[arg(long, default_value_t = DEFAULT_NOISE_SIGMA)]
    pub noise: f64,
    #[arg(long, default_value_t = 100.0)]
    pub frame_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorChoice {
    Baseline,
    StickRatio,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = DetectorChoice::Both)]
    pub detector: DetectorChoice,
    #[arg(long, default_value_t = DEFAULT_MU)]
    pub mu: f64,
    #[arg(long, default_value_t = DEFAULT_SR_THRESHOLD)]
    pub sr_threshold: f64,
    /// Contact threshold on per-taxel normal force, N.
    #[arg(long, default_value_t = DEFAULT_CONTACT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub debounce: u32,
    /// Pace frames at the file's nominal frame rate.
    #[arg(long)]
    pub realtime: bool,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Run identifier for the report; defaults to the input file stem.
    #[arg(long)]
    pub run_id: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Sim(args) => cmd_sim(args, out),
        Command::Detect(args) => cmd_detect(args, out).map(|_| ()),
        Command::Bench(args) => cmd_bench(args, out).map(|_| ()),
    }
}

pub fn cmd_sim<W: Write>(args: &SimArgs, out: &mut W) -> Result<()> {
    let spec = ScenarioSpec::preset(&args.scenario)?
        .with_noise(args.noise)
        .with_frame_rate(args.frame_rate);
    let grid = TaxelGridSpec::new(args.n, args.pitch)?;
    let params = ContactParams::new(
        args.radius,
        args.load,
        args.mu,
        [args.center_x, args.center_y],
    )?;
    let sequence = generate_scenario(&spec, &params, &grid, args.seed)?;
    write_sequence(&sequence, &args.out)?;
    writeln!(
        out,
        "wrote {} frames ({} slip intervals) to {} and {}",
        sequence.frames.len(),
        sequence.slip_intervals().count(),
        args.out.display(),
        labels_path(&args.out).display()
    )?;
    Ok(())
}

/// Reports produced by `detect`, for the selected detector(s).
#[derive(Debug, Clone)]
pub struct DetectOutcome {
    pub frames: usize,
    pub reports: Vec<MetricsReport>,
    /// Achieved frames per second when paced in real time.
    pub realtime_fps: Option<f64>,
}

pub fn cmd_detect<W: Write>(args: &DetectArgs, out: &mut W) -> Result<DetectOutcome> {
    let sequence = read_sequence(&args.input)?;
    let config = DetectorConfig {
        mu: args.mu,
        sr_threshold: args.sr_threshold,
        contact_epsilon: args.epsilon,
        debounce_k: args.debounce,
    };
    config.validate()?;
    let run_id = args.run_id.clone().unwrap_or_else(|| stem(&args.input));

    let realtime_fps = args
        .realtime
        .then(|| pace(&sequence.frames, sequence.frame_rate_hz, &config));
    let comparison = compare_detectors(&sequence, &config, &run_id)?;

    if let Some(path) = &args.trace {
        write_trace_csv(&comparison.trace, BufWriter::new(File::create(path)?))?;
    }
    let selected = match args.detector {
        DetectorChoice::Baseline => vec![comparison.baseline],
        DetectorChoice::StickRatio => vec![comparison.stick_ratio],
        DetectorChoice::Both => vec![comparison.baseline, comparison.stick_ratio],
    };
    let reports = if sequence.truth.is_empty() {
        Vec::new()
    } else {
        selected
    };
    if let Some(path) = &args.report {
        write_report(&reports, BufWriter::new(File::create(path)?))?;
    }

    writeln!(out, "processed {} frames", sequence.frames.len())?;
    if let Some(fps) = realtime_fps {
        writeln!(
            out,
            "real-time replay: {fps:.1} frames/s (nominal {} Hz)",
            sequence.frame_rate_hz
        )?;
    }
    let fmt = |v: Option<f64>| {
        v.map(|x| format!("{x:.4}"))
            .unwrap_or_else(|| "absent".into())
    };
    for r in &reports {
        writeln!(
            out,
            "{:<12} accuracy {}  precision {}  recall {}",
            r.detector.as_str(),
            fmt(r.accuracy),
            fmt(r.precision),
            fmt(r.recall)
        )?;
    }
    if sequence.truth.is_empty() {
        writeln!(out, "no labels found; metrics skipped")?;
    }
    Ok(DetectOutcome {
        frames: sequence.frames.len(),
        reports,
        realtime_fps,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into())
}

/// Replays frames through the stick-ratio pipeline at `rate_hz`.
fn pace(frames: &[ForceFrame], rate_hz: f64, config: &DetectorConfig) -> f64 {
    let start = Instant::now();
    for (i, frame) in frames.iter().enumerate() {
        let due = start + Duration::from_secs_f64(i as f64 / rate_hz);
        if let Some(wait) = due.checked_duration_since(Instant::now()) {
            thread::sleep(wait);
        }
        black_box(stick_ratio_classify(&stick_ratio(frame, config), config));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 0.0 {
        frames.len() as f64 / elapsed
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    /// Frames per second of each repetition.
    pub per_repetition: Vec<f64>,
    pub mean_fps: f64,
    pub min_fps: f64,
}

/// Times the stick-ratio computation and decision over `frames`.
pub fn bench_frames(
    frames: &[ForceFrame],
    config: &DetectorConfig,
    repetitions: usize,
) -> BenchResult {
    let per_repetition: Vec<f64> = (0..repetitions.max(1))
        .map(|_| {
            let start = Instant::now();
            for frame in frames {
                black_box(stick_ratio_classify(
                    &stick_ratio(black_box(frame), config),
                    config,
                ));
            }
            let elapsed = start.elapsed().as_secs_f64().max(1e-9);
            frames.len() as f64 / elapsed
        })
        .collect();
    let mean_fps = per_repetition.iter().sum::<f64>() / per_repetition.len() as f64;
    let min_fps = per_repetition.iter().copied().fold(f64::INFINITY, f64::min);
    BenchResult {
        per_repetition,
        mean_fps,
        min_fps,
    }
}

pub fn cmd_bench<W: Write>(args: &BenchArgs, out: &mut W) -> Result<BenchResult> {
    let sequence = read_sequence(&args.input)?;
    let result = bench_frames(
        &sequence.frames,
        &DetectorConfig::default(),
        args.repetitions,
    );
    writeln!(
        out,
        "{} frames (n = {}), {} repetitions: mean {:.0} frames/s, min {:.0} frames/s",
        sequence.frames.len(),
        sequence.grid.n(),
        result.per_repetition.len(),
        result.mean_fps,
        result.min_fps
    )?;
    Ok(result)
}
