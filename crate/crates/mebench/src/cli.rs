//! The `mebench` command line: `estimate` runs one matcher over a
//! sequence, `compare` benchmarks several against the exhaustive
//! reference. All numeric output is fixed-format so seeded runs are
//! byte-reproducible.

use crate::baselines::BaselineKind;
use crate::bench::{run_sequence, FramePairRun, RunSettings};
use crate::error::{Error, Result};
use crate::frame::{partition, Frame, SearchWindow};
use crate::io::{open_sequence, SequenceFormat};
use crate::matching::sad;
use crate::metrics::{aggregate, AlgoFrames, SequenceReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(
    name = "mebench",
    about = "Block-matching motion estimation benchmark",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one matcher over a sequence and report per-frame quality.
    Estimate(EstimateArgs),
    /// Benchmark several matchers against the exhaustive reference.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Input sequence: a file for y4m/yuv420, a directory for pgm-dir.
    #[arg(long)]
    input: PathBuf,

    /// Container format of the input.
    #[arg(long, value_enum)]
    format: FormatArg,

    /// Frame width; required for the headerless yuv420 format.
    #[arg(long)]
    width: Option<u32>,

    /// Frame height; required for the headerless yuv420 format.
    #[arg(long)]
    height: Option<u32>,

    /// Search window radius in pixels.
    #[arg(long, default_value_t = 8, value_parser = parse_window)]
    window: u32,

    /// Block edge in pixels; frame dimensions must divide evenly.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    block: u32,

    /// Seed for the harmony-search substreams; identical seeds reproduce
    /// outputs byte for byte.
    #[arg(long, env = "MEBENCH_SEED", default_value_t = 0)]
    seed: u64,

    /// Distance threshold of the fitness strategy; 0 disables estimation
    /// and evaluates every distinct candidate.
    #[arg(long, default_value_t = 3.0)]
    d: f64,

    /// Read at most this many frames from the input.
    #[arg(long)]
    frames: Option<usize>,

    /// Write per-frame (estimate) or per-algorithm (compare) CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,

    /// Bias the fresh candidate draw one lattice step positive
    /// (experimental fidelity mode).
    #[arg(long)]
    offset_reinit: bool,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Matcher to run.
    #[arg(long, value_enum, default_value_t = AlgoArg::Hsbm)]
    algo: AlgoArg,

    /// Write one "frame bx by u v sad evals" line per block here.
    #[arg(long)]
    mv_dump: Option<PathBuf>,

    /// Dump the full SAD surface of one block, given as "frame,bx,by"
    /// (frame index, block pixel coordinates).
    #[arg(long, value_parser = parse_surface_spec)]
    dump_surface: Option<SurfaceSpec>,

    /// Where the SAD surface CSV goes.
    #[arg(long, default_value = "surface.csv")]
    surface_csv: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Matchers to benchmark; repeat the flag. Must include fsa, the
    /// quality reference.
    #[arg(long = "algo", value_enum, required = true)]
    algos: Vec<AlgoArg>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum FormatArg {
    Y4m,
    Yuv420,
    PgmDir,
}

impl From<FormatArg> for SequenceFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Y4m => SequenceFormat::Y4m,
            FormatArg::Yuv420 => SequenceFormat::RawYuv420,
            FormatArg::PgmDir => SequenceFormat::PgmDir,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum AlgoArg {
    Fsa,
    Tss,
    Ds,
    Hsbm,
}

impl From<AlgoArg> for BaselineKind {
    fn from(value: AlgoArg) -> Self {
        match value {
            AlgoArg::Fsa => BaselineKind::Fsa,
            AlgoArg::Tss => BaselineKind::Tss,
            AlgoArg::Ds => BaselineKind::Ds,
            AlgoArg::Hsbm => BaselineKind::HsBm,
        }
    }
}

fn parse_window(s: &str) -> std::result::Result<u32, String> {
    match s.parse::<u32>() {
        Ok(w @ (8 | 16)) => Ok(w),
        Ok(w) => Err(format!("window radius {w} unsupported, use 8 or 16")),
        Err(e) => Err(e.to_string()),
    }
}

/// Block singled out for a SAD-surface dump.
#[derive(Clone, Copy, Debug)]
pub struct SurfaceSpec {
    pub frame: usize,
    pub bx: u32,
    pub by: u32,
}

fn parse_surface_spec(s: &str) -> std::result::Result<SurfaceSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected frame,bx,by".into());
    }
    Ok(SurfaceSpec {
        frame: parts[0].trim().parse().map_err(|e| format!("frame: {e}"))?,
        bx: parts[1].trim().parse().map_err(|e| format!("bx: {e}"))?,
        by: parts[2].trim().parse().map_err(|e| format!("by: {e}"))?,
    })
}

/// Resolved run description, shared by both subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: SequenceFormat,
    pub dimensions: Option<(u32, u32)>,
    pub algos: Vec<BaselineKind>,
    pub window: SearchWindow,
    pub block_edge: u32,
    pub seed: u64,
    pub d: f64,
    pub frame_limit: Option<usize>,
    pub csv: Option<PathBuf>,
    pub mv_dump: Option<PathBuf>,
    pub dump_surface: Option<SurfaceSpec>,
    pub surface_csv: PathBuf,
    pub jobs: Option<usize>,
    pub offset_reinit: bool,
}

impl RunConfig {
    fn from_common(common: &CommonArgs, algos: Vec<BaselineKind>) -> Result<Self> {
        if common.format == FormatArg::Yuv420 && (common.width.is_none() || common.height.is_none())
        {
            return Err(Error::InvalidParameter(
                "yuv420 input needs --width and --height".into(),
            ));
        }
        if algos.is_empty() {
            return Err(Error::InvalidParameter("select at least one --algo".into()));
        }
        Ok(Self {
            input: common.input.clone(),
            format: common.format.into(),
            dimensions: common.width.zip(common.height),
            algos,
            window: SearchWindow(common.window),
            block_edge: common.block,
            seed: common.seed,
            d: common.d,
            frame_limit: common.frames,
            csv: common.csv.clone(),
            mv_dump: None,
            dump_surface: None,
            surface_csv: PathBuf::from("surface.csv"),
            jobs: common.jobs,
            offset_reinit: common.offset_reinit,
        })
    }

    fn settings(&self) -> RunSettings {
        RunSettings {
            window: self.window,
            block_edge: self.block_edge,
            seed: self.seed,
            d: self.d,
            offset_reinit: self.offset_reinit,
        }
    }
}

/// Parses argv and runs the selected subcommand. The process entry point.
pub fn main_with_args<I, T>(args: I, out: &mut impl Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Estimate(args) => {
            let mut config =
                RunConfig::from_common(&args.common, vec![args.algo.into()])?;
            config.mv_dump = args.mv_dump.clone();
            config.dump_surface = args.dump_surface;
            config.surface_csv = args.surface_csv.clone();
            run_estimate(&config, out)
        }
        Command::Compare(args) => {
            let mut algos: Vec<BaselineKind> = Vec::new();
            for a in &args.algos {
                let kind = (*a).into();
                if !algos.contains(&kind) {
                    algos.push(kind);
                }
            }
            let config = RunConfig::from_common(&args.common, algos)?;
            run_compare(&config, out)
        }
    }
}

fn load_frames(config: &RunConfig) -> Result<Vec<Frame>> {
    let (_, iter) = open_sequence(&config.input, config.format, config.dimensions)?;
    let limit = config.frame_limit.unwrap_or(usize::MAX);
    let mut frames = Vec::new();
    for item in iter.take(limit) {
        frames.push(item?);
    }
    if frames.len() < 2 {
        return Err(Error::EmptySequence);
    }
    // Fail on geometry problems before spending time searching.
    partition(frames[0].width(), frames[0].height(), config.block_edge)?;
    Ok(frames)
}

fn install_pool<R: Send>(jobs: Option<usize>, work: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("--jobs: {e}")))?;
    Ok(pool.install(work))
}

/// Runs the single selected matcher, writing the optional CSV, motion
/// dump and SAD-surface dump, plus a short human summary to `out`.
pub fn run_estimate(config: &RunConfig, out: &mut impl Write) -> Result<()> {
    let kind = config.algos[0];
    let frames = load_frames(config)?;
    let settings = config.settings();
    let started = Instant::now();
    let runs = install_pool(config.jobs, || run_sequence(kind, &frames, &settings))??;
    let wall = started.elapsed();

    if let Some(path) = &config.csv {
        write_frame_csv(path, &runs)?;
    }
    if let Some(path) = &config.mv_dump {
        write_mv_dump(path, &runs)?;
    }
    if let Some(spec) = &config.dump_surface {
        write_surface_csv(&config.surface_csv, spec, &frames, config)?;
    }

    let algo_frames = [AlgoFrames {
        kind,
        frames: runs.iter().map(|r| r.metrics).collect(),
    }];
    let report = aggregate(&algo_frames)?;
    let summary = &report.summaries[0];
    writeln!(
        out,
        "{} over {} predicted {}x{} frames (window +-{}, block {}, seed {}, d {}):",
        kind,
        runs.len(),
        frames[0].width(),
        frames[0].height(),
        config.window.0,
        config.block_edge,
        config.seed,
        fmt_sig6(config.d),
    )?;
    writeln!(
        out,
        "  mean psnr {} dB, mean evaluations/block {}, wall time {} ms",
        fmt_sig6(summary.mean_psnr),
        fmt_sig6(summary.mean_evaluations_per_block),
        wall.as_millis(),
    )?;
    Ok(())
}

/// Runs every selected matcher and writes the comparison table; `fsa`
/// must be among them as the quality reference.
pub fn run_compare(config: &RunConfig, out: &mut impl Write) -> Result<()> {
    if !config.algos.contains(&BaselineKind::Fsa) {
        return Err(Error::MissingReference);
    }
    let frames = load_frames(config)?;
    let settings = config.settings();
    let started = Instant::now();
    let all: Vec<AlgoFrames> = install_pool(config.jobs, || {
        config
            .algos
            .iter()
            .map(|&kind| {
                let runs = run_sequence(kind, &frames, &settings)?;
                Ok(AlgoFrames {
                    kind,
                    frames: runs.iter().map(|r| r.metrics).collect(),
                })
            })
            .collect::<Result<_>>()
    })??;
    let wall = started.elapsed();
    let report = aggregate(&all)?;

    if let Some(path) = &config.csv {
        write_compare_csv(path, &report)?;
    }

    writeln!(
        out,
        "{} predicted {}x{} frames, window +-{}, block {}, seed {} ({} ms)",
        all[0].frames.len(),
        frames[0].width(),
        frames[0].height(),
        config.window.0,
        config.block_edge,
        config.seed,
        wall.as_millis(),
    )?;
    writeln!(
        out,
        "{:<10} {:>12} {:>12} {:>14} {:>5}",
        "algorithm", "mean_psnr", "d_psnr", "evals/block", "rank"
    )?;
    for s in &report.summaries {
        let d = s
            .d_psnr
            .map(fmt_sig6)
            .unwrap_or_else(|| "-".to_string());
        writeln!(
            out,
            "{:<10} {:>12} {:>12} {:>14} {:>5}",
            s.kind.name(),
            fmt_sig6(s.mean_psnr),
            d,
            fmt_sig6(s.mean_evaluations_per_block),
            s.rank,
        )?;
    }
    Ok(())
}

/// Fixed six-significant-digit decimal formatting, used for every float
/// the CLI emits so outputs are byte-stable.
fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn write_frame_csv(path: &Path, runs: &[FramePairRun]) -> Result<()> {
    let mut body = String::from("frame,psnr,mse,total_evaluations,avg_evaluations_per_block\n");
    for run in runs {
        let m = &run.metrics;
        writeln!(
            body,
            "{},{},{},{},{}",
            run.frame_index,
            fmt_sig6(m.psnr),
            fmt_sig6(m.mse),
            m.total_evaluations,
            fmt_sig6(m.avg_evaluations_per_block),
        )
        .expect("writing to a String cannot fail");
    }
    std::fs::write(path, body)?;
    Ok(())
}

fn write_mv_dump(path: &Path, runs: &[FramePairRun]) -> Result<()> {
    let mut body = String::from("# frame bx by u v sad evals\n");
    for run in runs {
        for b in &run.blocks {
            writeln!(
                body,
                "{} {} {} {} {} {} {}",
                run.frame_index, b.x, b.y, b.mv.u, b.mv.v, b.sad, b.evaluations
            )
            .expect("writing to a String cannot fail");
        }
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// Exhaustive SAD surface of one block: every valid displacement of the
/// window, scored exactly, independent of the matcher under test.
fn write_surface_csv(
    path: &Path,
    spec: &SurfaceSpec,
    frames: &[Frame],
    config: &RunConfig,
) -> Result<()> {
    if spec.frame == 0 || spec.frame >= frames.len() {
        return Err(Error::InvalidParameter(format!(
            "surface frame {} out of range (predicted frames are 1..={})",
            spec.frame,
            frames.len() - 1
        )));
    }
    let n = config.block_edge;
    let current = &frames[spec.frame];
    let previous = &frames[spec.frame - 1];
    if spec.bx % n != 0
        || spec.by % n != 0
        || spec.bx + n > current.width()
        || spec.by + n > current.height()
    {
        return Err(Error::InvalidParameter(format!(
            "surface block ({}, {}) is not a grid position of edge {n}",
            spec.bx, spec.by
        )));
    }
    let block = crate::frame::BlockPosition {
        x: spec.bx,
        y: spec.by,
        n,
    };
    let mut body = String::from("u,v,sad\n");
    for mv in crate::frame::valid_candidates(block, config.window, current.width(), current.height())
    {
        let s = sad(current, previous, block, mv)?;
        writeln!(body, "{},{},{}", mv.u, mv.v, s.0).expect("writing to a String cannot fail");
    }
    std::fs::write(path, body)?;
    Ok(())
}

fn write_compare_csv(path: &Path, report: &SequenceReport) -> Result<()> {
    let mut body = String::from("algorithm,mean_psnr,d_psnr,mean_evaluations_per_block,rank\n");
    for s in &report.summaries {
        writeln!(
            body,
            "{},{},{},{},{}",
            s.kind.name(),
            fmt_sig6(s.mean_psnr),
            s.d_psnr.map(fmt_sig6).unwrap_or_else(|| "-".to_string()),
            fmt_sig6(s.mean_evaluations_per_block),
            s.rank,
        )
        .expect("writing to a String cannot fail");
    }
    std::fs::write(path, body)?;
    Ok(())
}
