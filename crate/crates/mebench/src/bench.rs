//! Runs a matcher over frame pairs and scores the result: the common
//! engine under the CLI and the integration tests.

use crate::baselines::{ds_search, tss_search, BaselineKind};
use crate::error::{Error, Result};
use crate::frame::{partition, Frame, MotionField, MotionVector, SearchWindow};
use crate::hsbm::{estimate_frame_edge, HsBmConfig};
use crate::matching::{compensate, full_search, SearchOutcome};
use crate::metrics::{mse, psnr_from_mse, FrameMetrics};
use rayon::prelude::*;

/// Everything needed to run any of the matchers over a sequence.
#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub window: SearchWindow,
    pub block_edge: u32,
    pub seed: u64,
    /// Distance threshold of the fitness strategy; 0 evaluates every
    /// distinct candidate exactly.
    pub d: f64,
    /// Experimental fresh-draw bias, see [`HsBmConfig::offset_reinit`].
    pub offset_reinit: bool,
}

impl RunSettings {
    pub fn new(window: SearchWindow, block_edge: u32) -> Self {
        Self {
            window,
            block_edge,
            seed: 0,
            d: 3.0,
            offset_reinit: false,
        }
    }

    pub fn hsbm_config(&self) -> HsBmConfig {
        let mut config = HsBmConfig::for_window(self.window);
        config.seed = self.seed;
        config.d = self.d;
        config.offset_reinit = self.offset_reinit;
        config
    }
}

/// Per-block outcome, uniform across matchers. Estimations stay zero for
/// the classical ones.
#[derive(Clone, Copy, Debug)]
pub struct BlockRecord {
    pub x: u32,
    pub y: u32,
    pub mv: MotionVector,
    pub sad: u32,
    pub evaluations: u64,
    pub estimations: u64,
}

/// One predicted frame: the motion field, its per-block records and the
/// prediction quality metrics.
#[derive(Clone, Debug)]
pub struct FramePairRun {
    /// Index of the predicted (current) frame within the sequence.
    pub frame_index: usize,
    pub field: MotionField,
    pub blocks: Vec<BlockRecord>,
    pub metrics: FrameMetrics,
}

/// Runs `kind` over one frame pair. `frame_index` is the current frame's
/// position in the sequence; it keys the seeded substreams.
pub fn run_frame_pair(
    kind: BaselineKind,
    current: &Frame,
    previous: &Frame,
    settings: &RunSettings,
    frame_index: usize,
) -> Result<FramePairRun> {
    if !current.same_dimensions(previous) {
        return Err(Error::DimensionMismatch {
            a_width: current.width(),
            a_height: current.height(),
            b_width: previous.width(),
            b_height: previous.height(),
        });
    }
    let n = settings.block_edge;
    let (field, blocks) = match kind {
        BaselineKind::HsBm => {
            let config = settings.hsbm_config();
            let (field, report) = estimate_frame_edge(current, previous, &config, frame_index, n)?;
            let blocks = partition(current.width(), current.height(), n)?
                .into_iter()
                .zip(&report.blocks)
                .map(|(pos, est)| BlockRecord {
                    x: pos.x,
                    y: pos.y,
                    mv: est.mv,
                    sad: est.sad.0,
                    evaluations: est.sad_evaluations,
                    estimations: est.sad_estimations,
                })
                .collect();
            (field, blocks)
        }
        classical => {
            let positions = partition(current.width(), current.height(), n)?;
            let search = |block| -> SearchOutcome {
                match classical {
                    BaselineKind::Fsa => full_search(current, previous, block, settings.window),
                    BaselineKind::Tss => tss_search(current, previous, block, settings.window),
                    BaselineKind::Ds => ds_search(current, previous, block, settings.window),
                    BaselineKind::HsBm => unreachable!("handled above"),
                }
            };
            let blocks: Vec<BlockRecord> = positions
                .par_iter()
                .map(|&pos| {
                    let outcome = search(pos);
                    BlockRecord {
                        x: pos.x,
                        y: pos.y,
                        mv: outcome.mv,
                        sad: outcome.sad.0,
                        evaluations: outcome.evaluations,
                        estimations: 0,
                    }
                })
                .collect();
            let field = MotionField::new(
                current.width() / n,
                current.height() / n,
                n,
                blocks.iter().map(|b| b.mv).collect(),
                blocks.iter().map(|b| b.sad).collect(),
            )?;
            (field, blocks)
        }
    };
    let predicted = compensate(previous, &field)?;
    let frame_mse = mse(current, &predicted)?;
    let total_evaluations: u64 = blocks.iter().map(|b| b.evaluations).sum();
    let metrics = FrameMetrics {
        psnr: psnr_from_mse(frame_mse),
        mse: frame_mse,
        total_evaluations,
        avg_evaluations_per_block: total_evaluations as f64 / blocks.len() as f64,
    };
    Ok(FramePairRun {
        frame_index,
        field,
        blocks,
        metrics,
    })
}

/// Runs `kind` over every consecutive pair of `frames`. Needs at least
/// two frames to form a pair.
pub fn run_sequence(
    kind: BaselineKind,
    frames: &[Frame],
    settings: &RunSettings,
) -> Result<Vec<FramePairRun>> {
    if frames.len() < 2 {
        return Err(Error::EmptySequence);
    }
    frames
        .windows(2)
        .enumerate()
        .map(|(i, pair)| run_frame_pair(kind, &pair[1], &pair[0], settings, i + 1))
        .collect()
}
