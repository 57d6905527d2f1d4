//! Harmony-search block matching with archive-backed fitness estimation.
//!
//! Per block: a five-point cross pattern seeds the memory, every candidate
//! the optimizer improvises is fed through the fitness strategy (exact SAD
//! only for promising or unexplored displacements, nearest-neighbour
//! estimates otherwise), and the best exactly-known displacement wins. The
//! candidate budget is fixed at `hms + ni` per block, while the number of
//! exact SAD computations floats well below it - that gap is the entire
//! point of the algorithm.

use crate::error::Result;
use crate::fitness_approx::{decide_and_fit, DistanceMetric, HistoryArchive, Rule};
use crate::frame::{
    mv_bounds, partition, BlockPosition, Frame, MotionField, MotionVector, SearchWindow,
};
use crate::harmony::{
    improvise_with, initialize_memory, update_memory, Bounds, Fitness, HsParams, RandomReinit,
};
use crate::matching::{sad, SadValue};
use crate::rng::block_rng;
use rand::Rng;
use rayon::prelude::*;

/// Full parameter set for one run.
#[derive(Clone, Copy, Debug)]
pub struct HsBmConfig {
    pub window: SearchWindow,
    pub hms: usize,
    pub hmcr: f64,
    pub par: f64,
    pub bw: f64,
    pub ni: u32,
    /// Distance threshold for the fitness strategy; below the lattice
    /// spacing (e.g. 0) every distinct candidate is evaluated exactly.
    pub d: f64,
    pub seed: u64,
    /// Off by default: biases the fresh draw one lattice step positive
    /// (adds 1 before clamping). Selectable for experiments only.
    pub offset_reinit: bool,
    pub metric: DistanceMetric,
}

impl HsBmConfig {
    /// Tuned defaults for a given search window: bandwidth matches the
    /// window radius and the iteration budget grows with it (25 iterations
    /// for radius 8 and below, 45 above), for 30 and 50 candidates per
    /// block respectively at the standard radii.
    pub fn for_window(window: SearchWindow) -> Self {
        let (bw, ni) = if window.0 <= 8 { (8.0, 25) } else { (16.0, 45) };
        Self {
            window,
            hms: 5,
            hmcr: 0.7,
            par: 0.3,
            bw,
            ni,
            d: 3.0,
            seed: 0,
            offset_reinit: false,
            metric: DistanceMetric::Euclidean,
        }
    }

    pub fn params(&self) -> HsParams {
        HsParams {
            hms: self.hms,
            hmcr: self.hmcr,
            par: self.par,
            bw: self.bw,
            ni: self.ni,
        }
    }
}

/// Outcome of one block search.
#[derive(Clone, Copy, Debug)]
pub struct BlockEstimate {
    pub mv: MotionVector,
    pub sad: SadValue,
    /// Whether the winning value came from an exact SAD of `mv` (it always
    /// does in practice: estimates copy archived values, which never beat
    /// the archived minimum strictly).
    pub sad_is_exact: bool,
    pub candidates_generated: u64,
    pub sad_evaluations: u64,
    pub sad_estimations: u64,
}

impl BlockEstimate {
    /// Candidates that repeated an already-archived position.
    pub fn cache_hits(&self) -> u64 {
        self.candidates_generated - self.sad_evaluations - self.sad_estimations
    }
}

/// Per-frame statistics next to the motion field.
#[derive(Clone, Debug)]
pub struct EstimationReport {
    /// Row-major over the block grid.
    pub blocks: Vec<BlockEstimate>,
}

impl EstimationReport {
    pub fn total_evaluations(&self) -> u64 {
        self.blocks.iter().map(|b| b.sad_evaluations).sum()
    }

    pub fn total_estimations(&self) -> u64 {
        self.blocks.iter().map(|b| b.sad_estimations).sum()
    }

    pub fn total_candidates(&self) -> u64 {
        self.blocks.iter().map(|b| b.candidates_generated).sum()
    }

    pub fn avg_evaluations_per_block(&self) -> f64 {
        if self.blocks.is_empty() {
            0.0
        } else {
            self.total_evaluations() as f64 / self.blocks.len() as f64
        }
    }
}

/// The five seeding displacements: the center plus half-window steps along
/// each axis. Used for every window radius.
pub fn initial_pattern(window: SearchWindow) -> [MotionVector; 5] {
    let s = (window.0 as i32 + 1) / 2; // ceil(w / 2)
    [
        MotionVector::new(0, 0),
        MotionVector::new(-s, 0),
        MotionVector::new(s, 0),
        MotionVector::new(0, -s),
        MotionVector::new(0, s),
    ]
}

/// Pattern points clipped into the block's valid displacement rectangle.
/// The rectangle always contains the origin, so clamping moves an invalid
/// point along its axis toward the center - near frame borders several
/// seeds may coincide.
fn clipped_pattern(block: BlockPosition, window: SearchWindow, width: u32, height: u32) -> Vec<Vec<i32>> {
    let ([lo_u, lo_v], [hi_u, hi_v]) = mv_bounds(block, window, width, height);
    initial_pattern(window)
        .iter()
        .map(|mv| vec![mv.u.clamp(lo_u, hi_u), mv.v.clamp(lo_v, hi_v)])
        .collect()
}

/// Estimates the motion of one block.
pub fn estimate_block(
    current: &Frame,
    previous: &Frame,
    block: BlockPosition,
    config: &HsBmConfig,
    rng: &mut impl Rng,
) -> Result<BlockEstimate> {
    let params = config.params();
    params.validate()?;
    let ([lo_u, lo_v], [hi_u, hi_v]) =
        mv_bounds(block, config.window, previous.width(), previous.height());
    let bounds = Bounds::new(vec![lo_u, lo_v], vec![hi_u, hi_v])?;
    let seeds = clipped_pattern(block, config.window, previous.width(), previous.height());
    let mut memory = initialize_memory(&bounds, &params, Some(&seeds), rng)?;

    let mut archive = HistoryArchive::with_metric(config.metric);
    let exact = |pos: &[i32]| -> f64 {
        let mv = MotionVector::new(pos[0], pos[1]);
        sad(current, previous, block, mv)
            .expect("search bounds keep candidates valid")
            .0 as f64
    };

    let mut estimations: u64 = 0;
    let mut best_mv = MotionVector::ZERO;
    let mut best_value = f64::INFINITY;
    let mut best_exact = false;
    let mut track_best = |mv: MotionVector, value: f64, exact_value: bool| {
        if value < best_value {
            best_mv = mv;
            best_value = value;
            best_exact = exact_value;
        }
    };

    for i in 0..memory.len() {
        let pos = memory.vector(i).to_vec();
        let decision = decide_and_fit(&pos, &mut archive, config.d, exact);
        let fitness = match decision.rule {
            Rule::NearestNeighbour => {
                estimations += 1;
                Fitness::estimated(decision.value)
            }
            _ => Fitness::evaluated(decision.value),
        };
        memory.assign(i, fitness);
        track_best(
            MotionVector::new(pos[0], pos[1]),
            decision.value,
            decision.rule != Rule::NearestNeighbour,
        );
    }

    let reinit = if config.offset_reinit {
        RandomReinit::OffsetScaledRound {
            amplitude: config.window.0 as f64,
        }
    } else {
        RandomReinit::ScaledRound {
            amplitude: config.window.0 as f64,
        }
    };

    for _ in 0..params.ni {
        let candidate = improvise_with(&memory, &bounds, &params, reinit, rng);
        let decision = decide_and_fit(&candidate, &mut archive, config.d, exact);
        let fitness = match decision.rule {
            Rule::NearestNeighbour => {
                estimations += 1;
                Fitness::estimated(decision.value)
            }
            _ => Fitness::evaluated(decision.value),
        };
        track_best(
            MotionVector::new(candidate[0], candidate[1]),
            decision.value,
            decision.rule != Rule::NearestNeighbour,
        );
        update_memory(&mut memory, candidate, fitness);
    }

    Ok(BlockEstimate {
        mv: best_mv,
        sad: SadValue(best_value as u32),
        sad_is_exact: best_exact,
        candidates_generated: (params.hms as u64) + params.ni as u64,
        sad_evaluations: archive.evaluation_count() as u64,
        sad_estimations: estimations,
    })
}

/// Estimates a whole frame pair over the default 16-pixel block grid,
/// fanning blocks out across the rayon pool. `frame_index` keys the
/// per-block random substreams, so results do not depend on thread count
/// or scheduling.
pub fn estimate_frame(
    current: &Frame,
    previous: &Frame,
    config: &HsBmConfig,
    frame_index: usize,
) -> Result<(MotionField, EstimationReport)> {
    estimate_frame_edge(current, previous, config, frame_index, 16)
}

/// As [`estimate_frame`] but with an explicit block edge.
pub fn estimate_frame_edge(
    current: &Frame,
    previous: &Frame,
    config: &HsBmConfig,
    frame_index: usize,
    block_edge: u32,
) -> Result<(MotionField, EstimationReport)> {
    if !current.same_dimensions(previous) {
        return Err(crate::error::Error::DimensionMismatch {
            a_width: current.width(),
            a_height: current.height(),
            b_width: previous.width(),
            b_height: previous.height(),
        });
    }
    let blocks = partition(current.width(), current.height(), block_edge)?;
    let cols = current.width() / block_edge;
    let rows = current.height() / block_edge;
    let estimates: Vec<BlockEstimate> = blocks
        .par_iter()
        .map(|&block| {
            let mut rng = block_rng(
                config.seed,
                frame_index as u64,
                (block.y / block_edge) as u64,
                (block.x / block_edge) as u64,
            );
            estimate_block(current, previous, block, config, &mut rng)
        })
        .collect::<Result<_>>()?;
    let mvs = estimates.iter().map(|e| e.mv).collect();
    let sads = estimates.iter().map(|e| e.sad.0).collect();
    let field = MotionField::new(cols, rows, block_edge, mvs, sads)?;
    Ok((field, EstimationReport { blocks: estimates }))
}
