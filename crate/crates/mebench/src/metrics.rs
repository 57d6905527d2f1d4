//! Prediction-quality metrics and per-sequence aggregation.
//!
//! Quality is PSNR of the motion-compensated prediction against the frame
//! it predicts; algorithms are compared by the relative PSNR deviation
//! from the exhaustive-search reference (negative = worse) and ranked by
//! how few exact SAD evaluations they spent per block.

use crate::baselines::BaselineKind;
use crate::error::{Error, Result};
use crate::frame::Frame;

/// Peak signal value of 8-bit samples.
const PEAK: f64 = 255.0;

/// PSNR reported for a bit-exact prediction (MSE of zero).
pub const PSNR_CAP_DB: f64 = 100.0;

/// Mean squared error between two same-sized frames.
pub fn mse(a: &Frame, b: &Frame) -> Result<f64> {
    if !a.same_dimensions(b) {
        return Err(Error::DimensionMismatch {
            a_width: a.width(),
            a_height: a.height(),
            b_width: b.width(),
            b_height: b.height(),
        });
    }
    let sum: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x.abs_diff(y) as u64;
            d * d
        })
        .sum();
    Ok(sum as f64 / a.samples().len() as f64)
}

/// PSNR in dB from a mean squared error, capped for exact predictions.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        PSNR_CAP_DB
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// PSNR in dB between two same-sized frames.
pub fn psnr(a: &Frame, b: &Frame) -> Result<f64> {
    Ok(psnr_from_mse(mse(a, b)?))
}

/// Relative PSNR deviation of an algorithm from the reference, in percent:
/// `-(psnr_ref - psnr_alg) / psnr_ref * 100`. Zero for the reference
/// itself, negative when the algorithm predicts worse.
pub fn d_psnr(psnr_alg: f64, psnr_ref: f64) -> Result<f64> {
    if psnr_ref <= 0.0 {
        return Err(Error::NonPositiveReference(psnr_ref));
    }
    Ok(-((psnr_ref - psnr_alg) / psnr_ref) * 100.0)
}

/// Quality and effort of one predicted frame.
#[derive(Clone, Copy, Debug)]
pub struct FrameMetrics {
    pub psnr: f64,
    pub mse: f64,
    pub total_evaluations: u64,
    pub avg_evaluations_per_block: f64,
}

/// One algorithm's frame metrics over a sequence.
#[derive(Clone, Debug)]
pub struct AlgoFrames {
    pub kind: BaselineKind,
    pub frames: Vec<FrameMetrics>,
}

/// Sequence-level summary for one algorithm.
#[derive(Clone, Debug)]
pub struct AlgoSummary {
    pub kind: BaselineKind,
    /// Mean of the per-frame PSNR values, in dB.
    pub mean_psnr: f64,
    /// Mean of the per-frame evaluation averages.
    pub mean_evaluations_per_block: f64,
    /// Relative deviation from the exhaustive reference; None when the
    /// reference was not part of the run.
    pub d_psnr: Option<f64>,
    /// 1 = fewest exact evaluations per block.
    pub rank: usize,
}

/// Aggregated comparison across algorithms, in input order.
#[derive(Clone, Debug)]
pub struct SequenceReport {
    pub summaries: Vec<AlgoSummary>,
}

impl SequenceReport {
    pub fn summary(&self, kind: BaselineKind) -> Option<&AlgoSummary> {
        self.summaries.iter().find(|s| s.kind == kind)
    }
}

/// Averages per-frame metrics into per-algorithm summaries, computes each
/// algorithm's deviation from the exhaustive reference (when present) and
/// ranks by evaluation effort. Every algorithm must have metrics for at
/// least one predicted frame.
pub fn aggregate(algos: &[AlgoFrames]) -> Result<SequenceReport> {
    if algos.is_empty() || algos.iter().any(|a| a.frames.is_empty()) {
        return Err(Error::EmptySequence);
    }
    let mean = |frames: &[FrameMetrics], f: fn(&FrameMetrics) -> f64| -> f64 {
        frames.iter().map(f).sum::<f64>() / frames.len() as f64
    };
    let reference_psnr = algos
        .iter()
        .find(|a| a.kind == BaselineKind::Fsa)
        .map(|a| mean(&a.frames, |m| m.psnr));
    let mut summaries: Vec<AlgoSummary> = algos
        .iter()
        .map(|a| {
            let mean_psnr = mean(&a.frames, |m| m.psnr);
            let d = reference_psnr
                .map(|r| d_psnr(mean_psnr, r))
                .transpose()?;
            Ok(AlgoSummary {
                kind: a.kind,
                mean_psnr,
                mean_evaluations_per_block: mean(&a.frames, |m| m.avg_evaluations_per_block),
                d_psnr: d,
                rank: 0,
            })
        })
        .collect::<Result<_>>()?;
    // Rank 1 = cheapest. Ties resolve in input order.
    let mut order: Vec<usize> = (0..summaries.len()).collect();
    order.sort_by(|&a, &b| {
        summaries[a]
            .mean_evaluations_per_block
            .total_cmp(&summaries[b].mean_evaluations_per_block)
    });
    for (rank0, idx) in order.into_iter().enumerate() {
        summaries[idx].rank = rank0 + 1;
    }
    Ok(SequenceReport { summaries })
}
