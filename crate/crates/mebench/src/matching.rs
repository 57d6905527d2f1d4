//! Sum-of-absolute-differences matching, exhaustive search and motion
//! compensation.
//!
//! The exhaustive search is the quality reference every faster algorithm is
//! measured against: it scores every valid candidate in the window exactly,
//! with no early exit, and breaks SAD ties deterministically in favour of
//! the shorter displacement.

use crate::error::{Error, Result};
use crate::frame::{
    candidate_valid, valid_candidates, BlockPosition, Frame, MotionField, MotionVector,
    SearchWindow,
};

/// Sum of absolute differences between a block and its displaced match.
/// Bounded by n^2 * 255 (65 280 for the default 16-pixel edge), so a u32
/// accumulator never overflows for any practical block size.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SadValue(pub u32);

/// Result of one block search: chosen displacement, its SAD, and how many
/// candidates were scored exactly along the way.
#[derive(Clone, Copy, Debug)]
pub struct SearchOutcome {
    pub mv: MotionVector,
    pub sad: SadValue,
    pub evaluations: u64,
}

/// SAD between `block` in `current` and the block displaced by `mv` in
/// `previous`. The candidate must be valid; every sample is visited.
pub fn sad(
    current: &Frame,
    previous: &Frame,
    block: BlockPosition,
    mv: MotionVector,
) -> Result<SadValue> {
    if !current.same_dimensions(previous) {
        return Err(Error::DimensionMismatch {
            a_width: current.width(),
            a_height: current.height(),
            b_width: previous.width(),
            b_height: previous.height(),
        });
    }
    if !candidate_valid(mv, block, previous.width(), previous.height()) {
        return Err(Error::InvalidCandidate {
            u: mv.u,
            v: mv.v,
            x: block.x,
            y: block.y,
        });
    }
    let px = (block.x as i64 + mv.u as i64) as u32;
    let py = (block.y as i64 + mv.v as i64) as u32;
    let mut acc: u32 = 0;
    for j in 0..block.n {
        let cur = current.row_slice(block.x, block.y + j, block.n);
        let prev = previous.row_slice(px, py + j, block.n);
        for (&a, &b) in cur.iter().zip(prev) {
            acc += a.abs_diff(b) as u32;
        }
    }
    Ok(SadValue(acc))
}

/// Tie-break key: lower SAD first, then shorter displacement, then smaller
/// v, then smaller u. Shared by every search routine so equal-SAD outcomes
/// are identical across algorithms.
pub(crate) fn tie_key(sad: SadValue, mv: MotionVector) -> (u32, i64, i32, i32) {
    (sad.0, mv.norm_sq(), mv.v, mv.u)
}

/// Exhaustive search over every valid candidate in the window.
///
/// Candidates are scored in the deterministic v-major enumeration order;
/// `evaluations` equals the number of valid candidates. Panics if the two
/// frames differ in size (programmer error, not data error).
pub fn full_search(
    current: &Frame,
    previous: &Frame,
    block: BlockPosition,
    window: SearchWindow,
) -> SearchOutcome {
    assert!(
        current.same_dimensions(previous),
        "full_search requires same-sized frames"
    );
    let candidates = valid_candidates(block, window, previous.width(), previous.height());
    let mut best: Option<(SadValue, MotionVector)> = None;
    for mv in &candidates {
        let s = sad(current, previous, block, *mv).expect("enumerated candidate is valid");
        match best {
            Some((bs, bmv)) if tie_key(s, *mv) >= tie_key(bs, bmv) => {}
            _ => best = Some((s, *mv)),
        }
    }
    let (sad, mv) = best.expect("zero displacement is always a valid candidate");
    SearchOutcome {
        mv,
        sad,
        evaluations: candidates.len() as u64,
    }
}

/// Predicts a frame by copying each block from `previous`, displaced by its
/// motion vector. The field must match the previous frame's partition and
/// every vector must be a valid candidate.
pub fn compensate(previous: &Frame, field: &MotionField) -> Result<Frame> {
    if !field.matches_frame(previous) {
        let (width, height) = field.frame_dimensions();
        return Err(Error::GeometryMismatch {
            cols: field.cols(),
            rows: field.rows(),
            block_edge: field.block_edge(),
            width,
            height,
        });
    }
    let n = field.block_edge();
    let w = previous.width();
    let mut samples = vec![0u8; w as usize * previous.height() as usize];
    for row in 0..field.rows() {
        for col in 0..field.cols() {
            let block = BlockPosition {
                x: col * n,
                y: row * n,
                n,
            };
            let mv = field.get(row, col);
            if !candidate_valid(mv, block, previous.width(), previous.height()) {
                return Err(Error::InvalidCandidate {
                    u: mv.u,
                    v: mv.v,
                    x: block.x,
                    y: block.y,
                });
            }
            let sx = (block.x as i64 + mv.u as i64) as u32;
            let sy = (block.y as i64 + mv.v as i64) as u32;
            for j in 0..n {
                let src = previous.row_slice(sx, sy + j, n);
                let dst_start = (block.y + j) as usize * w as usize + block.x as usize;
                samples[dst_start..dst_start + n as usize].copy_from_slice(src);
            }
        }
    }
    Frame::new(previous.width(), previous.height(), samples)
}
