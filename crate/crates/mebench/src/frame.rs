//! Luminance frames, block partitioning and motion-vector geometry.
//!
//! Everything downstream works on 8-bit luminance planes cut into square
//! blocks. A motion vector displaces a block into the previous frame; a
//! candidate is *valid* when the displaced block stays inside both the
//! search window and the previous frame, so no search routine ever reads
//! out of bounds.

use crate::error::{Error, Result};

/// A single 8-bit luminance plane stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    width: u32,
    height: u32,
    samples: Vec<u8>,
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Frame")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl Frame {
    pub fn new(width: u32, height: u32, samples: Vec<u8>) -> Result<Self> {
        let expected = width as usize * height as usize;
        if samples.len() != expected {
            return Err(Error::SampleCountMismatch {
                got: samples.len(),
                expected,
                width,
                height,
            });
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Frame filled with a single sample value.
    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self {
            width,
            height,
            samples: vec![value; width as usize * height as usize],
        }
    }

    /// Frame built from a per-pixel function of (x, y).
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut samples = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    #[inline]
    pub fn sample(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.samples[y as usize * self.width as usize + x as usize]
    }

    /// One row of a block, handy for SAD inner loops.
    #[inline]
    pub fn row_slice(&self, x: u32, y: u32, len: u32) -> &[u8] {
        debug_assert!(x + len <= self.width && y < self.height);
        let start = y as usize * self.width as usize + x as usize;
        &self.samples[start..start + len as usize]
    }

    pub fn same_dimensions(&self, other: &Frame) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Top-left corner and edge length of one square block.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BlockPosition {
    pub x: u32,
    pub y: u32,
    pub n: u32,
}

/// Integer-pel displacement applied to a block, in pixels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct MotionVector {
    pub u: i32,
    pub v: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { u: 0, v: 0 };

    pub const fn new(u: i32, v: i32) -> Self {
        Self { u, v }
    }

    /// Squared Euclidean length, used by center-preferring tie-breaks.
    pub fn norm_sq(self) -> i64 {
        self.u as i64 * self.u as i64 + self.v as i64 * self.v as i64
    }
}

/// Symmetric search range: displacements lie in [-w, +w] on each axis.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchWindow(pub u32);

impl SearchWindow {
    pub fn radius(self) -> i32 {
        self.0 as i32
    }
}

/// Splits a frame into non-overlapping n x n blocks, row-major.
///
/// Both dimensions must be divisible by `n`; partial blocks are not
/// supported and are reported as an error naming the offending dimension.
pub fn partition(width: u32, height: u32, n: u32) -> Result<Vec<BlockPosition>> {
    if n == 0 {
        return Err(Error::ZeroBlockEdge);
    }
    if width % n != 0 {
        return Err(Error::DimensionNotDivisible {
            dimension: "width",
            value: width,
            block_edge: n,
        });
    }
    if height % n != 0 {
        return Err(Error::DimensionNotDivisible {
            dimension: "height",
            value: height,
            block_edge: n,
        });
    }
    let mut blocks = Vec::with_capacity((width / n) as usize * (height / n) as usize);
    for y in (0..height).step_by(n as usize) {
        for x in (0..width).step_by(n as usize) {
            blocks.push(BlockPosition { x, y, n });
        }
    }
    Ok(blocks)
}

/// True when displacing `block` by `mv` keeps it inside a previous frame of
/// the given dimensions. The search-window limit is checked separately by
/// [`valid_candidates`] / [`mv_bounds`].
pub fn candidate_valid(mv: MotionVector, block: BlockPosition, width: u32, height: u32) -> bool {
    let x = block.x as i64 + mv.u as i64;
    let y = block.y as i64 + mv.v as i64;
    x >= 0 && y >= 0 && x + block.n as i64 <= width as i64 && y + block.n as i64 <= height as i64
}

/// Inclusive per-axis displacement bounds for `block`: the intersection of
/// the search window with the displacements that keep the block inside a
/// `width` x `height` frame. The zero vector is always contained.
pub fn mv_bounds(
    block: BlockPosition,
    window: SearchWindow,
    width: u32,
    height: u32,
) -> ([i32; 2], [i32; 2]) {
    let w = window.radius();
    let lo_u = (-(block.x as i64)).max(-w as i64) as i32;
    let hi_u = (width as i64 - block.n as i64 - block.x as i64).min(w as i64) as i32;
    let lo_v = (-(block.y as i64)).max(-w as i64) as i32;
    let hi_v = (height as i64 - block.n as i64 - block.y as i64).min(w as i64) as i32;
    ([lo_u, lo_v], [hi_u, hi_v])
}

/// All valid candidate displacements for `block`, enumerated v-major
/// (outer loop over v, inner over u), both ascending. The order is part of
/// the determinism contract for exhaustive search.
pub fn valid_candidates(
    block: BlockPosition,
    window: SearchWindow,
    width: u32,
    height: u32,
) -> Vec<MotionVector> {
    let ([lo_u, lo_v], [hi_u, hi_v]) = mv_bounds(block, window, width, height);
    let mut out =
        Vec::with_capacity(((hi_u - lo_u + 1).max(0) as usize) * ((hi_v - lo_v + 1).max(0) as usize));
    for v in lo_v..=hi_v {
        for u in lo_u..=hi_u {
            out.push(MotionVector { u, v });
        }
    }
    out
}

/// Per-block motion vectors and matching SAD values for one frame pair,
/// stored row-major over the block grid.
#[derive(Clone, Debug)]
pub struct MotionField {
    cols: u32,
    rows: u32,
    block_edge: u32,
    mvs: Vec<MotionVector>,
    sads: Vec<u32>,
}

impl MotionField {
    pub fn new(cols: u32, rows: u32, block_edge: u32, mvs: Vec<MotionVector>, sads: Vec<u32>) -> Result<Self> {
        let cells = cols as usize * rows as usize;
        if mvs.len() != cells || sads.len() != cells {
            return Err(Error::GeometryMismatch {
                cols,
                rows,
                block_edge,
                width: cols * block_edge,
                height: rows * block_edge,
            });
        }
        Ok(Self {
            cols,
            rows,
            block_edge,
            mvs,
            sads,
        })
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn block_edge(&self) -> u32 {
        self.block_edge
    }

    pub fn get(&self, row: u32, col: u32) -> MotionVector {
        self.mvs[row as usize * self.cols as usize + col as usize]
    }

    pub fn sad(&self, row: u32, col: u32) -> u32 {
        self.sads[row as usize * self.cols as usize + col as usize]
    }

    pub fn mvs(&self) -> &[MotionVector] {
        &self.mvs
    }

    pub fn sads(&self) -> &[u32] {
        &self.sads
    }

    /// Frame dimensions this field describes.
    pub fn frame_dimensions(&self) -> (u32, u32) {
        (self.cols * self.block_edge, self.rows * self.block_edge)
    }

    pub fn matches_frame(&self, frame: &Frame) -> bool {
        self.frame_dimensions() == (frame.width(), frame.height())
    }
}
