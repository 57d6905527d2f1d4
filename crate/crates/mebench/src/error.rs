//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("frame {dimension} {value} is not divisible by block edge {block_edge}")]
    DimensionNotDivisible {
        dimension: &'static str,
        value: u32,
        block_edge: u32,
    },

    #[error("sample buffer holds {got} bytes, expected {expected} for {width}x{height}")]
    SampleCountMismatch {
        got: usize,
        expected: usize,
        width: u32,
        height: u32,
    },

    #[error("block edge must be positive")]
    ZeroBlockEdge,

    #[error("frame dimensions differ: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch {
        a_width: u32,
        a_height: u32,
        b_width: u32,
        b_height: u32,
    },

    #[error("motion vector ({u},{v}) is not a valid candidate for block at ({x},{y})")]
    InvalidCandidate { u: i32, v: i32, x: u32, y: u32 },

    #[error(
        "motion field geometry ({cols}x{rows} blocks of edge {block_edge}) does not match \
         a {width}x{height} frame"
    )]
    GeometryMismatch {
        cols: u32,
        rows: u32,
        block_edge: u32,
        width: u32,
        height: u32,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{got} seed vectors supplied for a memory of size {hms}")]
    SeedCountMismatch { got: usize, hms: usize },

    #[error("seed vector {index} lies outside the search bounds")]
    SeedOutOfBounds { index: usize },

    #[error("history archive is empty")]
    EmptyArchive,

    #[error("no frame metrics to aggregate: sequence yielded no frame pairs")]
    EmptySequence,

    #[error("reference psnr {0} is not positive")]
    NonPositiveReference(f64),

    #[error("comparison requires fsa results as the quality reference")]
    MissingReference,

    #[error("not a YUV4MPEG2 stream (signature mismatch at byte {offset})")]
    Y4mBadSignature { offset: u64 },

    #[error("unsupported colorspace {colorspace:?} in stream header (only 8-bit 4:2:0 is read)")]
    Y4mUnsupportedColorspace { colorspace: String },

    #[error("truncated frame {frame_index} at byte {offset}")]
    TruncatedFrame { frame_index: usize, offset: u64 },

    #[error("{len} bytes is not a whole number of {width}x{height} 4:2:0 frames ({stride} bytes each)")]
    NonIntegralFrameCount {
        len: u64,
        stride: u64,
        width: u32,
        height: u32,
    },

    #[error("frame dimensions {width}x{height} must be even for 4:2:0 chroma")]
    OddDimensions { width: u32, height: u32 },

    #[error("{file}: not a binary (P5) PGM file")]
    PgmNotP5 { file: PathBuf },

    #[error("{file}: malformed PGM header")]
    PgmBadHeader { file: PathBuf },

    #[error("{file}: maxval {maxval} unsupported, only 8-bit (255) is read")]
    PgmBadMaxval { file: PathBuf, maxval: u32 },

    #[error("{file}: is {got_width}x{got_height}, expected {want_width}x{want_height} like the first frame")]
    PgmMixedDimensions {
        file: PathBuf,
        got_width: u32,
        got_height: u32,
        want_width: u32,
        want_height: u32,
    },

    #[error("{file}: file ends before {expected} pixel bytes")]
    PgmTruncated { file: PathBuf, expected: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
