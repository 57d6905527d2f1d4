//! Sequence ingestion: YUV4MPEG2 streams, raw planar 4:2:0 files and
//! directories of binary PGM frames. Only the 8-bit luminance plane is
//! kept; chroma is skipped.

mod pgm;
mod raw;
mod y4m;

pub mod emit;

pub use pgm::{open_pgm_dir, PgmDirFrames};
pub use raw::{open_raw_yuv420, RawYuv420Frames};
pub use y4m::{open_y4m, Y4mFrames};

use crate::error::{Error, Result};
use crate::frame::Frame;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

/// Input container format.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SequenceFormat {
    Y4m,
    RawYuv420,
    PgmDir,
}

/// What is known about a sequence before reading its frames.
#[derive(Clone, Debug)]
pub struct SequenceSource {
    pub format: SequenceFormat,
    pub width: u32,
    pub height: u32,
    /// Known up front for raw files and PGM directories; a YUV4MPEG2
    /// stream only reveals its length at EOF.
    pub frame_count: Option<usize>,
    /// Informational, from the stream header when present.
    pub frame_rate: Option<(u32, u32)>,
}

/// Boxed frame iterator shared by every container.
pub type FrameIter = Box<dyn Iterator<Item = Result<Frame>>>;

/// Opens a sequence on disk. `dimensions` is required for raw 4:2:0 input
/// (the format is headerless) and ignored otherwise.
pub fn open_sequence(
    path: &Path,
    format: SequenceFormat,
    dimensions: Option<(u32, u32)>,
) -> Result<(SequenceSource, FrameIter)> {
    match format {
        SequenceFormat::Y4m => {
            let reader = BufReader::new(File::open(path)?);
            let frames = open_y4m(reader)?;
            let source = frames.source();
            Ok((source, Box::new(frames)))
        }
        SequenceFormat::RawYuv420 => {
            let (width, height) = dimensions.ok_or_else(|| {
                Error::InvalidParameter(
                    "raw 4:2:0 input needs explicit width and height".into(),
                )
            })?;
            let len = std::fs::metadata(path)?.len();
            let file = File::open(path)?;
            let frames = open_raw_yuv420(BufReader::new(file), width, height)?;
            let stride = raw::frame_stride(width, height)?;
            if len % stride != 0 {
                return Err(Error::NonIntegralFrameCount {
                    len,
                    stride,
                    width,
                    height,
                });
            }
            let source = SequenceSource {
                format: SequenceFormat::RawYuv420,
                width,
                height,
                frame_count: Some((len / stride) as usize),
                frame_rate: None,
            };
            Ok((source, Box::new(frames)))
        }
        SequenceFormat::PgmDir => {
            let frames = open_pgm_dir(path)?;
            let source = frames.source();
            Ok((source, Box::new(frames)))
        }
    }
}
