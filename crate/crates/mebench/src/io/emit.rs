//! Sequence writers, the mirror of the readers. Chroma-less sources are
//! written with neutral (128) chroma planes. Mainly used to build test
//! fixtures and synthetic benchmark inputs.

use crate::error::{Error, Result};
use crate::frame::Frame;
use std::io::Write;
use std::path::Path;

fn check_even(frame: &Frame) -> Result<()> {
    if frame.width() % 2 != 0 || frame.height() % 2 != 0 {
        return Err(Error::OddDimensions {
            width: frame.width(),
            height: frame.height(),
        });
    }
    Ok(())
}

/// Writes a YUV4MPEG2 stream with the given luminance frames and flat
/// neutral chroma.
pub fn write_y4m(out: &mut impl Write, frames: &[Frame], frame_rate: (u32, u32)) -> Result<()> {
    let Some(first) = frames.first() else {
        return Err(Error::EmptySequence);
    };
    check_even(first)?;
    write!(
        out,
        "YUV4MPEG2 W{} H{} F{}:{} Ip A1:1 C420\n",
        first.width(),
        first.height(),
        frame_rate.0,
        frame_rate.1
    )?;
    let chroma = vec![128u8; (first.width() as usize / 2) * (first.height() as usize / 2)];
    for frame in frames {
        out.write_all(b"FRAME\n")?;
        out.write_all(frame.samples())?;
        out.write_all(&chroma)?;
        out.write_all(&chroma)?;
    }
    Ok(())
}

/// Writes headerless planar 4:2:0 with flat neutral chroma.
pub fn write_raw_yuv420(out: &mut impl Write, frames: &[Frame]) -> Result<()> {
    let Some(first) = frames.first() else {
        return Err(Error::EmptySequence);
    };
    check_even(first)?;
    let chroma = vec![128u8; (first.width() as usize / 2) * (first.height() as usize / 2)];
    for frame in frames {
        out.write_all(frame.samples())?;
        out.write_all(&chroma)?;
        out.write_all(&chroma)?;
    }
    Ok(())
}

/// Writes one binary PGM per frame into `dir`, named `frame_0000.pgm`
/// onward so lexicographic order matches frame order.
pub fn write_pgm_dir(dir: &Path, frames: &[Frame]) -> Result<()> {
    for (i, frame) in frames.iter().enumerate() {
        let path = dir.join(format!("frame_{i:04}.pgm"));
        let mut out = std::fs::File::create(path)?;
        write!(out, "P5\n{} {}\n255\n", frame.width(), frame.height())?;
        out.write_all(frame.samples())?;
    }
    Ok(())
}
