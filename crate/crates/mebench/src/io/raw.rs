//! Headerless planar 8-bit 4:2:0 input: consecutive Y + U + V planes with
//! caller-supplied dimensions. Only Y is kept.

use crate::error::{Error, Result};
use crate::frame::Frame;
use std::io::{ErrorKind, Read};

/// Bytes per 4:2:0 frame (luminance plus both quarter-size chroma planes).
/// Dimensions must be even, as 4:2:0 chroma halves both axes.
pub fn frame_stride(width: u32, height: u32) -> Result<u64> {
    if width == 0 || height == 0 || width % 2 != 0 || height % 2 != 0 {
        return Err(Error::OddDimensions { width, height });
    }
    let y = width as u64 * height as u64;
    Ok(y + y / 2)
}

/// Streaming frame iterator over a raw 4:2:0 byte source.
pub struct RawYuv420Frames<R> {
    reader: R,
    width: u32,
    height: u32,
    frames_read: usize,
    offset: u64,
    fused: bool,
}

/// Wraps a raw 4:2:0 byte stream. Frames are read until EOF; a trailing
/// partial frame is reported as a non-integral frame count.
pub fn open_raw_yuv420<R: Read>(reader: R, width: u32, height: u32) -> Result<RawYuv420Frames<R>> {
    frame_stride(width, height)?; // validates dimensions
    Ok(RawYuv420Frames {
        reader,
        width,
        height,
        frames_read: 0,
        offset: 0,
        fused: false,
    })
}

impl<R: Read> RawYuv420Frames<R> {
    fn read_frame(&mut self) -> Result<Option<Frame>> {
        let y_len = self.width as usize * self.height as usize;
        let chroma_len = y_len / 2;
        let mut samples = vec![0u8; y_len];

        // A clean EOF before the first byte of a frame ends the stream;
        // EOF anywhere inside one is a partial frame.
        let first = match read_fully(&mut self.reader, &mut samples)? {
            0 => return Ok(None),
            got => got,
        };
        if first < y_len {
            return Err(self.non_integral(first as u64));
        }
        let mut chroma = vec![0u8; chroma_len];
        let got = read_fully(&mut self.reader, &mut chroma)?;
        if got < chroma_len {
            return Err(self.non_integral((y_len + got) as u64));
        }
        self.offset += (y_len + chroma_len) as u64;
        self.frames_read += 1;
        Ok(Some(Frame::new(self.width, self.height, samples)?))
    }

    fn non_integral(&self, extra: u64) -> Error {
        let stride = self.width as u64 * self.height as u64 * 3 / 2;
        Error::NonIntegralFrameCount {
            len: self.offset + extra,
            stride,
            width: self.width,
            height: self.height,
        }
    }
}

/// Reads until the buffer is full or EOF; returns bytes read.
fn read_fully(reader: &mut impl Read, buf: &mut [u8]) -> Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match reader.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(filled)
}

impl<R: Read> Iterator for RawYuv420Frames<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.fused {
            return None;
        }
        match self.read_frame() {
            Ok(Some(frame)) => Some(Ok(frame)),
            Ok(None) => {
                self.fused = true;
                None
            }
            Err(e) => {
                self.fused = true;
                Some(Err(e))
            }
        }
    }
}
