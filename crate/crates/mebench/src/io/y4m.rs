//! Minimal YUV4MPEG2 reader: 8-bit 4:2:0 only, luminance plane extracted,
//! chroma planes skipped. Errors carry the byte offset where parsing
//! stopped.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::io::{SequenceFormat, SequenceSource};
use std::io::{BufRead, ErrorKind};

const SIGNATURE: &[u8] = b"YUV4MPEG2";

/// Colorspace tokens this reader accepts: the 8-bit 4:2:0 family.
const C420_FAMILY: [&str; 4] = ["420", "420jpeg", "420paldv", "420mpeg2"];

/// Streaming frame iterator over a YUV4MPEG2 byte source.
#[derive(Debug)]
pub struct Y4mFrames<R> {
    reader: R,
    width: u32,
    height: u32,
    frame_rate: Option<(u32, u32)>,
    /// Bytes consumed so far, for error reporting.
    offset: u64,
    frames_read: usize,
    fused: bool,
}

/// Parses the stream header and returns the frame iterator. The header
/// line must carry the signature plus W and H tokens; a C token outside
/// the 8-bit 4:2:0 family is rejected.
pub fn open_y4m<R: BufRead>(mut reader: R) -> Result<Y4mFrames<R>> {
    let mut line = Vec::new();
    let consumed = reader.read_until(b'\n', &mut line)?;
    if consumed == 0 || line.last() != Some(&b'\n') || !line.starts_with(SIGNATURE) {
        return Err(Error::Y4mBadSignature { offset: 0 });
    }
    let header = std::str::from_utf8(&line[..line.len() - 1])
        .map_err(|_| Error::Y4mBadSignature { offset: 0 })?;
    let mut width = None;
    let mut height = None;
    let mut frame_rate = None;
    for token in header.split(' ').skip(1) {
        let (tag, value) = match token.split_at_checked(1) {
            Some(parts) => parts,
            None => continue,
        };
        match tag {
            "W" => width = value.parse::<u32>().ok(),
            "H" => height = value.parse::<u32>().ok(),
            "F" => {
                if let Some((num, den)) = value.split_once(':') {
                    if let (Ok(n), Ok(d)) = (num.parse(), den.parse()) {
                        frame_rate = Some((n, d));
                    }
                }
            }
            "C" => {
                if !C420_FAMILY.contains(&value) {
                    return Err(Error::Y4mUnsupportedColorspace {
                        colorspace: token.to_string(),
                    });
                }
            }
            // I (interlacing), A (aspect), X (extensions) are ignored.
            _ => {}
        }
    }
    let (Some(width), Some(height)) = (width, height) else {
        return Err(Error::Y4mBadSignature { offset: 0 });
    };
    if width == 0 || height == 0 || width % 2 != 0 || height % 2 != 0 {
        return Err(Error::OddDimensions { width, height });
    }
    Ok(Y4mFrames {
        reader,
        width,
        height,
        frame_rate,
        offset: consumed as u64,
        frames_read: 0,
        fused: false,
    })
}

impl<R: BufRead> Y4mFrames<R> {
    pub fn source(&self) -> SequenceSource {
        SequenceSource {
            format: SequenceFormat::Y4m,
            width: self.width,
            height: self.height,
            frame_count: None,
            frame_rate: self.frame_rate,
        }
    }

    fn truncated(&self) -> Error {
        Error::TruncatedFrame {
            frame_index: self.frames_read,
            offset: self.offset,
        }
    }

    /// Reads one frame: FRAME marker line, then Y, then skipped chroma.
    /// Returns Ok(None) at a clean end of stream.
    fn read_frame(&mut self) -> Result<Option<Frame>> {
        let mut marker = Vec::new();
        let consumed = self.reader.read_until(b'\n', &mut marker)?;
        if consumed == 0 {
            return Ok(None); // clean EOF between frames
        }
        if marker.last() != Some(&b'\n') || !marker.starts_with(b"FRAME") {
            return Err(self.truncated());
        }
        self.offset += consumed as u64;

        let y_len = self.width as usize * self.height as usize;
        let mut samples = vec![0u8; y_len];
        self.read_plane(&mut samples)?;
        let chroma_len = (self.width as usize / 2) * (self.height as usize / 2);
        let mut chroma = vec![0u8; chroma_len];
        self.read_plane(&mut chroma)?; // U, skipped
        self.read_plane(&mut chroma)?; // V, skipped

        self.frames_read += 1;
        Ok(Some(Frame::new(self.width, self.height, samples)?))
    }

    fn read_plane(&mut self, buf: &mut [u8]) -> Result<()> {
        match self.reader.read_exact(buf) {
            Ok(()) => {
                self.offset += buf.len() as u64;
                Ok(())
            }
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => Err(self.truncated()),
            Err(e) => Err(e.into()),
        }
    }
}

impl<R: BufRead> Iterator for Y4mFrames<R> {
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
