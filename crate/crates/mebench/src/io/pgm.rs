//! Directory-of-PGM input: each frame is one binary (P5) 8-bit PGM file,
//! ordered by file name. All frames must share dimensions.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::io::{SequenceFormat, SequenceSource};
use std::fs::File;
use std::io::{BufRead, BufReader, ErrorKind, Read};
use std::path::{Path, PathBuf};

/// Frame iterator over the `.pgm` files of a directory, in lexicographic
/// file-name order.
pub struct PgmDirFrames {
    files: std::vec::IntoIter<PathBuf>,
    width: u32,
    height: u32,
    fused: bool,
}

/// Lists the directory and parses the first frame's header to learn the
/// sequence dimensions. Files without the `.pgm` extension are ignored.
pub fn open_pgm_dir(dir: &Path) -> Result<PgmDirFrames> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let (width, height) = match files.first() {
        Some(first) => {
            let mut reader = BufReader::new(File::open(first)?);
            read_header(&mut reader, first)?
        }
        None => (0, 0),
    };
    Ok(PgmDirFrames {
        files: files.into_iter(),
        width,
        height,
        fused: false,
    })
}

impl PgmDirFrames {
    pub fn source(&self) -> SequenceSource {
        SequenceSource {
            format: SequenceFormat::PgmDir,
            width: self.width,
            height: self.height,
            frame_count: Some(self.files.len()),
            frame_rate: None,
        }
    }

    fn read_one(&mut self, path: &Path) -> Result<Frame> {
        let mut reader = BufReader::new(File::open(path)?);
        let (width, height) = read_header(&mut reader, path)?;
        if (width, height) != (self.width, self.height) {
            return Err(Error::PgmMixedDimensions {
                file: path.to_path_buf(),
                got_width: width,
                got_height: height,
                want_width: self.width,
                want_height: self.height,
            });
        }
        let len = width as usize * height as usize;
        let mut samples = vec![0u8; len];
        reader.read_exact(&mut samples).map_err(|e| {
            if e.kind() == ErrorKind::UnexpectedEof {
                Error::PgmTruncated {
                    file: path.to_path_buf(),
                    expected: len,
                }
            } else {
                e.into()
            }
        })?;
        Frame::new(width, height, samples)
    }
}

impl Iterator for PgmDirFrames {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.fused {
            return None;
        }
        let path = self.files.next()?;
        match self.read_one(&path) {
            Ok(frame) => Some(Ok(frame)),
            Err(e) => {
                self.fused = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses "P5 <width> <height> <maxval>" with arbitrary whitespace and
/// `#` comments, consuming the single whitespace byte that separates the
/// header from pixel data.
fn read_header(reader: &mut impl BufRead, path: &Path) -> Result<(u32, u32)> {
    let mut magic = [0u8; 2];
    reader.read_exact(&mut magic).map_err(|_| Error::PgmBadHeader {
        file: path.to_path_buf(),
    })?;
    if &magic != b"P5" {
        return Err(Error::PgmNotP5 {
            file: path.to_path_buf(),
        });
    }
    let width = read_header_int(reader, path)?;
    let height = read_header_int(reader, path)?;
    let maxval = read_header_int(reader, path)?;
    if maxval != 255 {
        return Err(Error::PgmBadMaxval {
            file: path.to_path_buf(),
            maxval,
        });
    }
    Ok((width, height))
}

/// Reads the next unsigned decimal token, skipping whitespace and comment
/// lines, plus exactly one trailing whitespace byte.
fn read_header_int(reader: &mut impl BufRead, path: &Path) -> Result<u32> {
    let bad = || Error::PgmBadHeader {
        file: path.to_path_buf(),
    };
    let mut byte = [0u8; 1];
    // Skip whitespace and comments up to the first digit.
    loop {
        reader.read_exact(&mut byte).map_err(|_| bad())?;
        match byte[0] {
            b' ' | b'\t' | b'\r' | b'\n' => {}
            b'#' => {
                let mut comment = Vec::new();
                reader.read_until(b'\n', &mut comment)?;
            }
            b'0'..=b'9' => break,
            _ => return Err(bad()),
        }
    }
    let mut value: u64 = (byte[0] - b'0') as u64;
    loop {
        reader.read_exact(&mut byte).map_err(|_| bad())?;
        match byte[0] {
            b'0'..=b'9' => {
                value = value * 10 + (byte[0] - b'0') as u64;
                if value > u32::MAX as u64 {
                    return Err(bad());
                }
            }
            b' ' | b'\t' | b'\r' | b'\n' => return Ok(value as u32),
            _ => return Err(bad()),
        }
    }
}
