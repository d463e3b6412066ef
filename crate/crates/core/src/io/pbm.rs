//! Portable bitmap (PBM) images, plain `P1` and raw `P4`.
//!
//! Pixel value 1 is black, as in the PBM convention. Raw rows are packed
//! most-significant bit first and padded to a whole byte.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Sequence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::MalformedHeader(format!(
                "image size {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                left: pixels.len(),
                right: width * height,
            });
        }
        if pixels.iter().any(|&p| p > 1) {
            return Err(Error::Parse("binary image pixels must be 0 or 1".into()));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Row-major pixels.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbmFormat {
    /// `P1`, one character per pixel.
    Plain,
    /// `P4`, eight pixels per byte.
    Raw,
}

/// Row-major scan into a binary sequence.
pub fn rasterize(grid: &ImageGrid) -> Sequence {
    Sequence::new(grid.pixels.clone(), Arc::new(Alphabet::binary())).expect("pixels are 0/1")
}

pub fn derasterize(seq: &Sequence, width: usize, height: usize) -> Result<ImageGrid> {
    if seq.len() != width * height {
        return Err(Error::LengthMismatch {
            left: seq.len(),
            right: width * height,
        });
    }
    if seq.alphabet().size() != 2 {
        return Err(Error::DimensionMismatch(
            "images need a binary alphabet".into(),
        ));
    }
    ImageGrid::new(width, height, seq.data().to_vec())
}

pub fn load_pbm(path: &Path) -> Result<ImageGrid> {
    let bytes = fs::read(path)?;
    if bytes.is_empty() {
        return Err(Error::EmptyFile(path.to_path_buf()));
    }
    parse_pbm(&bytes)
}

/// Writes raw `P4`.
pub fn save_pbm(grid: &ImageGrid, path: &Path) -> Result<()> {
    save_pbm_with(grid, path, PbmFormat::Raw, &[])
}

pub fn save_pbm_with(
    grid: &ImageGrid,
    path: &Path,
    format: PbmFormat,
    comments: &[String],
) -> Result<()> {
    fs::write(path, encode_pbm(grid, format, comments))?;
    Ok(())
}

pub fn encode_pbm(grid: &ImageGrid, format: PbmFormat, comments: &[String]) -> Vec<u8> {
    let magic = match format {
        PbmFormat::Plain => "P1",
        PbmFormat::Raw => "P4",
    };
    let mut out = format!("{magic}\n").into_bytes();
    for c in comments {
        for line in c.lines() {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
    }
    out.extend_from_slice(format!("{} {}\n", grid.width, grid.height).as_bytes());
    match format {
        PbmFormat::Plain => {
            for row in grid.pixels.chunks(grid.width) {
                // Keep lines under 70 characters.
                for part in row.chunks(69) {
                    out.extend(part.iter().map(|&p| b'0' + p));
                    out.push(b'\n');
                }
            }
        }
        PbmFormat::Raw => {
            for row in grid.pixels.chunks(grid.width) {
                for byte in row.chunks(8) {
                    let packed = byte
                        .iter()
                        .enumerate()
                        .fold(0u8, |acc, (b, &p)| acc | (p << (7 - b)));
                    out.push(packed);
                }
            }
        }
    }
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len()
                    && self.bytes[self.pos] != b'\n'
                    && self.bytes[self.pos] != b'\r'
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("bad {what}")))
    }
}

pub fn parse_pbm(bytes: &[u8]) -> Result<ImageGrid> {
    let raw = match bytes.get(..2) {
        Some(b"P1") => false,
        Some(b"P4") => true,
        _ => return Err(Error::MalformedHeader("expected magic P1 or P4".into())),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "image size {width}x{height}"
        )));
    }
    let total = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("image too large".into()))?;
    let pixels = if raw {
        // Exactly one whitespace byte separates the header from the raster.
        match bytes.get(h.pos) {
            Some(b) if b.is_ascii_whitespace() => h.pos += 1,
            _ => {
                return Err(Error::MalformedHeader(
                    "missing separator before raster".into(),
                ))
            }
        }
        let stride = width.div_ceil(8);
        let expected = stride * height;
        let data = &bytes[h.pos..];
        if data.len() < expected {
            return Err(Error::TruncatedPayload {
                expected,
                found: data.len(),
            });
        }
        let mut pixels = Vec::with_capacity(total);
        for row in data[..expected].chunks(stride) {
            for col in 0..width {
                pixels.push((row[col / 8] >> (7 - col % 8)) & 1);
            }
        }
        pixels
    } else {
        let mut pixels = Vec::with_capacity(total);
        let mut pos = h.pos;
        while pixels.len() < total && pos < bytes.len() {
            match bytes[pos] {
                b'0' => pixels.push(0),
                b'1' => pixels.push(1),
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => {}
                b => {
                    return Err(Error::Parse(format!(
                        "unexpected byte {b:#04x} in P1 raster"
                    )))
                }
            }
            pos += 1;
        }
        if pixels.len() < total {
            return Err(Error::TruncatedPayload {
                expected: total,
                found: pixels.len(),
            });
        }
        pixels
    };
    ImageGrid::new(width, height, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_all_black() {
        let g = parse_pbm(b"P1\n# tiny\n2 2\n1 1\n1 1\n").unwrap();
        assert_eq!(g.pixels(), &[1, 1, 1, 1]);
    }

    #[test]
    fn plain_without_separators() {
        let g = parse_pbm(b"P1 3 2 010110").unwrap();
        assert_eq!(g.pixels(), &[0, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn raw_bit_packing_is_msb_first() {
        // 10 pixels per row: two bytes per row, last 6 bits padding.
        let mut bytes = b"P4\n10 1\n".to_vec();
        bytes.extend([0b1000_0001, 0b0100_0000]);
        let g = parse_pbm(&bytes).unwrap();
        assert_eq!(g.pixels(), &[1, 0, 0, 0, 0, 0, 0, 1, 0, 1]);
        assert_eq!(encode_pbm(&g, PbmFormat::Raw, &[]), bytes);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_pbm(b"P2 1 1 0"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(parse_pbm(b"P1 2"), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            parse_pbm(b"P4\n16 2\n\xff"),
            Err(Error::TruncatedPayload {
                expected: 4,
                found: 1
            })
        ));
        assert!(matches!(
            parse_pbm(b"P1 2 2 1 0 1"),
            Err(Error::TruncatedPayload {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn raster_order() {
        let g = ImageGrid::new(2, 2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(rasterize(&g).data(), &[0, 1, 1, 0]);
        let seq = rasterize(&ImageGrid::new(512, 512, vec![0; 512 * 512]).unwrap());
        assert_eq!(seq.len(), 262144);
        assert!(matches!(
            derasterize(&seq, 100, 100),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
