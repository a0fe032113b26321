//! Binary PGM (`P5`) reading and writing for 8-bit grayscale rasters.
//!
//! Only single-image, maxval ≤ 255 files are accepted. Header comments
//! (`#` to end of line) are skipped. Writing always emits the canonical
//! `P5\n<w> <h>\n255\n` header, so `load_pgm(&save_pgm(r)) == r`.

use crate::error::{Error, Result};

/// An 8-bit grayscale image stored row-major with a top-left origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::MalformedHeader(format!("{width}x{height} overflows")))?;
        if pixels.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn same_shape(&self, other: &Raster) -> bool {
        self.width == other.width && self.height == other.height
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
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
            .ok_or_else(|| Error::MalformedHeader(format!("{what} out of range")))
    }
}

/// Parse a binary PGM stream.
pub fn load_pgm(bytes: &[u8]) -> Result<Raster> {
    match bytes.get(..2) {
        Some(b"P5") => {}
        Some([b'P', b'2' | b'3' | b'6']) => {
            return Err(Error::MalformedHeader(
                "only binary grayscale PGM (P5) is supported".into(),
            ))
        }
        _ => return Err(Error::MalformedHeader("missing P5 magic".into())),
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(Error::MalformedHeader("missing P5 magic".into()));
    }
    let width = cur.read_number("width")? as usize;
    let height = cur.read_number("height")? as usize;
    let maxval = cur.read_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match cur.bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "missing separator after maxval".into(),
            ))
        }
    }

    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader(format!("{width}x{height} overflows")))?;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(Error::TruncatedPayload {
            expected,
            actual: payload.len(),
        });
    }
    if payload.len() > expected {
        return Err(Error::TrailingBytes {
            expected,
            extra: payload.len() - expected,
        });
    }
    if let Some(&over) = payload.iter().find(|&&v| u32::from(v) > maxval) {
        return Err(Error::MalformedHeader(format!(
            "sample {over} exceeds maxval {maxval}"
        )));
    }
    Raster::new(width, height, payload.to_vec())
}

/// Serialize a raster as binary PGM with maxval 255.
pub fn save_pgm(img: &Raster) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}
