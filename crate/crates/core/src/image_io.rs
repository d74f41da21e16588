//! 8-bit grayscale rasters and the binary PGM (`P5`) interchange format.
//!
//! Only `maxval = 255` is accepted. The writer always emits the canonical
//! header `P5\n{w} {h}\n255\n`; the reader accepts any whitespace and `#`
//! comments between header tokens.

use crate::error::{Error, PgmError, PgmErrorKind, Result};

/// Row-major 8-bit grayscale image with a top-left origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width.checked_mul(height).ok_or_else(|| {
            Error::InvalidImage(format!("dimensions {width}x{height} overflow"))
        })?;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} pixels for {width}x{height}, got {}",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::new(width, height, vec![value; width * height]).expect("positive dimensions")
    }

    /// Builds an image by evaluating `f(x, y)` in row-major order.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels).expect("positive dimensions")
    }

    /// Builds an image from equal-length rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != width) {
            return Err(Error::InvalidImage("rows have unequal lengths".into()));
        }
        let pixels = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.pixels[y * self.width + x] = value;
    }

    /// Pixel at signed coordinates clamped into the image (replicate padding).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.pixels.chunks_exact(self.width)
    }
}

/// Decodes a binary PGM.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let mut cur = HeaderCursor { bytes, pos: 0 };

    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(cur.fail(PgmErrorKind::BadMagic));
    }
    cur.pos = 2;

    let width_at = cur.skip_separators()?;
    let width = cur.number()?;
    let height_at = cur.skip_separators()?;
    let height = cur.number()?;
    if width == 0 {
        return Err(PgmError {
            kind: PgmErrorKind::ZeroDimension,
            offset: width_at,
        });
    }
    if height == 0 {
        return Err(PgmError {
            kind: PgmErrorKind::ZeroDimension,
            offset: height_at,
        });
    }
    let maxval_at = cur.skip_separators()?;
    let maxval = cur.number()?;
    if maxval != 255 {
        return Err(PgmError {
            kind: PgmErrorKind::UnsupportedMaxval(maxval),
            offset: maxval_at,
        });
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        Some(_) => return Err(cur.fail(PgmErrorKind::MissingWhitespace)),
        None => return Err(cur.fail(PgmErrorKind::UnexpectedEof)),
    }

    let too_large = || PgmError {
        kind: PgmErrorKind::BadNumber,
        offset: width_at,
    };
    let width = usize::try_from(width).map_err(|_| too_large())?;
    let height = usize::try_from(height).map_err(|_| too_large())?;
    let expected = width.checked_mul(height).ok_or_else(too_large)?;

    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(PgmError {
            kind: PgmErrorKind::TruncatedPayload {
                expected,
                found: payload.len(),
            },
            offset: bytes.len(),
        });
    }
    Ok(GrayImage {
        width,
        height,
        pixels: payload[..expected].to_vec(),
    })
}

/// Encodes `image` as a binary PGM with the canonical header.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + image.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&image.pixels);
    out
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn fail(&self, kind: PgmErrorKind) -> PgmError {
        PgmError {
            kind,
            offset: self.pos,
        }
    }

    /// Skips whitespace and `#` comments; at least one separator is required.
    /// Returns the offset of the next token.
    fn skip_separators(&mut self) -> Result<usize, PgmError> {
        let start = self.pos;
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(&b) = self.bytes.get(self.pos) {
                        self.pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(_) if self.pos == start => return Err(self.fail(PgmErrorKind::BadNumber)),
                Some(_) => return Ok(self.pos),
                None => return Err(self.fail(PgmErrorKind::UnexpectedEof)),
            }
        }
    }

    fn number(&mut self) -> Result<u64, PgmError> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(b - b'0')))
                .ok_or(PgmError {
                    kind: PgmErrorKind::BadNumber,
                    offset: start,
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.fail(match self.bytes.get(self.pos) {
                None => PgmErrorKind::UnexpectedEof,
                Some(_) => PgmErrorKind::BadNumber,
            }));
        }
        Ok(value)
    }
}
