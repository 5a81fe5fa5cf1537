//! 8-bit grayscale rasters and their PGM (P5/P2) encoding.

use crate::error::{Error, Result};

/// Row-major grid of cells with fixed dimensions.
///
/// Shared by [`GrayImage`] and [`BitMatrix`](crate::bits::BitMatrix) so that
/// keyed block rotation can move pixels and map entries identically.
pub trait Raster {
    type Cell: Copy + Send + Sync;

    fn height(&self) -> usize;
    fn width(&self) -> usize;
    fn cells(&self) -> &[Self::Cell];
    fn cells_mut(&mut self) -> &mut [Self::Cell];

    fn dims(&self) -> (usize, usize) {
        (self.height(), self.width())
    }
}

/// 8-bit grayscale image, `height` rows by `width` columns, raster order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, pixels: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {height}x{width}"
            )));
        }
        if height.checked_mul(width) != Some(pixels.len()) {
            return Err(Error::InvalidImage(format!(
                "{} pixels do not fill a {height}x{width} image",
                pixels.len()
            )));
        }
        Ok(GrayImage {
            height,
            width,
            pixels,
        })
    }

    pub fn filled(height: usize, width: usize, value: u8) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        GrayImage {
            height,
            width,
            pixels: vec![value; height * width],
        }
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(height * width);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        GrayImage {
            height,
            width,
            pixels,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u8> {
        self.pixels.chunks_exact(self.width)
    }

    pub(crate) fn same_dims<R: Raster>(&self, other: &R) -> bool {
        (self.height, self.width) == other.dims()
    }
}

impl Raster for GrayImage {
    type Cell = u8;

    fn height(&self) -> usize {
        self.height
    }
    fn width(&self) -> usize {
        self.width
    }
    fn cells(&self) -> &[u8] {
        &self.pixels
    }
    fn cells_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pixels.len() <= 64 {
            f.debug_struct("GrayImage")
                .field("height", &self.height)
                .field("width", &self.width)
                .field("pixels", &self.pixels)
                .finish()
        } else {
            write!(f, "GrayImage({}x{})", self.height, self.width)
        }
    }
}

/// Parses a binary (P5) or ASCII (P2) PGM with maxval at most 255.
///
/// `#` comments are accepted anywhere whitespace is allowed in the header.
/// Sample values are taken as-is and never rescaled to 255.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cursor = HeaderCursor { bytes, pos: 0 };
    let ascii = match bytes.get(..2) {
        Some(b"P5") => false,
        Some(b"P2") => true,
        _ => return Err(cursor.error("expected magic P5 or P2")),
    };
    cursor.pos = 2;
    let width = cursor.number("width")?;
    let height = cursor.number("height")?;
    let maxval_offset = cursor.pos;
    let maxval = cursor.number("maxval")?;
    if maxval > 255 {
        return Err(Error::UnsupportedDepth(maxval));
    }
    if maxval == 0 {
        return Err(Error::Parse {
            offset: maxval_offset,
            reason: "maxval must be positive".into(),
        });
    }
    let (width, height) = (width as usize, height as usize);
    if width == 0 || height == 0 {
        return Err(Error::Parse {
            offset: maxval_offset,
            reason: format!("dimensions must be positive, got {width}x{height}"),
        });
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| cursor.error("image dimensions overflow"))?;

    let pixels = if ascii {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let offset = cursor.pos;
            let value = cursor.number("pixel value")?;
            if value > maxval {
                return Err(Error::Parse {
                    offset,
                    reason: format!("pixel value {value} exceeds maxval {maxval}"),
                });
            }
            pixels.push(value as u8);
        }
        pixels
    } else {
        // Exactly one whitespace byte separates maxval from the raster.
        match bytes.get(cursor.pos) {
            Some(c) if c.is_ascii_whitespace() => cursor.pos += 1,
            _ => return Err(cursor.error("expected whitespace after maxval")),
        }
        let start = cursor.pos;
        let raster = bytes
            .get(start..start + count)
            .ok_or_else(|| Error::Parse {
                offset: bytes.len(),
                reason: format!(
                    "raster truncated: need {count} bytes, found {}",
                    bytes.len() - start
                ),
            })?;
        if let Some(i) = raster.iter().position(|&v| u32::from(v) > maxval) {
            return Err(Error::Parse {
                offset: start + i,
                reason: format!("pixel value {} exceeds maxval {maxval}", raster[i]),
            });
        }
        raster.to_vec()
    };
    GrayImage::new(height, width, pixels)
}

/// Encodes as binary P5 with maxval 255 and no comments.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_blanks(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_blanks();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&c) = self.bytes.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(c - b'0')))
                .ok_or_else(|| Error::Parse {
                    offset: start,
                    reason: format!("{what} is too large"),
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse {
                offset: start,
                reason: format!("expected {what}"),
            });
        }
        Ok(value)
    }
}
