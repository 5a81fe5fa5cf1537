//! Lossless scheme: compressed maps stored in the MSB plane.
//!
//! # MSB plane layout
//!
//! Bit-packed MSB-first in raster order:
//!
//! | field      | bits      |
//! |------------|-----------|
//! | `b - 2`    | 3         |
//! | `len_eta`  | 32        |
//! | `len_map`  | 32        |
//! | eta stream | `len_eta` |
//! | map stream | `len_map` |
//!
//! Lengths are in bits. Both streams come from [`crate::codec::compress`] on
//! the rotated first-MSB map and the rotated location map. Bits after the map
//! stream keep the encrypted image's MSBs. The data hider only touches bit
//! positions 2..=b, so the whole plane survives hiding.

use crate::bits::{
    first_msb_map, msb_plane_read, msb_plane_write, BitMatrix, BitReader, BitWriter,
};
use crate::codec::{compress, decompress, CompressedPlane};
use crate::crypto::{keystream, xor_image, SecretKey};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::location_map::{reconstruct_msbs, select_optimal, Method, MsbSpan};
use crate::payload::{self, Slots};
use crate::rotation::{rotate_all, Direction, RotationSchedule};

pub const HEADER_BITS: usize = 67;

/// Rotation settings shared by encoder and image recipient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LmrConfig {
    /// Smallest block side is `2^min_block_exponent` (clamped to the image).
    pub min_block_exponent: u32,
}

impl Default for LmrConfig {
    fn default() -> Self {
        LmrConfig {
            min_block_exponent: 4,
        }
    }
}

impl LmrConfig {
    pub fn schedule(&self, height: usize, width: usize) -> RotationSchedule {
        RotationSchedule::for_dims(height, width, self.min_block_exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LmrHeader {
    pub b: u32,
    pub eta_bits: u32,
    pub map_bits: u32,
}

impl LmrHeader {
    pub fn total_bits(&self) -> u64 {
        HEADER_BITS as u64 + u64::from(self.eta_bits) + u64::from(self.map_bits)
    }

    fn write(&self, w: &mut BitWriter) {
        w.push_bits(u64::from(self.b - 2), 3);
        w.push_bits(u64::from(self.eta_bits), 32);
        w.push_bits(u64::from(self.map_bits), 32);
    }

    fn read(r: &mut BitReader<'_>, plane_bits: usize) -> Result<Self> {
        let short = || Error::Format("image too small for the LMR header".into());
        let b = r.read_bits(3).ok_or_else(short)? as u32 + 2;
        let eta_bits = r.read_bits(32).ok_or_else(short)? as u32;
        let map_bits = r.read_bits(32).ok_or_else(short)? as u32;
        let header = LmrHeader {
            b,
            eta_bits,
            map_bits,
        };
        if !Method::Lmr.b_range().contains(&b) {
            return Err(Error::Format(format!("LMR header holds invalid b = {b}")));
        }
        if eta_bits % 8 != 0 || map_bits % 8 != 0 {
            return Err(Error::Format(
                "LMR stream lengths must be whole bytes".into(),
            ));
        }
        if header.total_bits() > plane_bits as u64 {
            return Err(Error::Format(format!(
                "LMR streams need {} bits but the MSB plane has {plane_bits}",
                header.total_bits()
            )));
        }
        Ok(header)
    }
}

/// Successful encoding.
#[derive(Debug, Clone)]
pub struct LmrEncoded {
    pub image: GrayImage,
    pub b: u32,
    pub zeros: usize,
    pub capacity_bits: u64,
    pub header: LmrHeader,
    /// Candidates examined, including the one that fit.
    pub candidates_tried: usize,
}

impl LmrEncoded {
    pub fn der(&self) -> f64 {
        self.capacity_bits as f64 / self.image.len() as f64
    }
}

/// The encoder either fits both maps into the MSB plane or reports a bad case.
#[derive(Debug, Clone)]
pub enum LmrOutcome {
    Good(LmrEncoded),
    /// No candidate map compresses small enough; the image cannot carry data.
    BadCase,
}

impl LmrOutcome {
    pub fn good(self) -> Option<LmrEncoded> {
        match self {
            LmrOutcome::Good(enc) => Some(enc),
            LmrOutcome::BadCase => None,
        }
    }

    pub fn is_good(&self) -> bool {
        matches!(self, LmrOutcome::Good(_))
    }
}

/// Header plus decompressed maps, as read from a (marked) encrypted image.
#[derive(Debug, Clone)]
pub struct LmrLayout {
    pub header: LmrHeader,
    /// Rotated location map.
    pub map: BitMatrix,
    pub slots: Vec<usize>,
}

impl LmrLayout {
    /// Data hider's view: parses the header and decodes only the location map.
    pub fn read(img: &GrayImage) -> Result<Self> {
        let (header, _, map) = parse_plane(img, false)?;
        let slots = map.zero_positions().collect();
        Ok(LmrLayout { header, map, slots })
    }

    pub fn b(&self) -> u32 {
        self.header.b
    }

    pub fn capacity_bits(&self) -> u64 {
        u64::from(self.header.b - 1) * self.slots.len() as u64
    }

    fn slots(&self) -> Slots<'_> {
        Slots {
            positions: &self.slots,
            b: self.header.b,
            span: MsbSpan::SecondToB,
        }
    }
}

fn parse_plane(
    img: &GrayImage,
    with_eta: bool,
) -> Result<(LmrHeader, Option<BitMatrix>, BitMatrix)> {
    let (height, width) = (img.height(), img.width());
    let plane = msb_plane_read(img);
    let mut reader = BitReader::new(plane.bits());
    let header = LmrHeader::read(&mut reader, plane.len())?;
    let mut stream = |bits: u32| CompressedPlane {
        height,
        width,
        bytes: reader
            .read_bytes(bits as usize / 8)
            .expect("length checked against plane"),
    };
    let eta_stream = stream(header.eta_bits);
    let map_stream = stream(header.map_bits);
    let eta = if with_eta {
        Some(decompress(&eta_stream)?)
    } else {
        None
    };
    Ok((header, eta, decompress(&map_stream)?))
}

pub fn lmr_encode(img: &GrayImage, image_key: &SecretKey) -> Result<LmrOutcome> {
    lmr_encode_with(img, image_key, &LmrConfig::default())
}

/// Content owner: walk the candidate maps in payload order until the rotated,
/// compressed first-MSB map and location map fit into the MSB plane together.
pub fn lmr_encode_with(
    img: &GrayImage,
    image_key: &SecretKey,
    config: &LmrConfig,
) -> Result<LmrOutcome> {
    let (height, width) = (img.height(), img.width());
    let capacity_bits = img.len() as u64;
    if capacity_bits < HEADER_BITS as u64 {
        return Ok(LmrOutcome::BadCase);
    }
    let stream = keystream(image_key, height, width);
    let schedule = config.schedule(height, width);

    let mut rotated = img.clone();
    rotate_all(&mut rotated, &stream, &schedule, Direction::Forward);
    let mut eta = first_msb_map(img);
    rotate_all(&mut eta, &stream, &schedule, Direction::Forward);
    let eta_stream = compress(&eta);
    if HEADER_BITS as u64 + eta_stream.bit_length() as u64 > capacity_bits {
        return Ok(LmrOutcome::BadCase);
    }

    for (tried, choice) in select_optimal(img, Method::Lmr).into_iter().enumerate() {
        let mut map = choice.map;
        rotate_all(&mut map, &stream, &schedule, Direction::Forward);
        let map_stream = compress(&map);
        let header = LmrHeader {
            b: choice.b,
            eta_bits: eta_stream.bit_length() as u32,
            map_bits: map_stream.bit_length() as u32,
        };
        if header.total_bits() > capacity_bits {
            continue;
        }

        let encrypted = xor_image(&rotated, &stream);
        let mut w = BitWriter::new();
        header.write(&mut w);
        w.push_bytes(&eta_stream.bytes);
        w.push_bytes(&map_stream.bytes);
        let block = w.into_bits();
        let mut plane = msb_plane_read(&encrypted);
        plane.bits_mut()[..block.len()].copy_from_slice(&block);

        return Ok(LmrOutcome::Good(LmrEncoded {
            image: msb_plane_write(&encrypted, &plane),
            b: choice.b,
            zeros: choice.zeros,
            capacity_bits: choice.payload_bits,
            header,
            candidates_tried: tried + 1,
        }));
    }
    Ok(LmrOutcome::BadCase)
}

/// Data hider: embed into bit positions 2..=b of the redundant pixels (K2 only).
pub fn lmr_hide(
    encrypted: &GrayImage,
    hiding_key: &SecretKey,
    message: &[u8],
) -> Result<GrayImage> {
    let layout = LmrLayout::read(encrypted)?;
    let mut marked = encrypted.clone();
    payload::embed(&mut marked, &layout.slots(), hiding_key, message)?;
    Ok(marked)
}

/// Receiver holding only K2.
pub fn lmr_extract(marked: &GrayImage, hiding_key: &SecretKey) -> Result<Vec<u8>> {
    let layout = LmrLayout::read(marked)?;
    payload::extract(marked, &layout.slots(), hiding_key)
}

pub fn lmr_recover(marked: &GrayImage, image_key: &SecretKey) -> Result<GrayImage> {
    lmr_recover_with(marked, image_key, &LmrConfig::default())
}

/// Receiver holding only K1: bit-exact recovery of the original image.
pub fn lmr_recover_with(
    marked: &GrayImage,
    image_key: &SecretKey,
    config: &LmrConfig,
) -> Result<GrayImage> {
    let (header, eta, map) = parse_plane(marked, true)?;
    let mut eta = eta.expect("requested");
    let mut map = map;
    let (height, width) = (marked.height(), marked.width());
    let stream = keystream(image_key, height, width);
    let schedule = config.schedule(height, width);

    let mut decrypted = xor_image(marked, &stream);
    rotate_all(&mut decrypted, &stream, &schedule, Direction::Inverse);
    rotate_all(&mut eta, &stream, &schedule, Direction::Inverse);
    rotate_all(&mut map, &stream, &schedule, Direction::Inverse);
    let with_msbs = msb_plane_write(&decrypted, &eta);
    Ok(reconstruct_msbs(
        &with_msbs,
        &map,
        header.b,
        MsbSpan::SecondToB,
    ))
}
