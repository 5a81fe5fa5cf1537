//! Message framing and placement into redundant pixels.
//!
//! The framed payload is a 32-bit big-endian message length followed by the
//! message, the whole XOR-encrypted under the data-hiding key. Its bits fill
//! the 0-labeled pixels in raster order, MSB-first within each pixel's field.

use crate::bits::{extract_bits_2_to_b, replace_bits_2_to_b, replace_top_bits, top_bits};
use crate::crypto::{crypt_message, SecretKey};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::location_map::MsbSpan;

/// Bits spent on the length prefix.
pub const LENGTH_PREFIX_BITS: u64 = 32;

/// Total embedded bits for a message of `len` bytes.
pub fn framed_bits(len: usize) -> u64 {
    LENGTH_PREFIX_BITS + 8 * len as u64
}

/// Largest message, in bytes, that fits in `capacity_bits`.
pub fn max_message_len(capacity_bits: u64) -> usize {
    (capacity_bits.saturating_sub(LENGTH_PREFIX_BITS) / 8) as usize
}

/// Where message bits go: the `span` field of each pixel in `slots`.
pub(crate) struct Slots<'a> {
    pub positions: &'a [usize],
    pub b: u32,
    pub span: MsbSpan,
}

impl Slots<'_> {
    pub fn field_width(&self) -> u32 {
        match self.span {
            MsbSpan::Top => self.b,
            MsbSpan::SecondToB => self.b - 1,
        }
    }

    pub fn capacity_bits(&self) -> u64 {
        u64::from(self.field_width()) * self.positions.len() as u64
    }

    fn read(&self, pixel: u8) -> u8 {
        match self.span {
            MsbSpan::Top => top_bits(pixel, self.b),
            MsbSpan::SecondToB => extract_bits_2_to_b(pixel, self.b),
        }
    }

    fn write(&self, pixel: u8, value: u8) -> u8 {
        match self.span {
            MsbSpan::Top => replace_top_bits(pixel, self.b, value),
            MsbSpan::SecondToB => replace_bits_2_to_b(pixel, self.b, value),
        }
    }
}

fn to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&byte| (0..8).rev().map(move |i| (byte >> i) & 1 == 1))
        .collect()
}

fn to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | u8::from(b)))
        .collect()
}

/// Encrypts and writes `message` into the slots of `img`.
///
/// A partially filled last field keeps its remaining low bits; unused slots
/// are left untouched.
pub(crate) fn embed(
    img: &mut GrayImage,
    slots: &Slots<'_>,
    key: &SecretKey,
    message: &[u8],
) -> Result<()> {
    let capacity = slots.capacity_bits();
    let requested = framed_bits(message.len());
    if requested > capacity || message.len() > u32::MAX as usize {
        return Err(Error::Capacity {
            capacity,
            requested,
        });
    }
    let mut framed = Vec::with_capacity(4 + message.len());
    framed.extend_from_slice(&(message.len() as u32).to_be_bytes());
    framed.extend_from_slice(message);
    let bits = to_bits(&crypt_message(key, &framed));

    let width = slots.field_width() as usize;
    let pixels = img.pixels_mut();
    for (&pos, chunk) in slots.positions.iter().zip(bits.chunks(width)) {
        let mut field = slots.read(pixels[pos]);
        for (i, &bit) in chunk.iter().enumerate() {
            let mask = 1u8 << (width - 1 - i);
            if bit {
                field |= mask;
            } else {
                field &= !mask;
            }
        }
        pixels[pos] = slots.write(pixels[pos], field);
    }
    Ok(())
}

fn gather(img: &GrayImage, slots: &Slots<'_>, count: usize) -> Vec<bool> {
    let width = slots.field_width() as usize;
    let pixels = img.pixels();
    let mut bits = Vec::with_capacity(count + width);
    for &pos in slots.positions {
        if bits.len() >= count {
            break;
        }
        let field = slots.read(pixels[pos]);
        bits.extend((0..width).rev().map(|i| (field >> i) & 1 == 1));
    }
    bits.truncate(count);
    bits
}

/// Reads and decrypts the framed message.
pub(crate) fn extract(img: &GrayImage, slots: &Slots<'_>, key: &SecretKey) -> Result<Vec<u8>> {
    let capacity = slots.capacity_bits();
    if capacity < LENGTH_PREFIX_BITS {
        return Err(Error::Integrity(format!(
            "capacity of {capacity} bits cannot hold a length prefix"
        )));
    }
    let prefix = crypt_message(
        key,
        &to_bytes(&gather(img, slots, LENGTH_PREFIX_BITS as usize)),
    );
    let len = u32::from_be_bytes(prefix[..4].try_into().expect("four bytes")) as usize;
    let needed = framed_bits(len);
    if needed > capacity {
        return Err(Error::Integrity(format!(
            "embedded length {len} bytes exceeds the capacity of {capacity} bits (wrong key or tampered image)"
        )));
    }
    let framed = crypt_message(key, &to_bytes(&gather(img, slots, needed as usize)));
    Ok(framed[4..].to_vec())
}
