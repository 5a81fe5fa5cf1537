//! Bit-plane and multi-MSB primitives.
//!
//! Bit positions are numbered 1 (MSB, weight 128) through 8 (LSB, weight 1).
//! The "top b bits" of a pixel are positions 1..=b.

use crate::image::{GrayImage, Raster};

/// One bit per pixel: location maps, the first-MSB map and bit-planes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    height: usize,
    width: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn new(height: usize, width: usize, bits: Vec<bool>) -> Self {
        assert!(
            height > 0 && width > 0,
            "matrix dimensions must be positive"
        );
        assert_eq!(
            bits.len(),
            height * width,
            "bit count must equal height*width"
        );
        BitMatrix {
            height,
            width,
            bits,
        }
    }

    pub fn filled(height: usize, width: usize, value: bool) -> Self {
        Self::new(height, width, vec![value; height * width])
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(height * width);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(row, col));
            }
        }
        Self::new(height, width, bits)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn count_zeros(&self) -> usize {
        self.bits.iter().filter(|&&b| !b).count()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.len() - self.count_zeros()
    }

    /// Raster indices of 0-labeled entries.
    pub fn zero_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (!b).then_some(i))
    }
}

impl Raster for BitMatrix {
    type Cell = bool;

    fn height(&self) -> usize {
        self.height
    }
    fn width(&self) -> usize {
        self.width
    }
    fn cells(&self) -> &[bool] {
        &self.bits
    }
    fn cells_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.height, self.width)?;
        if self.bits.len() <= 1024 {
            for row in self.bits.chunks(self.width) {
                let line: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

#[inline]
fn check_b(b: u32) {
    assert!((1..=8).contains(&b), "b must be in [1, 8], got {b}");
}

/// The `b` most significant bits of `pixel`, as an integer in `[0, 2^b)`.
#[inline]
pub fn top_bits(pixel: u8, b: u32) -> u8 {
    check_b(b);
    ((pixel as u16) >> (8 - b)) as u8
}

/// Overwrites the top `b` bits of `pixel` with `value`, keeping the rest.
#[inline]
pub fn replace_top_bits(pixel: u8, b: u32, value: u8) -> u8 {
    check_b(b);
    assert!(
        u16::from(value) < 1u16 << b,
        "value {value} does not fit in {b} bits"
    );
    let low_mask = ((1u16 << (8 - b)) - 1) as u8;
    (((value as u16) << (8 - b)) as u8) | (pixel & low_mask)
}

/// Bits at positions 2..=b, as an integer in `[0, 2^(b-1))`.
#[inline]
pub fn extract_bits_2_to_b(pixel: u8, b: u32) -> u8 {
    assert!((2..=8).contains(&b), "b must be in [2, 8], got {b}");
    top_bits(pixel, b) & (((1u16 << (b - 1)) - 1) as u8)
}

/// Overwrites positions 2..=b with `value`; position 1 and b+1..=8 keep their bits.
#[inline]
pub fn replace_bits_2_to_b(pixel: u8, b: u32, value: u8) -> u8 {
    assert!((2..=8).contains(&b), "b must be in [2, 8], got {b}");
    assert!(
        u16::from(value) < 1u16 << (b - 1),
        "value {value} does not fit in {} bits",
        b - 1
    );
    replace_top_bits(pixel, b, (pixel & 0x80) >> (8 - b) | value)
}

/// First-MSB map: 1 where the pixel is at least 128.
///
/// Written as `(p & 128) % 127`, which is 1 for 128 and 0 for 0.
pub fn first_msb_map(img: &GrayImage) -> BitMatrix {
    let bits = img.pixels().iter().map(|&p| (p & 128) % 127 == 1).collect();
    BitMatrix::new(img.height(), img.width(), bits)
}

fn plane_read(img: &GrayImage, mask: u8) -> BitMatrix {
    let bits = img.pixels().iter().map(|&p| p & mask != 0).collect();
    BitMatrix::new(img.height(), img.width(), bits)
}

fn plane_write(img: &GrayImage, bits: &BitMatrix, mask: u8) -> GrayImage {
    assert!(
        img.same_dims(bits),
        "plane {}x{} does not match image {}x{}",
        bits.height(),
        bits.width(),
        img.height(),
        img.width()
    );
    let mut out = img.clone();
    for (p, &bit) in out.pixels_mut().iter_mut().zip(bits.bits()) {
        *p = if bit { *p | mask } else { *p & !mask };
    }
    out
}

pub fn lsb_plane_read(img: &GrayImage) -> BitMatrix {
    plane_read(img, 0x01)
}

pub fn lsb_plane_write(img: &GrayImage, bits: &BitMatrix) -> GrayImage {
    plane_write(img, bits, 0x01)
}

pub fn msb_plane_read(img: &GrayImage) -> BitMatrix {
    plane_read(img, 0x80)
}

pub fn msb_plane_write(img: &GrayImage, bits: &BitMatrix) -> GrayImage {
    plane_write(img, bits, 0x80)
}

/// MSB-first bit sink.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `count` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, count: u32) {
        assert!(count <= 64);
        for i in (0..count).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn push_bytes(&mut self, bytes: &[u8]) {
        for &byte in bytes {
            self.push_bits(u64::from(byte), 8);
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }
}

/// MSB-first bit source over a bool slice.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    /// Reads `count` bits as an unsigned integer; `None` if too few remain.
    pub fn read_bits(&mut self, count: u32) -> Option<u64> {
        assert!(count <= 64);
        let end = self.pos.checked_add(count as usize)?;
        let slice = self.bits.get(self.pos..end)?;
        self.pos = end;
        Some(slice.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    pub fn read_bytes(&mut self, count: usize) -> Option<Vec<u8>> {
        if self.remaining() < count * 8 {
            return None;
        }
        (0..count)
            .map(|_| self.read_bits(8).map(|v| v as u8))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_bits_examples() {
        assert_eq!(top_bits(144, 2), 0b10);
        for x in 0..=255u8 {
            assert_eq!(top_bits(x, 8), x);
        }
        for b in 1..=8 {
            assert_eq!(top_bits(0, b), 0);
        }
    }

    #[test]
    fn replace_top_bits_examples() {
        assert_eq!(replace_top_bits(0b1001_0000, 4, 0b0110), 96);
        assert_eq!(replace_top_bits(255, 1, 0), 127);
        assert_eq!(replace_top_bits(0x5a, 8, 0xa5), 0xa5);
    }

    #[test]
    fn replace_then_read_roundtrips_exhaustively() {
        for p in 0..=255u8 {
            for b in 1..=8u32 {
                assert_eq!(replace_top_bits(p, b, top_bits(p, b)), p);
                for v in 0..(1u16 << b) {
                    let q = replace_top_bits(p, b, v as u8);
                    assert_eq!(u16::from(top_bits(q, b)), v);
                    let low = ((1u16 << (8 - b)) - 1) as u8;
                    assert_eq!(q & low, p & low);
                }
            }
        }
    }

    #[test]
    fn replace_bits_2_to_b_examples() {
        assert_eq!(replace_bits_2_to_b(0b1111_1111, 4, 0b000), 0b1000_1111);
        for p in 0..=255u8 {
            assert_eq!(replace_bits_2_to_b(p, 2, 0), p & !0x40);
            assert_eq!(replace_bits_2_to_b(p, 2, 1), p | 0x40);
        }
    }

    #[test]
    fn bits_2_to_b_roundtrip_exhaustively() {
        for p in 0..=255u8 {
            for b in 2..=8u32 {
                assert_eq!(replace_bits_2_to_b(p, b, extract_bits_2_to_b(p, b)), p);
                for v in 0..(1u16 << (b - 1)) {
                    let q = replace_bits_2_to_b(p, b, v as u8);
                    assert_eq!(u16::from(extract_bits_2_to_b(q, b)), v);
                    assert_eq!(q & 0x80, p & 0x80, "position 1 must be kept");
                    let low = ((1u16 << (8 - b)) - 1) as u8;
                    assert_eq!(q & low, p & low);
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "does not fit")]
    fn oversized_value_is_a_contract_violation() {
        replace_top_bits(0, 3, 8);
    }

    #[test]
    #[should_panic(expected = "b must be in")]
    fn b_out_of_range_is_a_contract_violation() {
        top_bits(0, 9);
    }

    #[test]
    fn first_msb_map_examples() {
        let img = GrayImage::new(1, 2, vec![200, 100]).unwrap();
        let map = first_msb_map(&img);
        assert_eq!(map.bits(), &[true, false]);
        let white = first_msb_map(&GrayImage::filled(3, 3, 255));
        assert_eq!(white.count_ones(), 9);
    }

    #[test]
    fn msb_map_matches_plane_for_every_value() {
        let img = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
        assert_eq!(first_msb_map(&img), msb_plane_read(&img));
    }

    #[test]
    fn plane_writes_touch_only_their_position() {
        let img = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
        for value in [false, true] {
            let plane = BitMatrix::filled(16, 16, value);
            let lsb = lsb_plane_write(&img, &plane);
            let msb = msb_plane_write(&img, &plane);
            for ((&p, &l), &m) in img.pixels().iter().zip(lsb.pixels()).zip(msb.pixels()) {
                assert_eq!(l & 0xfe, p & 0xfe);
                assert_eq!(l & 1 == 1, value);
                assert_eq!(m & 0x7f, p & 0x7f);
                assert_eq!(m & 0x80 != 0, value);
            }
            assert_eq!(lsb_plane_read(&lsb), plane);
            assert_eq!(msb_plane_read(&msb), plane);
        }
    }

    #[test]
    fn lsb_write_examples() {
        let img = GrayImage::new(1, 1, vec![7]).unwrap();
        let out = lsb_plane_write(&img, &BitMatrix::filled(1, 1, false));
        assert_eq!(out.pixels(), &[6]);
        let own = lsb_plane_read(&img);
        assert_eq!(lsb_plane_write(&img, &own), img);
    }

    #[test]
    #[should_panic(expected = "does not match")]
    fn plane_dimension_mismatch_panics() {
        lsb_plane_write(&GrayImage::filled(2, 2, 0), &BitMatrix::filled(2, 3, true));
    }

    #[test]
    fn bit_writer_reader_roundtrip() {
        let mut w = BitWriter::new();
        w.push_bits(0b101, 3);
        w.push_bits(0xdead_beef, 32);
        w.push_bytes(&[0x12, 0x34]);
        assert_eq!(w.len(), 3 + 32 + 16);
        let bits = w.into_bits();
        let mut r = BitReader::new(&bits);
        assert_eq!(r.read_bits(3), Some(0b101));
        assert_eq!(r.read_bits(32), Some(0xdead_beef));
        assert_eq!(r.read_bytes(2), Some(vec![0x12, 0x34]));
        assert_eq!(r.read_bits(1), None);
    }
}
