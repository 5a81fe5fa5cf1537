//! Redundancy location maps, optimal `b` selection and MSB reconstruction.
//!
//! Each row is scanned left to right with a running reference `omega`: the top
//! `b` bits of the most recent non-redundant pixel. A pixel whose top `b` bits
//! equal `omega` is redundant (labeled 0); otherwise it is labeled 1 and
//! becomes the new reference. The first column is always labeled 1.

use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{
    extract_bits_2_to_b, replace_bits_2_to_b, replace_top_bits, top_bits, BitMatrix,
};
use crate::image::GrayImage;

/// Which of the two hiding schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Location map in the LSB plane; recovery exact except for LSBs.
    Emr,
    /// Compressed maps in the MSB plane; bit-exact recovery.
    Lmr,
}

impl Method {
    /// Candidate values of `b`.
    pub fn b_range(self) -> std::ops::RangeInclusive<u32> {
        match self {
            Method::Emr => 2..=7,
            Method::Lmr => 2..=8,
        }
    }

    /// Message bits carried by each redundant pixel.
    pub fn bits_per_pixel(self, b: u32) -> u32 {
        match self {
            Method::Emr => b,
            Method::Lmr => b - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Emr => "emr",
            Method::Lmr => "lmr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "emr" => Ok(Method::Emr),
            "lmr" => Ok(Method::Lmr),
            other => Err(format!("unknown method {other:?} (expected emr or lmr)")),
        }
    }
}

/// Which bit positions a reconstruction pass restores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MsbSpan {
    /// Positions 1..=b.
    Top,
    /// Positions 2..=b; position 1 is restored separately.
    SecondToB,
}

/// A candidate map with its `b` and capacity.
#[derive(Clone, PartialEq, Eq)]
pub struct LocationMapChoice {
    pub map: BitMatrix,
    pub b: u32,
    pub method: Method,
    /// Number of 0-labeled (redundant) pixels.
    pub zeros: usize,
    /// Gross embeddable bits: `bits_per_pixel(b) * zeros`.
    pub payload_bits: u64,
}

impl LocationMapChoice {
    /// Data embedding rate in bits per pixel.
    pub fn der(&self) -> f64 {
        self.payload_bits as f64 / self.map.len() as f64
    }
}

impl fmt::Debug for LocationMapChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocationMapChoice")
            .field("method", &self.method)
            .field("b", &self.b)
            .field("zeros", &self.zeros)
            .field("payload_bits", &self.payload_bits)
            .finish()
    }
}

/// Raw map for one `b` in `[1, 8]`.
pub fn redundancy_map(img: &GrayImage, b: u32) -> BitMatrix {
    assert!((1..=8).contains(&b), "b must be in [1, 8], got {b}");
    let mut bits = Vec::with_capacity(img.len());
    for row in img.rows() {
        let mut omega = top_bits(row[0], b);
        bits.push(true);
        for &p in &row[1..] {
            let top = top_bits(p, b);
            if top == omega {
                bits.push(false);
            } else {
                bits.push(true);
                omega = top;
            }
        }
    }
    BitMatrix::new(img.height(), img.width(), bits)
}

pub fn generate_map(img: &GrayImage, b: u32, method: Method) -> LocationMapChoice {
    assert!(
        method.b_range().contains(&b),
        "b = {b} outside the {method} range"
    );
    let map = redundancy_map(img, b);
    let zeros = map.count_zeros();
    LocationMapChoice {
        map,
        b,
        method,
        zeros,
        payload_bits: u64::from(method.bits_per_pixel(b)) * zeros as u64,
    }
}

/// All candidates, best first: payload descending, then smaller `b`.
pub fn select_optimal(img: &GrayImage, method: Method) -> Vec<LocationMapChoice> {
    let mut choices: Vec<LocationMapChoice> = method
        .b_range()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| generate_map(img, b, method))
        .collect();
    choices.sort_by_key(|c| (Reverse(c.payload_bits), c.b));
    choices
}

/// Restores the bits in `span` of every 0-labeled pixel from the row's
/// running reference.
///
/// 1-labeled pixels refresh the reference from their own bits. A row whose
/// first entry is labeled 0 has no reference yet; such leading pixels are left
/// as they are and seed the reference themselves.
pub fn reconstruct_msbs(img: &GrayImage, map: &BitMatrix, b: u32, span: MsbSpan) -> GrayImage {
    assert!(
        img.same_dims(map),
        "map {}x{} does not match image {}x{}",
        map.height(),
        map.width(),
        img.height(),
        img.width()
    );
    type Read = fn(u8, u32) -> u8;
    type Write = fn(u8, u32, u8) -> u8;
    let (read, write): (Read, Write) = match span {
        MsbSpan::Top => (top_bits, replace_top_bits),
        MsbSpan::SecondToB => (extract_bits_2_to_b, replace_bits_2_to_b),
    };
    let mut out = img.clone();
    let width = img.width();
    for (row, labels) in out
        .pixels_mut()
        .chunks_exact_mut(width)
        .zip(map.bits().chunks_exact(width))
    {
        let mut omega: Option<u8> = None;
        for (p, &label) in row.iter_mut().zip(labels) {
            match (label, omega) {
                (false, Some(reference)) => *p = write(*p, b, reference),
                _ => omega = Some(read(*p, b)),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(pixels: &[u8]) -> GrayImage {
        GrayImage::new(1, pixels.len(), pixels.to_vec()).unwrap()
    }

    #[test]
    fn constant_image_map() {
        let img = GrayImage::filled(4, 4, 77);
        let choice = generate_map(&img, 3, Method::Emr);
        for r in 0..4 {
            let labels: Vec<bool> = (0..4).map(|c| choice.map.get(r, c)).collect();
            assert_eq!(labels, vec![true, false, false, false]);
        }
        assert_eq!(choice.zeros, 12);
        assert_eq!(choice.payload_bits, 36);
    }

    #[test]
    fn four_pixel_row_b2() {
        let choice = generate_map(&row(&[144, 150, 96, 130]), 2, Method::Emr);
        assert_eq!(choice.map.bits(), &[true, false, true, true]);
    }

    #[test]
    fn reference_tracks_last_non_redundant_pixel() {
        // Top-2 bits: 3, 0, 0, 3, 3. The reference moves 3 -> 0 -> 3.
        let choice = generate_map(&row(&[200, 10, 20, 250, 255]), 2, Method::Emr);
        assert_eq!(choice.map.bits(), &[true, true, false, true, false]);
    }

    #[test]
    fn alternating_msbs_have_no_redundancy() {
        let img = GrayImage::from_fn(3, 8, |_, c| if c % 2 == 0 { 0 } else { 255 });
        for b in Method::Lmr.b_range() {
            let choice = generate_map(&img, b, Method::Lmr);
            assert_eq!(choice.zeros, 0);
            assert_eq!(choice.map.count_ones(), 24);
        }
    }

    #[test]
    fn four_pixel_row_selection() {
        let choices = select_optimal(&row(&[144, 150, 96, 130]), Method::Emr);
        let zeros: Vec<(u32, usize)> = {
            let mut z: Vec<_> = choices.iter().map(|c| (c.b, c.zeros)).collect();
            z.sort();
            z
        };
        assert_eq!(zeros, vec![(2, 1), (3, 1), (4, 1), (5, 1), (6, 0), (7, 0)]);
        assert_eq!(choices[0].b, 5);
        assert_eq!(choices[0].payload_bits, 5);
        // Ties on zero payload fall back to ascending b.
        assert_eq!(choices[4].b, 6);
        assert_eq!(choices[5].b, 7);
    }

    #[test]
    fn constant_image_prefers_largest_b() {
        let img = GrayImage::filled(6, 10, 200);
        let emr = select_optimal(&img, Method::Emr);
        assert_eq!(emr[0].b, 7);
        assert!((emr[0].der() - 7.0 * 9.0 / 10.0).abs() < 1e-12);
        let lmr = select_optimal(&img, Method::Lmr);
        assert_eq!(lmr[0].b, 8);
        assert_eq!(lmr[0].payload_bits, 7 * 54);
    }

    #[test]
    fn lmr_weights_by_b_minus_one() {
        let img = GrayImage::from_fn(8, 8, |r, c| ((r * 8 + c) * 3) as u8);
        for c in select_optimal(&img, Method::Lmr) {
            assert_eq!(c.payload_bits, (c.b as u64 - 1) * c.zeros as u64);
        }
    }

    #[test]
    fn choices_are_sorted() {
        let img = GrayImage::from_fn(16, 16, |r, c| ((r * c) ^ (r + 3 * c)) as u8);
        for method in [Method::Emr, Method::Lmr] {
            let choices = select_optimal(&img, method);
            assert_eq!(choices.len(), method.b_range().count());
            for w in choices.windows(2) {
                assert!(
                    w[0].payload_bits > w[1].payload_bits
                        || (w[0].payload_bits == w[1].payload_bits && w[0].b < w[1].b)
                );
            }
        }
    }

    #[test]
    fn reconstruct_restores_corrupted_top_bits() {
        let original = row(&[144, 150, 96, 130]);
        let map = BitMatrix::new(1, 4, vec![true, false, true, true]);
        let mut damaged = original.clone();
        damaged.set(0, 1, replace_top_bits(150, 5, 0b01101));
        let fixed = reconstruct_msbs(&damaged, &map, 5, MsbSpan::Top);
        assert_eq!(top_bits(fixed.get(0, 1), 5), 0b10010);
        assert_eq!(fixed, original);
    }

    #[test]
    fn all_ones_map_is_identity() {
        let img = GrayImage::from_fn(5, 5, |r, c| (r * 50 + c * 7) as u8);
        let map = BitMatrix::filled(5, 5, true);
        assert_eq!(reconstruct_msbs(&img, &map, 6, MsbSpan::Top), img);
        assert_eq!(reconstruct_msbs(&img, &map, 6, MsbSpan::SecondToB), img);
    }

    #[test]
    fn second_to_b_span_keeps_position_one() {
        let original = row(&[0b1010_0001, 0b1010_0110]);
        let map = BitMatrix::new(1, 2, vec![true, false]);
        // Scramble bits 1..4 of the second pixel; only 2..4 come back.
        let damaged = row(&[0b1010_0001, 0b0101_0110]);
        let fixed = reconstruct_msbs(&damaged, &map, 4, MsbSpan::SecondToB);
        assert_eq!(fixed.get(0, 1), 0b0010_0110);
        let fixed_top = reconstruct_msbs(&damaged, &map, 4, MsbSpan::Top);
        assert_eq!(fixed_top, original);
    }

    #[test]
    fn leading_zero_label_seeds_reference() {
        let img = row(&[0x40, 0xff, 0x00]);
        let map = BitMatrix::new(1, 3, vec![false, false, true]);
        let out = reconstruct_msbs(&img, &map, 2, MsbSpan::Top);
        assert_eq!(out.pixels(), &[0x40, 0x7f, 0x00]);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("EMR".parse::<Method>(), Ok(Method::Emr));
        assert_eq!("lmr".parse::<Method>(), Ok(Method::Lmr));
        assert!("xyz".parse::<Method>().is_err());
    }
}
