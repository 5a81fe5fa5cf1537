//! High-capacity scheme: location map stored in the LSB plane.
//!
//! # LSB plane layout
//!
//! After rotation the first three raster entries of the location map are
//! forced to 1, which never breaks reconstruction (a redundant pixel relabeled
//! as a reference refreshes the reference with the value it already has).
//! Those three LSBs instead hold `b - 2` as a 3-bit field, MSB first. Every
//! other LSB holds the rotated map entry for its own position.
//!
//! Recovery restores bit positions 1..=7 exactly; the LSB plane is lost.

use crate::bits::{lsb_plane_read, lsb_plane_write, BitMatrix, BitReader, BitWriter};
use crate::crypto::{keystream, xor_image, SecretKey};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::location_map::{reconstruct_msbs, select_optimal, Method, MsbSpan};
use crate::payload::{self, Slots};
use crate::rotation::{rotate_all, Direction, RotationSchedule};

/// Header bits stored in place of the first three map entries.
pub const HEADER_BITS: usize = 3;
/// Smallest supported image, in pixels.
pub const MIN_PIXELS: usize = 16;

/// The in-image parameter block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmrHeader {
    pub b: u32,
}

impl EmrHeader {
    pub fn to_bits(self) -> Vec<bool> {
        assert!(Method::Emr.b_range().contains(&self.b));
        let mut w = BitWriter::new();
        w.push_bits(u64::from(self.b - 2), HEADER_BITS as u32);
        w.into_bits()
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let field = BitReader::new(bits)
            .read_bits(HEADER_BITS as u32)
            .ok_or_else(|| Error::Format("image too small for the EMR header".into()))?;
        let b = field as u32 + 2;
        if !Method::Emr.b_range().contains(&b) {
            return Err(Error::Format(format!("EMR header holds invalid b = {b}")));
        }
        Ok(EmrHeader { b })
    }
}

/// Result of [`emr_encode`].
#[derive(Debug, Clone)]
pub struct EmrEncoded {
    /// Encrypted image with the embedded map.
    pub image: GrayImage,
    pub b: u32,
    /// Redundant pixels available to the data hider.
    pub zeros: usize,
    /// Embeddable bits after the header forcing.
    pub capacity_bits: u64,
    /// Embeddable bits of the selected map before the header forcing.
    pub gross_payload_bits: u64,
}

impl EmrEncoded {
    pub fn der(&self) -> f64 {
        self.capacity_bits as f64 / self.image.len() as f64
    }

    pub fn gross_der(&self) -> f64 {
        self.gross_payload_bits as f64 / self.image.len() as f64
    }
}

/// What a data hider learns from the LSB plane, without any key.
#[derive(Debug, Clone)]
pub struct EmrLayout {
    pub b: u32,
    /// Rotated location map, header entries set to 1.
    pub map: BitMatrix,
    pub slots: Vec<usize>,
}

impl EmrLayout {
    pub fn read(img: &GrayImage) -> Result<Self> {
        check_size(img)?;
        let mut map = lsb_plane_read(img);
        let header = EmrHeader::from_bits(&map.bits()[..HEADER_BITS])?;
        map.bits_mut()[..HEADER_BITS].fill(true);
        let slots = map.zero_positions().collect();
        Ok(EmrLayout {
            b: header.b,
            map,
            slots,
        })
    }

    pub fn capacity_bits(&self) -> u64 {
        u64::from(self.b) * self.slots.len() as u64
    }

    fn slots(&self) -> Slots<'_> {
        Slots {
            positions: &self.slots,
            b: self.b,
            span: MsbSpan::Top,
        }
    }
}

fn check_size(img: &GrayImage) -> Result<()> {
    if img.len() < MIN_PIXELS {
        return Err(Error::UnsupportedSize {
            height: img.height(),
            width: img.width(),
        });
    }
    Ok(())
}

/// Content owner: select the map, rotate, encrypt and embed the map (key K1).
pub fn emr_encode(img: &GrayImage, image_key: &SecretKey) -> Result<EmrEncoded> {
    check_size(img)?;
    let (height, width) = (img.height(), img.width());
    let choice = select_optimal(img, Method::Emr)
        .into_iter()
        .next()
        .expect("at least one candidate b");

    let stream = keystream(image_key, height, width);
    let schedule = RotationSchedule::emr(height, width);
    let mut rotated = img.clone();
    rotate_all(&mut rotated, &stream, &schedule, Direction::Forward);
    let mut map = choice.map.clone();
    rotate_all(&mut map, &stream, &schedule, Direction::Forward);
    let encrypted = xor_image(&rotated, &stream);

    map.bits_mut()[..HEADER_BITS].fill(true);
    let zeros = map.count_zeros();
    let mut plane = map;
    plane.bits_mut()[..HEADER_BITS].copy_from_slice(&EmrHeader { b: choice.b }.to_bits());

    Ok(EmrEncoded {
        image: lsb_plane_write(&encrypted, &plane),
        b: choice.b,
        zeros,
        capacity_bits: u64::from(choice.b) * zeros as u64,
        gross_payload_bits: choice.payload_bits,
    })
}

/// Data hider: embed `message` into an encrypted image (key K2 only).
pub fn emr_hide(
    encrypted: &GrayImage,
    hiding_key: &SecretKey,
    message: &[u8],
) -> Result<GrayImage> {
    let layout = EmrLayout::read(encrypted)?;
    let mut marked = encrypted.clone();
    payload::embed(&mut marked, &layout.slots(), hiding_key, message)?;
    Ok(marked)
}

/// Receiver holding only K2: recover the message. No de-rotation is needed.
pub fn emr_extract(marked: &GrayImage, hiding_key: &SecretKey) -> Result<Vec<u8>> {
    let layout = EmrLayout::read(marked)?;
    payload::extract(marked, &layout.slots(), hiding_key)
}

/// Receiver holding only K1: decrypt, de-rotate and rebuild the replaced MSBs.
pub fn emr_recover(marked: &GrayImage, image_key: &SecretKey) -> Result<GrayImage> {
    let layout = EmrLayout::read(marked)?;
    let (height, width) = (marked.height(), marked.width());
    let stream = keystream(image_key, height, width);
    let schedule = RotationSchedule::emr(height, width);

    let mut decrypted = xor_image(marked, &stream);
    rotate_all(&mut decrypted, &stream, &schedule, Direction::Inverse);
    let mut map = layout.map;
    rotate_all(&mut map, &stream, &schedule, Direction::Inverse);
    Ok(reconstruct_msbs(&decrypted, &map, layout.b, MsbSpan::Top))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys() -> (SecretKey, SecretKey) {
        (
            SecretKey::from_bytes([1; 32]),
            SecretKey::from_bytes([2; 32]),
        )
    }

    fn gradient(h: usize, w: usize) -> GrayImage {
        GrayImage::from_fn(h, w, |r, c| ((r * 3 + c * 2) / 2) as u8)
    }

    #[test]
    fn header_roundtrip_and_validation() {
        for b in 2..=7 {
            let bits = EmrHeader { b }.to_bits();
            assert_eq!(bits.len(), 3);
            assert_eq!(EmrHeader::from_bits(&bits).unwrap().b, b);
        }
        assert!(matches!(
            EmrHeader::from_bits(&[true, true, false]),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn full_roundtrip_preserves_seven_msbs() {
        let (k1, k2) = keys();
        let img = gradient(32, 40);
        let enc = emr_encode(&img, &k1).unwrap();
        let msg = b"the quick brown fox".to_vec();
        let marked = emr_hide(&enc.image, &k2, &msg).unwrap();
        assert_eq!(emr_extract(&marked, &k2).unwrap(), msg);
        let recovered = emr_recover(&marked, &k1).unwrap();
        for (&a, &b) in img.pixels().iter().zip(recovered.pixels()) {
            assert_eq!(a >> 1, b >> 1);
        }
    }

    #[test]
    fn recovery_without_message() {
        let (k1, _) = keys();
        let img = gradient(16, 16);
        let enc = emr_encode(&img, &k1).unwrap();
        let recovered = emr_recover(&enc.image, &k1).unwrap();
        for (&a, &b) in img.pixels().iter().zip(recovered.pixels()) {
            assert_eq!(a >> 1, b >> 1);
        }
    }

    #[test]
    fn constant_image_uses_b7() {
        let (k1, _) = keys();
        let img = GrayImage::filled(8, 16, 90);
        let enc = emr_encode(&img, &k1).unwrap();
        assert_eq!(enc.b, 7);
        assert_eq!(enc.gross_payload_bits, 7 * 8 * 15);
        assert!(enc.capacity_bits >= enc.gross_payload_bits - 3 * 7);
        assert!((enc.gross_der() - 7.0 * 15.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn capacity_matches_hider_view() {
        let (k1, _) = keys();
        let enc = emr_encode(&gradient(24, 24), &k1).unwrap();
        let layout = EmrLayout::read(&enc.image).unwrap();
        assert_eq!(layout.b, enc.b);
        assert_eq!(layout.capacity_bits(), enc.capacity_bits);
    }

    #[test]
    fn empty_message() {
        let (k1, k2) = keys();
        let enc = emr_encode(&gradient(16, 16), &k1).unwrap();
        let marked = emr_hide(&enc.image, &k2, &[]).unwrap();
        assert!(emr_extract(&marked, &k2).unwrap().is_empty());
    }

    #[test]
    fn oversized_message_reports_capacity() {
        let (k1, k2) = keys();
        let enc = emr_encode(&gradient(16, 16), &k1).unwrap();
        let max = payload::max_message_len(enc.capacity_bits);
        assert!(emr_hide(&enc.image, &k2, &vec![7; max]).is_ok());
        match emr_hide(&enc.image, &k2, &vec![7; max + 1]) {
            Err(Error::Capacity {
                capacity,
                requested,
            }) => {
                assert_eq!(capacity, enc.capacity_bits);
                assert_eq!(requested, 32 + 8 * (max as u64 + 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_tiny_images() {
        let (k1, _) = keys();
        assert!(matches!(
            emr_encode(&GrayImage::filled(3, 5, 0), &k1),
            Err(Error::UnsupportedSize { .. })
        ));
        assert!(emr_encode(&GrayImage::filled(4, 4, 0), &k1).is_ok());
        assert!(emr_encode(&GrayImage::filled(1, 16, 0), &k1).is_ok());
    }
}
