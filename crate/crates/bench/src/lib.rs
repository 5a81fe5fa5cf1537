//! Shared inputs for the benchmarks.

use std::path::Path;

use rdhei_core::synth::smooth_field;
use rdhei_core::{read_pgm, GrayImage, SecretKey};

pub const SIDES: [usize; 3] = [128, 256, 512];

/// Lena from the repository test data, or a smooth stand-in of the same size.
pub fn lena() -> GrayImage {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../testdata/standard/lena.pgm");
    std::fs::read(path)
        .ok()
        .and_then(|bytes| read_pgm(&bytes).ok())
        .unwrap_or_else(|| smooth_field(512, 512, 1, 1))
}

pub fn square(side: usize) -> GrayImage {
    smooth_field(side, side, side as u64, 1)
}

pub fn image_key() -> SecretKey {
    SecretKey::from_bytes([0x5a; 32])
}

pub fn hiding_key() -> SecretKey {
    SecretKey::from_bytes([0xa5; 32])
}
