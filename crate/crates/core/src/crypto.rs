//! ChaCha20 keystreams and the XOR ciphers built on them.
//!
//! The keystream for a key is the ChaCha20 (RFC 8439) keystream under an
//! all-zero 96-bit nonce starting at block counter 0. The image key and the
//! message key each start their own stream at counter 0.

use std::fmt;
use std::str::FromStr;

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;

use crate::error::{Error, Result};
use crate::image::{GrayImage, Raster};

/// 256-bit secret key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SecretKey([u8; 32]);

impl SecretKey {
    pub const LEN: usize = 32;

    pub fn from_bytes(bytes: [u8; 32]) -> Self {
        SecretKey(bytes)
    }

    /// Parses exactly 64 hex digits.
    pub fn from_hex(hex: &str) -> Result<Self> {
        let hex = hex.trim();
        if hex.len() != 64 {
            return Err(Error::InvalidKey(format!(
                "expected 64 hex characters, got {}",
                hex.len()
            )));
        }
        let mut bytes = [0u8; 32];
        hex::decode_to_slice(hex, &mut bytes)
            .map_err(|e| Error::InvalidKey(format!("invalid hex key: {e}")))?;
        Ok(SecretKey(bytes))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl FromStr for SecretKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_hex(s)
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretKey(..)")
    }
}

/// Keystream bytes reshaped to an image's dimensions, raster order.
#[derive(Clone, PartialEq, Eq)]
pub struct Keystream {
    height: usize,
    width: usize,
    bytes: Vec<u8>,
}

impl Keystream {
    /// Wraps explicit keystream bytes; mostly useful for tests.
    pub fn from_bytes(height: usize, width: usize, bytes: Vec<u8>) -> Self {
        assert_eq!(
            bytes.len(),
            height * width,
            "keystream length must be height*width"
        );
        Keystream {
            height,
            width,
            bytes,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bytes[row * self.width + col]
    }
}

impl fmt::Debug for Keystream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Keystream({}x{})", self.height, self.width)
    }
}

/// First `len` bytes of the key's ChaCha20 stream.
pub fn keystream_bytes(key: &SecretKey, len: usize) -> Vec<u8> {
    let mut buf = vec![0u8; len];
    let mut cipher = ChaCha20::new(key.as_bytes().into(), &[0u8; 12].into());
    cipher.apply_keystream(&mut buf);
    buf
}

pub fn keystream(key: &SecretKey, height: usize, width: usize) -> Keystream {
    assert!(
        height > 0 && width > 0,
        "keystream dimensions must be positive"
    );
    Keystream {
        height,
        width,
        bytes: keystream_bytes(key, height * width),
    }
}

/// Pixel-wise XOR with the keystream; its own inverse.
pub fn xor_image(img: &GrayImage, stream: &Keystream) -> GrayImage {
    assert_eq!(
        img.dims(),
        stream.dims(),
        "keystream dimensions must match the image"
    );
    let pixels = img
        .pixels()
        .iter()
        .zip(stream.bytes())
        .map(|(p, s)| p ^ s)
        .collect();
    GrayImage::new(img.height(), img.width(), pixels).expect("dimensions already valid")
}

/// XORs `payload` with the key's stream; length-preserving and self-inverse.
pub fn crypt_message(key: &SecretKey, payload: &[u8]) -> Vec<u8> {
    let mut out = payload.to_vec();
    let mut cipher = ChaCha20::new(key.as_bytes().into(), &[0u8; 12].into());
    cipher.apply_keystream(&mut out);
    out
}
