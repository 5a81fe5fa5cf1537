//! Lossless bi-level plane codec.
//!
//! Context-adaptive binary arithmetic coding over a 10-pixel causal template:
//!
//! ```text
//!         row y-2:        a b c
//!         row y-1:      d e f g h
//!         row y  :      i j ?
//! ```
//!
//! Context bits, most significant first: `a b c d e f g h i j`. Cells outside
//! the plane read as 0. Each context keeps adaptive counts `(c0, c1)`, both
//! starting at 1; after a symbol is coded its count is incremented, and when
//! either count exceeds 1024 both are halved (rounding up).
//!
//! The coder is a 32-bit range coder with carry propagation. Its first output
//! byte is always zero and is not stored. The flush picks the value in the
//! final interval with the most trailing zero bits, and trailing zero bytes are
//! dropped; the decoder reads zeros past the end of the stream. A canonical
//! stream therefore never ends in a zero byte, and the decoder rejects one
//! that does or that has bytes left over.

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

const CONTEXTS: usize = 1 << 10;
const COUNT_LIMIT: u32 = 1024;
const TOP: u32 = 1 << 24;

/// A compressed bit plane and the dimensions needed to decode it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedPlane {
    pub height: usize,
    pub width: usize,
    pub bytes: Vec<u8>,
}

impl CompressedPlane {
    /// Stream length in bits (always a multiple of 8).
    pub fn bit_length(&self) -> usize {
        self.bytes.len() * 8
    }
}

#[derive(Clone, Copy)]
struct Counts {
    zero: u32,
    one: u32,
}

impl Counts {
    const INITIAL: Counts = Counts { zero: 1, one: 1 };

    fn update(&mut self, bit: bool) {
        if bit {
            self.one += 1;
        } else {
            self.zero += 1;
        }
        if self.zero > COUNT_LIMIT || self.one > COUNT_LIMIT {
            self.zero = self.zero.div_ceil(2);
            self.one = self.one.div_ceil(2);
        }
    }

    /// Sub-range width assigned to a zero symbol.
    fn zero_bound(self, range: u32) -> u32 {
        (range / (self.zero + self.one)) * self.zero
    }
}

struct Encoder {
    low: u64,
    range: u32,
    cache: u8,
    pending: u64,
    started: bool,
    out: Vec<u8>,
}

impl Encoder {
    fn new() -> Self {
        Encoder {
            low: 0,
            range: u32::MAX,
            cache: 0,
            pending: 1,
            started: false,
            out: Vec::new(),
        }
    }

    fn emit(&mut self, byte: u8) {
        if self.started {
            self.out.push(byte);
        } else {
            debug_assert_eq!(byte, 0, "leading byte must be zero");
            self.started = true;
        }
    }

    fn shift_low(&mut self) {
        if self.low < 0xff00_0000 || self.low > u64::from(u32::MAX) {
            let carry = (self.low >> 32) as u8;
            let mut byte = self.cache;
            loop {
                self.emit(byte.wrapping_add(carry));
                byte = 0xff;
                self.pending -= 1;
                if self.pending == 0 {
                    break;
                }
            }
            self.cache = (self.low >> 24) as u8;
        }
        self.pending += 1;
        self.low = (self.low & 0x00ff_ffff) << 8;
    }

    fn encode(&mut self, bit: bool, counts: Counts) {
        let bound = counts.zero_bound(self.range);
        if bit {
            self.low += u64::from(bound);
            self.range -= bound;
        } else {
            self.range = bound;
        }
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    fn finish(mut self) -> Vec<u8> {
        let end = self.low + u64::from(self.range);
        self.low = (0..=32u32)
            .rev()
            .map(|k| {
                let mask = (1u64 << k) - 1;
                (self.low + mask) & !mask
            })
            .find(|&v| v < end)
            .expect("k = 0 always fits");
        for _ in 0..5 {
            self.shift_low();
        }
        while self.out.last() == Some(&0) {
            self.out.pop();
        }
        self.out
    }
}

struct Decoder<'a> {
    input: &'a [u8],
    pos: usize,
    code: u32,
    range: u32,
}

impl<'a> Decoder<'a> {
    fn new(input: &'a [u8]) -> Self {
        let mut dec = Decoder {
            input,
            pos: 0,
            code: 0,
            range: u32::MAX,
        };
        for _ in 0..4 {
            dec.code = (dec.code << 8) | u32::from(dec.next_byte());
        }
        dec
    }

    fn next_byte(&mut self) -> u8 {
        let byte = self.input.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        byte
    }

    fn decode(&mut self, counts: Counts) -> bool {
        let bound = counts.zero_bound(self.range);
        let bit = if self.code < bound {
            self.range = bound;
            false
        } else {
            self.code -= bound;
            self.range -= bound;
            true
        };
        while self.range < TOP {
            self.range <<= 8;
            self.code = (self.code << 8) | u32::from(self.next_byte());
        }
        bit
    }
}

/// Rows y-2, y-1 and y with two zero cells of padding on each side.
struct Template {
    width: usize,
    rows: [Vec<u8>; 3],
}

impl Template {
    fn new(width: usize) -> Self {
        Template {
            width,
            rows: [vec![0; width + 4], vec![0; width + 4], vec![0; width + 4]],
        }
    }

    /// Shifts the window down one row; the new current row is all zero.
    fn advance(&mut self) {
        self.rows.rotate_left(1);
        self.rows[2].fill(0);
    }

    fn context(&self, x: usize) -> usize {
        // Column x of the plane sits at index x + 2.
        let [above2, above1, current] = &self.rows;
        let c = x + 2;
        let bits = [
            above2[c - 1],
            above2[c],
            above2[c + 1],
            above1[c - 2],
            above1[c - 1],
            above1[c],
            above1[c + 1],
            above1[c + 2],
            current[c - 2],
            current[c - 1],
        ];
        bits.iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b))
    }

    fn set(&mut self, x: usize, bit: bool) {
        debug_assert!(x < self.width);
        self.rows[2][x + 2] = u8::from(bit);
    }
}

pub fn compress(plane: &BitMatrix) -> CompressedPlane {
    let (height, width) = (plane.height(), plane.width());
    let mut model = vec![Counts::INITIAL; CONTEXTS];
    let mut template = Template::new(width);
    let mut enc = Encoder::new();
    for row in plane.bits().chunks_exact(width) {
        template.advance();
        for (x, &bit) in row.iter().enumerate() {
            let ctx = template.context(x);
            enc.encode(bit, model[ctx]);
            model[ctx].update(bit);
            template.set(x, bit);
        }
    }
    CompressedPlane {
        height,
        width,
        bytes: enc.finish(),
    }
}

/// Decodes a stream produced by [`compress`].
///
/// Fails if the stream runs out before every pixel is decoded or if bytes
/// remain afterwards.
pub fn decompress(compressed: &CompressedPlane) -> Result<BitMatrix> {
    let (height, width) = (compressed.height, compressed.width);
    if height == 0 || width == 0 {
        return Err(Error::Format("plane dimensions must be positive".into()));
    }
    let mut model = vec![Counts::INITIAL; CONTEXTS];
    let mut template = Template::new(width);
    if compressed.bytes.last() == Some(&0) {
        return Err(Error::Format("bi-level stream ends in a zero byte".into()));
    }
    let mut dec = Decoder::new(&compressed.bytes);
    let mut bits = Vec::with_capacity(height * width);
    for _ in 0..height {
        template.advance();
        for x in 0..width {
            let ctx = template.context(x);
            let bit = dec.decode(model[ctx]);
            model[ctx].update(bit);
            template.set(x, bit);
            bits.push(bit);
        }
    }
    if dec.pos < compressed.bytes.len() {
        return Err(Error::Format(format!(
            "bi-level stream has {} trailing bytes",
            compressed.bytes.len() - dec.pos
        )));
    }
    Ok(BitMatrix::new(height, width, bits))
}
