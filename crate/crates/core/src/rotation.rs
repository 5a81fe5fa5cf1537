//! Key-driven multi-scale block rotation.
//!
//! A pass at exponent `e` tiles the grid with complete `2^e x 2^e` blocks
//! anchored at the origin. Each block is turned clockwise by `r` quarter turns,
//! where `r` is the sum of the keystream bytes covering the block, mod 4.
//! Cells outside complete blocks are never moved, and keystream values are
//! always read at absolute coordinates.

use rayon::prelude::*;

use crate::crypto::Keystream;
use crate::image::Raster;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Ascending list of block-side exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotationSchedule {
    exponents: Vec<u32>,
}

/// floor(log2(min(height, width))), the largest block exponent that fits.
pub fn max_exponent(height: usize, width: usize) -> u32 {
    let side = height.min(width);
    assert!(side > 0, "dimensions must be positive");
    side.ilog2()
}

impl RotationSchedule {
    /// Every exponent from `min_exp` through `max_exp`; empty if `min_exp > max_exp`.
    pub fn new(min_exp: u32, max_exp: u32) -> Self {
        assert!(min_exp >= 1, "block exponent must be at least 1");
        RotationSchedule {
            exponents: (min_exp..=max_exp).collect(),
        }
    }

    pub fn from_exponents(mut exponents: Vec<u32>) -> Self {
        assert!(
            exponents.iter().all(|&e| e >= 1),
            "block exponent must be at least 1"
        );
        exponents.sort_unstable();
        exponents.dedup();
        RotationSchedule { exponents }
    }

    /// Exponents `min_exp..=max_exponent(height, width)`, with `min_exp`
    /// clamped down to the largest exponent that fits.
    pub fn for_dims(height: usize, width: usize, min_exp: u32) -> Self {
        let max = max_exponent(height, width);
        if max == 0 {
            return RotationSchedule { exponents: vec![] };
        }
        Self::new(min_exp.clamp(1, max), max)
    }

    /// Block sides 2^1 up to the largest that fits.
    pub fn emr(height: usize, width: usize) -> Self {
        Self::for_dims(height, width, 1)
    }

    /// Block sides 2^4 up to the largest that fits (2^e_max if smaller).
    pub fn lmr(height: usize, width: usize) -> Self {
        Self::for_dims(height, width, 4)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Number of clockwise quarter turns applied to the block at (`top`, `left`).
fn block_turns(stream: &Keystream, top: usize, left: usize, side: usize) -> u8 {
    let width = stream.width();
    let bytes = stream.bytes();
    let mut sum: u32 = 0;
    for row in top..top + side {
        let start = row * width + left;
        // Only the sum mod 4 matters, so only the two low bits of each byte.
        sum = sum.wrapping_add(
            bytes[start..start + side]
                .iter()
                .map(|&s| u32::from(s & 3))
                .sum(),
        );
    }
    (sum % 4) as u8
}

/// Rotates the `side x side` block at column `left` of `rows` (a strip of
/// `side` grid rows) clockwise by `turns` quarter turns.
fn rotate_block<T: Copy>(
    rows: &mut [T],
    width: usize,
    left: usize,
    side: usize,
    turns: u8,
    scratch: &mut Vec<T>,
) {
    if turns == 0 {
        return;
    }
    scratch.clear();
    for r in 0..side {
        scratch.extend_from_slice(&rows[r * width + left..r * width + left + side]);
    }
    let last = side - 1;
    for r in 0..side {
        let dst = &mut rows[r * width + left..r * width + left + side];
        for (c, cell) in dst.iter_mut().enumerate() {
            // Clockwise: new[r][c] = old[n-1-c][r].
            let (sr, sc) = match turns {
                1 => (last - c, r),
                2 => (last - r, last - c),
                _ => (c, last - r),
            };
            *cell = scratch[sr * side + sc];
        }
    }
}

/// One rotation pass at block side `2^exponent`.
pub fn rotate_pass<R: Raster>(
    grid: &mut R,
    stream: &Keystream,
    exponent: u32,
    direction: Direction,
) {
    let (height, width) = grid.dims();
    assert_eq!(
        (height, width),
        stream.dims(),
        "keystream dimensions must match the grid"
    );
    let side = 1usize << exponent;
    if side > height || side > width {
        return;
    }
    let blocks_down = height / side;
    let blocks_across = width / side;
    let strip = side * width;
    grid.cells_mut()[..blocks_down * strip]
        .par_chunks_mut(strip)
        .enumerate()
        .for_each_init(Vec::new, |scratch, (block_row, rows)| {
            for block_col in 0..blocks_across {
                let left = block_col * side;
                let r = block_turns(stream, block_row * side, left, side);
                let turns = match direction {
                    Direction::Forward => r,
                    Direction::Inverse => (4 - r) % 4,
                };
                rotate_block(rows, width, left, side, turns, scratch);
            }
        });
}

/// Forward passes run in ascending block size, inverse passes in descending.
pub fn rotate_all<R: Raster>(
    grid: &mut R,
    stream: &Keystream,
    schedule: &RotationSchedule,
    direction: Direction,
) {
    match direction {
        Direction::Forward => {
            for &e in schedule.exponents() {
                rotate_pass(grid, stream, e, direction);
            }
        }
        Direction::Inverse => {
            for &e in schedule.exponents().iter().rev() {
                rotate_pass(grid, stream, e, direction);
            }
        }
    }
}

/// Convenience wrapper returning a rotated copy.
pub fn rotated<R: Raster + Clone>(
    grid: &R,
    stream: &Keystream,
    schedule: &RotationSchedule,
    direction: Direction,
) -> R {
    let mut out = grid.clone();
    rotate_all(&mut out, stream, schedule, direction);
    out
}
