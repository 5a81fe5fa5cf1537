//! Seeded synthetic images for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::GrayImage;

/// Spacing of the random control grid, in pixels.
const CELL: f64 = 32.0;

/// Smooth random field: a coarse grid of random levels, bilinearly
/// interpolated, plus a little per-pixel noise (at most +-`noise`).
pub fn smooth_field(height: usize, width: usize, seed: u64, noise: u8) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cell = CELL;
    let grid_h = (height as f64 / cell).ceil() as usize + 1;
    let grid_w = (width as f64 / cell).ceil() as usize + 1;
    let grid: Vec<f64> = (0..grid_h * grid_w)
        .map(|_| rng.gen_range(16.0..240.0))
        .collect();
    let noise = i16::from(noise);
    GrayImage::from_fn(height, width, |r, c| {
        let (gy, gx) = (r as f64 / cell, c as f64 / cell);
        let (y0, x0) = (gy.floor() as usize, gx.floor() as usize);
        let (fy, fx) = (gy - y0 as f64, gx - x0 as f64);
        let at = |y: usize, x: usize| grid[y * grid_w + x];
        let top = at(y0, x0) * (1.0 - fx) + at(y0, x0 + 1) * fx;
        let bottom = at(y0 + 1, x0) * (1.0 - fx) + at(y0 + 1, x0 + 1) * fx;
        let value = (top * (1.0 - fy) + bottom * fy).round() as i16;
        let jitter = if noise > 0 {
            rng.gen_range(-noise..=noise)
        } else {
            0
        };
        (value + jitter).clamp(0, 255) as u8
    })
}

/// Independent uniform pixels.
pub fn uniform_noise(height: usize, width: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(height, width, |_, _| rng.gen())
}
