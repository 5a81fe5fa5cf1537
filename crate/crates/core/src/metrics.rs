//! Evaluation metrics: embedding rate, PSNR, SSIM, entropy, chi-square,
//! NPCR and UACI.

use serde::{Serialize, Serializer};

use crate::image::GrayImage;

fn histogram(img: &GrayImage) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    counts
}

fn assert_same_dims(a: &GrayImage, b: &GrayImage) {
    assert_eq!(
        (a.height(), a.width()),
        (b.height(), b.width()),
        "images must have equal dimensions"
    );
}

/// Embedding rate in bits per pixel.
pub fn der(payload_bits: u64, pixels: usize) -> f64 {
    payload_bits as f64 / pixels as f64
}

/// Shannon entropy of the grey-level histogram, in bits.
pub fn entropy(img: &GrayImage) -> f64 {
    let n = img.len() as f64;
    histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// `256 * (M*N) * sum (P(a) - 1/256)^2`.
pub fn chi2(img: &GrayImage) -> f64 {
    let n = img.len() as f64;
    let sum: f64 = histogram(img)
        .iter()
        .map(|&c| {
            let d = c as f64 / n - 1.0 / 256.0;
            d * d
        })
        .sum();
    256.0 * n * sum
}

/// Pearson form `sum (O - E)^2 / E` with `E = M*N/256`.
pub fn chi2_counts(img: &GrayImage) -> f64 {
    let expected = img.len() as f64 / 256.0;
    histogram(img)
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Percentage of positions whose values differ.
pub fn npcr(a: &GrayImage, b: &GrayImage) -> f64 {
    assert_same_dims(a, b);
    let changed = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .filter(|(x, y)| x != y)
        .count();
    100.0 * changed as f64 / a.len() as f64
}

/// Mean absolute difference as a percentage of 255.
pub fn uaci(a: &GrayImage, b: &GrayImage) -> f64 {
    assert_same_dims(a, b);
    let total: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| u64::from(x.abs_diff(y)))
        .sum();
    100.0 * total as f64 / (255.0 * a.len() as f64)
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> f64 {
    assert_same_dims(a, b);
    let total: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum();
    total as f64 / a.len() as f64
}

/// `10 log10(255^2 / MSE)`; `+inf` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> f64 {
    let m = mse(a, b);
    if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / m).log10()
    }
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn gaussian_kernel(size: usize) -> Vec<f64> {
    let center = (size as f64 - 1.0) / 2.0;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - center;
            (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

/// Separable "valid" filtering: output is (h-k+1) x (w-k+1).
fn filter_valid(data: &[f64], height: usize, width: usize, kernel: &[f64]) -> Vec<f64> {
    let k = kernel.len();
    let (out_h, out_w) = (height - k + 1, width - k + 1);
    let mut horizontal = vec![0.0; height * out_w];
    for r in 0..height {
        let row = &data[r * width..(r + 1) * width];
        for c in 0..out_w {
            horizontal[r * out_w + c] = row[c..c + k].iter().zip(kernel).map(|(v, w)| v * w).sum();
        }
    }
    let mut out = vec![0.0; out_h * out_w];
    for r in 0..out_h {
        for c in 0..out_w {
            out[r * out_w + c] = (0..k)
                .map(|i| horizontal[(r + i) * out_w + c] * kernel[i])
                .sum();
        }
    }
    out
}

/// Mean SSIM over every 11x11 Gaussian window (sigma 1.5) that fits inside
/// the image; K1 = 0.01, K2 = 0.03, L = 255. Images smaller than 11 pixels
/// on a side use a window as large as the smaller side.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> f64 {
    assert_same_dims(a, b);
    let (height, width) = (a.height(), a.width());
    let kernel = gaussian_kernel(SSIM_WINDOW.min(height).min(width));
    let x: Vec<f64> = a.pixels().iter().map(|&p| f64::from(p)).collect();
    let y: Vec<f64> = b.pixels().iter().map(|&p| f64::from(p)).collect();
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(u, v)| u * v).collect();

    let mu_x = filter_valid(&x, height, width, &kernel);
    let mu_y = filter_valid(&y, height, width, &kernel);
    let e_xx = filter_valid(&xx, height, width, &kernel);
    let e_yy = filter_valid(&yy, height, width, &kernel);
    let e_xy = filter_valid(&xy, height, width, &kernel);

    let total: f64 = (0..mu_x.len())
        .map(|i| {
            let (mx, my) = (mu_x[i], mu_y[i]);
            let var_x = e_xx[i] - mx * mx;
            let var_y = e_yy[i] - my * my;
            let cov = e_xy[i] - mx * my;
            ((2.0 * mx * my + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mx * mx + my * my + SSIM_C1) * (var_x + var_y + SSIM_C2))
        })
        .sum();
    total / mu_x.len() as f64
}

/// Serde helper writing positive infinity as the string `"inf"`.
pub fn serialize_db<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) if v.is_infinite() && *v > 0.0 => s.serialize_str("inf"),
        Some(v) => s.serialize_f64(*v),
        None => s.serialize_none(),
    }
}

/// Metrics for one image, optionally compared against a reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub der_bpp: Option<f64>,
    /// `"inf"` in JSON when the images are identical.
    #[serde(serialize_with = "serialize_db")]
    pub psnr_db: Option<f64>,
    pub ssim: Option<f64>,
    pub entropy_bits: f64,
    pub chi2: f64,
    pub npcr_pct: Option<f64>,
    pub uaci_pct: Option<f64>,
}

impl MetricsReport {
    /// Histogram statistics of `img` alone.
    pub fn single(img: &GrayImage) -> Self {
        MetricsReport {
            der_bpp: None,
            psnr_db: None,
            ssim: None,
            entropy_bits: entropy(img),
            chi2: chi2(img),
            npcr_pct: None,
            uaci_pct: None,
        }
    }

    /// Statistics of `subject` plus pairwise metrics against `reference`.
    pub fn compare(reference: &GrayImage, subject: &GrayImage) -> Self {
        MetricsReport {
            psnr_db: Some(psnr(reference, subject)),
            ssim: Some(ssim(reference, subject)),
            npcr_pct: Some(npcr(reference, subject)),
            uaci_pct: Some(uaci(reference, subject)),
            ..Self::single(subject)
        }
    }

    pub fn with_der(mut self, der_bpp: f64) -> Self {
        self.der_bpp = Some(der_bpp);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&GrayImage::filled(8, 8, 42)), 0.0);
        let half = GrayImage::from_fn(4, 4, |r, _| if r < 2 { 10 } else { 200 });
        assert!((entropy(&half) - 1.0).abs() < 1e-12);
        let all = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
        assert!((entropy(&all) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn chi2_examples() {
        let uniform = GrayImage::new(32, 32, (0..1024).map(|i| (i % 256) as u8).collect()).unwrap();
        assert!(chi2(&uniform).abs() < 1e-9);
        let constant = GrayImage::filled(512, 512, 9);
        assert!((chi2(&constant) - 66_846_720.0).abs() < 1e-3);
        assert!((chi2_counts(&constant) - 66_846_720.0).abs() < 1e-3);
    }

    #[test]
    fn npcr_uaci_examples() {
        let img = GrayImage::from_fn(8, 8, |r, c| (r * 30 + c) as u8);
        assert_eq!(npcr(&img, &img), 0.0);
        assert_eq!(uaci(&img, &img), 0.0);
        let black = GrayImage::filled(4, 4, 0);
        let white = GrayImage::filled(4, 4, 255);
        assert_eq!(npcr(&black, &white), 100.0);
        assert_eq!(uaci(&black, &white), 100.0);
    }

    #[test]
    fn psnr_examples() {
        let img = GrayImage::from_fn(16, 16, |r, c| (r * 16 + c) as u8);
        assert_eq!(psnr(&img, &img), f64::INFINITY);
        let a = GrayImage::filled(512, 512, 0);
        let mut b = a.clone();
        b.set(100, 200, 255);
        assert!((psnr(&a, &b) - 10.0 * 262_144f64.log10()).abs() < 1e-9);
        assert!((psnr(&a, &b) - 54.185).abs() < 1e-3);
    }

    #[test]
    fn ssim_examples() {
        let img = GrayImage::from_fn(32, 32, |r, c| ((r * 7) ^ (c * 13)) as u8);
        assert!((ssim(&img, &img) - 1.0).abs() < 1e-12);
        let other = GrayImage::from_fn(32, 32, |r, c| ((r * 11) ^ (c * 3)) as u8);
        let s = ssim(&img, &other);
        assert!((-1.0..0.5).contains(&s));
        assert!((s - ssim(&other, &img)).abs() < 1e-12);
        // Small images fall back to a smaller window.
        let tiny = GrayImage::from_fn(4, 6, |r, c| (r * 6 + c) as u8);
        assert!((ssim(&tiny, &tiny) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_json_encodes_infinite_psnr() {
        let img = GrayImage::from_fn(12, 12, |r, c| (r + c) as u8);
        let report = MetricsReport::compare(&img, &img).with_der(1.5);
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["psnr_db"], "inf");
        assert_eq!(json["ssim"], 1.0);
        assert_eq!(json["der_bpp"], 1.5);
        let single = serde_json::to_value(MetricsReport::single(&img)).unwrap();
        assert!(single["psnr_db"].is_null());
    }
}
