//! Corpus benchmark: the whole pipeline on every PGM in a directory.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use rdhei_core::crypto::keystream_bytes;
use rdhei_core::metrics::{self, serialize_db};
use rdhei_core::{GrayImage, LmrConfig, Method, SecretKey};
use serde::Serialize;

use crate::commands::{self, load_image, Result};
use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub method: Method,
    pub seed: u64,
    pub lmr: LmrConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Good,
    Bad,
}

/// One image through one method. Bad cases leave the measurements empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub path: String,
    pub method: Method,
    pub b: Option<u32>,
    pub der_bpp: Option<f64>,
    #[serde(serialize_with = "serialize_db")]
    pub psnr_db: Option<f64>,
    pub ssim: Option<f64>,
    pub case: Case,
    pub ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    #[serde(serialize_with = "serialize_db")]
    pub min: Option<f64>,
    #[serde(serialize_with = "serialize_db")]
    pub avg: Option<f64>,
    #[serde(serialize_with = "serialize_db")]
    pub max: Option<f64>,
}

impl Aggregate {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.collect();
        if values.is_empty() {
            return Aggregate {
                min: None,
                avg: None,
                max: None,
            };
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let avg = if values.iter().all(|v| v.is_infinite()) {
            f64::INFINITY
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        Aggregate {
            min: Some(min),
            avg: Some(avg),
            max: Some(max),
        }
    }
}

/// Aggregates over the good cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub method: Method,
    pub images: usize,
    pub good: usize,
    pub bad: usize,
    pub der_bpp: Aggregate,
    pub psnr_db: Aggregate,
    pub ssim: Aggregate,
}

impl Summary {
    pub fn from_records(method: Method, records: &[BenchRecord]) -> Self {
        let good: Vec<&BenchRecord> = records.iter().filter(|r| r.case == Case::Good).collect();
        Summary {
            method,
            images: records.len(),
            good: good.len(),
            bad: records.len() - good.len(),
            der_bpp: Aggregate::of(good.iter().filter_map(|r| r.der_bpp)),
            psnr_db: Aggregate::of(good.iter().filter_map(|r| r.psnr_db)),
            ssim: Aggregate::of(good.iter().filter_map(|r| r.ssim)),
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn cell(v: Option<f64>) -> String {
            match v {
                Some(v) if v.is_infinite() => "inf".into(),
                Some(v) => format!("{v:.4}"),
                None => "-".into(),
            }
        }
        writeln!(
            f,
            "{}: {} images, {} good, {} bad",
            self.method, self.images, self.good, self.bad
        )?;
        writeln!(f, "{:<8} {:>10} {:>10} {:>10}", "", "min", "avg", "max")?;
        for (name, agg) in [
            ("der_bpp", self.der_bpp),
            ("psnr_db", self.psnr_db),
            ("ssim", self.ssim),
        ] {
            writeln!(
                f,
                "{:<8} {:>10} {:>10} {:>10}",
                name,
                cell(agg.min),
                cell(agg.avg),
                cell(agg.max)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub format: u32,
    pub seed: u64,
    pub records: Vec<BenchRecord>,
    pub summary: Summary,
}

/// Per-image keys: consecutive 96-byte windows of the master keystream give
/// the image key, the hiding key and the key for the test message.
pub struct ImageKeys {
    pub key1: SecretKey,
    pub key2: SecretKey,
    pub message: SecretKey,
}

pub fn derive_keys(seed: u64, count: usize) -> Vec<ImageKeys> {
    let mut master = [0u8; 32];
    master[..8].copy_from_slice(&seed.to_le_bytes());
    let stream = keystream_bytes(&SecretKey::from_bytes(master), 96 * count);
    let key = |bytes: &[u8]| SecretKey::from_bytes(bytes.try_into().expect("32 bytes"));
    stream
        .chunks_exact(96)
        .map(|w| ImageKeys {
            key1: key(&w[..32]),
            key2: key(&w[32..64]),
            message: key(&w[64..]),
        })
        .collect()
}

/// `*.pgm` files directly inside `dir`, sorted by path.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_file()
            && path
                .extension()
                .is_some_and(|x| x.eq_ignore_ascii_case("pgm"))
        {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Fills the capacity, runs every step and checks the outputs.
pub fn bench_image(
    path: &Path,
    img: &GrayImage,
    keys: &ImageKeys,
    opts: &BenchOptions,
) -> Result<BenchRecord> {
    let method = opts.method;
    let start = Instant::now();
    let enc = match commands::encode(img, method, &keys.key1, &opts.lmr) {
        Ok(enc) => enc,
        Err(CliError::BadCase) => {
            return Ok(BenchRecord {
                path: path.display().to_string(),
                method,
                b: None,
                der_bpp: None,
                psnr_db: None,
                ssim: None,
                case: Case::Bad,
                ms: start.elapsed().as_secs_f64() * 1e3,
            })
        }
        Err(e) => return Err(e),
    };
    let message = keystream_bytes(&keys.message, enc.max_message_bytes);
    let marked = commands::hide(&enc.image, method, &keys.key2, &message)?;
    let extracted = commands::extract(&marked, method, &keys.key2)?;
    let recovered = commands::recover(&marked, method, &keys.key1, &opts.lmr)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;

    if extracted != message {
        return Err(CliError::Mismatch(format!(
            "{}: extracted message differs",
            path.display()
        )));
    }
    let exact = match method {
        Method::Emr => img
            .pixels()
            .iter()
            .zip(recovered.pixels())
            .all(|(a, b)| a >> 1 == b >> 1),
        Method::Lmr => &recovered == img,
    };
    if !exact {
        return Err(CliError::Mismatch(format!(
            "{}: recovered image differs",
            path.display()
        )));
    }
    Ok(BenchRecord {
        path: path.display().to_string(),
        method,
        b: Some(enc.b),
        der_bpp: Some(enc.der_bpp),
        psnr_db: Some(metrics::psnr(img, &recovered)),
        ssim: Some(metrics::ssim(img, &recovered)),
        case: Case::Good,
        ms,
    })
}

pub fn run(dir: &Path, opts: &BenchOptions) -> Result<BenchReport> {
    let paths = list_images(dir)?;
    if paths.is_empty() {
        return Err(CliError::Usage(format!(
            "no .pgm files in {}",
            dir.display()
        )));
    }
    let keys = derive_keys(opts.seed, paths.len());
    let records = paths
        .par_iter()
        .zip(keys.par_iter())
        .map(|(path, keys)| bench_image(path, &load_image(path)?, keys, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        format: FORMAT_VERSION,
        seed: opts.seed,
        summary: Summary::from_records(opts.method, &records),
        records,
    })
}

pub fn write_csv(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, report: &BenchReport) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}
