use std::fs;
use std::path::Path;

use rdhei_core::payload::max_message_len;
use rdhei_core::{
    detect_method, emr_encode, emr_extract, emr_hide, emr_recover, lmr_encode_with, lmr_extract,
    lmr_hide, lmr_recover_with, metrics, read_pgm, select_optimal, write_pgm, GrayImage, LmrConfig,
    LmrOutcome, Method, MetricsReport, SecretKey,
};
use serde::Serialize;

use crate::args::{Cli, Command};
use crate::bench;
use crate::error::CliError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn load_image(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(read_pgm(&bytes)?)
}

pub fn save_image(path: &Path, img: &GrayImage) -> Result<()> {
    fs::write(path, write_pgm(img)).map_err(|e| CliError::io(path, e))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Result of the content owner's step, whichever method ran.
#[derive(Debug, Clone, Serialize)]
pub struct EncodeSummary {
    pub method: Method,
    pub b: u32,
    pub der_bpp: f64,
    /// Payload of the selected location map.
    pub payload_bits: u64,
    /// Bits the data hider can actually use, length prefix included.
    pub capacity_bits: u64,
    pub max_message_bytes: usize,
    #[serde(skip)]
    pub image: GrayImage,
}

pub fn encode(
    img: &GrayImage,
    method: Method,
    key1: &SecretKey,
    lmr: &LmrConfig,
) -> Result<EncodeSummary> {
    match method {
        Method::Emr => {
            let enc = emr_encode(img, key1)?;
            Ok(EncodeSummary {
                method,
                b: enc.b,
                der_bpp: enc.gross_der(),
                payload_bits: enc.gross_payload_bits,
                capacity_bits: enc.capacity_bits,
                max_message_bytes: max_message_len(enc.capacity_bits),
                image: enc.image,
            })
        }
        Method::Lmr => match lmr_encode_with(img, key1, lmr)? {
            LmrOutcome::Good(enc) => Ok(EncodeSummary {
                method,
                b: enc.b,
                der_bpp: enc.der(),
                payload_bits: enc.capacity_bits,
                capacity_bits: enc.capacity_bits,
                max_message_bytes: max_message_len(enc.capacity_bits),
                image: enc.image,
            }),
            LmrOutcome::BadCase => Err(CliError::BadCase),
        },
    }
}

fn resolve_method(img: &GrayImage, method: Option<Method>) -> Result<Method> {
    method.or_else(|| detect_method(img)).ok_or_else(|| {
        rdhei_core::Error::Format("no EMR or LMR layout found in the image".into()).into()
    })
}

pub fn hide(
    img: &GrayImage,
    method: Method,
    key2: &SecretKey,
    message: &[u8],
) -> Result<GrayImage> {
    Ok(match method {
        Method::Emr => emr_hide(img, key2, message)?,
        Method::Lmr => lmr_hide(img, key2, message)?,
    })
}

pub fn extract(img: &GrayImage, method: Method, key2: &SecretKey) -> Result<Vec<u8>> {
    Ok(match method {
        Method::Emr => emr_extract(img, key2)?,
        Method::Lmr => lmr_extract(img, key2)?,
    })
}

pub fn recover(
    img: &GrayImage,
    method: Method,
    key1: &SecretKey,
    lmr: &LmrConfig,
) -> Result<GrayImage> {
    Ok(match method {
        Method::Emr => emr_recover(img, key1)?,
        Method::Lmr => lmr_recover_with(img, key1, lmr)?,
    })
}

#[derive(Debug, Serialize)]
struct CapacityReport {
    method: Method,
    b: u32,
    der_bpp: f64,
    payload_bits: u64,
    /// `"good"`/`"bad"` once checked with the image key, otherwise `"unchecked"`.
    case: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacity_bits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_message_bytes: Option<usize>,
}

fn capacity(
    img: &GrayImage,
    method: Method,
    key1: Option<&SecretKey>,
    lmr: &LmrConfig,
) -> Result<()> {
    let best = select_optimal(img, method)
        .into_iter()
        .next()
        .expect("at least one candidate");
    let mut report = CapacityReport {
        method,
        b: best.b,
        der_bpp: best.der(),
        payload_bits: best.payload_bits,
        case: "unchecked",
        capacity_bits: None,
        max_message_bytes: None,
    };
    let Some(key1) = key1 else {
        return print_json(&report);
    };
    match encode(img, method, key1, lmr) {
        Ok(enc) => {
            report.b = enc.b;
            report.der_bpp = enc.der_bpp;
            report.payload_bits = enc.payload_bits;
            report.case = "good";
            report.capacity_bits = Some(enc.capacity_bits);
            report.max_message_bytes = Some(enc.max_message_bytes);
            print_json(&report)
        }
        Err(CliError::BadCase) => {
            report.case = "bad";
            print_json(&report)?;
            Err(CliError::BadCase)
        }
        Err(e) => Err(e),
    }
}

#[derive(Debug, Serialize)]
pub struct RoundtripReport {
    pub pass: bool,
    pub method: Method,
    pub b: u32,
    pub der_bpp: f64,
    pub message_bytes: usize,
    pub message_ok: bool,
    /// Bit-exact for LMR; bit positions 1..=7 for EMR.
    pub image_ok: bool,
    #[serde(serialize_with = "metrics::serialize_db")]
    pub psnr_db: Option<f64>,
    pub ssim: f64,
}

/// Full pipeline in memory. Each receiver step sees only its own key.
pub fn roundtrip(
    img: &GrayImage,
    method: Method,
    key1: &SecretKey,
    key2: &SecretKey,
    message: &[u8],
    lmr: &LmrConfig,
) -> Result<RoundtripReport> {
    let enc = encode(img, method, key1, lmr)?;
    let marked = hide(&enc.image, method, key2, message)?;
    let extracted = extract(&marked, method, key2)?;
    let recovered = recover(&marked, method, key1, lmr)?;
    let image_ok = match method {
        Method::Emr => img
            .pixels()
            .iter()
            .zip(recovered.pixels())
            .all(|(a, b)| a >> 1 == b >> 1),
        Method::Lmr => &recovered == img,
    };
    let message_ok = extracted == message;
    Ok(RoundtripReport {
        pass: image_ok && message_ok,
        method,
        b: enc.b,
        der_bpp: enc.der_bpp,
        message_bytes: message.len(),
        message_ok,
        image_ok,
        psnr_db: Some(metrics::psnr(img, &recovered)),
        ssim: metrics::ssim(img, &recovered),
    })
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Capacity {
            image,
            method,
            key1,
            lmr,
        } => capacity(&load_image(&image)?, method, key1.as_ref(), &lmr.config()),
        Command::Encode {
            image,
            method,
            key1,
            output,
            lmr,
        } => {
            let enc = encode(&load_image(&image)?, method, &key1, &lmr.config())?;
            save_image(&output, &enc.image)?;
            print_json(&enc)
        }
        Command::Hide {
            image,
            key2,
            message,
            output,
            method,
        } => {
            let img = load_image(&image)?;
            let method = resolve_method(&img, method)?;
            let message = read_file(&message)?;
            save_image(&output, &hide(&img, method, &key2, &message)?)?;
            print_json(&serde_json::json!({ "method": method, "message_bytes": message.len() }))
        }
        Command::Extract {
            image,
            key2,
            output,
            method,
        } => {
            let img = load_image(&image)?;
            let method = resolve_method(&img, method)?;
            let message = extract(&img, method, &key2)?;
            fs::write(&output, message).map_err(|e| CliError::io(&output, e))
        }
        Command::Recover {
            image,
            method,
            key1,
            output,
            lmr,
        } => {
            let img = load_image(&image)?;
            let method = resolve_method(&img, method)?;
            save_image(&output, &recover(&img, method, &key1, &lmr.config())?)
        }
        Command::Analyze { image, other } => {
            let first = load_image(&image)?;
            let report = match other {
                Some(other) => MetricsReport::compare(&first, &load_image(&other)?),
                None => MetricsReport::single(&first),
            };
            print_json(&report)
        }
        Command::Roundtrip {
            image,
            method,
            key1,
            key2,
            message,
            lmr,
        } => {
            let report = roundtrip(
                &load_image(&image)?,
                method,
                &key1,
                &key2,
                &read_file(&message)?,
                &lmr.config(),
            )?;
            print_json(&report)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Mismatch(format!(
                    "message_ok={} image_ok={}",
                    report.message_ok, report.image_ok
                )))
            }
        }
        Command::Bench {
            dir,
            method,
            out,
            json,
            seed,
            lmr,
        } => {
            let report = bench::run(
                &dir,
                &bench::BenchOptions {
                    method,
                    seed,
                    lmr: lmr.config(),
                },
            )?;
            bench::write_csv(&out, &report.records)?;
            if let Some(json) = json {
                bench::write_json(&json, &report)?;
            }
            print!("{}", report.summary);
            Ok(())
        }
    }
}
