//! Command-line front end: secure, retrieve, capacity, metrics, compare.
//!
//! Exit codes are stable and documented:
//!   0 success
//!   1 usage error
//!   2 capacity error
//!   3 integrity error (corrupted or absent payload)
//!   4 authentication error (wrong secret)
//!   5 I/O or image-format error

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use image::ImageFormat;
use serde_json::json;

use stegacrypt::envelope::Secret;
use stegacrypt::raster::Image;
use stegacrypt::tdes::{KeyWarning, TdesKey};
use stegacrypt::{lsb, metrics, pipeline, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_CAPACITY: u8 = 2;
const EXIT_INTEGRITY: u8 = 3;
const EXIT_AUTH: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "stegacrypt",
    about = "Encrypt documents with 3DES and hide them in the LSBs of a lossless image",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SecretArgs {
    /// Passphrase for key derivation. Falls back to the
    /// STEGACRYPT_PASSPHRASE environment variable if the flag is absent.
    #[arg(long, env = "STEGACRYPT_PASSPHRASE", hide_env_values = true)]
    passphrase: Option<String>,

    /// Raw 3DES key as 48 hex characters (24 octets), bypassing derivation.
    #[arg(long, value_name = "HEX", conflicts_with = "passphrase")]
    key_hex: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt a record and embed it into a cover image.
    Secure {
        /// Record file to protect.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Lossless cover image (PNG or BMP).
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
        /// Where to write the stego image (always PNG).
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
        #[command(flatten)]
        secret: SecretArgs,
        #[arg(long)]
        json: bool,
    },
    /// Extract and decrypt a record from a stego image.
    Retrieve {
        /// Stego image produced by `secure`.
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Where to write the recovered record.
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
        #[command(flatten)]
        secret: SecretArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print how many payload octets a cover image can hold.
    Capacity {
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
    },
    /// Print MSE/PSNR between a cover and a stego image.
    Metrics {
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
        #[arg(long, value_name = "FILE")]
        stego: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the combined pipeline against 3DES-only and LSB-only.
    Compare {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        cover: PathBuf,
        #[command(flatten)]
        secret: SecretArgs,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::PayloadTooLarge { .. } | Error::PlaintextTooLarge { .. } => EXIT_CAPACITY,
            Error::CrcMismatch { .. }
            | Error::NoFrameFound
            | Error::TruncatedFrame { .. }
            | Error::TruncatedEnvelope { .. }
            | Error::BadMagic
            | Error::BadVersion { .. }
            | Error::BadLengthField { .. } => EXIT_INTEGRITY,
            Error::BadPadding => EXIT_AUTH,
            _ => EXIT_USAGE,
        };
        Failure::new(code, err.to_string())
    }
}

fn io_failure(context: &str, path: &Path, err: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("{context} {}: {err}", path.display()))
}

fn parse_secret(args: &SecretArgs) -> Result<Secret, Failure> {
    if let Some(hex_str) = &args.key_hex {
        let bytes = hex::decode(hex_str)
            .map_err(|e| Failure::new(EXIT_USAGE, format!("--key-hex is not valid hex: {e}")))?;
        let material: [u8; 24] = bytes.as_slice().try_into().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("--key-hex must be 48 hex characters (24 octets), got {}", bytes.len()),
            )
        })?;
        let key = TdesKey::from_material(&material).unwrap();
        for warning in key.warnings() {
            let text = match warning {
                KeyWarning::DegenerateK1K2 => "K1 equals K2; 3DES degrades toward single DES".into(),
                KeyWarning::DegenerateK2K3 => "K2 equals K3; 3DES degrades toward single DES".into(),
                KeyWarning::WeakComponent { index } => {
                    format!("K{} is a known DES weak or semi-weak key", index + 1)
                }
            };
            eprintln!("warning: {text}");
        }
        return Ok(Secret::RawKey(material));
    }
    match &args.passphrase {
        Some(p) => Secret::passphrase(p.clone())
            .map_err(|e| Failure::new(EXIT_USAGE, e.to_string())),
        None => Err(Failure::new(
            EXIT_USAGE,
            "a secret is required: pass --passphrase, --key-hex, or set STEGACRYPT_PASSPHRASE",
        )),
    }
}

/// Decode a cover/stego image, refusing lossy source formats outright:
/// a lossy re-encode scrambles the LSBs and with them any payload.
fn load_image(path: &Path) -> Result<Image, Failure> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| io_failure("cannot open image", path, e))?
        .with_guessed_format()
        .map_err(|e| io_failure("cannot read image", path, e))?;

    match reader.format() {
        Some(ImageFormat::Png) | Some(ImageFormat::Bmp) => {}
        Some(other) => {
            return Err(Failure::new(
                EXIT_IO,
                format!(
                    "{}: {:?} is a lossy or unsupported format; LSB payloads survive only \
                     lossless round-trips, use PNG or BMP",
                    path.display(),
                    other
                ),
            ));
        }
        None => {
            return Err(io_failure("unrecognized image format", path, "unknown magic"));
        }
    }

    let decoded = reader
        .decode()
        .map_err(|e| io_failure("cannot decode image", path, e))?;
    let img = match decoded {
        image::DynamicImage::ImageRgba8(rgba) => {
            let (w, h) = rgba.dimensions();
            Image::new(w, h, 4, rgba.into_raw())
        }
        other => {
            let rgb = other.to_rgb8();
            let (w, h) = rgb.dimensions();
            Image::new(w, h, 3, rgb.into_raw())
        }
    };
    img.map_err(|e| Failure::new(EXIT_IO, e.to_string()))
}

fn save_png(path: &Path, img: &Image) -> Result<(), Failure> {
    let color = if img.channels() == 4 {
        image::ColorType::Rgba8
    } else {
        image::ColorType::Rgb8
    };
    image::save_buffer_with_format(
        path,
        img.samples(),
        img.width(),
        img.height(),
        color,
        ImageFormat::Png,
    )
    .map_err(|e| io_failure("cannot write image", path, e))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| io_failure("cannot read", path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| io_failure("cannot write", path, e))
}

fn cmd_secure(
    input: &Path,
    cover_path: &Path,
    output: &Path,
    secret_args: &SecretArgs,
    json: bool,
) -> Result<(), Failure> {
    let secret = parse_secret(secret_args)?;
    let record = read_file(input)?;
    let cover = load_image(cover_path)?;
    let result = pipeline::secure(&record, &secret, &cover)?;
    save_png(output, &result.stego)?;

    if json {
        println!(
            "{}",
            json!({
                "stego_path": output.display().to_string(),
                "record_octets": record.len(),
                "payload_octets": result.payload_octets,
                "capacity_octets": lsb::capacity(&cover),
                "capacity_used_fraction": result.capacity_used_fraction,
                "mse": result.metrics.mse,
                "psnr_db": result.metrics.psnr_db,
            })
        );
    } else {
        println!("stego image written to {}", output.display());
        println!(
            "capacity used: {} of {} octets ({:.1}%)",
            result.payload_octets,
            lsb::capacity(&cover),
            result.capacity_used_fraction * 100.0
        );
        if result.metrics.psnr_db.is_infinite() {
            println!("psnr: inf dB (mse {:.6})", result.metrics.mse);
        } else {
            println!("psnr: {:.2} dB (mse {:.6})", result.metrics.psnr_db, result.metrics.mse);
        }
    }
    Ok(())
}

fn cmd_retrieve(
    input: &Path,
    output: &Path,
    secret_args: &SecretArgs,
    json: bool,
) -> Result<(), Failure> {
    let secret = parse_secret(secret_args)?;
    let stego = load_image(input)?;
    let record = pipeline::retrieve(&stego, &secret).map_err(|e| {
        let mut failure = Failure::from(e);
        failure.message = match failure.code {
            EXIT_INTEGRITY => format!("stego layer: {}", failure.message),
            EXIT_AUTH => format!("crypto layer: {}", failure.message),
            _ => failure.message,
        };
        failure
    })?;
    write_file(output, &record)?;
    if json {
        println!(
            "{}",
            json!({
                "record_path": output.display().to_string(),
                "record_octets": record.len(),
            })
        );
    } else {
        println!("recovered {} octets to {}", record.len(), output.display());
    }
    Ok(())
}

fn cmd_capacity(cover_path: &Path) -> Result<(), Failure> {
    let cover = load_image(cover_path)?;
    println!("{}", lsb::capacity(&cover));
    Ok(())
}

fn cmd_metrics(cover_path: &Path, stego_path: &Path, json: bool) -> Result<(), Failure> {
    let cover = load_image(cover_path)?;
    let stego = load_image(stego_path)?;
    let report = metrics::report(&cover, &stego)?;
    if json {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        println!("{report}");
    }
    Ok(())
}

fn cmd_compare(
    input: &Path,
    cover_path: &Path,
    secret_args: &SecretArgs,
    json: bool,
) -> Result<(), Failure> {
    let secret = parse_secret(secret_args)?;
    let record = read_file(input)?;
    let cover = load_image(cover_path)?;
    let report = pipeline::compare_report(&record, &secret, &cover)?;
    if json {
        println!("{}", serde_json::to_string(&report.rows).unwrap());
    } else {
        let width = report.rows.iter().map(|r| r.property.len()).max().unwrap_or(0);
        println!("{:width$}  {:>28}  {:>20}  {:>20}", "property", "combined", "3des-only", "lsb-only");
        for row in &report.rows {
            println!(
                "{:width$}  {:>28}  {:>20}  {:>20}",
                row.property, row.combined, row.tdes_only, row.lsb_only
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Secure { input, cover, output, secret, json } => {
            cmd_secure(input, cover, output, secret, *json)
        }
        Command::Retrieve { input, output, secret, json } => {
            cmd_retrieve(input, output, secret, *json)
        }
        Command::Capacity { cover } => cmd_capacity(cover),
        Command::Metrics { cover, stego, json } => cmd_metrics(cover, stego, *json),
        Command::Compare { input, cover, secret, json } => {
            cmd_compare(input, cover, secret, *json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
