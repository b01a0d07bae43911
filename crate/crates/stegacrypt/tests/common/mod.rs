//! Helpers shared by the integration test suites.
//!
//! Each suite pulls in the subset it needs, so not every helper is used from
//! every target.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::Rng;
use stegacrypt::raster::Image;

pub fn random_image(rng: &mut StdRng, width: u32, height: u32, channels: u8) -> Image {
    let samples = (0..width as usize * height as usize * channels as usize)
        .map(|_| rng.gen())
        .collect();
    Image::new(width, height, channels, samples).unwrap()
}

/// Write an image as a PNG file the CLI can consume.
pub fn save_png(path: &Path, img: &Image) {
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
        image::ImageFormat::Png,
    )
    .unwrap();
}

pub fn load_png(path: &Path) -> Image {
    let decoded = image::open(path).unwrap();
    match decoded {
        image::DynamicImage::ImageRgba8(rgba) => {
            let (w, h) = rgba.dimensions();
            Image::new(w, h, 4, rgba.into_raw()).unwrap()
        }
        other => {
            let rgb = other.to_rgb8();
            let (w, h) = rgb.dimensions();
            Image::new(w, h, 3, rgb.into_raw()).unwrap()
        }
    }
}

pub fn cli_bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_stegacrypt"))
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(cli_bin())
        .args(args)
        .env_remove("STEGACRYPT_PASSPHRASE")
        .output()
        .expect("failed to launch CLI binary")
}

pub fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("CLI terminated by signal")
}

pub fn stdout_str(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr_str(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}
