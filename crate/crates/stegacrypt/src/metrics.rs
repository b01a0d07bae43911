//! MSE and PSNR between two images, used to quantify how visible an
//! embedding is. MSE averages squared differences over all carrier samples
//! jointly (alpha excluded); PSNR uses a fixed peak of 255.

use serde::Serialize;

use crate::error::Error;
use crate::raster::Image;

#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub mse: f64,
    /// `f64::INFINITY` for identical images; serialized as null in JSON.
    pub psnr_db: f64,
    pub samples_compared: usize,
    pub max_abs_diff: u8,
}

impl std::fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "mse: {:.6}", self.mse)?;
        if self.psnr_db.is_infinite() {
            writeln!(f, "psnr_db: inf")?;
        } else {
            writeln!(f, "psnr_db: {:.4}", self.psnr_db)?;
        }
        writeln!(f, "samples_compared: {}", self.samples_compared)?;
        write!(f, "max_abs_diff: {}", self.max_abs_diff)
    }
}

pub fn mse(a: &Image, b: &Image) -> Result<f64, Error> {
    Ok(report(a, b)?.mse)
}

pub fn psnr(a: &Image, b: &Image) -> Result<f64, Error> {
    Ok(report(a, b)?.psnr_db)
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}

pub fn report(a: &Image, b: &Image) -> Result<MetricsReport, Error> {
    if !a.same_shape(b) {
        return Err(a.shape_mismatch(b));
    }
    let mut sum_sq = 0.0f64;
    let mut max_abs_diff = 0u8;
    let mut samples_compared = 0usize;
    for index in a.carrier_indices() {
        let diff = i32::from(a.samples()[index]) - i32::from(b.samples()[index]);
        sum_sq += f64::from(diff * diff);
        max_abs_diff = max_abs_diff.max(diff.unsigned_abs() as u8);
        samples_compared += 1;
    }
    let mse = sum_sq / samples_compared as f64;
    Ok(MetricsReport {
        mse,
        psnr_db: psnr_from_mse(mse),
        samples_compared,
        max_abs_diff,
    })
}
