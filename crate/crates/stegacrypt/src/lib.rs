//! Secure small documents by encrypting them with 3DES and hiding the
//! ciphertext in the least-significant bits of a lossless cover image.
//!
//! The crate is organized as a pipeline of independent layers:
//!
//! - [`des`] — the single-DES block primitive
//! - [`tdes`] — triple-DES EDE composition and the CBC/PKCS#7 byte stream
//! - [`envelope`] — key derivation and the encrypted wire container
//! - [`raster`] — in-memory RGB/RGBA images
//! - [`lsb`] — LSB embedding and extraction with a framed payload
//! - [`metrics`] — MSE/PSNR distortion metrics
//! - [`pipeline`] — secure/retrieve composition and the comparison report

pub mod des;
pub mod envelope;
mod error;
pub mod lsb;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod tdes;

pub use error::Error;
