//! End-to-end workflow: secure = seal then embed, retrieve = extract then
//! open, plus a structural comparison of the combined method against each
//! layer on its own.

use std::time::Instant;

use rand::rngs::OsRng;
use rand::{CryptoRng, RngCore};
use serde::Serialize;

use crate::envelope::{self, Secret};
use crate::error::Error;
use crate::lsb::{self, FRAME_HEADER_LEN};
use crate::metrics::{self, MetricsReport};
use crate::raster::Image;
use crate::{des, tdes};

#[derive(Debug, Clone)]
pub struct SecureResult {
    pub stego: Image,
    pub metrics: MetricsReport,
    pub payload_octets: usize,
    pub capacity_used_fraction: f64,
}

pub fn secure_with_rng<R: RngCore + CryptoRng>(
    record: &[u8],
    secret: &Secret,
    cover: &Image,
    rng: &mut R,
) -> Result<SecureResult, Error> {
    let env = envelope::seal_with_rng(record, secret, rng)?;
    let payload = envelope::encode(&env);
    let stego = lsb::embed(cover, &payload)?;
    let metrics = metrics::report(cover, &stego)?;
    let frame_len = payload.len() + FRAME_HEADER_LEN;
    let capacity_used_fraction = frame_len as f64 / (lsb::capacity(cover) + FRAME_HEADER_LEN) as f64;
    Ok(SecureResult {
        stego,
        metrics,
        payload_octets: payload.len(),
        capacity_used_fraction,
    })
}

pub fn secure(record: &[u8], secret: &Secret, cover: &Image) -> Result<SecureResult, Error> {
    secure_with_rng(record, secret, cover, &mut OsRng)
}

/// Invert [`secure`]: extract the frame, decode the envelope, decrypt.
/// Each failure mode keeps its own error variant so callers can say which
/// layer failed.
pub fn retrieve(stego: &Image, secret: &Secret) -> Result<Vec<u8>, Error> {
    let payload = lsb::extract(stego)?;
    let env = envelope::decode(&payload)?;
    envelope::open(&env, secret)
}

/// One row of the three-way comparison: the combined pipeline vs 3DES alone
/// vs LSB alone.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub property: String,
    pub combined: String,
    pub tdes_only: String,
    pub lsb_only: String,
}

impl CompareRow {
    fn new(property: &str, combined: impl ToString, tdes: impl ToString, lsb: impl ToString) -> Self {
        CompareRow {
            property: property.to_string(),
            combined: combined.to_string(),
            tdes_only: tdes.to_string(),
            lsb_only: lsb.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    /// Measured octets per second, exposed numerically so callers can check
    /// orderings without reparsing the formatted rows.
    pub combined_throughput: f64,
    pub tdes_only_throughput: f64,
    pub lsb_only_throughput: f64,
}

fn median_duration_secs(mut runs: Vec<f64>) -> f64 {
    runs.sort_by(|a, b| a.total_cmp(b));
    runs[runs.len() / 2]
}

fn time_runs(reps: usize, mut op: impl FnMut()) -> f64 {
    let samples: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            op();
            start.elapsed().as_secs_f64()
        })
        .collect();
    median_duration_secs(samples)
}

/// Run the record through three configurations — combined, 3DES-only
/// (sealed envelope, no embedding), LSB-only (raw record embedded, no
/// encryption) — and report structural properties plus measured throughput
/// and distortion.
pub fn compare_report(
    record: &[u8],
    secret: &Secret,
    cover: &Image,
) -> Result<CompareReport, Error> {
    // Run each configuration once for its outputs and round counts, then
    // time it over repeated runs.
    let reps = 5;

    let rounds_before = des::rounds_executed();
    let combined = secure(record, secret, cover)?;
    let combined_rounds = des::rounds_executed() - rounds_before;

    let rounds_before = des::rounds_executed();
    let env = envelope::seal(record, secret)?;
    let tdes_rounds = des::rounds_executed() - rounds_before;
    let blocks = (env.ciphertext.len() / tdes::BLOCK_LEN) as u64;

    let rounds_before = des::rounds_executed();
    let lsb_stego = lsb::embed(cover, record)?;
    let lsb_rounds = des::rounds_executed() - rounds_before;
    let lsb_metrics = metrics::report(cover, &lsb_stego)?;

    let len = record.len().max(1) as f64;
    let combined_time = time_runs(reps, || {
        secure(record, secret, cover).unwrap();
    });
    let tdes_time = time_runs(reps, || {
        envelope::encode(&envelope::seal(record, secret).unwrap());
    });
    let lsb_time = time_runs(reps, || {
        lsb::embed(cover, record).unwrap();
    });
    let combined_throughput = len / combined_time;
    let tdes_only_throughput = len / tdes_time;
    let lsb_only_throughput = len / lsb_time;

    let fmt_tp = |tp: f64| format!("{:.0} octets/s", tp);
    let fmt_psnr = |psnr: f64| {
        if psnr.is_infinite() {
            "inf dB".to_string()
        } else {
            format!("{psnr:.2} dB")
        }
    };

    let rows = vec![
        CompareRow::new("security layers", 2, 1, 1),
        CompareRow::new(
            "keys required",
            "2 (secret key + cover image)",
            "1 (secret key)",
            "1 (cover image)",
        ),
        CompareRow::new(
            "des rounds per block",
            combined_rounds / blocks,
            tdes_rounds / blocks,
            lsb_rounds,
        ),
        CompareRow::new(
            "throughput",
            fmt_tp(combined_throughput),
            fmt_tp(tdes_only_throughput),
            fmt_tp(lsb_only_throughput),
        ),
        CompareRow::new(
            "psnr vs cover",
            fmt_psnr(combined.metrics.psnr_db),
            "n/a (no image output)",
            fmt_psnr(lsb_metrics.psnr_db),
        ),
        CompareRow::new(
            "reliability / speed percentages",
            "not reproducible",
            "not reproducible",
            "not reproducible",
        ),
    ];

    Ok(CompareReport {
        rows,
        combined_throughput,
        tdes_only_throughput,
        lsb_only_throughput,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_image(rng: &mut StdRng, width: u32, height: u32) -> Image {
        let samples = (0..width as usize * height as usize * 3).map(|_| rng.gen()).collect();
        Image::new(width, height, 3, samples).unwrap()
    }

    #[test]
    fn secure_retrieve_roundtrip() {
        let mut rng = StdRng::seed_from_u64(50);
        let cover = random_image(&mut rng, 256, 256);
        let record: Vec<u8> = (0..2048).map(|_| rng.gen()).collect();
        let secret = Secret::passphrase("clinic-42").unwrap();
        let result = secure_with_rng(&record, &secret, &cover, &mut rng).unwrap();
        assert_eq!(retrieve(&result.stego, &secret).unwrap(), record);
    }

    #[test]
    fn empty_record_frame_length() {
        let mut rng = StdRng::seed_from_u64(51);
        let cover = random_image(&mut rng, 64, 64);
        let secret = Secret::RawKey([9u8; 24]);
        let result = secure_with_rng(&[], &secret, &cover, &mut rng).unwrap();
        // Minimum envelope (46) plus the 9-octet frame header.
        assert_eq!(result.payload_octets, 46);
        let expected = 55.0 / (lsb::capacity(&cover) + FRAME_HEADER_LEN) as f64;
        assert!((result.capacity_used_fraction - expected).abs() < 1e-12);
        assert_eq!(retrieve(&result.stego, &secret).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn oversized_record_rejected() {
        let mut rng = StdRng::seed_from_u64(52);
        let cover = random_image(&mut rng, 16, 16);
        assert_eq!(lsb::capacity(&cover), 87);
        let record = vec![0u8; 2048];
        let secret = Secret::RawKey([1u8; 24]);
        assert!(matches!(
            secure_with_rng(&record, &secret, &cover, &mut rng),
            Err(Error::PayloadTooLarge { .. })
        ));
    }

    #[test]
    fn wrong_passphrase_is_a_padding_error() {
        let mut rng = StdRng::seed_from_u64(53);
        let cover = random_image(&mut rng, 128, 128);
        let mut padding_errors = 0;
        for i in 0..100 {
            let good = Secret::passphrase(format!("right-{i}")).unwrap();
            let bad = Secret::passphrase(format!("wrong-{i}")).unwrap();
            let result = secure_with_rng(b"record", &good, &cover, &mut rng).unwrap();
            match retrieve(&result.stego, &bad) {
                Err(Error::BadPadding) => padding_errors += 1,
                Err(other) => panic!("unexpected error {other}"),
                Ok(_) => {}
            }
        }
        assert!(padding_errors >= 99, "got {padding_errors}/100 padding errors");
    }

    #[test]
    fn plain_cover_has_no_payload() {
        let mut rng = StdRng::seed_from_u64(54);
        let cover = random_image(&mut rng, 64, 64);
        let secret = Secret::RawKey([2u8; 24]);
        assert!(matches!(retrieve(&cover, &secret), Err(Error::NoFrameFound)));
    }

    #[test]
    fn stego_transport_is_lossless_for_the_envelope() {
        let mut rng = StdRng::seed_from_u64(55);
        let cover = random_image(&mut rng, 128, 128);
        let secret = Secret::RawKey([3u8; 24]);
        let env = envelope::seal_with_rng(b"layered record", &secret, &mut rng).unwrap();
        let payload = envelope::encode(&env);
        let stego = lsb::embed(&cover, &payload).unwrap();
        assert_eq!(lsb::extract(&stego).unwrap(), payload);
    }

    #[test]
    fn compare_report_structural_rows() {
        let mut rng = StdRng::seed_from_u64(56);
        let cover = random_image(&mut rng, 128, 128);
        let record: Vec<u8> = (0..2048).map(|_| rng.gen()).collect();
        let secret = Secret::RawKey([4u8; 24]);
        let report = compare_report(&record, &secret, &cover).unwrap();

        let row = |name: &str| report.rows.iter().find(|r| r.property == name).unwrap();
        let layers = row("security layers");
        assert_eq!((layers.combined.as_str(), layers.tdes_only.as_str(), layers.lsb_only.as_str()), ("2", "1", "1"));
        let rounds = row("des rounds per block");
        assert_eq!((rounds.combined.as_str(), rounds.tdes_only.as_str(), rounds.lsb_only.as_str()), ("48", "48", "0"));
        assert!(row("reliability / speed percentages").combined.contains("not reproducible"));
    }
}
