//! LSB steganography codec: writes a framed payload into the
//! least-significant bits of an image's RGB samples and reads it back.
//!
//! Traversal order is normative: row-major pixels, channels R, G, B within
//! each pixel, one bit per carrier sample, most-significant bit of each
//! payload octet first. Alpha samples never carry data.

use crate::error::Error;
use crate::raster::Image;

pub const FRAME_MAGIC: [u8; 4] = *b"SGF1";
pub const FRAME_VERSION: u8 = 0x01;
/// Magic + version + 4-octet payload length.
pub const FRAME_HEADER_LEN: usize = 9;

/// Maximum payload octets embeddable in `cover`: one bit per RGB sample,
/// minus the frame header.
pub fn capacity(cover: &Image) -> usize {
    (cover.carrier_sample_count() / 8).saturating_sub(FRAME_HEADER_LEN)
}

fn frame_bytes(payload: &[u8]) -> Vec<u8> {
    let mut frame = Vec::with_capacity(FRAME_HEADER_LEN + payload.len());
    frame.extend_from_slice(&FRAME_MAGIC);
    frame.push(FRAME_VERSION);
    frame.extend_from_slice(&(payload.len() as u32).to_be_bytes());
    frame.extend_from_slice(payload);
    frame
}

/// Embed `payload` into a copy of `cover`. Samples beyond the frame keep
/// their cover LSBs; the cover itself is never mutated.
pub fn embed(cover: &Image, payload: &[u8]) -> Result<Image, Error> {
    let cap = capacity(cover);
    if payload.len() > cap {
        return Err(Error::PayloadTooLarge { payload: payload.len(), capacity: cap });
    }

    let frame = frame_bytes(payload);
    let mut samples = cover.samples().to_vec();
    let mut bits = frame
        .iter()
        .flat_map(|byte| (0..8).rev().map(move |shift| (byte >> shift) & 1));

    for index in cover.carrier_indices() {
        match bits.next() {
            Some(bit) => samples[index] = (samples[index] & 0xFE) | bit,
            None => break,
        }
    }

    Image::new(cover.width(), cover.height(), cover.channels(), samples)
}

struct BitReader<'a> {
    image: &'a Image,
    indices: Box<dyn Iterator<Item = usize> + 'a>,
}

impl<'a> BitReader<'a> {
    fn new(image: &'a Image) -> Self {
        BitReader { image, indices: Box::new(image.carrier_indices()) }
    }

    fn read_bytes(&mut self, count: usize) -> Option<Vec<u8>> {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let mut byte = 0u8;
            for _ in 0..8 {
                let index = self.indices.next()?;
                byte = (byte << 1) | (self.image.samples()[index] & 1);
            }
            out.push(byte);
        }
        Some(out)
    }
}

/// Read the frame back out of a stego image. Needs only the stego image;
/// the header makes it self-describing.
pub fn extract(stego: &Image) -> Result<Vec<u8>, Error> {
    let mut reader = BitReader::new(stego);
    let header = reader.read_bytes(FRAME_HEADER_LEN).ok_or(Error::NoFrameFound)?;
    if header[0..4] != FRAME_MAGIC || header[4] != FRAME_VERSION {
        return Err(Error::NoFrameFound);
    }
    let declared = u32::from_be_bytes(header[5..9].try_into().unwrap()) as usize;
    let available = capacity(stego);
    if declared > available {
        return Err(Error::TruncatedFrame { declared, available });
    }
    reader
        .read_bytes(declared)
        .ok_or(Error::TruncatedFrame { declared, available })
}
