//! In-memory raster images: 8-bit RGB or RGBA samples in row-major order.
//! File decoding and encoding live in the CLI; the library works on these
//! buffers only.

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, channels: u8, samples: Vec<u8>) -> Result<Self, Error> {
        if channels != 3 && channels != 4 {
            return Err(Error::BadChannelCount { channels });
        }
        let expected = width as usize * height as usize * channels as usize;
        if width == 0 || height == 0 || samples.len() != expected {
            return Err(Error::BadSampleCount {
                width,
                height,
                channels,
                actual: samples.len(),
            });
        }
        Ok(Image { width, height, channels, samples })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    pub fn shape_mismatch(&self, other: &Image) -> Error {
        Error::ShapeMismatch {
            a_width: self.width,
            a_height: self.height,
            a_channels: self.channels,
            b_width: other.width,
            b_height: other.height,
            b_channels: other.channels,
        }
    }

    /// Indices of the R, G, B samples in traversal order, skipping alpha.
    /// This single definition fixes the embedding order for the whole crate:
    /// row-major pixels, R then G then B within each pixel.
    pub fn carrier_indices(&self) -> impl Iterator<Item = usize> + '_ {
        let channels = self.channels as usize;
        (0..self.width as usize * self.height as usize)
            .flat_map(move |pixel| (0..3).map(move |c| pixel * channels + c))
    }

    pub fn carrier_sample_count(&self) -> usize {
        self.width as usize * self.height as usize * 3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(Image::new(2, 2, 2, vec![0; 8]).is_err());
        assert!(Image::new(2, 2, 3, vec![0; 11]).is_err());
        assert!(Image::new(0, 2, 3, vec![]).is_err());
        assert!(Image::new(2, 2, 3, vec![0; 12]).is_ok());
    }

    #[test]
    fn carrier_indices_skip_alpha() {
        let img = Image::new(2, 1, 4, vec![0; 8]).unwrap();
        let idx: Vec<usize> = img.carrier_indices().collect();
        assert_eq!(idx, vec![0, 1, 2, 4, 5, 6]);
    }
}
