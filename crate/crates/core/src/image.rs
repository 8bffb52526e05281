//! Pixel buffer types used throughout the pipeline.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::placement::Rect;

/// An 8-bit RGB image, row-major, three bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RasterImage {
    /// Wrap an interleaved RGB buffer. `data.len()` must equal `width * height * 3`.
    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if data.len() != width * height * 3 {
            return Err(Error::PasteSizeMismatch);
        }
        Ok(Self { width, height, data })
    }

    /// Solid-color image.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let mut data = vec![0u8; width * height * 3];
        for px in data.chunks_exact_mut(3) {
            px.copy_from_slice(&rgb);
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Copy out the pixels under `rect`, which must lie inside the image
    /// and have positive area.
    pub fn crop(&self, rect: Rect) -> Result<RasterImage> {
        if rect.x1 > self.width || rect.y1 > self.height || rect.x0 > rect.x1 || rect.y0 > rect.y1 {
            return Err(Error::RectOutsideImage);
        }
        let (w, h) = (rect.width(), rect.height());
        if w == 0 || h == 0 {
            return Err(Error::EmptyImage);
        }
        let mut data = Vec::with_capacity(w * h * 3);
        for y in rect.y0..rect.y1 {
            let start = (y * self.width + rect.x0) * 3;
            data.extend_from_slice(&self.data[start..start + w * 3]);
        }
        Ok(RasterImage { width: w, height: h, data })
    }
}

/// Single-channel luminance image with values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl GrayImage {
    /// Wrap a luminance buffer. Values are clamped to [0, 1].
    pub fn from_raw(width: usize, height: usize, mut data: Vec<f32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if data.len() != width * height {
            return Err(Error::PasteSizeMismatch);
        }
        for v in &mut data {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(Self { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.data[y * self.width + x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_raw_rejects_zero_dims() {
        assert_eq!(RasterImage::from_raw(0, 4, vec![]), Err(Error::EmptyImage));
        assert_eq!(GrayImage::from_raw(3, 0, vec![]).unwrap_err(), Error::EmptyImage);
    }

    #[test]
    fn crop_extracts_expected_region() {
        let mut img = RasterImage::filled(4, 3, [0, 0, 0]).unwrap();
        img.set_pixel(2, 1, [9, 8, 7]);
        let crop = img.crop(Rect::new(2, 1, 4, 3)).unwrap();
        assert_eq!(crop.width(), 2);
        assert_eq!(crop.height(), 2);
        assert_eq!(crop.pixel(0, 0), [9, 8, 7]);
        assert_eq!(crop.pixel(1, 1), [0, 0, 0]);
    }

    #[test]
    fn crop_outside_errors() {
        let img = RasterImage::filled(4, 3, [0, 0, 0]).unwrap();
        assert_eq!(img.crop(Rect::new(2, 1, 5, 3)), Err(Error::RectOutsideImage));
    }

    #[test]
    fn gray_clamps_values() {
        let g = GrayImage::from_raw(2, 1, vec![-0.5, 1.5]).unwrap();
        assert_eq!(g.as_slice(), &[0.0, 1.0]);
    }
}
