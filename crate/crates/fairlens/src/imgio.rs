//! Image file IO bridging the `image` crate and the core buffer types.

use std::io::Cursor;
use std::path::Path;

use fairlens_core::{RasterImage, SaliencyMap};
use image::ImageFormat;

use crate::error::{Error, Result};
use crate::util::atomic_write;

/// Decode an image file into an RGB buffer.
pub fn load_image(path: &Path) -> Result<RasterImage> {
    let img = image::open(path)
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?
        .to_rgb8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    RasterImage::from_raw(w, h, img.into_raw())
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    ImageFormat::from_path(path)
        .map_err(|_| Error::config(format!("{}: unrecognized image extension", path.display())))
}

/// Encode an RGB buffer to the format implied by the file extension and
/// write it atomically.
pub fn save_image(img: &RasterImage, path: &Path) -> Result<()> {
    let buffer: image::RgbImage = image::ImageBuffer::from_raw(
        img.width() as u32,
        img.height() as u32,
        img.as_raw().to_vec(),
    )
    .expect("buffer length matches dimensions");
    let format = format_for(path)?;
    let mut bytes = Vec::new();
    buffer
        .write_to(&mut Cursor::new(&mut bytes), format)
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    atomic_write(path, &bytes)
}

/// Write a saliency map as an 8-bit grayscale image (score 1.0 -> 255).
pub fn save_saliency_map(map: &SaliencyMap, path: &Path) -> Result<()> {
    let data: Vec<u8> = map
        .as_slice()
        .iter()
        .map(|&v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect();
    let buffer: image::GrayImage =
        image::ImageBuffer::from_raw(map.width() as u32, map.height() as u32, data)
            .expect("buffer length matches dimensions");
    let format = format_for(path)?;
    let mut bytes = Vec::new();
    buffer
        .write_to(&mut Cursor::new(&mut bytes), format)
        .map_err(|e| Error::data(format!("{}: {e}", path.display())))?;
    atomic_write(path, &bytes)
}
