//! Fine-grained static saliency and salient-box extraction.
//!
//! Saliency is the multi-scale center–surround response of the luminance
//! channel: at every pixel the absolute difference between the pixel and the
//! mean of a square window around it, summed over a set of window radii.
//! Window means come from an integral image, so each scale costs O(W*H).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{GrayImage, RasterImage};
use crate::placement::Rect;

/// Default window radii, clamped per image to `min(W, H) / 2`.
pub const DEFAULT_RADII: [u32; 5] = [1, 2, 4, 8, 16];

/// Default fraction of the map maximum used to binarize for box extraction.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.5;

/// Parameters for saliency detection and box extraction.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SaliencyConfig {
    pub radii: Vec<u32>,
    pub threshold_fraction: f64,
}

impl Default for SaliencyConfig {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            threshold_fraction: DEFAULT_THRESHOLD_FRACTION,
        }
    }
}

/// Per-pixel saliency scores in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl SaliencyMap {
    /// Wrap a score buffer. Scores are clamped to [0, 1].
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

    pub fn max(&self) -> f32 {
        self.data.iter().copied().fold(0.0, f32::max)
    }
}

/// The extracted salient region and the peak score inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SalientBox {
    pub rect: Rect,
    pub peak_score: f32,
}

/// BT.601 luminance, scaled to [0, 1].
pub fn to_grayscale(image: &RasterImage) -> GrayImage {
    let mut data = Vec::with_capacity(image.width() * image.height());
    for px in image.as_raw().chunks_exact(3) {
        let lum =
            (0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64) / 255.0;
        data.push(lum.clamp(0.0, 1.0) as f32);
    }
    GrayImage::from_raw(image.width(), image.height(), data)
        .expect("source image dimensions already validated")
}

/// Summed-area table over a luminance image. Entry `(y, x)` holds the sum of
/// all pixels above and left of `(y, x)`; the first row and column are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl IntegralImage {
    pub fn new(gray: &GrayImage) -> Self {
        let (w, h) = (gray.width(), gray.height());
        let stride = w + 1;
        let mut data = vec![0.0f64; stride * (h + 1)];
        for y in 0..h {
            let mut row_sum = 0.0f64;
            for x in 0..w {
                row_sum += gray.get(x, y) as f64;
                data[(y + 1) * stride + (x + 1)] = data[y * stride + (x + 1)] + row_sum;
            }
        }
        Self { width: w, height: h, data }
    }

    /// Source image width.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Source image height.
    pub fn height(&self) -> usize {
        self.height
    }

    /// Cumulative entry at `(x, y)` with `0 <= x <= width`, `0 <= y <= height`.
    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.data[y * (self.width + 1) + x]
    }

    /// Sum of the half-open pixel rectangle `[x0, x1) x [y0, y1)`.
    pub fn window_sum(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> f64 {
        debug_assert!(x0 <= x1 && x1 <= self.width && y0 <= y1 && y1 <= self.height);
        let s = self.width + 1;
        self.data[y1 * s + x1] - self.data[y0 * s + x1] - self.data[y1 * s + x0]
            + self.data[y0 * s + x0]
    }
}

fn clamp_radii(radii: &[u32], w: usize, h: usize) -> Result<Vec<usize>> {
    if radii.is_empty() {
        return Err(Error::EmptyRadii);
    }
    let cap = (w.min(h) / 2).max(1);
    let mut out: Vec<usize> = radii
        .iter()
        .map(|&r| (r.max(1) as usize).min(cap))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Unnormalized center–surround response, one value per pixel. For each
/// radius `r` the surround is the mean of the `(2r+1)`-square window centered
/// at the pixel, clipped to the image; the response accumulates the on- and
/// off-center differences over all radii.
pub fn fine_grained_raw(gray: &GrayImage, radii: &[u32]) -> Result<Vec<f64>> {
    let (w, h) = (gray.width(), gray.height());
    let radii = clamp_radii(radii, w, h)?;
    let integral = IntegralImage::new(gray);
    let mut raw = vec![0.0f64; w * h];
    for &r in &radii {
        for y in 0..h {
            let y0 = y.saturating_sub(r);
            let y1 = (y + r + 1).min(h);
            for x in 0..w {
                let x0 = x.saturating_sub(r);
                let x1 = (x + r + 1).min(w);
                let area = ((x1 - x0) * (y1 - y0)) as f64;
                let surround = integral.window_sum(x0, y0, x1, y1) / area;
                let center = gray.get(x, y) as f64;
                let on = (center - surround).max(0.0);
                let off = (surround - center).max(0.0);
                raw[y * w + x] += on + off;
            }
        }
    }
    Ok(raw)
}

/// Multi-scale center–surround saliency, min-max normalized to [0, 1].
/// A constant response (in particular any constant image) maps to all zeros.
pub fn fine_grained_saliency(gray: &GrayImage, radii: &[u32]) -> Result<SaliencyMap> {
    let raw = fine_grained_raw(gray, radii)?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in &raw {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = hi - lo;
    let data: Vec<f32> = if span > 0.0 {
        raw.iter().map(|&v| ((v - lo) / span) as f32).collect()
    } else {
        vec![0.0; raw.len()]
    };
    SaliencyMap::from_raw(gray.width(), gray.height(), data)
}

/// Binarize the map at `threshold_fraction * max` and return the bounding box
/// of the largest 8-connected component of above-threshold pixels, along with
/// the component's peak score. An all-zero map falls back to the centered box
/// of dimensions `ceil(W/2) x ceil(H/2)`.
pub fn extract_salient_box(map: &SaliencyMap, threshold_fraction: f64) -> SalientBox {
    let (w, h) = (map.width(), map.height());
    let max = map.max();
    if max <= 0.0 {
        let bw = w.div_ceil(2);
        let bh = h.div_ceil(2);
        let x0 = (w - bw) / 2;
        let y0 = (h - bh) / 2;
        return SalientBox {
            rect: Rect::new(x0, y0, x0 + bw, y0 + bh),
            peak_score: 0.0,
        };
    }
    let tau = threshold_fraction.clamp(0.0, 1.0) * max as f64;
    let mask: Vec<bool> = map.as_slice().iter().map(|&v| v as f64 >= tau).collect();

    // Largest 8-connected component by pixel count; first in row-major scan
    // order wins ties.
    let mut visited = vec![false; w * h];
    let mut best: Option<(usize, Rect, f32)> = None;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for sy in 0..h {
        for sx in 0..w {
            let si = sy * w + sx;
            if !mask[si] || visited[si] {
                continue;
            }
            visited[si] = true;
            stack.push((sx, sy));
            let (mut area, mut peak) = (0usize, 0.0f32);
            let (mut x0, mut y0, mut x1, mut y1) = (sx, sy, sx, sy);
            while let Some((x, y)) = stack.pop() {
                area += 1;
                peak = peak.max(map.get(x, y));
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
                let ylo = y.saturating_sub(1);
                let yhi = (y + 1).min(h - 1);
                let xlo = x.saturating_sub(1);
                let xhi = (x + 1).min(w - 1);
                for ny in ylo..=yhi {
                    for nx in xlo..=xhi {
                        let ni = ny * w + nx;
                        if mask[ni] && !visited[ni] {
                            visited[ni] = true;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            let rect = Rect::new(x0, y0, x1 + 1, y1 + 1);
            if best.as_ref().is_none_or(|(a, _, _)| area > *a) {
                best = Some((area, rect, peak));
            }
        }
    }
    let (_, rect, peak_score) = best.expect("max > 0 guarantees at least one masked pixel");
    SalientBox { rect, peak_score }
}
