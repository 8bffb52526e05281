//! Unit-normalized feature vectors and the built-in histogram extractors.
//!
//! The metric suite is extractor-agnostic: anything that yields a fixed-size
//! real vector per image works. Built in are a per-channel color histogram
//! and a saliency-weighted variant; externally computed deep features enter
//! through the companion crate's precomputed-feature loader.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::RasterImage;
use crate::math;
use crate::saliency::{fine_grained_saliency, to_grayscale, SaliencyConfig};

/// A feature vector with Euclidean norm 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Dot product; for unit vectors this is the cosine similarity.
    pub fn dot(&self, other: &FeatureVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean distance to another vector of the same dimension.
    pub fn distance(&self, other: &FeatureVector) -> f64 {
        let sum: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        math::sqrt(sum)
    }
}

/// Scale a raw vector to unit Euclidean norm.
pub fn l2_normalize(raw: &[f64]) -> Result<FeatureVector> {
    let norm_sq: f64 = raw.iter().map(|v| v * v).sum();
    if norm_sq <= 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector);
    }
    let norm = math::sqrt(norm_sq);
    Ok(FeatureVector {
        values: raw.iter().map(|v| v / norm).collect(),
    })
}

#[inline]
fn bin_of(value: u8, bins: usize) -> usize {
    (value as usize * bins) / 256
}

/// Per-channel color histogram, concatenated (dimension `3 * bins`), scaled
/// by pixel count and unit-normalized.
pub fn embed_histogram(image: &RasterImage, bins: usize) -> Result<FeatureVector> {
    let weights = vec![1.0f32; image.width() * image.height()];
    embed_histogram_weighted(image, bins, &weights)
}

/// Histogram embedding where each pixel contributes its weight instead of a
/// unit count. All-zero weights fall back to the unweighted histogram so the
/// result never degenerates to a zero vector.
pub fn embed_histogram_weighted(
    image: &RasterImage,
    bins: usize,
    weights: &[f32],
) -> Result<FeatureVector> {
    if bins < 2 {
        return Err(Error::BadBinCount(bins));
    }
    let n_pixels = image.width() * image.height();
    if weights.len() != n_pixels {
        return Err(Error::WeightLenMismatch { expected: n_pixels, got: weights.len() });
    }
    let total_weight: f64 = weights.iter().map(|&w| w as f64).sum();
    let mut hist = vec![0.0f64; 3 * bins];
    if total_weight > 0.0 {
        for (px, &w) in image.as_raw().chunks_exact(3).zip(weights) {
            for c in 0..3 {
                hist[c * bins + bin_of(px[c], bins)] += w as f64;
            }
        }
    } else {
        for px in image.as_raw().chunks_exact(3) {
            for c in 0..3 {
                hist[c * bins + bin_of(px[c], bins)] += 1.0;
            }
        }
    }
    for v in &mut hist {
        *v /= n_pixels as f64;
    }
    l2_normalize(&hist)
}

/// Histogram embedding weighted by the image's own saliency map, mirroring
/// the pipeline's "saliency image first" feature path.
pub fn embed_saliency_weighted(
    image: &RasterImage,
    bins: usize,
    saliency: &SaliencyConfig,
) -> Result<FeatureVector> {
    let map = fine_grained_saliency(&to_grayscale(image), &saliency.radii)?;
    embed_histogram_weighted(image, bins, map.as_slice())
}
