//! RandAugment-style operation set.
//!
//! Thirteen ops sampled uniformly with replacement. A single integer
//! magnitude in 0..=30 maps linearly into each op's parameter range
//! (rotate up to 30 degrees, shear up to 0.3, translate up to 30% of the
//! dimension, enhancement factors 1 +/- 0.9*m/30, posterize 8 down to 4 bits,
//! solarize threshold 255 down to 0). Magnitude 0 is the identity for every
//! op. Geometric ops sample with nearest neighbor and fill exposed pixels
//! with mid-gray 128; directional ops draw their sign from the caller's RNG.

use alloc::vec::Vec;

use rand::Rng;

use crate::image::RasterImage;
use crate::math;

const FILL: [u8; 3] = [128, 128, 128];
const MAX_MAGNITUDE: u8 = 30;

/// The operation kinds in the sampling pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AugOpKind {
    Identity,
    AutoContrast,
    Equalize,
    Rotate,
    Solarize,
    Posterize,
    Brightness,
    Contrast,
    Sharpness,
    ShearX,
    ShearY,
    TranslateX,
    TranslateY,
}

impl AugOpKind {
    pub const ALL: [AugOpKind; 13] = [
        AugOpKind::Identity,
        AugOpKind::AutoContrast,
        AugOpKind::Equalize,
        AugOpKind::Rotate,
        AugOpKind::Solarize,
        AugOpKind::Posterize,
        AugOpKind::Brightness,
        AugOpKind::Contrast,
        AugOpKind::Sharpness,
        AugOpKind::ShearX,
        AugOpKind::ShearY,
        AugOpKind::TranslateX,
        AugOpKind::TranslateY,
    ];
}

/// How many ops to apply per image and at what shared magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RandAugPolicy {
    pub n_ops: usize,
    pub magnitude: u8,
}

impl RandAugPolicy {
    pub fn new(n_ops: usize, magnitude: u8) -> Self {
        Self { n_ops, magnitude: magnitude.min(MAX_MAGNITUDE) }
    }
}

impl Default for RandAugPolicy {
    fn default() -> Self {
        Self { n_ops: 2, magnitude: 15 }
    }
}

/// Apply one op at the given magnitude. Output dimensions always equal the
/// input's; magnitude 0 returns the input unchanged for every kind.
pub fn apply_op<R: Rng + ?Sized>(
    image: &RasterImage,
    op: AugOpKind,
    magnitude: u8,
    rng: &mut R,
) -> RasterImage {
    let m = magnitude.min(MAX_MAGNITUDE);
    if m == 0 {
        return image.clone();
    }
    let level = m as f64 / MAX_MAGNITUDE as f64;
    match op {
        AugOpKind::Identity => image.clone(),
        AugOpKind::AutoContrast => auto_contrast(image),
        AugOpKind::Equalize => equalize(image),
        AugOpKind::Rotate => {
            let degrees = signed(rng) * 30.0 * level;
            rotate(image, degrees)
        }
        AugOpKind::Solarize => {
            let threshold = 255 - math::round(255.0 * level) as i32;
            map_channels(image, |v| if v as i32 >= threshold { 255 - v } else { v })
        }
        AugOpKind::Posterize => {
            let bits = 8 - math::round(4.0 * level) as u32;
            let mask = !(((1u16 << (8 - bits)) - 1) as u8);
            map_channels(image, |v| v & mask)
        }
        AugOpKind::Brightness => blend(image, &RasterImage::filled(image.width(), image.height(), [0, 0, 0]).unwrap(), enhance_factor(level, rng)),
        AugOpKind::Contrast => {
            let gray = mean_luminance(image);
            let degenerate =
                RasterImage::filled(image.width(), image.height(), [gray, gray, gray]).unwrap();
            blend(image, &degenerate, enhance_factor(level, rng))
        }
        AugOpKind::Sharpness => blend(image, &smooth(image), enhance_factor(level, rng)),
        AugOpKind::ShearX => {
            let s = signed(rng) * 0.3 * level;
            affine_nearest(image, 1.0, s, 0.0, 1.0, 0.0, 0.0)
        }
        AugOpKind::ShearY => {
            let s = signed(rng) * 0.3 * level;
            affine_nearest(image, 1.0, 0.0, s, 1.0, 0.0, 0.0)
        }
        AugOpKind::TranslateX => {
            let dx = signed(rng) * math::round(0.3 * level * image.width() as f64);
            affine_nearest(image, 1.0, 0.0, 0.0, 1.0, dx, 0.0)
        }
        AugOpKind::TranslateY => {
            let dy = signed(rng) * math::round(0.3 * level * image.height() as f64);
            affine_nearest(image, 1.0, 0.0, 0.0, 1.0, 0.0, dy)
        }
    }
}

/// Apply `policy.n_ops` uniformly sampled ops in sequence. Identity stays in
/// the pool, so the expected strength decreases smoothly with magnitude.
pub fn rand_augment<R: Rng + ?Sized>(
    image: &RasterImage,
    policy: RandAugPolicy,
    rng: &mut R,
) -> RasterImage {
    let mut out = image.clone();
    for _ in 0..policy.n_ops {
        let kind = AugOpKind::ALL[rng.gen_range(0..AugOpKind::ALL.len())];
        out = apply_op(&out, kind, policy.magnitude, rng);
    }
    out
}

fn signed<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

fn enhance_factor<R: Rng + ?Sized>(level: f64, rng: &mut R) -> f64 {
    1.0 + signed(rng) * 0.9 * level
}

fn map_channels(image: &RasterImage, f: impl Fn(u8) -> u8) -> RasterImage {
    let data: Vec<u8> = image.as_raw().iter().map(|&v| f(v)).collect();
    RasterImage::from_raw(image.width(), image.height(), data).unwrap()
}

/// out = degenerate + factor * (image - degenerate), clamped per channel.
fn blend(image: &RasterImage, degenerate: &RasterImage, factor: f64) -> RasterImage {
    let data: Vec<u8> = image
        .as_raw()
        .iter()
        .zip(degenerate.as_raw())
        .map(|(&v, &d)| {
            let out = d as f64 + factor * (v as f64 - d as f64);
            math::round(out).clamp(0.0, 255.0) as u8
        })
        .collect();
    RasterImage::from_raw(image.width(), image.height(), data).unwrap()
}

fn mean_luminance(image: &RasterImage) -> u8 {
    let mut sum = 0.0f64;
    for px in image.as_raw().chunks_exact(3) {
        sum += 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
    }
    let mean = sum / (image.width() * image.height()) as f64;
    math::floor(mean + 0.5).clamp(0.0, 255.0) as u8
}

fn auto_contrast(image: &RasterImage) -> RasterImage {
    let mut lo = [255u8; 3];
    let mut hi = [0u8; 3];
    for px in image.as_raw().chunks_exact(3) {
        for c in 0..3 {
            lo[c] = lo[c].min(px[c]);
            hi[c] = hi[c].max(px[c]);
        }
    }
    let mut luts = [[0u8; 256]; 3];
    for c in 0..3 {
        for (v, slot) in luts[c].iter_mut().enumerate() {
            *slot = if hi[c] > lo[c] {
                let scaled = (v as f64 - lo[c] as f64) * 255.0 / (hi[c] as f64 - lo[c] as f64);
                math::round(scaled).clamp(0.0, 255.0) as u8
            } else {
                v as u8
            };
        }
    }
    let data: Vec<u8> = image
        .as_raw()
        .chunks_exact(3)
        .flat_map(|px| [luts[0][px[0] as usize], luts[1][px[1] as usize], luts[2][px[2] as usize]])
        .collect();
    RasterImage::from_raw(image.width(), image.height(), data).unwrap()
}

/// Classic per-channel histogram equalization (integer LUT form).
fn equalize(image: &RasterImage) -> RasterImage {
    let mut hist = [[0u32; 256]; 3];
    for px in image.as_raw().chunks_exact(3) {
        for c in 0..3 {
            hist[c][px[c] as usize] += 1;
        }
    }
    let mut luts = [[0u8; 256]; 3];
    for c in 0..3 {
        let nonzero: Vec<u32> = hist[c].iter().copied().filter(|&v| v > 0).collect();
        let total: u32 = nonzero.iter().sum();
        let step = match nonzero.last() {
            Some(&last) if nonzero.len() > 1 => (total - last) / 255,
            _ => 0,
        };
        if step == 0 {
            // Degenerate histogram: equalization is the identity.
            for (v, slot) in luts[c].iter_mut().enumerate() {
                *slot = v as u8;
            }
            continue;
        }
        let mut n = step / 2;
        for (v, slot) in luts[c].iter_mut().enumerate() {
            *slot = (n / step).min(255) as u8;
            n += hist[c][v];
        }
    }
    let data: Vec<u8> = image
        .as_raw()
        .chunks_exact(3)
        .flat_map(|px| [luts[0][px[0] as usize], luts[1][px[1] as usize], luts[2][px[2] as usize]])
        .collect();
    RasterImage::from_raw(image.width(), image.height(), data).unwrap()
}

/// 3x3 smoothing kernel [[1,1,1],[1,5,1],[1,1,1]]/13; border pixels are kept
/// from the source image.
fn smooth(image: &RasterImage) -> RasterImage {
    let (w, h) = (image.width(), image.height());
    let mut out = image.clone();
    if w < 3 || h < 3 {
        return out;
    }
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let mut acc = [0.0f64; 3];
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let weight = if dx == 0 && dy == 0 { 5.0 } else { 1.0 };
                    let px = image.pixel((x as i64 + dx) as usize, (y as i64 + dy) as usize);
                    for c in 0..3 {
                        acc[c] += weight * px[c] as f64;
                    }
                }
            }
            let px = [
                math::round(acc[0] / 13.0).clamp(0.0, 255.0) as u8,
                math::round(acc[1] / 13.0).clamp(0.0, 255.0) as u8,
                math::round(acc[2] / 13.0).clamp(0.0, 255.0) as u8,
            ];
            out.set_pixel(x, y, px);
        }
    }
    out
}

fn rotate(image: &RasterImage, degrees: f64) -> RasterImage {
    let theta = degrees * core::f64::consts::PI / 180.0;
    let (sin, cos) = math::sin_cos(theta);
    // Inverse rotation about the pixel-center midpoint.
    affine_nearest(image, cos, sin, -sin, cos, 0.0, 0.0)
}

/// Sample the source through the inverse affine map
/// `src = M * (dst - center) + center - t`, nearest neighbor, fill 128.
/// `m00..m11` are the inverse linear part, `(tx, ty)` the forward translation.
fn affine_nearest(
    image: &RasterImage,
    m00: f64,
    m01: f64,
    m10: f64,
    m11: f64,
    tx: f64,
    ty: f64,
) -> RasterImage {
    let (w, h) = (image.width(), image.height());
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let mut data = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - cx - tx;
            let dy = y as f64 - cy - ty;
            let sx = m00 * dx + m01 * dy + cx;
            let sy = m10 * dx + m11 * dy + cy;
            let xi = math::floor(sx + 0.5);
            let yi = math::floor(sy + 0.5);
            if xi >= 0.0 && xi < w as f64 && yi >= 0.0 && yi < h as f64 {
                let px = image.pixel(xi as usize, yi as usize);
                data.extend_from_slice(&px);
            } else {
                data.extend_from_slice(&FILL);
            }
        }
    }
    RasterImage::from_raw(w, h, data).unwrap()
}
