//! Geometry around the salient box: the 8 surrounding regions and the
//! min/max/random placement strategies, plus the crop resize/paste mechanics.

use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::Rng;

use crate::error::{Error, Result};
use crate::image::RasterImage;
use crate::math;

/// Axis-aligned pixel rectangle, `x0/y0` inclusive, `x1/y1` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }
}

/// The 8 cells surrounding a salient box, in fixed order:
/// top-left, top, top-right, left, right, bottom-left, bottom, bottom-right.
///
/// Cells are pairwise disjoint and together with the box tile the image;
/// cells collapse to zero area where the box touches a border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    pub cells: [Rect; 8],
}

/// Which surrounding cell receives the resized salient crop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PlacementStrategy {
    MinArea,
    MaxArea,
    RandomArea,
}

/// Split the image into the 3x3 grid induced by the box edges and return the
/// 8 non-center cells.
pub fn partition_regions(image_w: usize, image_h: usize, boxr: Rect) -> Result<RegionPartition> {
    if boxr.x1 > image_w || boxr.y1 > image_h || boxr.x0 > boxr.x1 || boxr.y0 > boxr.y1 {
        return Err(Error::RectOutsideImage);
    }
    let (x0, x1, y0, y1) = (boxr.x0, boxr.x1, boxr.y0, boxr.y1);
    let cells = [
        Rect::new(0, 0, x0, y0),
        Rect::new(x0, 0, x1, y0),
        Rect::new(x1, 0, image_w, y0),
        Rect::new(0, y0, x0, y1),
        Rect::new(x1, y0, image_w, y1),
        Rect::new(0, y1, x0, image_h),
        Rect::new(x0, y1, x1, image_h),
        Rect::new(x1, y1, image_w, image_h),
    ];
    Ok(RegionPartition { cells })
}

/// Pick the target cell. Only positive-area cells are considered; ties are
/// broken by the lowest fixed-order index. Returns `None` when every cell is
/// empty (salient box covers the whole image).
pub fn choose_region<R: Rng + ?Sized>(
    partition: &RegionPartition,
    strategy: PlacementStrategy,
    rng: &mut R,
) -> Option<Rect> {
    let positive: Vec<(usize, Rect)> = partition
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.area() > 0)
        .map(|(i, c)| (i, *c))
        .collect();
    if positive.is_empty() {
        return None;
    }
    match strategy {
        PlacementStrategy::MinArea => positive
            .iter()
            .min_by_key(|(i, c)| (c.area(), *i))
            .map(|(_, c)| *c),
        PlacementStrategy::MaxArea => positive
            .iter()
            .max_by_key(|(i, c)| (c.area(), Reverse(*i)))
            .map(|(_, c)| *c),
        PlacementStrategy::RandomArea => {
            let idx = rng.gen_range(0..positive.len());
            Some(positive[idx].1)
        }
    }
}

/// Bilinear resize to exactly `target_w x target_h`.
pub fn resize_crop(crop: &RasterImage, target_w: usize, target_h: usize) -> Result<RasterImage> {
    if target_w == 0 || target_h == 0 {
        return Err(Error::ZeroTargetDim);
    }
    let (sw, sh) = (crop.width(), crop.height());
    let scale_x = sw as f64 / target_w as f64;
    let scale_y = sh as f64 / target_h as f64;
    let mut data = Vec::with_capacity(target_w * target_h * 3);
    for y in 0..target_h {
        // Pixel-center mapping; degenerates to the identity when sizes match.
        let sy = (y as f64 + 0.5) * scale_y - 0.5;
        let y0 = math::floor(sy).max(0.0) as usize;
        let ty = (sy - math::floor(sy)).clamp(0.0, 1.0);
        let (y0, y1, ty) = if sy < 0.0 {
            (0, 0, 0.0)
        } else {
            (y0.min(sh - 1), (y0 + 1).min(sh - 1), ty)
        };
        for x in 0..target_w {
            let sx = (x as f64 + 0.5) * scale_x - 0.5;
            let x0 = math::floor(sx).max(0.0) as usize;
            let tx = (sx - math::floor(sx)).clamp(0.0, 1.0);
            let (x0, x1, tx) = if sx < 0.0 {
                (0, 0, 0.0)
            } else {
                (x0.min(sw - 1), (x0 + 1).min(sw - 1), tx)
            };
            let p00 = crop.pixel(x0, y0);
            let p10 = crop.pixel(x1, y0);
            let p01 = crop.pixel(x0, y1);
            let p11 = crop.pixel(x1, y1);
            for c in 0..3 {
                let top = (1.0 - tx) * p00[c] as f64 + tx * p10[c] as f64;
                let bot = (1.0 - tx) * p01[c] as f64 + tx * p11[c] as f64;
                let v = (1.0 - ty) * top + ty * bot;
                data.push(math::floor(v + 0.5).clamp(0.0, 255.0) as u8);
            }
        }
    }
    RasterImage::from_raw(target_w, target_h, data)
}

/// Replace the pixels of `dst` under `at` with `crop`, bit-exact. The crop
/// dimensions must equal the rectangle dimensions and the rectangle must lie
/// inside `dst`.
pub fn paste(dst: &RasterImage, crop: &RasterImage, at: Rect) -> Result<RasterImage> {
    if at.x1 > dst.width() || at.y1 > dst.height() || at.x0 > at.x1 || at.y0 > at.y1 {
        return Err(Error::RectOutsideImage);
    }
    if crop.width() != at.width() || crop.height() != at.height() {
        return Err(Error::PasteSizeMismatch);
    }
    let mut out = dst.clone();
    for y in 0..crop.height() {
        for x in 0..crop.width() {
            out.set_pixel(at.x0 + x, at.y0 + y, crop.pixel(x, y));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn partition_nine_by_nine_centered_box() {
        let p = partition_regions(9, 9, Rect::new(3, 3, 6, 6)).unwrap();
        for cell in &p.cells {
            assert_eq!(cell.area(), 9);
        }
        let total: usize = p.cells.iter().map(Rect::area).sum();
        assert_eq!(total, 72);
    }

    #[test]
    fn partition_box_flush_left_collapses_left_column() {
        let p = partition_regions(9, 9, Rect::new(0, 3, 4, 6)).unwrap();
        // top-left, left, bottom-left are indices 0, 3, 5
        assert_eq!(p.cells[0].width(), 0);
        assert_eq!(p.cells[3].width(), 0);
        assert_eq!(p.cells[5].width(), 0);
    }

    #[test]
    fn partition_full_image_box_all_zero() {
        let p = partition_regions(7, 5, Rect::new(0, 0, 7, 5)).unwrap();
        assert!(p.cells.iter().all(|c| c.area() == 0));
    }

    #[test]
    fn partition_box_outside_errors() {
        assert_eq!(
            partition_regions(8, 8, Rect::new(4, 4, 9, 6)),
            Err(Error::RectOutsideImage)
        );
    }

    #[test]
    fn partition_is_a_tiling() {
        // Every pixel belongs to exactly one of the 8 cells or the box.
        let boxr = Rect::new(2, 1, 5, 4);
        let p = partition_regions(7, 6, boxr).unwrap();
        for y in 0..6 {
            for x in 0..7 {
                let mut hits = usize::from(boxr.contains(x, y));
                hits += p.cells.iter().filter(|c| c.contains(x, y)).count();
                assert_eq!(hits, 1, "pixel ({x},{y})");
            }
        }
    }

    fn partition_with_areas(areas: [usize; 8]) -> RegionPartition {
        // Free-standing rects; choose_region only inspects areas.
        let cells = areas.map(|a| Rect::new(0, 0, a, if a == 0 { 0 } else { 1 }));
        RegionPartition { cells }
    }

    #[test]
    fn min_area_tie_breaks_to_lowest_index() {
        let p = partition_with_areas([9; 8]);
        let got = choose_region(&p, PlacementStrategy::MinArea, &mut rng(0)).unwrap();
        assert_eq!(got, p.cells[0]);
    }

    #[test]
    fn min_and_max_skip_zero_area_cells() {
        let p = partition_with_areas([6, 12, 0, 3, 9, 0, 0, 18]);
        let min = choose_region(&p, PlacementStrategy::MinArea, &mut rng(0)).unwrap();
        assert_eq!(min.area(), 3);
        let max = choose_region(&p, PlacementStrategy::MaxArea, &mut rng(0)).unwrap();
        assert_eq!(max.area(), 18);
    }

    #[test]
    fn all_zero_areas_yield_none() {
        let p = partition_with_areas([0; 8]);
        assert_eq!(choose_region(&p, PlacementStrategy::MinArea, &mut rng(0)), None);
        assert_eq!(choose_region(&p, PlacementStrategy::RandomArea, &mut rng(0)), None);
    }

    #[test]
    fn random_area_is_seed_reproducible_and_roughly_uniform() {
        let p = partition_regions(9, 9, Rect::new(3, 3, 6, 6)).unwrap();
        let a: Vec<Rect> = (0..50)
            .map(|_| choose_region(&p, PlacementStrategy::RandomArea, &mut rng(42)).unwrap())
            .collect();
        let b: Vec<Rect> = (0..50)
            .map(|_| choose_region(&p, PlacementStrategy::RandomArea, &mut rng(42)).unwrap())
            .collect();
        assert_eq!(a, b);

        let mut counts = [0usize; 8];
        let mut r = rng(7);
        for _ in 0..10_000 {
            let cell = choose_region(&p, PlacementStrategy::RandomArea, &mut r).unwrap();
            let idx = p.cells.iter().position(|c| c == &cell).unwrap();
            counts[idx] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / 10_000.0;
            assert!((freq - 0.125).abs() <= 0.05 * 0.125 + 0.01, "freq {freq}");
        }
    }

    #[test]
    fn resize_same_dims_is_identity() {
        let mut img = RasterImage::filled(5, 4, [10, 20, 30]).unwrap();
        img.set_pixel(3, 2, [200, 100, 50]);
        let out = resize_crop(&img, 5, 4).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn resize_constant_stays_constant() {
        let img = RasterImage::filled(2, 2, [77, 77, 77]).unwrap();
        let out = resize_crop(&img, 9, 5).unwrap();
        assert!(out.as_raw().iter().all(|&v| v == 77));
    }

    #[test]
    fn resize_two_to_four_is_monotone() {
        let img = RasterImage::from_raw(2, 1, vec![0, 0, 0, 255, 255, 255]).unwrap();
        let out = resize_crop(&img, 4, 1).unwrap();
        let reds: Vec<u8> = (0..4).map(|x| out.pixel(x, 0)[0]).collect();
        assert_eq!(reds, vec![0, 64, 191, 255]);
        assert!(reds.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn resize_zero_target_errors() {
        let img = RasterImage::filled(2, 2, [0, 0, 0]).unwrap();
        assert_eq!(resize_crop(&img, 0, 3), Err(Error::ZeroTargetDim));
    }

    #[test]
    fn paste_identical_content_is_identity() {
        let img = RasterImage::filled(4, 4, [5, 6, 7]).unwrap();
        let crop = img.crop(Rect::new(1, 1, 3, 3)).unwrap();
        let out = paste(&img, &crop, Rect::new(1, 1, 3, 3)).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn paste_single_red_pixel() {
        let dst = RasterImage::filled(3, 3, [0, 0, 0]).unwrap();
        let red = RasterImage::filled(1, 1, [255, 0, 0]).unwrap();
        let out = paste(&dst, &red, Rect::new(0, 0, 1, 1)).unwrap();
        assert_eq!(out.pixel(0, 0), [255, 0, 0]);
        let red_count = out
            .as_raw()
            .chunks_exact(3)
            .filter(|px| px == &[255, 0, 0])
            .count();
        assert_eq!(red_count, 1);
    }

    #[test]
    fn paste_mismatch_errors() {
        let dst = RasterImage::filled(4, 4, [0, 0, 0]).unwrap();
        let crop = RasterImage::filled(2, 2, [1, 1, 1]).unwrap();
        assert_eq!(
            paste(&dst, &crop, Rect::new(0, 0, 3, 2)),
            Err(Error::PasteSizeMismatch)
        );
        assert_eq!(
            paste(&dst, &crop, Rect::new(3, 3, 5, 5)),
            Err(Error::RectOutsideImage)
        );
    }

    #[test]
    fn paste_region_and_complement() {
        let mut dst = RasterImage::filled(6, 5, [1, 2, 3]).unwrap();
        dst.set_pixel(0, 0, [9, 9, 9]);
        let crop = RasterImage::filled(3, 2, [200, 201, 202]).unwrap();
        let at = Rect::new(2, 2, 5, 4);
        let out = paste(&dst, &crop, at).unwrap();
        for y in 0..5 {
            for x in 0..6 {
                if at.contains(x, y) {
                    assert_eq!(out.pixel(x, y), crop.pixel(x - at.x0, y - at.y0));
                } else {
                    assert_eq!(out.pixel(x, y), dst.pixel(x, y));
                }
            }
        }
    }
}
