//! The keep-original augmentation transform: detect the salient box, pick a
//! surrounding cell, and paste a (possibly augmented) salient crop into it
//! while the rest of the image is either kept or augmented.

use rand::Rng;

use crate::augops::{rand_augment, RandAugPolicy};
use crate::error::Result;
use crate::image::RasterImage;
use crate::placement::{choose_region, partition_regions, paste, resize_crop, PlacementStrategy, Rect};
use crate::saliency::{extract_salient_box, fine_grained_saliency, to_grayscale, SaliencyConfig};

/// Which content receives the random augmentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AugmentPart {
    /// Augment only the salient crop; the base image stays original.
    SalientOnly,
    /// Augment the whole image; the pasted crop comes from the unaltered
    /// original.
    NonSalientOnly,
    /// Augment both, with independent random draws.
    Both,
}

/// Full configuration for the transform.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PipelineConfig {
    pub placement: PlacementStrategy,
    pub part: AugmentPart,
    pub policy: RandAugPolicy,
    pub saliency: SaliencyConfig,
    pub master_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            placement: PlacementStrategy::RandomArea,
            part: AugmentPart::Both,
            policy: RandAugPolicy::default(),
            saliency: SaliencyConfig::default(),
            master_seed: 0,
        }
    }
}

/// Transform output plus the geometry that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOutcome {
    pub image: RasterImage,
    /// Salient box detected in the input.
    pub salient_box: Rect,
    /// Cell that received the resized crop; `None` when the box covered the
    /// whole image and the transform fell back to plain whole-image
    /// augmentation.
    pub cell: Option<Rect>,
}

/// Apply the transform to one image. Output dimensions equal the input's.
pub fn face_keep_original_augment<R: Rng + ?Sized>(
    image: &RasterImage,
    cfg: &PipelineConfig,
    rng: &mut R,
) -> Result<AugmentOutcome> {
    let gray = to_grayscale(image);
    let map = fine_grained_saliency(&gray, &cfg.saliency.radii)?;
    let salient = extract_salient_box(&map, cfg.saliency.threshold_fraction);
    let partition = partition_regions(image.width(), image.height(), salient.rect)?;

    let cell = match choose_region(&partition, cfg.placement, rng) {
        Some(cell) => cell,
        None => {
            // Degenerate full-image box: nothing to paste into.
            return Ok(AugmentOutcome {
                image: rand_augment(image, cfg.policy, rng),
                salient_box: salient.rect,
                cell: None,
            });
        }
    };

    let crop = image.crop(salient.rect)?;
    let (base, patch) = match cfg.part {
        AugmentPart::SalientOnly => (image.clone(), rand_augment(&crop, cfg.policy, rng)),
        AugmentPart::NonSalientOnly => (rand_augment(image, cfg.policy, rng), crop),
        AugmentPart::Both => {
            let base = rand_augment(image, cfg.policy, rng);
            let patch = rand_augment(&crop, cfg.policy, rng);
            (base, patch)
        }
    };
    let resized = resize_crop(&patch, cell.width(), cell.height())?;
    let image = paste(&base, &resized, cell)?;
    Ok(AugmentOutcome { image, salient_box: salient.rect, cell: Some(cell) })
}

/// Stable per-item seed from a master seed and an item index, so batch
/// results are independent of processing order and worker count.
/// SplitMix64 finalizer; fixed for all time.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add((index.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
