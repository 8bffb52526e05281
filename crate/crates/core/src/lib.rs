//! Saliency-guided image augmentation and dataset diversity/fairness metrics.
//!
//! This crate holds the pure algorithmic core:
//!
//! - fine-grained static saliency (multi-scale center–surround over integral
//!   images) and salient-box extraction,
//! - the 8-region geometry around a salient box with min/max/random placement,
//! - a RandAugment-style operation set,
//! - the keep-original augmentation pipeline combining the above,
//! - histogram embeddings and the diversity/fairness metric suite
//!   (within/inter-group diversity, combined metric, ISS, IIAS).
//!
//! Everything here is a pure function of its inputs; randomized operations
//! take a caller-owned RNG so parallel callers get independent streams. The
//! crate is `no_std`-compatible (`alloc` required): build with
//! `--no-default-features --features libm` for `no_std` targets. File IO,
//! dataset manifests, and the CLI live in the companion `fairlens` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("fairlens-core requires either the `std` or the `libm` feature");

mod math;

pub mod augops;
pub mod embedding;
pub mod error;
pub mod image;
pub mod metrics;
pub mod pipeline;
pub mod placement;
pub mod saliency;

pub use augops::{apply_op, rand_augment, AugOpKind, RandAugPolicy};
pub use embedding::{
    embed_histogram, embed_histogram_weighted, embed_saliency_weighted, l2_normalize,
    FeatureVector,
};
pub use error::{Error, Result};
pub use image::{GrayImage, RasterImage};
pub use metrics::{
    d_inter, d_within, fairness_diversity, iias, iss_cross, iss_intra, Group, GroupedFeatures,
    Weights,
};
pub use pipeline::{
    derive_seed, face_keep_original_augment, AugmentOutcome, AugmentPart, PipelineConfig,
};
pub use placement::{
    choose_region, partition_regions, paste, resize_crop, PlacementStrategy, Rect,
    RegionPartition,
};
pub use saliency::{
    extract_salient_box, fine_grained_raw, fine_grained_saliency, to_grayscale, IntegralImage,
    SalientBox, SaliencyConfig, SaliencyMap,
};
