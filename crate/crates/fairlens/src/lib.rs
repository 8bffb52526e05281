//! Dataset-facing half of the fairlens toolkit: image and manifest IO, the
//! precomputed-feature format, audit reports, batch augmentation, and the
//! CLI. The algorithms themselves live in `fairlens-core` and are re-exported
//! here.

pub mod analysis;
pub mod augment;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod features;
pub mod imgio;
pub mod report;
mod util;

pub use error::{Error, Result};
pub use fairlens_core as core;
