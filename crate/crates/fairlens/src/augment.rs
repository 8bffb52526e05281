//! Batch augmentation over a dataset manifest.
//!
//! Each item gets a seed derived from `(master_seed, index)`, so byte-exact
//! outputs are independent of processing order and worker count. Unreadable
//! inputs become per-item failure records; the batch keeps going.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use fairlens_core::{derive_seed, face_keep_original_augment, PipelineConfig, Rect};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Manifest;
use crate::error::{Error, Result};
use crate::imgio::{load_image, save_image};
use crate::util::atomic_write;

/// One line of the output manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentRecord {
    pub src: String,
    pub dst: Option<String>,
    pub seed: u64,
    #[serde(rename = "box")]
    pub salient_box: Option<Rect>,
    pub cell: Option<Rect>,
    pub status: String,
}

/// Augment every manifest entry into `out_dir/<group>/<file>`. Returns one
/// record per input, in manifest order. `workers = 0` uses all cores.
pub fn augment_dataset(
    manifest: &Manifest,
    cfg: &PipelineConfig,
    out_dir: &Path,
    workers: usize,
) -> Result<Vec<AugmentRecord>> {
    // Destinations are fixed up front; a name collision is deterministic
    // per-item failure, not a race.
    let mut seen: HashSet<PathBuf> = HashSet::new();
    let destinations: Vec<std::result::Result<PathBuf, String>> = manifest
        .records
        .iter()
        .map(|r| {
            let file = r.path.file_name().map(PathBuf::from).ok_or_else(|| {
                format!("{}: path has no file name", r.path.display())
            })?;
            let dst = out_dir.join(&r.group).join(file);
            if !seen.insert(dst.clone()) {
                return Err(format!("duplicate output name {}", dst.display()));
            }
            Ok(dst)
        })
        .collect();
    for group in manifest.group_sizes().keys() {
        let dir = out_dir.join(group);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;
    let records: Vec<AugmentRecord> = pool.install(|| {
        manifest
            .records
            .par_iter()
            .zip(destinations.par_iter())
            .enumerate()
            .map(|(index, (record, dst))| {
                let seed = derive_seed(cfg.master_seed, index as u64);
                let src = record.path.to_string_lossy().into_owned();
                let dst = match dst {
                    Ok(d) => d,
                    Err(msg) => return failure(src, seed, msg.clone()),
                };
                match augment_one(&record.path, dst, cfg, seed) {
                    Ok((salient_box, cell)) => AugmentRecord {
                        src,
                        dst: Some(dst.to_string_lossy().into_owned()),
                        seed,
                        salient_box: Some(salient_box),
                        cell,
                        status: "ok".to_string(),
                    },
                    Err(e) => failure(src, seed, e.to_string()),
                }
            })
            .collect()
    });
    Ok(records)
}

fn failure(src: String, seed: u64, msg: String) -> AugmentRecord {
    AugmentRecord {
        src,
        dst: None,
        seed,
        salient_box: None,
        cell: None,
        status: format!("failed: {msg}"),
    }
}

fn augment_one(
    src: &Path,
    dst: &Path,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(Rect, Option<Rect>)> {
    let image = load_image(src)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = face_keep_original_augment(&image, cfg, &mut rng)
        .map_err(|e| Error::data(format!("{}: {e}", src.display())))?;
    save_image(&outcome.image, dst)?;
    Ok((outcome.salient_box, outcome.cell))
}

/// Serialize records as line-delimited JSON.
pub fn render_augment_manifest(records: &[AugmentRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization"));
        out.push('\n');
    }
    out
}

pub fn write_augment_manifest(records: &[AugmentRecord], path: &Path) -> Result<()> {
    atomic_write(path, render_augment_manifest(records).as_bytes())
}
