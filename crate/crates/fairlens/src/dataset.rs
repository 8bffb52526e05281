//! Dataset manifests, group discovery, and the undersampling balancer.
//!
//! A dataset on disk is a root directory with one subdirectory per group
//! (e.g. `male/`, `female/`); the manifest is its flat, deterministic
//! listing. Manifest files are line-delimited `path<TAB>group` records.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::util::atomic_write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub path: PathBuf,
    pub group: String,
    pub split: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub name: String,
    pub records: Vec<ManifestRecord>,
}

impl Manifest {
    pub fn group_sizes(&self) -> BTreeMap<String, usize> {
        let mut sizes = BTreeMap::new();
        for r in &self.records {
            *sizes.entry(r.group.clone()).or_insert(0) += 1;
        }
        sizes
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn is_hidden(name: &str) -> bool {
    name.starts_with('.')
}

/// Walk a dataset root where each subdirectory is a group. Records come out
/// in lexicographic (group, path) order, so rescanning an unchanged tree
/// yields an identical manifest.
pub fn scan_dataset(root: &Path) -> Result<Manifest> {
    let entries = std::fs::read_dir(root).map_err(|e| Error::io(root, e))?;
    let mut groups: Vec<(String, PathBuf)> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(root, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.path().is_dir() && !is_hidden(&name) {
            groups.push((name, entry.path()));
        }
    }
    if groups.is_empty() {
        return Err(Error::data(format!(
            "{}: no group subdirectories found",
            root.display()
        )));
    }
    groups.sort();

    let mut records = Vec::new();
    for (group, dir) in groups {
        let mut paths: Vec<PathBuf> = walkdir::WalkDir::new(&dir)
            .into_iter()
            .filter_map(|e| e.ok())
            .filter(|e| e.file_type().is_file())
            .filter(|e| !is_hidden(&e.file_name().to_string_lossy()))
            .map(|e| e.into_path())
            .collect();
        paths.sort();
        for path in paths {
            records.push(ManifestRecord { path, group: group.clone(), split: None });
        }
    }
    let name = root
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Ok(Manifest { name, records })
}

/// Reduce every group to the smallest group's size by seeded uniform
/// sampling without replacement. Record order is preserved; an
/// already-balanced manifest comes back unchanged.
pub fn undersample_balance(manifest: &Manifest, seed: u64) -> Manifest {
    let sizes = manifest.group_sizes();
    let target = match sizes.values().min() {
        Some(&m) => m,
        None => return manifest.clone(),
    };
    if sizes.values().all(|&s| s == target) {
        return manifest.clone();
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = vec![false; manifest.records.len()];
    // Groups in sorted order so the draw sequence is reproducible.
    for (group, &size) in &sizes {
        let positions: Vec<usize> = manifest
            .records
            .iter()
            .enumerate()
            .filter(|(_, r)| &r.group == group)
            .map(|(i, _)| i)
            .collect();
        if size <= target {
            for &i in &positions {
                keep[i] = true;
            }
            continue;
        }
        for chosen in rand::seq::index::sample(&mut rng, size, target) {
            keep[positions[chosen]] = true;
        }
    }
    let records = manifest
        .records
        .iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(_, r)| r.clone())
        .collect();
    Manifest { name: manifest.name.clone(), records }
}

/// Parse a `path<TAB>group[<TAB>split]` manifest file.
pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (file, group) = match (fields.next(), fields.next()) {
            (Some(f), Some(g)) if !f.is_empty() && !g.is_empty() => (f, g),
            _ => {
                return Err(Error::data(format!(
                    "{}:{}: expected `path<TAB>group`",
                    path.display(),
                    lineno + 1
                )))
            }
        };
        records.push(ManifestRecord {
            path: PathBuf::from(file),
            group: group.to_string(),
            split: fields.next().map(str::to_string),
        });
    }
    let name = path
        .file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Ok(Manifest { name, records })
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    let mut out = String::new();
    for r in &manifest.records {
        out.push_str(&r.path.to_string_lossy());
        out.push('\t');
        out.push_str(&r.group);
        if let Some(split) = &r.split {
            out.push('\t');
            out.push_str(split);
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}
