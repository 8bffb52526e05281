//! Feature extraction and the precomputed-feature file format.
//!
//! The file format is UTF-8 text: a `#dim=d` header line followed by one
//! `label,group,v1,...,vd` record per line. Vectors are unit-normalized on
//! load, so externally computed deep features (e.g. from a pretrained
//! network) drop straight into the metric suite.

use std::path::{Path, PathBuf};

use fairlens_core::{
    embed_histogram, embed_saliency_weighted, l2_normalize, FeatureVector, Group,
    GroupedFeatures, SaliencyConfig,
};
use rayon::prelude::*;

use crate::dataset::Manifest;
use crate::error::{Error, Result};
use crate::imgio::load_image;
use crate::util::atomic_write;

/// How feature vectors are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum EmbeddingSpec {
    /// Per-channel color histogram with `bins` bins.
    Histogram { bins: usize },
    /// Histogram weighted by each pixel's saliency score.
    SaliencyWeighted { bins: usize, saliency: SaliencyConfig },
    /// Import a precomputed feature file.
    Precomputed { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRecord {
    pub label: String,
    pub group: String,
    pub vector: FeatureVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    pub name: String,
    pub dim: usize,
    pub records: Vec<FeatureRecord>,
}

impl FeatureSet {
    /// All vectors regardless of group.
    pub fn vectors(&self) -> Vec<FeatureVector> {
        self.records.iter().map(|r| r.vector.clone()).collect()
    }

    /// Vectors bucketed by group label, groups in sorted label order.
    pub fn grouped(&self) -> Result<GroupedFeatures> {
        let mut labels: Vec<&str> = self.records.iter().map(|r| r.group.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        let groups: Vec<Group> = labels
            .into_iter()
            .map(|label| {
                let vectors = self
                    .records
                    .iter()
                    .filter(|r| r.group == label)
                    .map(|r| r.vector.clone())
                    .collect();
                Group::new(label, vectors)
            })
            .collect();
        GroupedFeatures::new(groups)
            .map_err(|e| Error::data(format!("{}: {e}", self.name)))
    }
}

/// Load a `#dim=d` feature file. Every row is unit-normalized; dimension
/// mismatches and malformed rows are reported with their line number.
pub fn load_precomputed(path: &Path) -> Result<FeatureSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let dim = loop {
        match lines.next() {
            Some((_, line)) if line.trim().is_empty() => continue,
            Some((_, line)) => match line.trim().strip_prefix("#dim=") {
                Some(d) => match d.trim().parse::<usize>() {
                    Ok(d) if d >= 1 => break d,
                    _ => {
                        return Err(Error::data(format!(
                            "{}: invalid dimension in header `{line}`",
                            path.display()
                        )))
                    }
                },
                None => {
                    return Err(Error::data(format!(
                        "{}: missing `#dim=d` header line",
                        path.display()
                    )))
                }
            },
            None => {
                return Err(Error::data(format!(
                    "{}: missing `#dim=d` header line",
                    path.display()
                )))
            }
        }
    };

    let mut records = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(Error::data(format!(
                "{}:{}: expected `label,group,v1,...,vd`",
                path.display(),
                lineno + 1
            )));
        }
        let values = &fields[2..];
        if values.len() != dim {
            return Err(Error::data(format!(
                "{}:{}: expected {dim} values, got {}",
                path.display(),
                lineno + 1,
                values.len()
            )));
        }
        let mut raw = Vec::with_capacity(dim);
        for v in values {
            let parsed: f64 = v.trim().parse().map_err(|_| {
                Error::data(format!(
                    "{}:{}: malformed value `{v}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            raw.push(parsed);
        }
        let vector = l2_normalize(&raw).map_err(|e| {
            Error::data(format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
        records.push(FeatureRecord {
            label: fields[0].to_string(),
            group: fields[1].to_string(),
            vector,
        });
    }
    let name = path
        .file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "features".to_string());
    Ok(FeatureSet { name, dim, records })
}

/// Write a feature set in the `#dim=d` format, full float precision.
pub fn write_features(set: &FeatureSet, path: &Path) -> Result<()> {
    let mut out = format!("#dim={}\n", set.dim);
    for r in &set.records {
        out.push_str(&r.label);
        out.push(',');
        out.push_str(&r.group);
        for v in r.vector.values() {
            out.push(',');
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

fn sanitize_label(path: &Path) -> String {
    path.file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "item".to_string())
        .replace([',', '\t', '\n'], "_")
}

/// Embed every manifest entry. Embedding is deterministic per image, so the
/// worker count never changes the output. `workers = 0` uses all cores.
pub fn embed_manifest(
    manifest: &Manifest,
    spec: &EmbeddingSpec,
    workers: usize,
) -> Result<FeatureSet> {
    let (bins, saliency) = match spec {
        EmbeddingSpec::Histogram { bins } => (*bins, None),
        EmbeddingSpec::SaliencyWeighted { bins, saliency } => (*bins, Some(saliency.clone())),
        EmbeddingSpec::Precomputed { path } => return load_precomputed(path),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("worker pool: {e}")))?;
    let records: Vec<FeatureRecord> = pool.install(|| {
        manifest
            .records
            .par_iter()
            .map(|r| -> Result<FeatureRecord> {
                let img = load_image(&r.path)?;
                let vector = match &saliency {
                    Some(cfg) => embed_saliency_weighted(&img, bins, cfg),
                    None => embed_histogram(&img, bins),
                }
                .map_err(|e| Error::data(format!("{}: {e}", r.path.display())))?;
                Ok(FeatureRecord {
                    label: sanitize_label(&r.path),
                    group: r.group.clone(),
                    vector,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let dim = records.first().map(|r| r.vector.dim()).unwrap_or(3 * bins);
    Ok(FeatureSet { name: manifest.name.clone(), dim, records })
}
