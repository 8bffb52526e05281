//! Dataset-level metric aggregation: one report entry per grouped feature
//! set.
//!
//! Tables report a single within/inter value per dataset, so the within
//! column is the group-size-weighted mean of the per-group diversities and
//! the inter column is the pair-size-weighted mean over group pairs; with
//! two groups both reduce to the plain group/pair values. ISS_cross over a
//! grouped set is the unweighted mean over group pairs.

use fairlens_core::{
    d_inter, d_within, fairness_diversity, iss_cross, iss_intra, FeatureVector, Weights,
};

use crate::error::{Error, Result};
use crate::features::FeatureSet;
use crate::report::ReportEntry;

/// Compute D_within, D_inter, M, ISS_intra, and ISS_cross for one dataset.
/// Metrics whose preconditions are not met (a single group, fewer than two
/// vectors) stay absent rather than failing the audit.
pub fn dataset_entry(set: &FeatureSet, weights: Weights) -> Result<ReportEntry> {
    let grouped = set.grouped()?;
    let groups = grouped.groups();
    let labels: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
    let mut entry = ReportEntry::empty(set.name.clone(), labels.join("|"));

    let core = |e: fairlens_core::Error| Error::data(format!("{}: {e}", set.name));

    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    let mut within = 0.0f64;
    for g in groups {
        within += g.len() as f64 * d_within(g).map_err(core)?;
    }
    entry.d_within = Some(within / n_total as f64);

    if groups.len() >= 2 {
        let mut inter = 0.0f64;
        let mut pair_weight = 0.0f64;
        let mut cross = 0.0f64;
        let mut pairs = 0usize;
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let w = (groups[i].len() * groups[j].len()) as f64;
                inter += w * d_inter(&groups[i], &groups[j]).map_err(core)?;
                pair_weight += w;
                cross += iss_cross(&groups[i].vectors, &groups[j].vectors).map_err(core)?;
                pairs += 1;
            }
        }
        entry.d_inter = Some(inter / pair_weight);
        entry.iss_cross = Some(cross / pairs as f64);
    }

    entry.m = Some(fairness_diversity(&grouped, weights).map_err(core)?);

    let all: Vec<FeatureVector> = set.vectors();
    if all.len() >= 2 {
        entry.iss_intra = Some(iss_intra(&all).map_err(core)?);
    }
    Ok(entry)
}
