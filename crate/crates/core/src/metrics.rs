//! Diversity and fairness metrics over unit feature vectors.
//!
//! Within-group diversity sums pairwise Euclidean distances over the
//! unordered pairs of a group but divides by the ordered-pair count
//! `N_i * (N_i - 1)`; that printed normalization is what keeps every group
//! term at most 1 and the combined metric bounded by `alpha + beta`. The
//! combined metric weights each group term by group size so minority groups
//! are not drowned out on imbalanced data.
//!
//! ISS scores are `1 - mean cosine similarity` (range 0..=2, 0 for identical
//! sets, 2 for antipodal pairs); IIAS is the mean difference between a
//! concept's cosine similarity to the male and female attribute sets
//! (positive values lean male).

use alloc::string::String;
use alloc::vec::Vec;

use crate::embedding::FeatureVector;
use crate::error::{Error, Result};

/// A labeled collection of unit feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: String,
    pub vectors: Vec<FeatureVector>,
}

impl Group {
    pub fn new(label: impl Into<String>, vectors: Vec<FeatureVector>) -> Self {
        Self { label: label.into(), vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Weights of the combined metric. Both must lie in [0, 0.5]; values
/// strictly below 0.5 keep the combined metric strictly below 1, at exactly
/// 0.5 the bound is still 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    alpha: f64,
    beta: f64,
}

impl Weights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for w in [alpha, beta] {
            if !(0.0..=0.5).contains(&w) {
                return Err(Error::WeightOutOfRange(w));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for Weights {
    fn default() -> Self {
        Self { alpha: 0.49, beta: 0.49 }
    }
}

/// All groups of one dataset. Construction checks that every group is
/// non-empty and dimensions agree.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedFeatures {
    groups: Vec<Group>,
}

impl GroupedFeatures {
    pub fn new(groups: Vec<Group>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::EmptyGroup);
        }
        let mut dim = None;
        for g in &groups {
            if g.is_empty() {
                return Err(Error::EmptyGroup);
            }
            for v in &g.vectors {
                match dim {
                    None => dim = Some(v.dim()),
                    Some(d) if d != v.dim() => {
                        return Err(Error::DimensionMismatch { expected: d, got: v.dim() })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { groups })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(Group::len).sum()
    }
}

/// Within-group diversity: the sum of pairwise distances over unordered
/// pairs, divided by the ordered-pair count `N (N - 1)`. A singleton group
/// scores 0.
pub fn d_within(group: &Group) -> Result<f64> {
    let n = group.len();
    if n == 0 {
        return Err(Error::EmptyGroup);
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut sum = 0.0f64;
    for j in 0..n {
        for k in j + 1..n {
            sum += group.vectors[j].distance(&group.vectors[k]);
        }
    }
    Ok(sum / (n as f64 * (n as f64 - 1.0)))
}

/// Inter-group diversity: the mean distance over all cross pairs.
pub fn d_inter(a: &Group, b: &Group) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if let (Some(x), Some(y)) = (a.vectors.first(), b.vectors.first()) {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
        }
    }
    let mut sum = 0.0f64;
    for x in &a.vectors {
        for y in &b.vectors {
            sum += x.distance(y);
        }
    }
    Ok(sum / (a.len() as f64 * b.len() as f64))
}

/// Combined fairness-diversity metric: the size-weighted within term plus
/// the size-weighted inter term,
/// `alpha * (1/N) * sum N_i D_within(i) + beta * (1/(N(N-1))) * sum_{i<j}
/// N_i N_j D_inter(i, j)`. With a single group the inter term is 0; with a
/// single sample the whole metric is 0.
pub fn fairness_diversity(features: &GroupedFeatures, weights: Weights) -> Result<f64> {
    let groups = features.groups();
    let n_total = features.total() as f64;
    if n_total <= 1.0 {
        return Ok(0.0);
    }
    let mut within = 0.0f64;
    for g in groups {
        within += g.len() as f64 * d_within(g)?;
    }
    let mut inter = 0.0f64;
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            inter += groups[i].len() as f64 * groups[j].len() as f64
                * d_inter(&groups[i], &groups[j])?;
        }
    }
    Ok(weights.alpha * within / n_total + weights.beta * inter / (n_total * (n_total - 1.0)))
}

fn mean_pairwise_cosine(vectors: &[FeatureVector]) -> f64 {
    let n = vectors.len();
    let mut sum = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            sum += vectors[i].dot(&vectors[j]);
        }
    }
    sum / (n as f64 * (n as f64 - 1.0) / 2.0)
}

/// Intra-set image similarity score, `1 - mean pairwise cosine`, in [0, 2].
pub fn iss_intra(vectors: &[FeatureVector]) -> Result<f64> {
    if vectors.len() < 2 {
        return Err(Error::TooFewVectors { need: 2, got: vectors.len() });
    }
    check_dims(vectors.iter())?;
    Ok(1.0 - mean_pairwise_cosine(vectors))
}

/// Cross-set image similarity score, `1 - mean cosine over all cross pairs`,
/// in [0, 2].
pub fn iss_cross(a: &[FeatureVector], b: &[FeatureVector]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooFewVectors { need: 1, got: 0 });
    }
    check_dims(a.iter().chain(b.iter()))?;
    let mut sum = 0.0f64;
    for x in a {
        for y in b {
            sum += x.dot(y);
        }
    }
    Ok(1.0 - sum / (a.len() as f64 * b.len() as f64))
}

/// Image-image association score: for each concept vector, the mean cosine
/// to the male attribute set minus the mean cosine to the female set,
/// averaged over concepts. Positive values indicate bias towards men.
pub fn iias(
    concepts: &[FeatureVector],
    male_attrs: &[FeatureVector],
    female_attrs: &[FeatureVector],
) -> Result<f64> {
    if concepts.is_empty() || male_attrs.is_empty() || female_attrs.is_empty() {
        return Err(Error::TooFewVectors { need: 1, got: 0 });
    }
    check_dims(concepts.iter().chain(male_attrs.iter()).chain(female_attrs.iter()))?;
    let mut total = 0.0f64;
    for c in concepts {
        let male: f64 = male_attrs.iter().map(|m| c.dot(m)).sum::<f64>() / male_attrs.len() as f64;
        let female: f64 =
            female_attrs.iter().map(|f| c.dot(f)).sum::<f64>() / female_attrs.len() as f64;
        total += male - female;
    }
    Ok(total / concepts.len() as f64)
}

fn check_dims<'a>(mut vectors: impl Iterator<Item = &'a FeatureVector>) -> Result<()> {
    let first = match vectors.next() {
        Some(v) => v.dim(),
        None => return Ok(()),
    };
    for v in vectors {
        if v.dim() != first {
            return Err(Error::DimensionMismatch { expected: first, got: v.dim() });
        }
    }
    Ok(())
}
