//! Audit reports: metric values per dataset, rendered as CSV or JSON.
//!
//! CSV serializes values to 6 significant digits; JSON keeps full float
//! precision. Reports with more than one entry get a trailing mean row.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::atomic_write;

pub const CSV_HEADER: &str = "dataset,group_set,D_within,D_inter,M,ISS_intra,ISS_cross,IIAS";

/// Metric values for one dataset/group-set combination. Metrics that were
/// not computed stay `None` and render as empty CSV cells / JSON nulls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub dataset: String,
    pub group_set: String,
    pub d_within: Option<f64>,
    pub d_inter: Option<f64>,
    pub m: Option<f64>,
    pub iss_intra: Option<f64>,
    pub iss_cross: Option<f64>,
    pub iias: Option<f64>,
}

impl ReportEntry {
    pub fn empty(dataset: impl Into<String>, group_set: impl Into<String>) -> Self {
        Self {
            dataset: dataset.into(),
            group_set: group_set.into(),
            d_within: None,
            d_inter: None,
            m: None,
            iss_intra: None,
            iss_cross: None,
            iias: None,
        }
    }

    fn metrics(&self) -> [Option<f64>; 6] {
        [self.d_within, self.d_inter, self.m, self.iss_intra, self.iss_cross, self.iias]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub entries: Vec<ReportEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportDoc {
    entries: Vec<ReportEntry>,
    mean: Option<ReportEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl AuditReport {
    pub fn new(entries: Vec<ReportEntry>) -> Self {
        Self { entries }
    }

    /// Column-wise arithmetic mean over entries where the metric is present.
    /// Only reports with at least two entries carry a mean row.
    pub fn mean_entry(&self) -> Option<ReportEntry> {
        if self.entries.len() < 2 {
            return None;
        }
        let mut mean = ReportEntry::empty("Mean Value", "");
        let columns: Vec<[Option<f64>; 6]> = self.entries.iter().map(|e| e.metrics()).collect();
        let slots: [&mut Option<f64>; 6] = [
            &mut mean.d_within,
            &mut mean.d_inter,
            &mut mean.m,
            &mut mean.iss_intra,
            &mut mean.iss_cross,
            &mut mean.iias,
        ];
        for (i, slot) in slots.into_iter().enumerate() {
            let present: Vec<f64> = columns.iter().filter_map(|c| c[i]).collect();
            if !present.is_empty() {
                *slot = Some(present.iter().sum::<f64>() / present.len() as f64);
            }
        }
        Some(mean)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for entry in self.entries.iter().chain(self.mean_entry().iter()) {
            out.push_str(&entry.dataset);
            out.push(',');
            out.push_str(&entry.group_set);
            for v in entry.metrics() {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&sig6(v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = ReportDoc { entries: self.entries.clone(), mean: self.mean_entry() };
        let mut json = serde_json::to_string_pretty(&doc).expect("report serialization");
        json.push('\n');
        json
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ReportDoc =
            serde_json::from_str(text).map_err(|e| Error::data(format!("report: {e}")))?;
        Ok(Self { entries: doc.entries })
    }
}

/// Format with 6 significant digits (values here live in [-2, 2]).
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_report(report: &AuditReport, path: &Path, format: ReportFormat) -> Result<()> {
    let rendered = match format {
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Json => report.to_json(),
    };
    atomic_write(path, rendered.as_bytes())
}
