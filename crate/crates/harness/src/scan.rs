//! Scan records shared by every h-scan experiment.

use crate::error::Result;
use crate::fit::log_log_fit;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Largest ratio seen: lower bound for the upper constant.
    Max,
    /// Smallest ratio seen: upper bound for the lower constant.
    Min,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::Max => "max",
            Bound::Min => "min",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanCell {
    pub h: f64,
    pub m: usize,
    pub label: String,
    pub bound: Bound,
    /// Extremal ensemble member, if the cell comes from an ensemble.
    pub member: Option<usize>,
    /// Extra parameter of the extremal case (LP scale, horizon, ...).
    pub param: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupFit {
    pub label: String,
    pub bound: Bound,
    /// Fitted exponent of the ratio in 1/h; absent for a single h.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    /// max ratio / min ratio over the h-scan.
    pub spread: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanMetadata {
    pub experiment: String,
    pub d: usize,
    pub box_length: f64,
    pub h_values: Vec<f64>,
    pub grid_sizes: Vec<usize>,
    pub seed: u64,
    pub threads: usize,
    pub ensemble_size: usize,
    /// Experiment-specific settings (exponents, horizons, ...).
    pub config: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub metadata: ScanMetadata,
    pub cells: Vec<ScanCell>,
    pub fits: Vec<GroupFit>,
}

impl ScanResult {
    pub fn new(metadata: ScanMetadata, cells: Vec<ScanCell>) -> Self {
        let fits = fit_groups(&cells);
        Self { metadata, cells, fits }
    }

    pub fn fit(&self, label: &str, bound: Bound) -> Option<&GroupFit> {
        self.fits.iter().find(|f| f.label == label && f.bound == bound)
    }

    pub fn cells_for<'a>(&'a self, label: &'a str, bound: Bound) -> impl Iterator<Item = &'a ScanCell> + 'a {
        self.cells.iter().filter(move |c| c.label == label && c.bound == bound)
    }
}

/// One fit of ln(ratio) against ln(1/h) per (label, bound), in first-seen label order.
pub fn fit_groups(cells: &[ScanCell]) -> Vec<GroupFit> {
    let mut order: Vec<(String, Bound)> = Vec::new();
    let mut groups: BTreeMap<(String, Bound), Vec<&ScanCell>> = BTreeMap::new();
    for c in cells {
        let key = (c.label.clone(), c.bound);
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(c);
    }
    order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let x: Vec<f64> = group.iter().map(|c| c.h.recip()).collect();
            let y: Vec<f64> = group.iter().map(|c| c.ratio).collect();
            let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
            let fit = log_log_fit(&x, &y);
            GroupFit {
                label: key.0,
                bound: key.1,
                slope: fit.map(|f| f.slope),
                intercept: fit.map(|f| f.intercept),
                r_squared: fit.map(|f| f.r_squared),
                spread: hi / lo,
                points: group.len(),
            }
        })
        .collect()
}

/// Points per axis keeping the box length fixed: M = L/h, which must be an even integer.
pub fn grid_size(box_length: f64, h: f64) -> Result<usize> {
    let m = box_length / h;
    let rounded = m.round();
    if !(h > 0.0) || (m - rounded).abs() > 1e-9 * m.max(1.0) || rounded < 4.0 || rounded as usize % 2 != 0 {
        return Err(crate::HarnessError::config(format!(
            "box length {box_length} is not an even multiple (>= 4) of h = {h}"
        )));
    }
    Ok(rounded as usize)
}

/// Run `f` on a dedicated pool with a fixed thread count.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?;
    Ok(pool.install(f))
}
