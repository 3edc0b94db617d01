use std::collections::BTreeMap;

use serde::Serialize;

use super::config::{ExperimentConfig, Subcommand};

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Output of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub subcommand: Subcommand,
    pub version: String,
    pub rng_algorithm: String,
    /// Present only when timing was requested, so default output is
    /// reproducible byte for byte.
    pub wall_clock_seconds: Option<f64>,
    pub config: ExperimentConfig,
    pub samples: usize,
    /// Which per-sample quantity `moments` and `histogram` describe.
    pub statistic: Option<String>,
    pub centering: Option<Centering>,
    pub moments: Vec<MomentRow>,
    pub histogram: Option<Histogram>,
    pub comparisons: Vec<Comparison>,
    pub tables: BTreeMap<String, Table>,
    pub per_sample: Option<Vec<SampleRow>>,
}

impl RunRecord {
    pub(crate) fn new(config: &ExperimentConfig) -> Self {
        RunRecord {
            subcommand: config.subcommand,
            version: VERSION.into(),
            rng_algorithm: crate::rng::RNG_ALGORITHM.into(),
            wall_clock_seconds: None,
            config: config.clone(),
            samples: 0,
            statistic: None,
            centering: None,
            moments: Vec::new(),
            histogram: None,
            comparisons: Vec::new(),
            tables: BTreeMap::new(),
            per_sample: None,
        }
    }

    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn moment(&self, order: usize) -> Option<&MomentRow> {
        self.moments.iter().find(|m| m.order == order)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenteringPolicy {
    /// Exact Ewens expectation of the eigenangle count.
    Exact,
    /// Mean count over the run's own samples.
    SampleMean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Centering {
    pub policy: CenteringPolicy,
    pub value: Option<f64>,
    /// Exact rational, for the exact policy.
    pub exact: Option<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub order: usize,
    pub empirical: Option<f64>,
    pub std_error: Option<f64>,
    pub finite_n: Option<String>,
    pub finite_n_value: Option<f64>,
    pub z_finite_n: Option<f64>,
    pub limit: Option<String>,
    pub limit_value: Option<f64>,
    pub z_limit: Option<f64>,
}

/// Equal-width bins on `[lo, hi]`; the last bin is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// A measured quantity against an optional target. `z_score` is
/// `(value - target) / std_error`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub value: Option<f64>,
    pub target: Option<f64>,
    pub target_exact: Option<String>,
    pub std_error: Option<f64>,
    pub z_score: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl Comparison {
    pub(crate) fn value(name: &str, value: f64) -> Self {
        Comparison {
            name: name.into(),
            value: Some(value),
            target: None,
            target_exact: None,
            std_error: None,
            z_score: None,
            tolerance: None,
            pass: None,
        }
    }

    pub(crate) fn against(name: &str, value: Option<f64>, target: f64, std_error: Option<f64>) -> Self {
        let z_score = match (value, std_error) {
            (Some(v), Some(se)) if se > 0.0 => Some((v - target) / se),
            _ => None,
        };
        Comparison {
            name: name.into(),
            value,
            target: Some(target),
            target_exact: None,
            std_error,
            z_score,
            tolerance: None,
            pass: None,
        }
    }

    pub(crate) fn exact(mut self, target: &num_rational::BigRational) -> Self {
        self.target_exact = Some(target.to_string());
        self
    }

    pub(crate) fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self.pass = match (self.value, self.target) {
            (Some(v), Some(t)) => Some((v - t).abs() <= tol),
            _ => None,
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    pub(crate) fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, row: Vec<serde_json::Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub seed: u64,
    pub y: f64,
    /// `Y_{n,k}` on the second arc, in `crossmoments`.
    pub y2: Option<f64>,
    /// Normalized representation statistic, in tuple, set and irrep modes.
    pub y_mode: Option<f64>,
    /// `y_mode - y`.
    pub delta: Option<f64>,
    /// Exact eigenangle count in the arc.
    pub count: Option<String>,
}
