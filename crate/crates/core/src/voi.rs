//! Per-component VoI reports shared by the global, local and heuristic
//! metrics, and deterministic ranking helpers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::local::MaintenancePlan;

/// Relative resolution below which two scores are treated as tied.
pub const TIE_RESOLUTION: f64 = 1e-12;

/// Every ranking the library can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Global,
    Local,
    Heuristic,
    Bm,
    Crt,
    Raw,
    Rrw,
}

impl Metric {
    pub const ALL: [Metric; 7] = [
        Metric::Global,
        Metric::Local,
        Metric::Heuristic,
        Metric::Bm,
        Metric::Crt,
        Metric::Raw,
        Metric::Rrw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Global => "global",
            Metric::Local => "local",
            Metric::Heuristic => "heuristic",
            Metric::Bm => "bm",
            Metric::Crt => "crt",
            Metric::Raw => "raw",
            Metric::Rrw => "rrw",
        }
    }

    pub fn is_voi(self) -> bool {
        matches!(self, Metric::Global | Metric::Local | Metric::Heuristic)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown metric {s:?}"))
    }
}

/// Regret bookkeeping of the global metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSummary {
    /// `RG_π = rg(p_π)`.
    pub prior: f64,
    /// `L_PI = l_PI(p_π)`.
    pub perfect_info_loss: f64,
    /// `RG_ω(i)`.
    pub posterior: Vec<f64>,
}

/// Maintenance plans behind a local or heuristic report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub prior: MaintenancePlan,
    /// Plan chosen after (silence, alarm) on each component.
    pub posterior: Vec<[MaintenancePlan; 2]>,
}

/// VoI of inspecting each component under one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoIReport {
    pub metric: Metric,
    pub names: Vec<String>,
    /// `L_π`.
    pub prior_loss: f64,
    /// `L_ω(i)`.
    pub posterior_loss: Vec<f64>,
    /// `VoI(i) = L_π − L_ω(i)`.
    pub voi: Vec<f64>,
    /// `VoI(i) / max_j VoI(j)`, or zeros when no inspection has value.
    pub normalized: Vec<f64>,
    /// `i*`.
    pub best: usize,
    pub regret: Option<RegretSummary>,
    pub plans: Option<PlanSummary>,
}

impl VoIReport {
    pub(crate) fn new(metric: Metric, names: Vec<String>, prior_loss: f64, posterior_loss: Vec<f64>) -> Self {
        // differences at rounding level of the losses are reported as zero
        let floor = TIE_RESOLUTION * prior_loss.abs();
        let voi: Vec<f64> = posterior_loss
            .iter()
            .map(|l| prior_loss - l)
            .map(|v| if v.abs() <= floor { 0.0 } else { v })
            .collect();
        let normalized = normalize_by_max(&voi);
        let best = argmax(&voi);
        Self {
            metric,
            names,
            prior_loss,
            posterior_loss,
            voi,
            normalized,
            best,
            regret: None,
            plans: None,
        }
    }

    /// Component indices by decreasing VoI (ties by index).
    pub fn ranking(&self) -> Vec<usize> {
        rank_descending(&self.voi)
    }
}

/// Divides by the largest value; an all-nonpositive column maps to zeros.
pub fn normalize_by_max(values: &[f64]) -> Vec<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        values.iter().map(|v| v / max).collect()
    } else {
        vec![0.0; values.len()]
    }
}

/// Indices sorted by decreasing value. Values closer than
/// [`TIE_RESOLUTION`] times the largest magnitude are tied and ordered by
/// index; `+∞` ranks first.
pub fn rank_descending(values: &[f64]) -> Vec<usize> {
    let scale = values
        .iter()
        .filter(|v| v.is_finite())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let key = |v: f64| {
        if v.is_finite() {
            (v / scale / TIE_RESOLUTION).round()
        } else {
            v
        }
    };
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| key(values[b]).total_cmp(&key(values[a])).then(a.cmp(&b)));
    idx
}

/// Smallest index attaining the maximum (up to [`TIE_RESOLUTION`]).
pub fn argmax(values: &[f64]) -> usize {
    rank_descending(values).first().copied().unwrap_or(0)
}
