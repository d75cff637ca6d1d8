//! Closed-form local analysis of two components in series and the
//! "cumulative system" approximation.
//!
//! With failure cost `C_F = 1` and repair cost `C_R = p̃`, inspecting
//! component `i` of a series pair costs
//!
//! ```text
//! L(i) = p_i·C_R + p_i·R(i, 0) + (1 − p_i)·R(i, 1)
//! R(i, x) = min{C_R, P[s_j = 0 | s_i = x]·C_F}
//! ```
//!
//! A failed inspected component is always replaced; the other one is
//! replaced only if its conditional failure probability exceeds `p̃`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::JointDistribution;

use super::LocalCostModel;

/// Points per axis of [`policy_map`] grids.
pub const POLICY_GRID: usize = 201;

/// Absolute loss difference below which the two inspections tie.
const PAIR_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairDecision {
    InspectFirst,
    InspectSecond,
    Tie,
}

/// Losses of both inspections and the resulting decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairPolicy {
    pub decision: PairDecision,
    /// `[L(1), L(2)]`.
    pub losses: [f64; 2],
}

/// `P[s_1 = 0, s_2 = 0]` for marginals `p1, p2` and failure correlation
/// `rho`, checked against the Fréchet bounds.
fn joint_failure(p1: f64, p2: f64, rho: f64) -> Result<f64> {
    let spread = (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
    let both = p1 * p2 + rho * spread;
    let lower = (p1 + p2 - 1.0).max(0.0);
    let upper = p1.min(p2);
    let slack = 1e-12;
    if !(both >= lower - slack && both <= upper + slack) {
        return Err(Error::InfeasibleCorrelation { p1, p2, rho });
    }
    Ok(both.max(lower).min(upper))
}

/// Optimal inspection target for two dependent components in series.
pub fn series_pair_policy(p1: f64, p2: f64, rho: f64, p_tilde: f64) -> Result<PairPolicy> {
    for (name, p) in [("p1", p1), ("p2", p2)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("{name} = {p} outside [0, 1]")));
        }
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho = {rho} outside [-1, 1]")));
    }
    if !(p_tilde > 0.0 && p_tilde <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "repair-to-failure cost ratio {p_tilde} must lie in (0, 0.5]"
        )));
    }
    let both = joint_failure(p1, p2, rho)?;
    let c_r = p_tilde;
    let r = |conditional: f64| c_r.min(conditional);
    let loss = |pi: f64, pj: f64| {
        let after_fail = if pi > 0.0 { r(both / pi) } else { 0.0 };
        let after_work = if pi < 1.0 { r((pj - both) / (1.0 - pi)) } else { 0.0 };
        pi * c_r + pi * after_fail + (1.0 - pi) * after_work
    };
    let losses = [loss(p1, p2), loss(p2, p1)];
    let decision = if (losses[0] - losses[1]).abs() <= PAIR_TIE {
        PairDecision::Tie
    } else if losses[0] < losses[1] {
        PairDecision::InspectFirst
    } else {
        PairDecision::InspectSecond
    };
    Ok(PairPolicy { decision, losses })
}

/// Decisions over a square grid of `(p1, p2) ∈ [0, 1]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyMap {
    pub rho: f64,
    pub p_tilde: f64,
    /// Grid coordinates along each axis.
    pub axis: Vec<f64>,
    /// `cells[a][b]` is the decision at `p1 = axis[a]`, `p2 = axis[b]`;
    /// `None` where the correlation is infeasible.
    pub cells: Vec<Vec<Option<PairDecision>>>,
}

impl PolicyMap {
    pub fn feasible_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }
}

/// Evaluates [`series_pair_policy`] on a `resolution × resolution` grid.
pub fn policy_map(rho: f64, p_tilde: f64, resolution: usize) -> Result<PolicyMap> {
    if resolution < 2 {
        return Err(Error::InvalidParameter("policy map needs at least 2 points per axis".into()));
    }
    let axis: Vec<f64> = (0..resolution)
        .map(|k| k as f64 / (resolution - 1) as f64)
        .collect();
    let mut cells = Vec::with_capacity(resolution);
    for &p1 in &axis {
        let mut row = Vec::with_capacity(resolution);
        for &p2 in &axis {
            row.push(match series_pair_policy(p1, p2, rho, p_tilde) {
                Ok(policy) => Some(policy.decision),
                Err(Error::InfeasibleCorrelation { .. }) => None,
                Err(e) => return Err(e),
            });
        }
        cells.push(row);
    }
    Ok(PolicyMap { rho, p_tilde, axis, cells })
}

/// Per-component VoI when the system risk is approximated by the sum of
/// independent component risks, `C_F·Σ_i (1 − a_i)·p_i`. Each component then
/// faces its own repair-or-not decision:
/// `VoI_i = min(p_i·C_F, C_R,i) − p_i·min(C_F, C_R,i)`.
pub fn cumulative_approx_voi(dist: &JointDistribution, costs: &LocalCostModel) -> Result<Vec<f64>> {
    let p = dist.independent_marginals().ok_or_else(|| {
        Error::NotApplicable("the cumulative approximation needs independent components".into())
    })?;
    costs.check_dimension(p.len())?;
    Ok(p.iter()
        .zip(&costs.c_repair)
        .map(|(&pi, &cr)| (pi * costs.c_fail).min(cr) - pi * costs.c_fail.min(cr))
        .collect())
}
