//! Global metric: actions act on the system state directly, so the optimal
//! expected loss is a concave function `l*(p_u)` of the system failure
//! probability alone.
//!
//! Each action `A` with cost `C_A` and residual risk `p_{0,A,0}` gives the
//! line `l_A(p) = C_A + p·p_{0,A,0}·C_F`; `l*` is their lower envelope on
//! `[0, 1]`. The regret `rg(p) = l*(p) − [p·l*(1) + (1 − p)·l*(0)]` vanishes
//! at both ends. Inspecting component `i` gives
//!
//! ```text
//! L_ω(i) = h_i·l*(p_{ω|y_i=0}) + (1 − h_i)·l*(p_{ω|y_i=1})
//! VoI(i) = l*(p_π) − L_ω(i),   RG_ω(i) = L_ω(i) − l_PI(p_π)
//! ```
//!
//! This module also hosts the classical importance measures and the
//! closed-form series/parallel rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{posterior_intervals, PosteriorInterval, Sensors};
use crate::model::{JointDistribution, Network, PureForm};
use crate::voi::{rank_descending, Metric, RegretSummary, VoIReport};

/// A system-level action: pay `cost`, and a failed system stays failed
/// with probability `residual_risk` (a working one never degrades).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalAction {
    pub cost: f64,
    pub residual_risk: f64,
}

impl GlobalAction {
    /// `(l_{A,0}, l_{A,1})`: expected loss when the system is failed / working.
    pub fn losses(&self, c_fail: f64) -> (f64, f64) {
        (self.residual_risk * c_fail + self.cost, self.cost)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    intercept: f64,
    slope: f64,
}

impl Line {
    fn at(&self, p: f64) -> f64 {
        self.intercept + self.slope * p
    }

    fn crossing(&self, other: &Line) -> f64 {
        (other.intercept - self.intercept) / (self.slope - other.slope)
    }
}

/// Lower envelope of action lines on `[0, 1]`, stored as the hull lines in
/// order of increasing `p` with the breakpoints between them.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerEnvelope {
    lines: Vec<Line>,
    breakpoints: Vec<f64>,
}

impl LowerEnvelope {
    fn build(mut lines: Vec<Line>) -> Self {
        // Steepest first: at p = 0 only intercepts matter, and as p grows
        // flatter lines take over.
        lines.sort_by(|a, b| b.slope.total_cmp(&a.slope).then(a.intercept.total_cmp(&b.intercept)));
        lines.dedup_by(|next, kept| next.slope == kept.slope);
        let mut hull: Vec<Line> = Vec::with_capacity(lines.len());
        for line in lines {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if a.crossing(&line) <= a.crossing(&b) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(line);
        }
        while hull.len() >= 2 && hull[0].crossing(&hull[1]) <= 0.0 {
            hull.remove(0);
        }
        while hull.len() >= 2 && hull[hull.len() - 2].crossing(&hull[hull.len() - 1]) >= 1.0 {
            hull.pop();
        }
        let breakpoints = hull.windows(2).map(|w| w[0].crossing(&w[1])).collect();
        Self { lines: hull, breakpoints }
    }

    fn value(&self, p: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b <= p);
        self.lines[k].at(p)
    }

    /// Number of actions that are optimal somewhere on `[0, 1]`.
    pub fn hull_size(&self) -> usize {
        self.lines.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// Concave optimal-loss function of the global metric.
#[derive(Debug, Clone, PartialEq)]
pub enum LossEnvelope {
    PiecewiseLinear(LowerEnvelope),
    /// `l*(p) = p(1 − p)`.
    Quadratic,
    /// Do nothing or repair the system: `l*(p) = min(p·C_F, C_R)`.
    BinaryAction { c_repair: f64, c_fail: f64 },
}

impl LossEnvelope {
    pub fn from_actions(actions: &[GlobalAction], c_fail: f64) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::InvalidParameter("no global actions given".into()));
        }
        if !(c_fail.is_finite() && c_fail > 0.0) {
            return Err(Error::InvalidParameter(format!("c_fail must be positive, got {c_fail}")));
        }
        for a in actions {
            if !(a.cost.is_finite() && a.cost >= 0.0) {
                return Err(Error::InvalidParameter(format!("action cost {} is negative", a.cost)));
            }
            if !(0.0..=1.0).contains(&a.residual_risk) {
                return Err(Error::InvalidParameter(format!(
                    "residual risk {} outside [0, 1]",
                    a.residual_risk
                )));
            }
        }
        let lines = actions
            .iter()
            .map(|a| Line { intercept: a.cost, slope: a.residual_risk * c_fail })
            .collect();
        Ok(LossEnvelope::PiecewiseLinear(LowerEnvelope::build(lines)))
    }

    pub fn binary(c_repair: f64, c_fail: f64) -> Result<Self> {
        if !(c_repair > 0.0 && c_fail > c_repair && c_fail.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "binary envelope needs 0 < C_R < C_F, got C_R={c_repair}, C_F={c_fail}"
            )));
        }
        Ok(LossEnvelope::BinaryAction { c_repair, c_fail })
    }

    /// Binary envelope with unit failure cost and peak at `p_tilde`.
    pub fn binary_with_peak(p_tilde: f64) -> Result<Self> {
        Self::binary(p_tilde, 1.0)
    }

    /// `p̃ = C_R / C_F` for the binary envelope.
    pub fn peak(&self) -> Option<f64> {
        match self {
            LossEnvelope::BinaryAction { c_repair, c_fail } => Some(c_repair / c_fail),
            _ => None,
        }
    }

    fn raw_value(&self, p: f64) -> f64 {
        match self {
            LossEnvelope::PiecewiseLinear(env) => env.value(p),
            LossEnvelope::Quadratic => p * (1.0 - p),
            LossEnvelope::BinaryAction { c_repair, c_fail } => (p * c_fail).min(*c_repair),
        }
    }

    /// Perfect-information line `l_PI(p) = p·l*(1) + (1 − p)·l*(0)`.
    pub fn perfect_information(&self, p: f64) -> Result<f64> {
        check_unit(p)?;
        Ok(p * self.raw_value(1.0) + (1.0 - p) * self.raw_value(0.0))
    }
}

fn check_unit(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "failure probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `l*(p_u)`.
pub fn envelope_value(env: &LossEnvelope, p_u: f64) -> Result<f64> {
    check_unit(p_u)?;
    Ok(env.raw_value(p_u))
}

/// `rg(p_u) = l*(p_u) − l_PI(p_u)`.
pub fn regret_value(env: &LossEnvelope, p_u: f64) -> Result<f64> {
    Ok(envelope_value(env, p_u)? - env.perfect_information(p_u)?)
}

/// Global VoI quantities for one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalVoi {
    /// `L_ω^G(i)`.
    pub posterior_loss: f64,
    /// `VoI_G(i)`.
    pub voi: f64,
    /// `RG_ω(i)`.
    pub posterior_regret: f64,
}

/// Global VoI from a precomputed posterior interval.
pub fn voi_from_interval(iv: &PosteriorInterval, env: &LossEnvelope) -> Result<GlobalVoi> {
    let h = iv.alarm_prob;
    let posterior_loss = h * envelope_value(env, iv.hi)? + (1.0 - h) * envelope_value(env, iv.lo)?;
    let voi = envelope_value(env, iv.prior)? - posterior_loss;
    let posterior_regret = posterior_loss - env.perfect_information(iv.prior)?;
    Ok(GlobalVoi { posterior_loss, voi, posterior_regret })
}

/// `VoI_G(i)` with its posterior loss and regret.
pub fn voi_global(
    net: &Network,
    dist: &JointDistribution,
    i: usize,
    insp: &crate::inference::InspectionModel,
    env: &LossEnvelope,
) -> Result<GlobalVoi> {
    let iv = crate::inference::posterior_interval(net, dist, i, insp)?;
    voi_from_interval(&iv, env)
}

/// Global metric for every component.
pub fn rank_global(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
    env: &LossEnvelope,
) -> Result<VoIReport> {
    let intervals = posterior_intervals(net, dist, sensors)?;
    rank_global_from_intervals(net.names().to_vec(), &intervals, env)
}

pub fn rank_global_from_intervals(
    names: Vec<String>,
    intervals: &[PosteriorInterval],
    env: &LossEnvelope,
) -> Result<VoIReport> {
    let prior = intervals
        .first()
        .ok_or_else(|| Error::InvalidParameter("no components".into()))?
        .prior;
    let per: Vec<GlobalVoi> = intervals
        .iter()
        .map(|iv| voi_from_interval(iv, env))
        .collect::<Result<_>>()?;
    let prior_loss = envelope_value(env, prior)?;
    let mut report = VoIReport::new(
        Metric::Global,
        names,
        prior_loss,
        per.iter().map(|g| g.posterior_loss).collect(),
    );
    report.regret = Some(RegretSummary {
        prior: regret_value(env, prior)?,
        perfect_info_loss: env.perfect_information(prior)?,
        posterior: per.iter().map(|g| g.posterior_regret).collect(),
    });
    Ok(report)
}

/// Birnbaum, criticality, risk achievement worth and risk reduction worth,
/// all built from the imperfect-observation posteriors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub names: Vec<String>,
    pub prior: f64,
    pub bm: Vec<f64>,
    pub crt: Vec<f64>,
    pub raw: Vec<f64>,
    /// `+∞` where an alarm makes failure certain; see `rrw_infinite`.
    pub rrw: Vec<f64>,
    pub rrw_infinite: Vec<bool>,
}

impl ImportanceReport {
    pub fn values(&self, metric: Metric) -> Option<&[f64]> {
        match metric {
            Metric::Bm => Some(&self.bm),
            Metric::Crt => Some(&self.crt),
            Metric::Raw => Some(&self.raw),
            Metric::Rrw => Some(&self.rrw),
            _ => None,
        }
    }

    /// Component indices by decreasing measure (ties by index).
    pub fn ranking(&self, metric: Metric) -> Option<Vec<usize>> {
        self.values(metric).map(rank_descending)
    }
}

pub fn importance_measures(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
) -> Result<ImportanceReport> {
    let intervals = posterior_intervals(net, dist, sensors)?;
    let prior = intervals[0].prior;
    if prior <= 0.0 {
        return Err(Error::NotApplicable(
            "importance measures need a positive system failure probability".into(),
        ));
    }
    let p = dist.marginal_failures();
    let bm: Vec<f64> = intervals.iter().map(|iv| iv.hi - iv.lo).collect();
    let crt = bm.iter().zip(&p).map(|(b, pi)| b * pi / prior).collect();
    let raw = intervals.iter().map(|iv| (1.0 - iv.lo) / prior).collect();
    let rrw_infinite: Vec<bool> = intervals.iter().map(|iv| iv.hi >= 1.0).collect();
    let rrw = intervals
        .iter()
        .zip(&rrw_infinite)
        .map(|(iv, &inf)| if inf { f64::INFINITY } else { prior / (1.0 - iv.hi) })
        .collect();
    Ok(ImportanceReport {
        names: net.names().to_vec(),
        prior,
        bm,
        crt,
        raw,
        rrw,
        rrw_infinite,
    })
}

/// Prediction of the closed-form series/parallel rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RulePrediction {
    Inspect(usize),
    NotApplicable,
}

/// For a pure parallel system with uniform inspections the most reliable
/// component has the highest global VoI; for a pure series system, the most
/// vulnerable one. Any other structure is not covered.
pub fn closed_form_rule(net: &Network, dist: &JointDistribution, sensors: &Sensors) -> Result<RulePrediction> {
    dist.check_dimension(net.n())?;
    if !sensors.is_uniform() {
        return Ok(RulePrediction::NotApplicable);
    }
    let p = dist.marginal_failures();
    Ok(match net.pure_form() {
        Some(PureForm::Series) => RulePrediction::Inspect(rank_descending(&p)[0]),
        Some(PureForm::Parallel) => {
            let reliability: Vec<f64> = p.iter().map(|x| -x).collect();
            RulePrediction::Inspect(rank_descending(&reliability)[0])
        }
        None => RulePrediction::NotApplicable,
    })
}
