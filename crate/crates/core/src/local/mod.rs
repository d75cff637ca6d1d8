//! Local metric: after an inspection the agent picks a set of components to
//! replace. Repairs are perfect and their costs add up, so a plan `A` on
//! posterior `p` costs
//!
//! ```text
//! L(A) = C_F·P_p[φ(s ∪ A) = 0] + Σ_{i∈A} C_R,i
//! ```
//!
//! The prior loss `L_π` is the minimum over all `2^N` plans, and inspecting
//! `i` gives `L_ω(i) = (1 − h_i)·L_{ω|y_i=1} + h_i·L_{ω|y_i=0}`.
//!
//! The heuristic keeps the prior plan and only reconsiders the inspected
//! component when the outcome contradicts the prior decision about it.

mod pair;
mod transform;

pub use pair::{
    cumulative_approx_voi, policy_map, series_pair_policy, PairDecision, PairPolicy, PolicyMap,
    POLICY_GRID,
};

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{posterior_pmf, InspectionModel, Observation, Sensors};
use crate::model::{JointDistribution, Network, StateVector};
use crate::voi::{Metric, PlanSummary, VoIReport};

/// Relative tolerance (times `C_F`) within which two plan losses tie; the
/// lowest mask wins a tie.
pub const PLAN_TOLERANCE: f64 = 1e-12;

/// Largest network accepted by [`plan_losses`] when run in parallel over
/// posteriors; larger ones are processed one posterior at a time to bound
/// memory.
const PARALLEL_LIMIT: usize = 16;

/// Components to replace. Bit `i` set means component `i` is repaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MaintenancePlan(u32);

impl MaintenancePlan {
    pub const EMPTY: MaintenancePlan = MaintenancePlan(0);

    pub fn new(mask: u32, n: usize) -> Result<Self> {
        StateVector::new(mask, n)?;
        Ok(Self(mask))
    }

    pub const fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn from_components(components: impl IntoIterator<Item = usize>) -> Self {
        Self(components.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn repairs(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// The same plan with component `i`'s decision reversed.
    pub fn toggled(self, i: usize) -> Self {
        Self(self.0 ^ 1 << i)
    }

    /// Repaired component indices, ascending.
    pub fn components(self) -> Vec<usize> {
        (0..32).filter(|&i| self.repairs(i)).collect()
    }

    /// `{c2, c4}` style rendering with the given names.
    pub fn describe(self, names: &[String]) -> String {
        let parts: Vec<&str> = self.components().into_iter().map(|i| names[i].as_str()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for MaintenancePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components().iter().map(|i| format!("c{}", i + 1)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Failure cost and per-component repair costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalCostModel {
    pub c_fail: f64,
    pub c_repair: Vec<f64>,
}

impl LocalCostModel {
    pub fn new(c_fail: f64, c_repair: Vec<f64>) -> Result<Self> {
        if !(c_fail.is_finite() && c_fail > 0.0) {
            return Err(Error::InvalidParameter(format!("c_fail must be positive, got {c_fail}")));
        }
        if let Some(c) = c_repair.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidParameter(format!("repair cost {c} must be nonnegative")));
        }
        Ok(Self { c_fail, c_repair })
    }

    /// Same repair cost for all `n` components.
    pub fn uniform(n: usize, c_fail: f64, c_repair: f64) -> Result<Self> {
        Self::new(c_fail, vec![c_repair; n])
    }

    pub fn n(&self) -> usize {
        self.c_repair.len()
    }

    pub fn plan_cost(&self, plan: MaintenancePlan) -> f64 {
        plan.components().iter().map(|&i| self.c_repair[i]).sum()
    }

    /// Cost of every plan, built by peeling off the lowest set bit.
    fn all_plan_costs(&self) -> Vec<f64> {
        let size = 1usize << self.n();
        let mut costs = vec![0.0; size];
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            costs[m] = costs[m & (m - 1)] + self.c_repair[low];
        }
        costs
    }

    fn check_dimension(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.n() });
        }
        Ok(())
    }

    fn tolerance(&self) -> f64 {
        PLAN_TOLERANCE * self.c_fail
    }
}

/// Perfect repair: every component of the plan works afterwards.
pub fn apply_repairs(s: StateVector, plan: MaintenancePlan) -> StateVector {
    StateVector::from_mask(s.mask() | plan.mask())
}

fn check_inputs(net: &Network, dist: &JointDistribution, costs: &LocalCostModel) -> Result<()> {
    dist.check_dimension(net.n())?;
    costs.check_dimension(net.n())
}

/// `C_F·P[φ(s ∪ A) = 0] + Σ_{i∈A} C_R,i`.
pub fn plan_expected_loss(
    net: &Network,
    dist: &JointDistribution,
    plan: MaintenancePlan,
    costs: &LocalCostModel,
) -> Result<f64> {
    check_inputs(net, dist, costs)?;
    MaintenancePlan::new(plan.mask(), net.n())?;
    let risk = transform::plan_risk(net.works_table(), &dist.pmf_table(), plan.mask() as usize);
    Ok(costs.c_fail * risk + costs.plan_cost(plan))
}

/// Expected loss of all `2^N` plans, indexed by plan mask.
pub fn plan_losses(net: &Network, dist: &JointDistribution, costs: &LocalCostModel) -> Result<Vec<f64>> {
    check_inputs(net, dist, costs)?;
    net.check_cap()?;
    Ok(losses_from_pmf(net, &dist.pmf_table(), &costs.all_plan_costs(), costs.c_fail))
}

fn losses_from_pmf(net: &Network, pmf: &[f64], plan_costs: &[f64], c_fail: f64) -> Vec<f64> {
    transform::plan_risks(net.works_table(), pmf, net.n())
        .into_iter()
        .zip(plan_costs)
        .map(|(r, c)| c_fail * r + c)
        .collect()
}

/// Lowest mask whose loss is within tolerance of the minimum.
fn pick_optimal(losses: &[f64], tol: f64) -> (MaintenancePlan, f64) {
    let min = losses.iter().copied().fold(f64::INFINITY, f64::min);
    let m = losses.iter().position(|&l| l <= min + tol).unwrap_or(0);
    (MaintenancePlan(m as u32), losses[m])
}

/// Minimum-loss plan and its loss.
pub fn optimal_plan(
    net: &Network,
    dist: &JointDistribution,
    costs: &LocalCostModel,
) -> Result<(MaintenancePlan, f64)> {
    let losses = plan_losses(net, dist, costs)?;
    Ok(pick_optimal(&losses, costs.tolerance()))
}

/// Optimal plan after one outcome of one inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub plan: MaintenancePlan,
    /// `L_{ω|y_i=y}` for the chosen plan.
    pub loss: f64,
    /// `P[y_i = y]`.
    pub probability: f64,
}

/// Optimal posterior plans for every inspected component and outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorActionTable {
    pub names: Vec<String>,
    pub prior_plan: MaintenancePlan,
    pub prior_loss: f64,
    /// `[silence, alarm]` per component.
    pub entries: Vec<[ActionEntry; 2]>,
}

impl PosteriorActionTable {
    pub fn entry(&self, i: usize, y: Observation) -> &ActionEntry {
        &self.entries[i][slot(y)]
    }

    /// `L_ω(i)` for each component.
    pub fn posterior_losses(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|[s, a]| s.probability * s.loss + a.probability * a.loss)
            .collect()
    }
}

fn slot(y: Observation) -> usize {
    match y {
        Observation::Silence => 0,
        Observation::Alarm => 1,
    }
}

/// Posterior pmf for `(i, y)`, or `None` when the outcome is impossible.
fn posterior_or_none(
    pmf: &[f64],
    i: usize,
    y: Observation,
    insp: &InspectionModel,
) -> Result<Option<(Vec<f64>, f64)>> {
    match posterior_pmf(pmf, i, y, insp) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroProbabilityEvidence) => Ok(None),
        Err(e) => Err(e),
    }
}

fn pairs(n: usize) -> Vec<(usize, Observation)> {
    (0..n).flat_map(|i| Observation::BOTH.map(|y| (i, y))).collect()
}

fn collect_entries(n: usize, flat: Vec<ActionEntry>) -> Vec<[ActionEntry; 2]> {
    debug_assert_eq!(flat.len(), 2 * n);
    flat.chunks(2).map(|c| [c[0], c[1]]).collect()
}

/// Exact optimal posterior plan for every `(i, y)`. Impossible outcomes get
/// the prior plan with probability zero.
pub fn posterior_action_table(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
    costs: &LocalCostModel,
) -> Result<PosteriorActionTable> {
    check_inputs(net, dist, costs)?;
    sensors.check_dimension(net.n())?;
    net.check_cap()?;
    let pmf = dist.pmf_table();
    let plan_costs = costs.all_plan_costs();
    let tol = costs.tolerance();
    let (prior_plan, prior_loss) = pick_optimal(&losses_from_pmf(net, &pmf, &plan_costs, costs.c_fail), tol);
    let solve = |&(i, y): &(usize, Observation)| -> Result<ActionEntry> {
        Ok(match posterior_or_none(&pmf, i, y, &sensors.for_component(i))? {
            Some((post, probability)) => {
                let (plan, loss) = pick_optimal(&losses_from_pmf(net, &post, &plan_costs, costs.c_fail), tol);
                ActionEntry { plan, loss, probability }
            }
            None => ActionEntry { plan: prior_plan, loss: prior_loss, probability: 0.0 },
        })
    };
    let work = pairs(net.n());
    let flat: Vec<ActionEntry> = if net.n() <= PARALLEL_LIMIT {
        work.par_iter().map(solve).collect::<Result<_>>()?
    } else {
        work.iter().map(solve).collect::<Result<_>>()?
    };
    Ok(PosteriorActionTable {
        names: net.names().to_vec(),
        prior_plan,
        prior_loss,
        entries: collect_entries(net.n(), flat),
    })
}

fn report_from_table(metric: Metric, table: &PosteriorActionTable) -> VoIReport {
    let mut report = VoIReport::new(
        metric,
        table.names.clone(),
        table.prior_loss,
        table.posterior_losses(),
    );
    report.plans = Some(PlanSummary {
        prior: table.prior_plan,
        posterior: table.entries.iter().map(|[s, a]| [s.plan, a.plan]).collect(),
    });
    report
}

/// `VoI_L(i) = L_π − L_ω(i)` with full posterior re-optimization.
pub fn voi_local(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
    costs: &LocalCostModel,
) -> Result<VoIReport> {
    let table = posterior_action_table(net, dist, sensors, costs)?;
    Ok(report_from_table(Metric::Local, &table))
}

/// Plans chosen by the heuristic, in the same layout as the exact table.
pub fn heuristic_action_table(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
    costs: &LocalCostModel,
) -> Result<PosteriorActionTable> {
    check_inputs(net, dist, costs)?;
    sensors.check_dimension(net.n())?;
    net.check_cap()?;
    let pmf = dist.pmf_table();
    let works = net.works_table();
    let (prior_plan, prior_loss) = pick_optimal(
        &losses_from_pmf(net, &pmf, &costs.all_plan_costs(), costs.c_fail),
        costs.tolerance(),
    );
    let loss_of = |post: &[f64], plan: MaintenancePlan| {
        costs.c_fail * transform::plan_risk(works, post, plan.mask() as usize) + costs.plan_cost(plan)
    };
    let solve = |&(i, y): &(usize, Observation)| -> Result<ActionEntry> {
        let Some((post, probability)) = posterior_or_none(&pmf, i, y, &sensors.for_component(i))? else {
            return Ok(ActionEntry { plan: prior_plan, loss: prior_loss, probability: 0.0 });
        };
        let keep = loss_of(&post, prior_plan);
        // An alarm questions a decision not to repair; a silence questions a
        // decision to repair.
        let contradicts = u8::from(prior_plan.repairs(i)) == y.as_bit();
        if contradicts {
            let alt = prior_plan.toggled(i);
            let alt_loss = loss_of(&post, alt);
            let (first, second) = if alt.mask() < prior_plan.mask() {
                ((alt, alt_loss), (prior_plan, keep))
            } else {
                ((prior_plan, keep), (alt, alt_loss))
            };
            let (plan, loss) = if second.1 < first.1 - costs.tolerance() { second } else { first };
            Ok(ActionEntry { plan, loss, probability })
        } else {
            Ok(ActionEntry { plan: prior_plan, loss: keep, probability })
        }
    };
    let flat: Vec<ActionEntry> = pairs(net.n()).par_iter().map(solve).collect::<Result<_>>()?;
    Ok(PosteriorActionTable {
        names: net.names().to_vec(),
        prior_plan,
        prior_loss,
        entries: collect_entries(net.n(), flat),
    })
}

/// Heuristic VoI: the prior plan is confirmed except possibly for the
/// inspected component.
pub fn voi_heuristic(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
    costs: &LocalCostModel,
) -> Result<VoIReport> {
    let table = heuristic_action_table(net, dist, sensors, costs)?;
    Ok(report_from_table(Metric::Heuristic, &table))
}
