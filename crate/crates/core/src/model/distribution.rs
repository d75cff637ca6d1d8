//! Joint distributions over component state vectors.
//!
//! Three forms are supported:
//!
//! * independent components, given by marginal failure probabilities;
//! * an explicit table of `2^N` weights in mask order;
//! * common-cause groups: the components are partitioned into groups that are
//!   mutually independent, each group being either exchangeable with a shared
//!   marginal `p` and correlation `ρ`, or an explicit table over its members.
//!
//! For a shared group under the Bernoulli factor, the failure indicator of
//! member `i` is `f_i = D_i·Z + (1 − D_i)·E_i` with `Z, E_i ~ Bernoulli(p)` and
//! `D_i ~ Bernoulli(√ρ)`, all independent. Given `Z` the members are
//! independent, so the group pmf is a two-term mixture of products; marginals
//! stay at `p` and every pairwise correlation of the failure indicators is
//! exactly `ρ`.
//!
//! The Gaussian factor is the one-factor latent normal model: member `i` fails
//! iff `√ρ·Z + √(1 − ρ)·E_i < Φ⁻¹(p)` with standard normal `Z, E_i`. Here `ρ`
//! is the correlation of the latent variables, not of the failure events. The
//! integral over `Z` is evaluated by a fixed trapezoidal rule.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::state::StateVector;

const NORMALIZATION_TOL: f64 = 1e-12;

/// How the members of a shared common-cause group are coupled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorModel {
    /// Two-point latent mixture; `ρ` is the pairwise correlation of failures.
    #[default]
    Bernoulli,
    /// Latent standard normal factor; `ρ` is the latent correlation.
    Gaussian,
}

/// Law of one common-cause group.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupLaw {
    Shared { p: f64, rho: f64, factor: FactorModel },
    /// Weights over the members' local masks (bit `k` = member `k` works).
    Table(Vec<f64>),
}

/// A block of components whose joint law is independent of all other blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct CauseGroup {
    members: Vec<usize>,
    law: GroupLaw,
    local: Vec<f64>,
}

impl CauseGroup {
    pub fn shared(members: Vec<usize>, p: f64, rho: f64, factor: FactorModel) -> Result<Self> {
        check_probability(p, "group failure probability")?;
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidDistribution(format!(
                "group correlation must lie in [0, 1), got {rho}"
            )));
        }
        if members.is_empty() {
            return Err(Error::InvalidDistribution("empty common-cause group".into()));
        }
        let m = members.len();
        let by_failures = match factor {
            FactorModel::Bernoulli => bernoulli_factor_table(p, rho, m),
            FactorModel::Gaussian => gaussian_factor_table(p, rho, m),
        };
        let local = (0..1usize << m)
            .map(|lm| by_failures[m - lm.count_ones() as usize])
            .collect();
        Ok(Self {
            members,
            law: GroupLaw::Shared { p, rho, factor },
            local,
        })
    }

    /// Independent singleton group.
    pub fn single(component: usize, p: f64) -> Result<Self> {
        Self::shared(vec![component], p, 0.0, FactorModel::Bernoulli)
    }

    pub fn table(members: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidDistribution("empty common-cause group".into()));
        }
        if weights.len() != 1usize << members.len() {
            return Err(Error::InvalidDistribution(format!(
                "group table has {} weights, expected {}",
                weights.len(),
                1usize << members.len()
            )));
        }
        check_weights(&weights)?;
        Ok(Self {
            members,
            local: weights.clone(),
            law: GroupLaw::Table(weights),
        })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn law(&self) -> &GroupLaw {
        &self.law
    }

    pub(crate) fn local_table(&self) -> &[f64] {
        &self.local
    }

    pub(crate) fn local_mask(&self, mask: u32) -> usize {
        self.members
            .iter()
            .enumerate()
            .fold(0, |lm, (k, &i)| lm | ((mask as usize >> i & 1) << k))
    }

    fn marginal_failure(&self, pos: usize) -> f64 {
        match &self.law {
            GroupLaw::Shared { p, .. } => *p,
            GroupLaw::Table(w) => w
                .iter()
                .enumerate()
                .filter(|(lm, _)| lm >> pos & 1 == 0)
                .map(|(_, &x)| x)
                .sum(),
        }
    }
}

/// `P[f = k failures]`-style table for a shared Bernoulli-factor group,
/// indexed by failure count and giving the probability of one specific
/// configuration with that many failures.
fn bernoulli_factor_table(p: f64, rho: f64, m: usize) -> Vec<f64> {
    let theta = rho.sqrt();
    let q_hit = theta + (1.0 - theta) * p;
    let q_miss = (1.0 - theta) * p;
    (0..=m)
        .map(|k| {
            p * q_hit.powi(k as i32) * (1.0 - q_hit).powi((m - k) as i32)
                + (1.0 - p) * q_miss.powi(k as i32) * (1.0 - q_miss).powi((m - k) as i32)
        })
        .collect()
}

fn gaussian_factor_table(p: f64, rho: f64, m: usize) -> Vec<f64> {
    let product = |q: f64, k: usize| q.powi(k as i32) * (1.0 - q).powi((m - k) as i32);
    if rho == 0.0 || p == 0.0 || p == 1.0 {
        return (0..=m).map(|k| product(p, k)).collect();
    }
    let normal = Normal::standard();
    let threshold = normal.inverse_cdf(p);
    let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
    const HALF_WIDTH: f64 = 9.0;
    const STEPS: usize = 3600;
    let h = 2.0 * HALF_WIDTH / STEPS as f64;
    let nodes: Vec<(f64, f64)> = (0..=STEPS)
        .map(|j| {
            let z = -HALF_WIDTH + j as f64 * h;
            let w = (-0.5 * z * z).exp();
            (w, normal.cdf((threshold - a * z) / b))
        })
        .collect();
    let total: f64 = nodes.iter().map(|(w, _)| w).sum();
    (0..=m)
        .map(|k| nodes.iter().map(|&(w, q)| w * product(q, k)).sum::<f64>() / total)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Repr {
    Independent(Vec<f64>),
    Explicit(Vec<f64>),
    CommonCause {
        n: usize,
        groups: Vec<CauseGroup>,
        /// For each component: (group index, position within the group).
        slot: Vec<(usize, usize)>,
    },
}

/// Probability distribution over the `2^N` component state vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    repr: Repr,
}

impl JointDistribution {
    /// Independent components with marginal failure probabilities `p`.
    pub fn independent(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("no components".into()));
        }
        for &pi in &p {
            check_probability(pi, "marginal failure probability")?;
        }
        Ok(Self { repr: Repr::Independent(p) })
    }

    /// Explicit pmf in ascending mask order (`2^N` entries).
    pub fn explicit(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 || !weights.len().is_power_of_two() {
            return Err(Error::InvalidDistribution(format!(
                "explicit table length {} is not 2^N with N >= 1",
                weights.len()
            )));
        }
        check_weights(&weights)?;
        Ok(Self { repr: Repr::Explicit(weights) })
    }

    /// Mutually independent groups that partition the `n` components.
    pub fn common_cause(n: usize, groups: Vec<CauseGroup>) -> Result<Self> {
        let mut slot = vec![(usize::MAX, 0); n];
        for (g, group) in groups.iter().enumerate() {
            for (pos, &i) in group.members.iter().enumerate() {
                if i >= n {
                    return Err(Error::ComponentIndex { index: i, n });
                }
                if slot[i].0 != usize::MAX {
                    return Err(Error::InvalidDistribution(format!(
                        "component {i} belongs to more than one group"
                    )));
                }
                slot[i] = (g, pos);
            }
        }
        if let Some(i) = slot.iter().position(|s| s.0 == usize::MAX) {
            return Err(Error::InvalidDistribution(format!(
                "component {i} is not assigned to any group"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidDistribution("no components".into()));
        }
        Ok(Self {
            repr: Repr::CommonCause { n, groups, slot },
        })
    }

    /// Two components with marginals `p1`, `p2` and failure correlation `rho`:
    /// `P[both fail] = p1·p2 + ρ·√(p1(1−p1)p2(1−p2))`. Errors when that value
    /// violates the Fréchet bounds.
    pub fn correlated_pair(p1: f64, p2: f64, rho: f64) -> Result<Self> {
        check_probability(p1, "p1")?;
        check_probability(p2, "p2")?;
        let both = p1 * p2 + rho * (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
        let lower = (p1 + p2 - 1.0).max(0.0);
        let upper = p1.min(p2);
        const TOL: f64 = 1e-12;
        if !(-1.0..=1.0).contains(&rho) || both < lower - TOL || both > upper + TOL {
            return Err(Error::InfeasibleCorrelation { p1, p2, rho });
        }
        let both = both.clamp(lower, upper);
        let weights = vec![
            both,
            (p2 - both).max(0.0),
            (p1 - both).max(0.0),
            (1.0 - p1 - p2 + both).max(0.0),
        ];
        let total: f64 = weights.iter().sum();
        Self::explicit(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn n(&self) -> usize {
        match &self.repr {
            Repr::Independent(p) => p.len(),
            Repr::Explicit(w) => w.len().trailing_zeros() as usize,
            Repr::CommonCause { n, .. } => *n,
        }
    }

    pub(crate) fn repr(&self) -> &Repr {
        &self.repr
    }

    /// Marginals when the components are independent.
    pub fn independent_marginals(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Independent(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Explicit(_))
    }

    pub fn groups(&self) -> Option<&[CauseGroup]> {
        match &self.repr {
            Repr::CommonCause { groups, .. } => Some(groups),
            _ => None,
        }
    }

    pub(crate) fn check_dimension(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.n() });
        }
        Ok(())
    }

    /// Probability of exactly state `s`.
    pub fn pmf(&self, s: StateVector) -> Result<f64> {
        let s = StateVector::new(s.mask(), self.n())?;
        let mask = s.mask();
        Ok(match &self.repr {
            Repr::Independent(p) => p
                .iter()
                .enumerate()
                .map(|(i, &pi)| if mask >> i & 1 == 1 { 1.0 - pi } else { pi })
                .product(),
            Repr::Explicit(w) => w[mask as usize],
            Repr::CommonCause { groups, .. } => groups
                .iter()
                .map(|g| g.local_table()[g.local_mask(mask)])
                .product(),
        })
    }

    /// Dense pmf over all masks in ascending order.
    pub fn pmf_table(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Independent(p) => {
                let mut table = Vec::with_capacity(1 << p.len());
                table.push(1.0);
                for &pi in p {
                    let len = table.len();
                    table.extend_from_within(..len);
                    for x in &mut table[..len] {
                        *x *= pi;
                    }
                    for x in &mut table[len..] {
                        *x *= 1.0 - pi;
                    }
                }
                table
            }
            Repr::Explicit(w) => w.clone(),
            Repr::CommonCause { n, groups, .. } => (0..1u32 << n)
                .map(|mask| {
                    groups
                        .iter()
                        .map(|g| g.local_table()[g.local_mask(mask)])
                        .product()
                })
                .collect(),
        }
    }

    /// `p_i = P[s_i = 0]`.
    pub fn marginal_failure(&self, i: usize) -> Result<f64> {
        if i >= self.n() {
            return Err(Error::ComponentIndex { index: i, n: self.n() });
        }
        Ok(match &self.repr {
            Repr::Independent(p) => p[i],
            Repr::Explicit(w) => w
                .iter()
                .enumerate()
                .filter(|(m, _)| m >> i & 1 == 0)
                .map(|(_, &x)| x)
                .sum(),
            Repr::CommonCause { groups, slot, .. } => {
                let (g, pos) = slot[i];
                groups[g].marginal_failure(pos)
            }
        })
    }

    pub fn marginal_failures(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| self.marginal_failure(i).expect("index in range"))
            .collect()
    }

    /// Restriction of the pmf to the evidence event, renormalized. Independent
    /// inputs stay independent; in a common-cause model only the touched
    /// groups become explicit tables.
    pub fn condition_on_states(&self, evidence: &[(usize, bool)]) -> Result<Self> {
        let mut out = self.clone();
        for &(i, working) in evidence {
            let (fail_lik, work_lik) = if working { (0.0, 1.0) } else { (1.0, 0.0) };
            out = out.reweight(i, fail_lik, work_lik)?.0;
        }
        Ok(out)
    }

    /// Multiplies the pmf by a likelihood depending on `s_i` alone and
    /// renormalizes. Returns the posterior and the evidence probability.
    pub(crate) fn reweight(&self, i: usize, fail_lik: f64, work_lik: f64) -> Result<(Self, f64)> {
        if i >= self.n() {
            return Err(Error::ComponentIndex { index: i, n: self.n() });
        }
        match &self.repr {
            Repr::Independent(p) => {
                let z = fail_lik * p[i] + work_lik * (1.0 - p[i]);
                if z <= 0.0 {
                    return Err(Error::ZeroProbabilityEvidence);
                }
                let mut q = p.clone();
                q[i] = fail_lik * p[i] / z;
                Ok((Self { repr: Repr::Independent(q) }, z))
            }
            Repr::Explicit(w) => {
                let (table, z) = reweight_table(w, i, fail_lik, work_lik)?;
                Ok((Self { repr: Repr::Explicit(table) }, z))
            }
            Repr::CommonCause { n, groups, slot } => {
                let (g, pos) = slot[i];
                let (table, z) = reweight_table(groups[g].local_table(), pos, fail_lik, work_lik)?;
                let mut groups = groups.clone();
                groups[g] = CauseGroup {
                    members: groups[g].members.clone(),
                    local: table.clone(),
                    law: GroupLaw::Table(table),
                };
                Ok((
                    Self {
                        repr: Repr::CommonCause { n: *n, groups, slot: slot.clone() },
                    },
                    z,
                ))
            }
        }
    }

    pub fn to_explicit(&self) -> Self {
        Self { repr: Repr::Explicit(self.pmf_table()) }
    }
}

fn reweight_table(w: &[f64], bit: usize, fail_lik: f64, work_lik: f64) -> Result<(Vec<f64>, f64)> {
    let mut out: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(m, &x)| x * if m >> bit & 1 == 1 { work_lik } else { fail_lik })
        .collect();
    let z: f64 = out.iter().sum();
    if z <= 0.0 {
        return Err(Error::ZeroProbabilityEvidence);
    }
    for x in &mut out {
        *x /= z;
    }
    Ok((out, z))
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDistribution(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn check_weights(w: &[f64]) -> Result<()> {
    if let Some(x) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("negative or non-finite weight {x}")));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}
