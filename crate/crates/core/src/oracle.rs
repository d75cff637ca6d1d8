//! Independent validation paths: Monte Carlo estimators and brute-force
//! plan enumeration.
//!
//! Random numbers come from ChaCha8 (`rand_chacha::ChaCha8Rng`), a
//! counter-based stream cipher generator. The sample budget is split into
//! [`BATCHES`] batches; batch `b` draws from the generator seeded with
//! `seed_from_u64(seed)` on stream `b` (`set_stream(b)`), so results do not
//! depend on thread scheduling. The standard error is computed by batch
//! means.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::inference::{InspectionModel, Observation};
use crate::local::{optimal_plan, LocalCostModel, MaintenancePlan};
use crate::model::{FactorModel, GroupLaw, JointDistribution, Network, Repr};

/// Number of independent substreams and batch-means batches.
pub const BATCHES: usize = 32;

/// Largest network accepted by [`brute_force_plan_risks`].
pub const BRUTE_FORCE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub n_samples: u64,
    pub seed: u64,
    /// Half-width of acceptance bands, in standard errors.
    pub sigma: f64,
}

impl SimulationConfig {
    pub fn new(n_samples: u64, seed: u64) -> Result<Self> {
        if n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        Ok(Self { n_samples, seed, sigma: 3.0 })
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { n_samples: 100_000, seed: 0, sigma: 3.0 }
    }
}

/// Monte Carlo estimate with its batch-means standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub sigma: f64,
}

impl Estimate {
    /// `|mean − exact| ≤ sigma·std_error`, with a small absolute floor for
    /// estimates whose samples were all identical.
    pub fn agrees_with(&self, exact: f64) -> bool {
        (self.mean - exact).abs() <= self.sigma * self.std_error + 1e-12
    }
}

/// Draws state masks (bit set = component works).
#[derive(Debug, Clone)]
enum Sampler {
    Independent(Vec<f64>),
    Table(Cdf),
    Groups(Vec<GroupSampler>),
}

#[derive(Debug, Clone)]
struct Cdf(Vec<f64>);

impl Cdf {
    fn new(weights: &[f64]) -> Self {
        let mut acc = 0.0;
        Self(
            weights
                .iter()
                .map(|w| {
                    acc += w;
                    acc
                })
                .collect(),
        )
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.0.last().expect("non-empty table");
        let u = rng.random::<f64>() * total;
        self.0.partition_point(|&c| c <= u).min(self.0.len() - 1)
    }
}

#[derive(Debug, Clone)]
struct GroupSampler {
    members: Vec<usize>,
    kind: GroupKind,
}

#[derive(Debug, Clone)]
enum GroupKind {
    Bernoulli { p: f64, theta: f64 },
    Gaussian { threshold: f64, a: f64, b: f64 },
    Table(Cdf),
}

impl Sampler {
    fn new(dist: &JointDistribution) -> Self {
        match dist.repr() {
            Repr::Independent(p) => Sampler::Independent(p.clone()),
            Repr::Explicit(w) => Sampler::Table(Cdf::new(w)),
            Repr::CommonCause { groups, .. } => Sampler::Groups(
                groups
                    .iter()
                    .map(|g| GroupSampler {
                        members: g.members().to_vec(),
                        kind: match *g.law() {
                            GroupLaw::Shared { p, rho, factor: FactorModel::Bernoulli } => {
                                GroupKind::Bernoulli { p, theta: rho.sqrt() }
                            }
                            GroupLaw::Shared { p, rho, factor: FactorModel::Gaussian } => {
                                GroupKind::Gaussian {
                                    threshold: Normal::standard().inverse_cdf(p),
                                    a: rho.sqrt(),
                                    b: (1.0 - rho).sqrt(),
                                }
                            }
                            GroupLaw::Table(ref w) => GroupKind::Table(Cdf::new(w)),
                        },
                    })
                    .collect(),
            ),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u32 {
        match self {
            Sampler::Independent(p) => p
                .iter()
                .enumerate()
                .fold(0, |m, (i, &pi)| if rng.random::<f64>() < pi { m } else { m | 1 << i }),
            Sampler::Table(cdf) => cdf.draw(rng) as u32,
            Sampler::Groups(groups) => {
                let mut mask = 0u32;
                for g in groups {
                    match &g.kind {
                        GroupKind::Bernoulli { p, theta } => {
                            let common = rng.random::<f64>() < *p;
                            for &i in &g.members {
                                let failed = if rng.random::<f64>() < *theta {
                                    common
                                } else {
                                    rng.random::<f64>() < *p
                                };
                                if !failed {
                                    mask |= 1 << i;
                                }
                            }
                        }
                        GroupKind::Gaussian { threshold, a, b } => {
                            let z: f64 = rng.sample(StandardNormal);
                            for &i in &g.members {
                                let e: f64 = rng.sample(StandardNormal);
                                if a * z + b * e >= *threshold {
                                    mask |= 1 << i;
                                }
                            }
                        }
                        GroupKind::Table(cdf) => {
                            let local = cdf.draw(rng);
                            for (k, &i) in g.members.iter().enumerate() {
                                if local >> k & 1 == 1 {
                                    mask |= 1 << i;
                                }
                            }
                        }
                    }
                }
                mask
            }
        }
    }
}

fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    rng
}

/// Runs `sample` over the configured budget and summarizes by batch means.
fn batch_means<F>(cfg: &SimulationConfig, sample: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let batches = (cfg.n_samples as usize).clamp(1, BATCHES);
    let base = cfg.n_samples / batches as u64;
    let extra = cfg.n_samples % batches as u64;
    let sums: Vec<(f64, u64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = base + u64::from((b as u64) < extra);
            let mut rng = batch_rng(cfg.seed, b);
            let sum: f64 = (0..count).map(|_| sample(&mut rng)).sum();
            (sum, count)
        })
        .collect();
    let total: f64 = sums.iter().map(|(s, _)| s).sum();
    let mean = total / cfg.n_samples as f64;
    let std_error = if batches < 2 {
        f64::INFINITY
    } else {
        let means: Vec<f64> = sums.iter().map(|(s, c)| s / *c as f64).collect();
        let avg = means.iter().sum::<f64>() / batches as f64;
        let var = means.iter().map(|m| (m - avg).powi(2)).sum::<f64>() / (batches - 1) as f64;
        (var / batches as f64).sqrt()
    };
    Estimate { mean, std_error, n_samples: cfg.n_samples, sigma: cfg.sigma }
}

/// Monte Carlo estimate of `p_u`.
pub fn mc_system_failure(net: &Network, dist: &JointDistribution, cfg: &SimulationConfig) -> Result<Estimate> {
    dist.check_dimension(net.n())?;
    let sampler = Sampler::new(dist);
    let works = net.works_table();
    Ok(batch_means(cfg, |rng| {
        if works[sampler.draw(rng) as usize] { 0.0 } else { 1.0 }
    }))
}

/// Pre-posterior Monte Carlo estimate of `VoI_L(i)`.
///
/// Each sample draws a state `s` and an outcome `y_i`, then scores the
/// realized loss of the prior plan minus that of the plan optimal after `y_i`.
/// Both terms share the same draw.
pub fn mc_voi_local(
    net: &Network,
    dist: &JointDistribution,
    insp: &InspectionModel,
    costs: &LocalCostModel,
    i: usize,
    cfg: &SimulationConfig,
) -> Result<Estimate> {
    net.check_index(i)?;
    let (prior_plan, _) = optimal_plan(net, dist, costs)?;
    let mut posterior_plans = [prior_plan; 2];
    for (slot, y) in Observation::BOTH.into_iter().enumerate() {
        let (fail_lik, work_lik) = insp.likelihood(y);
        match dist.reweight(i, fail_lik, work_lik) {
            Ok((post, _)) => posterior_plans[slot] = optimal_plan(net, &post, costs)?.0,
            Err(Error::ZeroProbabilityEvidence) => {}
            Err(e) => return Err(e),
        }
    }
    let sampler = Sampler::new(dist);
    let works = net.works_table();
    let loss = |s: u32, plan: MaintenancePlan| {
        let failed = !works[(s | plan.mask()) as usize];
        costs.plan_cost(plan) + if failed { costs.c_fail } else { 0.0 }
    };
    Ok(batch_means(cfg, |rng| {
        let s = sampler.draw(rng);
        let alarm_prob = if s >> i & 1 == 1 { insp.eps_fa } else { 1.0 - insp.eps_fs };
        let alarm = rng.random::<f64>() < alarm_prob;
        let chosen = posterior_plans[usize::from(alarm)];
        loss(s, prior_plan) - loss(s, chosen)
    }))
}

/// Expected loss of every plan by double enumeration over plans and states.
pub fn brute_force_plan_risks(
    net: &Network,
    dist: &JointDistribution,
    costs: &LocalCostModel,
) -> Result<Vec<f64>> {
    dist.check_dimension(net.n())?;
    if costs.n() != net.n() {
        return Err(Error::DimensionMismatch { expected: net.n(), found: costs.n() });
    }
    if net.n() > BRUTE_FORCE_CAP {
        return Err(Error::SizeCap { n: net.n(), cap: BRUTE_FORCE_CAP });
    }
    let pmf = dist.pmf_table();
    let works = net.works_table();
    Ok((0..1u32 << net.n())
        .map(|plan| {
            let mut risk = 0.0;
            for (s, &p) in pmf.iter().enumerate() {
                if !works[s | plan as usize] {
                    risk += p;
                }
            }
            costs.c_fail * risk + costs.plan_cost(MaintenancePlan::from_mask(plan))
        })
        .collect())
}
