//! Bayesian updating from one imperfect binary inspection.
//!
//! Inspecting component `i` returns an alarm (`y_i = 0`) or a silence
//! (`y_i = 1`). The emission probabilities depend only on `s_i`:
//!
//! | state       | silence      | alarm        |
//! |-------------|--------------|--------------|
//! | working     | `1 − ε_FA`   | `ε_FA`       |
//! | failed      | `ε_FS`       | `1 − ε_FS`   |
//!
//! so the alarm probability is `h_i = ε_FA + K·p_i` with `K = 1 − ε_FA − ε_FS`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{JointDistribution, Network};

/// Absolute tolerance on the prior when comparing posterior intervals.
pub const PRIOR_TOLERANCE: f64 = 1e-9;

/// Endpoint slack used by [`interval_dominates`] so that intervals equal up
/// to rounding count as nested both ways.
pub const ENDPOINT_TOLERANCE: f64 = 1e-12;

/// Outcome of inspecting one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observation {
    /// `y_i = 1`: the component seems to work.
    Silence,
    /// `y_i = 0`: symptom that the component failed.
    Alarm,
}

impl Observation {
    pub const BOTH: [Observation; 2] = [Observation::Silence, Observation::Alarm];

    /// The conventional binary value (`0` = alarm, `1` = silence).
    pub fn as_bit(self) -> u8 {
        match self {
            Observation::Silence => 1,
            Observation::Alarm => 0,
        }
    }
}

/// False-alarm and false-silence rates of an inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InspectionModel {
    pub eps_fa: f64,
    pub eps_fs: f64,
}

impl InspectionModel {
    pub const PERFECT: InspectionModel = InspectionModel { eps_fa: 0.0, eps_fs: 0.0 };

    pub fn new(eps_fa: f64, eps_fs: f64) -> Result<Self> {
        for (name, eps) in [("eps_fa", eps_fa), ("eps_fs", eps_fs)] {
            if !(0.0..0.5).contains(&eps) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [0, 0.5), got {eps}"
                )));
            }
        }
        Ok(Self { eps_fa, eps_fs })
    }

    /// `K = 1 − ε_FA − ε_FS`, strictly positive for valid models.
    pub fn k(&self) -> f64 {
        1.0 - self.eps_fa - self.eps_fs
    }

    /// Likelihood of `y` given a failed and given a working component.
    pub fn likelihood(&self, y: Observation) -> (f64, f64) {
        match y {
            Observation::Alarm => (1.0 - self.eps_fs, self.eps_fa),
            Observation::Silence => (self.eps_fs, 1.0 - self.eps_fa),
        }
    }
}

impl Default for InspectionModel {
    fn default() -> Self {
        Self::PERFECT
    }
}

/// Inspection quality for every component of a network.
#[derive(Debug, Clone, PartialEq)]
pub enum Sensors {
    Uniform(InspectionModel),
    PerComponent(Vec<InspectionModel>),
}

impl Sensors {
    pub fn perfect() -> Self {
        Sensors::Uniform(InspectionModel::PERFECT)
    }

    pub fn uniform(eps_fa: f64, eps_fs: f64) -> Result<Self> {
        Ok(Sensors::Uniform(InspectionModel::new(eps_fa, eps_fs)?))
    }

    pub fn for_component(&self, i: usize) -> InspectionModel {
        match self {
            Sensors::Uniform(m) => *m,
            Sensors::PerComponent(v) => v[i],
        }
    }

    /// True when every component has the same emission table.
    pub fn is_uniform(&self) -> bool {
        match self {
            Sensors::Uniform(_) => true,
            Sensors::PerComponent(v) => v.windows(2).all(|w| w[0] == w[1]),
        }
    }

    pub(crate) fn check_dimension(&self, n: usize) -> Result<()> {
        match self {
            Sensors::PerComponent(v) if v.len() != n => Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            }),
            _ => Ok(()),
        }
    }
}

impl From<InspectionModel> for Sensors {
    fn from(m: InspectionModel) -> Self {
        Sensors::Uniform(m)
    }
}

/// Range of posterior system failure probabilities spanned by the two
/// outcomes of inspecting one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorInterval {
    /// `p_{ω|y_i=1}`: failure probability after a silence.
    pub lo: f64,
    /// `p_{ω|y_i=0}`: failure probability after an alarm.
    pub hi: f64,
    /// `p_π`.
    pub prior: f64,
    /// `h_i`.
    pub alarm_prob: f64,
}

impl PosteriorInterval {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    /// Endpoints in increasing order. An alarm can lower the system failure
    /// probability when failures are negatively associated, so `hi < lo` is
    /// possible.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo.min(self.hi), self.lo.max(self.hi))
    }

    /// `self ⊇ other` up to [`ENDPOINT_TOLERANCE`].
    pub fn contains(&self, other: &PosteriorInterval) -> bool {
        let (a_lo, a_hi) = self.bounds();
        let (b_lo, b_hi) = other.bounds();
        a_lo <= b_lo + ENDPOINT_TOLERANCE && a_hi >= b_hi - ENDPOINT_TOLERANCE
    }

    /// Posterior failure probability for one outcome.
    pub fn posterior(&self, y: Observation) -> f64 {
        match y {
            Observation::Silence => self.lo,
            Observation::Alarm => self.hi,
        }
    }
}

/// Result of comparing two posterior intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    FirstDominates,
    SecondDominates,
    /// Equal intervals: each contains the other.
    Mutual,
    NotNested,
}

/// `h_i = ε_FA + K·p_i`.
pub fn alarm_probability(dist: &JointDistribution, i: usize, insp: &InspectionModel) -> Result<f64> {
    Ok(insp.eps_fa + insp.k() * dist.marginal_failure(i)?)
}

/// Posterior state distribution after observing `y` on component `i`.
pub fn posterior_given_observation(
    dist: &JointDistribution,
    i: usize,
    y: Observation,
    insp: &InspectionModel,
) -> Result<JointDistribution> {
    let (fail_lik, work_lik) = insp.likelihood(y);
    Ok(dist.reweight(i, fail_lik, work_lik)?.0)
}

/// `p_{ω|y_i=y}`.
pub fn posterior_system_failure(
    net: &Network,
    dist: &JointDistribution,
    i: usize,
    y: Observation,
    insp: &InspectionModel,
) -> Result<f64> {
    dist.check_dimension(net.n())?;
    net.check_index(i)?;
    let post = posterior_given_observation(dist, i, y, insp)?;
    crate::model::system_failure_prob(net, &post)
}

/// Joint sums needed for every posterior of component `i`:
/// `(P[s_i=0, u=0], P[s_i=1, u=0], P[s_i=0])`.
fn split_sums(works: &[bool], pmf: &[f64], i: usize) -> (f64, f64, f64) {
    let (mut fail_fail, mut work_fail, mut comp_fail) = (0.0, 0.0, 0.0);
    for (m, (&w, &p)) in works.iter().zip(pmf).enumerate() {
        let comp_works = m >> i & 1 == 1;
        if !comp_works {
            comp_fail += p;
        }
        if !w {
            if comp_works {
                work_fail += p;
            } else {
                fail_fail += p;
            }
        }
    }
    (fail_fail, work_fail, comp_fail)
}

pub(crate) fn interval_from_table(
    works: &[bool],
    pmf: &[f64],
    i: usize,
    insp: &InspectionModel,
) -> Result<PosteriorInterval> {
    let (fail_fail, work_fail, comp_fail) = split_sums(works, pmf, i);
    let prior = fail_fail + work_fail;
    let h = insp.eps_fa + insp.k() * comp_fail;
    if h <= 0.0 || h >= 1.0 {
        return Err(Error::DegenerateObservation { component: i, alarm_prob: h });
    }
    let post = |y| {
        let (lf, lw) = insp.likelihood(y);
        let evidence = lf * comp_fail + lw * (1.0 - comp_fail);
        ((lf * fail_fail + lw * work_fail) / evidence).clamp(0.0, 1.0)
    };
    Ok(PosteriorInterval {
        lo: post(Observation::Silence),
        hi: post(Observation::Alarm),
        prior,
        alarm_prob: h,
    })
}

/// Posterior interval `I_i` together with `p_π` and `h_i`.
pub fn posterior_interval(
    net: &Network,
    dist: &JointDistribution,
    i: usize,
    insp: &InspectionModel,
) -> Result<PosteriorInterval> {
    dist.check_dimension(net.n())?;
    net.check_index(i)?;
    interval_from_table(net.works_table(), &dist.pmf_table(), i, insp)
}

/// Posterior intervals of all components, sharing one pmf enumeration.
pub fn posterior_intervals(
    net: &Network,
    dist: &JointDistribution,
    sensors: &Sensors,
) -> Result<Vec<PosteriorInterval>> {
    dist.check_dimension(net.n())?;
    sensors.check_dimension(net.n())?;
    let pmf = dist.pmf_table();
    (0..net.n())
        .map(|i| interval_from_table(net.works_table(), &pmf, i, &sensors.for_component(i)))
        .collect()
}

/// Compares two intervals that share the same prior.
pub fn interval_dominates(a: &PosteriorInterval, b: &PosteriorInterval) -> Result<Dominance> {
    if (a.prior - b.prior).abs() > PRIOR_TOLERANCE {
        return Err(Error::Incomparable { a: a.prior, b: b.prior });
    }
    Ok(match (a.contains(b), b.contains(a)) {
        (true, true) => Dominance::Mutual,
        (true, false) => Dominance::FirstDominates,
        (false, true) => Dominance::SecondDominates,
        (false, false) => Dominance::NotNested,
    })
}

/// Dense posterior pmf after observing `y` on component `i`, and `P[y]`.
pub(crate) fn posterior_pmf(
    pmf: &[f64],
    i: usize,
    y: Observation,
    insp: &InspectionModel,
) -> Result<(Vec<f64>, f64)> {
    let (lf, lw) = insp.likelihood(y);
    let mut post: Vec<f64> = pmf
        .iter()
        .enumerate()
        .map(|(m, &p)| p * if m >> i & 1 == 1 { lw } else { lf })
        .collect();
    let evidence: f64 = post.iter().sum();
    if evidence <= 0.0 {
        return Err(Error::ZeroProbabilityEvidence);
    }
    for p in &mut post {
        *p /= evidence;
    }
    Ok((post, evidence))
}
