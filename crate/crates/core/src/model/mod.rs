//! Networks of binary components, their joint state distributions, and exact
//! system failure probabilities by enumeration.

mod distribution;
mod network;
mod state;
mod structure;

pub use distribution::{CauseGroup, FactorModel, GroupLaw, JointDistribution};
pub(crate) use distribution::Repr;
pub use network::{Network, PureForm, DEFAULT_COMPONENT_CAP, MAX_COMPONENTS};
#[cfg(test)]
pub(crate) use network::default_names;
pub use state::StateVector;
pub use structure::{Formula, Node, StGraph, StructureFunction, TruthTable};

use crate::error::Result;

/// `p_u = Σ_s p(s)·(1 − φ(s))`, by exact enumeration in ascending mask order.
pub fn system_failure_prob(net: &Network, dist: &JointDistribution) -> Result<f64> {
    dist.check_dimension(net.n())?;
    Ok(failure_prob(net.works_table(), &dist.pmf_table()))
}

pub(crate) fn failure_prob(works: &[bool], pmf: &[f64]) -> f64 {
    works
        .iter()
        .zip(pmf)
        .filter(|(w, _)| !**w)
        .map(|(_, p)| p)
        .sum()
}
