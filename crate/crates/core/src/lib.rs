//! Inspection priorities for networks of binary components.
//!
//! A [`Network`] couples a monotone structure function with component names;
//! a [`JointDistribution`] gives the probability of every component state.
//! Inspecting one component with an imperfect sensor moves the system
//! failure probability inside a [`PosteriorInterval`], and the value of that
//! information depends on what can be done afterwards:
//!
//! * [`global`]: actions act on the whole system and the optimal loss is a
//!   concave function of the failure probability;
//! * [`local`]: the agent replaces any subset of components;
//! * the classical importance measures in [`global::importance_measures`].
//!
//! [`oracle`] provides Monte Carlo and brute-force cross-checks, and
//! [`scenario`] reads and writes the JSON scenario format used by the CLI.

pub mod cli;
pub mod error;
pub mod global;
pub mod inference;
pub mod local;
pub mod model;
pub mod oracle;
pub mod output;
pub mod scenario;
pub mod voi;

pub use error::{Error, Result};
pub use global::{
    closed_form_rule, envelope_value, importance_measures, rank_global, regret_value, voi_global,
    GlobalAction, GlobalVoi, ImportanceReport, LossEnvelope, RulePrediction,
};
pub use inference::{
    alarm_probability, interval_dominates, posterior_given_observation, posterior_interval,
    posterior_intervals, posterior_system_failure, Dominance, InspectionModel, Observation,
    PosteriorInterval, Sensors,
};
pub use local::{
    heuristic_action_table,
    apply_repairs, optimal_plan, plan_expected_loss, plan_losses, posterior_action_table,
    voi_heuristic, voi_local, LocalCostModel, MaintenancePlan, PosteriorActionTable,
};
pub use model::{
    system_failure_prob, CauseGroup, FactorModel, Formula, GroupLaw, JointDistribution, Network,
    Node, StGraph, StateVector, StructureFunction, TruthTable,
};
pub use voi::{Metric, VoIReport};
