//! Fixture loading and random instance generators shared by the integration
//! tests.

#![allow(dead_code)]

use std::path::PathBuf;

use netvoi::scenario::Scenario;
use netvoi::{
    CauseGroup, FactorModel, Formula, GlobalAction, InspectionModel, JointDistribution,
    LocalCostModel, LossEnvelope, Network, Sensors, StructureFunction,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn load(name: &str) -> Scenario {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    Scenario::from_json(&text, 20).expect("fixture is valid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random series/parallel formula using every component exactly once.
pub fn random_formula(rng: &mut ChaCha8Rng, n: usize) -> Formula {
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let series = rng.random_bool(0.5);
    build(rng, &ids, series)
}

fn build(rng: &mut ChaCha8Rng, ids: &[usize], series: bool) -> Formula {
    if ids.len() == 1 {
        return Formula::Component(ids[0]);
    }
    let parts = rng.random_range(2..=ids.len().min(3));
    let mut cuts: Vec<usize> = (1..ids.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut children = Vec::new();
    let mut start = 0;
    for end in cuts.into_iter().chain([ids.len()]) {
        children.push(build(rng, &ids[start..end], !series));
        start = end;
    }
    if series {
        Formula::Series(children)
    } else {
        Formula::Parallel(children)
    }
}

pub fn random_network(rng: &mut ChaCha8Rng, n: usize) -> Network {
    Network::with_default_names(n, StructureFunction::Formula(random_formula(rng, n))).unwrap()
}

pub fn random_marginals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.01..0.6)).collect()
}

/// Independent, explicit or common-cause distribution, chosen at random.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> JointDistribution {
    match rng.random_range(0..3) {
        0 => JointDistribution::independent(random_marginals(rng, n)).unwrap(),
        1 => {
            let w: Vec<f64> = (0..1usize << n).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
            let total: f64 = w.iter().sum();
            JointDistribution::explicit(w.iter().map(|x| x / total).collect()).unwrap()
        }
        _ => {
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(rng);
            let mut groups = Vec::new();
            let mut rest = &ids[..];
            while !rest.is_empty() {
                let size = rng.random_range(1..=rest.len().min(3));
                let (members, tail) = rest.split_at(size);
                rest = tail;
                let group = if rng.random_bool(0.7) {
                    let factor = if rng.random_bool(0.5) { FactorModel::Bernoulli } else { FactorModel::Gaussian };
                    CauseGroup::shared(members.to_vec(), rng.random_range(0.02..0.5), rng.random_range(0.0..0.9), factor)
                } else {
                    let w: Vec<f64> = (0..1usize << size).map(|_| rng.random_range(0.05..1.0)).collect();
                    let total: f64 = w.iter().sum();
                    CauseGroup::table(members.to_vec(), w.iter().map(|x| x / total).collect())
                };
                groups.push(group.unwrap());
            }
            JointDistribution::common_cause(n, groups).unwrap()
        }
    }
}

pub fn random_sensors(rng: &mut ChaCha8Rng, n: usize) -> Sensors {
    let model = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.3) {
            InspectionModel::PERFECT
        } else {
            InspectionModel::new(rng.random_range(0.0..0.3), rng.random_range(0.0..0.3)).unwrap()
        }
    };
    if rng.random_bool(0.5) {
        Sensors::Uniform(model(rng))
    } else {
        Sensors::PerComponent((0..n).map(|_| model(rng)).collect())
    }
}

pub fn random_costs(rng: &mut ChaCha8Rng, n: usize) -> LocalCostModel {
    LocalCostModel::new(1.0, (0..n).map(|_| rng.random_range(0.01..0.5)).collect()).unwrap()
}

/// Concave envelope from a handful of random actions, always including
/// "do nothing" so that the envelope starts at zero.
pub fn random_envelope(rng: &mut ChaCha8Rng) -> LossEnvelope {
    let mut actions = vec![GlobalAction { cost: 0.0, residual_risk: 1.0 }];
    for _ in 0..rng.random_range(1..5) {
        actions.push(GlobalAction {
            cost: rng.random_range(0.0..0.6),
            residual_risk: rng.random_range(0.0..1.0),
        });
    }
    match rng.random_range(0..3) {
        0 => LossEnvelope::Quadratic,
        1 => LossEnvelope::binary_with_peak(rng.random_range(0.01..0.99)).unwrap(),
        _ => LossEnvelope::from_actions(&actions, 1.0).unwrap(),
    }
}
