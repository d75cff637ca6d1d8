//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerances
//! pinned below. Runs as a plain binary (`harness = false`) and exits with a
//! failure status if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use netvoi::global::voi_from_interval;
use netvoi::local::{policy_map, series_pair_policy, PairDecision, POLICY_GRID};
use netvoi::oracle::{brute_force_plan_risks, mc_system_failure, mc_voi_local, SimulationConfig};
use netvoi::scenario::Scenario;
use netvoi::{
    closed_form_rule, importance_measures, interval_dominates, plan_expected_loss, plan_losses,
    posterior_action_table, posterior_intervals, rank_global, system_failure_prob, voi_heuristic,
    voi_local, CauseGroup, Dominance, FactorModel, Formula, InspectionModel, JointDistribution,
    LocalCostModel, LossEnvelope, MaintenancePlan, Metric, Network, Observation, RulePrediction,
    Sensors, StructureFunction,
};
use rand::Rng;

/// Absolute tolerance on reported probabilities (two-digit rounding).
const PROB_TOL: f64 = 0.0005;
/// Tolerance of exact identities.
const IDENTITY_TOL: f64 = 1e-10;
/// Zero threshold for VoI, relative to C_F.
const ZERO_VOI_REL: f64 = 1e-12;
/// Randomized instances per property.
const INSTANCES: usize = 500;
/// Largest share of Monte Carlo estimates allowed outside 3 standard errors.
/// With 32 batch means the two-sided exceedance probability of a 3σ band is
/// about 0.5%, so a handful of misses among 500 instances is expected.
const MC_MISS_SHARE: f64 = 0.02;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(format!("ok   {what}"));
        } else {
            self.pass = false;
            self.notes.push(format!("FAIL {what}"));
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        self.notes.push(format!("info {}", what.into()));
    }
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn plan(ids: &[usize]) -> MaintenancePlan {
    MaintenancePlan::from_components(ids.iter().map(|i| i - 1))
}

fn with_costs(s: &Scenario, c_fail: f64, c_repair: Vec<f64>) -> Scenario {
    let mut s = s.clone();
    s.costs = Some(LocalCostModel::new(c_fail, c_repair).unwrap());
    s
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let s = common::load("two_interval.json");
    let p = system_failure_prob(&s.network, &s.distribution).unwrap();
    o.check(near(p, 0.0109, PROB_TOL), format!("p_pi = {p:.5} (expected 0.0109)"));
    let iv = posterior_intervals(&s.network, &s.distribution, &Sensors::perfect()).unwrap();
    for (i, (lo, hi)) in [(0usize, (0.0090, 0.200)), (1, (0.0052, 0.0338))] {
        o.check(
            near(iv[i].lo, lo, PROB_TOL) && near(iv[i].hi, hi, PROB_TOL),
            format!("I_{} = [{:.5}, {:.5}] (expected [{lo}, {hi}])", i + 1, iv[i].lo, iv[i].hi),
        );
    }
    let d = interval_dominates(&iv[0], &iv[1]).unwrap();
    o.check(d == Dominance::NotNested, format!("I_1 vs I_2: {d:?}"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let s = common::load("two_interval.json");
    let iv = posterior_intervals(&s.network, &s.distribution, &Sensors::perfect()).unwrap();
    let prior = iv[0].prior;
    let ratio = |i: usize, p_tilde: f64| {
        let env = LossEnvelope::binary_with_peak(p_tilde).unwrap();
        let rg = netvoi::regret_value(&env, prior).unwrap();
        voi_from_interval(&iv[i], &env).unwrap().voi / rg
    };
    let r2 = ratio(1, prior);
    let r1 = ratio(0, prior);
    o.check((0.39..=0.45).contains(&r2), format!("VoI_G(2)/RG_pi at p_tilde = p_pi: {r2:.4}"));
    o.check((0.14..=0.20).contains(&r1), format!("VoI_G(1)/RG_pi at p_tilde = p_pi: {r1:.4}"));

    let grid: Vec<f64> = (0..500).map(|k| 0.0005 + 0.2495 * k as f64 / 499.0).collect();
    let mut outside_nonzero = 0;
    let mut diffs = Vec::with_capacity(grid.len());
    for &pt in &grid {
        let env = LossEnvelope::binary_with_peak(pt).unwrap();
        let v: Vec<f64> = iv[..2].iter().map(|x| voi_from_interval(x, &env).unwrap().voi).collect();
        for (i, x) in iv[..2].iter().enumerate() {
            if (pt < x.lo || pt > x.hi) && v[i].abs() > 1e-15 {
                outside_nonzero += 1;
            }
        }
        diffs.push(v[1] - v[0]);
    }
    o.check(outside_nonzero == 0, format!("VoI_G(i) = 0 outside I_i ({outside_nonzero} violations)"));
    let crossing = grid
        .windows(2)
        .zip(diffs.windows(2))
        .find(|(g, d)| g[0] > prior && d[0] > 0.0 && d[1] <= 0.0)
        .map(|(g, _)| 0.5 * (g[0] + g[1]));
    match crossing {
        Some(x) => o.check(near(x, 0.025, 0.003), format!("preference crossover at p_tilde = {x:.5}")),
        None => o.check(false, "no preference crossover found"),
    }
    o
}

fn table_matches(
    names: &[String],
    table: &netvoi::PosteriorActionTable,
    expected: &[(&[usize], &[usize])],
) -> Vec<String> {
    let mut mismatches = Vec::new();
    for (i, (silence, alarm)) in expected.iter().enumerate() {
        for (y, want) in [(Observation::Silence, silence), (Observation::Alarm, alarm)] {
            let got = table.entry(i, y).plan;
            if got != plan(want) {
                mismatches.push(format!(
                    "{} {:?}: got {}, expected {}",
                    names[i],
                    y,
                    got.describe(names),
                    plan(want).describe(names)
                ));
            }
        }
    }
    mismatches
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let s = common::load("fig9.json");
    let (net, dist, perfect) = (&s.network, &s.distribution, Sensors::perfect());
    let imp = importance_measures(net, dist, &perfect).unwrap();
    o.check(imp.ranking(Metric::Bm).unwrap()[0] == 1, "BM argmax = c2");
    let g = rank_global(net, dist, &perfect, &LossEnvelope::Quadratic).unwrap();
    o.check(g.best == 1, format!("global (quadratic) argmax = {}", g.names[g.best]));
    let costs = s.costs.clone().unwrap();
    let l = voi_local(net, dist, &perfect, &costs).unwrap();
    let h = voi_heuristic(net, dist, &perfect, &costs).unwrap();
    o.check(l.best == 1 && h.best == 1, format!("C_F/C_R = 10: local {}, heuristic {}", l.names[l.best], h.names[h.best]));

    let m = common::load("fig9_mod.json");
    let costs = m.costs.clone().unwrap();
    let l = voi_local(net, dist, &perfect, &costs).unwrap();
    let h = voi_heuristic(net, dist, &perfect, &costs).unwrap();
    let prior = l.plans.as_ref().unwrap().prior;
    o.check(prior == plan(&[4]), format!("C_F/C_R,2 = 5: prior plan {prior}"));
    o.check(l.best == 1, format!("C_F/C_R,2 = 5: local argmax {}", l.names[l.best]));
    o.check(h.best == 3, format!("C_F/C_R,2 = 5: heuristic argmax {}", h.names[h.best]));
    let table = posterior_action_table(net, dist, &perfect, &costs).unwrap();
    let expected: [(&[usize], &[usize]); 6] = [
        (&[4], &[3, 4]),
        (&[], &[3, 4]),
        (&[4], &[3, 4]),
        (&[], &[4]),
        (&[6], &[4]),
        (&[], &[6]),
    ];
    let mismatches = table_matches(net.names(), &table, &expected);
    o.check(mismatches.is_empty(), format!("posterior action table: {} of 12 rows differ {:?}", mismatches.len(), mismatches));
    for i in 0..6 {
        for y in Observation::BOTH {
            let e = table.entry(i, y);
            let post = dist.condition_on_states(&[(i, y == Observation::Silence)]).unwrap();
            let recomputed = plan_expected_loss(net, &post, e.plan, &costs).unwrap();
            if !near(recomputed, e.loss, IDENTITY_TOL) {
                o.check(false, format!("plan loss recomputation for {} {y:?}", net.names()[i]));
            }
        }
    }
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let s = common::load("fig9.json");
    let costs = s.costs.clone().unwrap();
    for (fa, fs, want) in [(0.01, 0.01, 1usize), (0.01, 0.40, 0)] {
        let sensors = Sensors::uniform(fa, fs).unwrap();
        let l = voi_local(&s.network, &s.distribution, &sensors, &costs).unwrap();
        let h = voi_heuristic(&s.network, &s.distribution, &sensors, &costs).unwrap();
        o.check(
            l.best == want && h.best == want,
            format!(
                "eps_FA = {fa}, eps_FS = {fs}: local {}, heuristic {} (expected c{})",
                l.names[l.best],
                h.names[h.best],
                want + 1
            ),
        );
    }
    o
}

fn set_of(ranking: &[usize], range: std::ops::Range<usize>) -> Vec<usize> {
    let mut v: Vec<usize> = ranking[range].iter().map(|i| i + 1).collect();
    v.sort_unstable();
    v
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let perfect = Sensors::perfect();
    let s = common::load("fig13.json");
    let (net, dist) = (&s.network, &s.distribution);
    let costs = s.costs.clone().unwrap();
    let l = voi_local(net, dist, &perfect, &costs).unwrap();
    let h = voi_heuristic(net, dist, &perfect, &costs).unwrap();
    let prior = l.plans.as_ref().unwrap().prior;
    o.check(prior.is_empty(), format!("C_F/C_R = 1e3: prior plan {prior}"));
    let rank = l.ranking();
    o.check(set_of(&rank, 0..2) == vec![8, 16], format!("top pair {:?}", set_of(&rank, 0..2)));
    o.check(set_of(&rank, 2..5) == vec![1, 4, 7], format!("next three {:?}", set_of(&rank, 2..5)));
    o.check(h.ranking() == rank, "heuristic ranking identical to local");

    let big = with_costs(&s, 1e4, vec![1.0; 16]);
    let costs_big = big.costs.clone().unwrap();
    let l = voi_local(net, dist, &perfect, &costs_big).unwrap();
    let prior = l.plans.as_ref().unwrap().prior;
    o.check(prior == plan(&[8, 16]), format!("C_F/C_R = 1e4: prior plan {prior}"));
    let zero = ZERO_VOI_REL * costs_big.c_fail;
    for group in [[2, 3, 5, 6], [9, 10, 14, 15]] {
        let values: Vec<f64> = group.iter().map(|&c| l.voi[c - 1]).collect();
        o.check(
            values.iter().all(|v| v.abs() < zero),
            format!("C_F/C_R = 1e4: VoI_L of {group:?} = {values:.4?} (expected 0)"),
        );
    }
    // independent confirmation for c9: after an alarm, adding c9 to the prior
    // plan lowers the expected loss, so the alarm changes the decision
    let post = dist.condition_on_states(&[(8, false)]).unwrap();
    let keep = plan_expected_loss(net, &post, plan(&[8, 16]), &costs_big).unwrap();
    let add = plan_expected_loss(net, &post, plan(&[8, 9, 16]), &costs_big).unwrap();
    o.info(format!("c9 alarm: loss of {{c8, c16}} = {keep:.5}, of {{c8, c9, c16}} = {add:.5}"));

    let m = common::load("fig13_mod.json");
    let costs = m.costs.clone().unwrap();
    let l = voi_local(&m.network, &m.distribution, &perfect, &costs).unwrap();
    let h = voi_heuristic(&m.network, &m.distribution, &perfect, &costs).unwrap();
    let g = rank_global(&m.network, &m.distribution, &perfect, &LossEnvelope::Quadratic).unwrap();
    let prior = l.plans.as_ref().unwrap().prior;
    o.check(prior == plan(&[12]), format!("degraded: prior plan {prior}"));
    o.check(l.best == 12, format!("degraded: local argmax {}", l.names[l.best]));
    o.check(h.best == 11, format!("degraded: heuristic argmax {}", h.names[h.best]));
    o.check([0, 3, 6].contains(&g.best), format!("degraded: global argmax {}", g.names[g.best]));
    o
}

fn substation(rho: f64, factor: FactorModel) -> Scenario {
    let mut s = common::load("substation.json");
    let n = s.network.n();
    let p = s.distribution.marginal_failures();
    let mut groups = vec![CauseGroup::shared(vec![0, 1, 2], p[0], rho, factor).unwrap()];
    groups.extend((3..n).map(|i| CauseGroup::single(i, p[i]).unwrap()));
    s.distribution = JointDistribution::common_cause(n, groups).unwrap();
    s
}

const TABLE_3: [(&[usize], &[usize]); 12] = [
    (&[], &[1]),
    (&[], &[2]),
    (&[], &[3]),
    (&[1], &[1, 4]),
    (&[2], &[2, 5]),
    (&[1], &[1, 6]),
    (&[2], &[2, 7]),
    (&[1], &[1, 8]),
    (&[2], &[2, 9]),
    (&[1], &[1]),
    (&[1], &[1, 11]),
    (&[2], &[2, 12]),
];

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let perfect = Sensors::perfect();
    let s = substation(0.0, FactorModel::Bernoulli);
    let costs = s.costs.clone().unwrap();
    let names = s.network.names().to_vec();
    let cb_db = vec![4, 5, 8, 9];
    for report in [
        voi_local(&s.network, &s.distribution, &perfect, &costs).unwrap(),
        voi_heuristic(&s.network, &s.distribution, &perfect, &costs).unwrap(),
    ] {
        let top = set_of(&report.ranking(), 0..4);
        o.check(top == cb_db, format!("rho = 0: {} top four {:?}", report.metric, top));
    }
    let iv = posterior_intervals(&s.network, &s.distribution, &perfect).unwrap();
    let contains_all = [3usize, 4, 7, 8].iter().all(|&i| {
        (0..12).all(|j| {
            matches!(
                interval_dominates(&iv[i], &iv[j]).unwrap(),
                Dominance::FirstDominates | Dominance::Mutual
            )
        })
    });
    o.check(contains_all, "rho = 0: CB/DB intervals contain all others");

    let s = substation(0.4, FactorModel::Bernoulli);
    let table = posterior_action_table(&s.network, &s.distribution, &perfect, &costs).unwrap();
    o.check(
        table.prior_plan == plan(&[1]) || table.prior_plan == plan(&[2]),
        format!("rho = 0.4: prior plan {}", table.prior_plan.describe(&names)),
    );
    let mismatches = table_matches(&names, &table, &TABLE_3);
    // for each differing entry, compare both plans on the conditioned joint
    for (i, (silence, alarm)) in TABLE_3.iter().enumerate() {
        for (y, want) in [(Observation::Silence, silence), (Observation::Alarm, alarm)] {
            let got = table.entry(i, y).plan;
            if got == plan(want) {
                continue;
            }
            let post = s.distribution.condition_on_states(&[(i, y == Observation::Silence)]).unwrap();
            let ours = plan_expected_loss(&s.network, &post, got, &costs).unwrap();
            let theirs = plan_expected_loss(&s.network, &post, plan(want), &costs).unwrap();
            o.info(format!(
                "rho = 0.4: {} {y:?}: loss of {} = {ours:.5}, of {} = {theirs:.5}",
                names[i],
                got.describe(&names),
                plan(want).describe(&names)
            ));
        }
    }
    o.check(
        mismatches.is_empty(),
        format!("rho = 0.4: posterior action table, {} of 24 entries differ {:?}", mismatches.len(), mismatches),
    );

    let g = substation(0.45, FactorModel::Gaussian);
    let table = posterior_action_table(&g.network, &g.distribution, &perfect, &costs).unwrap();
    let gm = table_matches(&names, &table, &TABLE_3);
    o.info(format!(
        "latent Gaussian factor at rho = 0.45: prior plan {}, {} of 24 entries differ {:?}",
        table.prior_plan.describe(&names),
        gm.len(),
        gm
    ));

    let s = substation(0.9, FactorModel::Bernoulli);
    let l = voi_local(&s.network, &s.distribution, &perfect, &costs).unwrap();
    let ds_min = l.voi[..3].iter().copied().fold(f64::INFINITY, f64::min);
    let other_max = l.voi[3..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    o.check(ds_min > other_max, format!("rho = 0.9: local min DS VoI {ds_min:.4} > max other {other_max:.4}"));
    let h = voi_heuristic(&s.network, &s.distribution, &perfect, &costs).unwrap();
    o.info(format!("rho = 0.9: heuristic ranking {:?}", h.ranking().iter().map(|&i| &names[i]).collect::<Vec<_>>()));
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = common::rng(20_240_917);

    // law of total probability
    let mut worst = 0.0_f64;
    for _ in 0..INSTANCES {
        let n = rng.random_range(1..=8);
        let net = common::random_network(&mut rng, n);
        let dist = common::random_distribution(&mut rng, n);
        let sensors = common::random_sensors(&mut rng, n);
        for iv in posterior_intervals(&net, &dist, &sensors).unwrap() {
            let mix = iv.alarm_prob * iv.hi + (1.0 - iv.alarm_prob) * iv.lo;
            worst = worst.max((mix - iv.prior).abs());
        }
    }
    o.check(worst <= IDENTITY_TOL, format!("total probability: max deviation {worst:.2e}"));

    // VoI nonnegativity and VoI_H <= VoI_L
    let (mut negative, mut above) = (0, 0);
    for _ in 0..INSTANCES {
        let n = rng.random_range(1..=8);
        let net = common::random_network(&mut rng, n);
        let dist = common::random_distribution(&mut rng, n);
        let sensors = common::random_sensors(&mut rng, n);
        let costs = common::random_costs(&mut rng, n);
        let env = common::random_envelope(&mut rng);
        let g = rank_global(&net, &dist, &sensors, &env).unwrap();
        let l = voi_local(&net, &dist, &sensors, &costs).unwrap();
        let h = voi_heuristic(&net, &dist, &sensors, &costs).unwrap();
        for i in 0..n {
            if g.voi[i] < -IDENTITY_TOL || l.voi[i] < -IDENTITY_TOL || h.voi[i] < -IDENTITY_TOL {
                negative += 1;
            }
            if h.voi[i] > l.voi[i] + IDENTITY_TOL {
                above += 1;
            }
        }
    }
    o.check(negative == 0, format!("VoI nonnegativity: {negative} violations"));
    o.check(above == 0, format!("VoI_H <= VoI_L: {above} violations"));

    // nested intervals dominate under every concave envelope
    let (mut pairs, mut bad) = (0, 0);
    for _ in 0..INSTANCES {
        let n = rng.random_range(2..=8);
        let net = common::random_network(&mut rng, n);
        let dist = common::random_distribution(&mut rng, n);
        let sensors = common::random_sensors(&mut rng, n);
        let iv = posterior_intervals(&net, &dist, &sensors).unwrap();
        let env = common::random_envelope(&mut rng);
        for a in 0..n {
            for b in 0..n {
                if a != b && interval_dominates(&iv[a], &iv[b]).unwrap() == Dominance::FirstDominates {
                    pairs += 1;
                    let va = voi_from_interval(&iv[a], &env).unwrap().voi;
                    let vb = voi_from_interval(&iv[b], &env).unwrap().voi;
                    if va < vb - IDENTITY_TOL {
                        bad += 1;
                    }
                }
            }
        }
    }
    o.check(bad == 0 && pairs > 0, format!("nested-interval dominance: {bad} violations over {pairs} nested pairs"));

    // closed-form series/parallel rules
    let mut bad = 0;
    for k in 0..INSTANCES {
        let n = rng.random_range(2..=8);
        let f = if k % 2 == 0 { Formula::series_of(0..n) } else { Formula::parallel_of(0..n) };
        let net = Network::with_default_names(n, StructureFunction::Formula(f)).unwrap();
        let dist = JointDistribution::independent(common::random_marginals(&mut rng, n)).unwrap();
        let sensors = Sensors::Uniform(InspectionModel::new(rng.random_range(0.0..0.3), rng.random_range(0.0..0.3)).unwrap());
        let env = common::random_envelope(&mut rng);
        let g = rank_global(&net, &dist, &sensors, &env).unwrap();
        let RulePrediction::Inspect(i) = closed_form_rule(&net, &dist, &sensors).unwrap() else {
            bad += 1;
            continue;
        };
        let max = g.voi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if g.voi[i] < max - IDENTITY_TOL {
            bad += 1;
        }
    }
    o.check(bad == 0, format!("closed-form rules vs rank_global argmax: {bad} violations"));

    // local metric on parallel systems equals the binary global metric
    let mut bad = 0;
    for _ in 0..INSTANCES {
        let n = rng.random_range(2..=8);
        let net = Network::with_default_names(n, StructureFunction::Formula(Formula::parallel_of(0..n))).unwrap();
        let dist = common::random_distribution(&mut rng, n);
        let sensors = common::random_sensors(&mut rng, n);
        let costs = common::random_costs(&mut rng, n);
        let c_r = costs.c_repair.iter().copied().fold(f64::INFINITY, f64::min);
        let env = LossEnvelope::binary(c_r, costs.c_fail).unwrap();
        let l = voi_local(&net, &dist, &sensors, &costs).unwrap();
        let g = rank_global(&net, &dist, &sensors, &env).unwrap();
        if l.voi[g.best] < l.voi[l.best] - IDENTITY_TOL || g.voi[l.best] < g.voi[g.best] - IDENTITY_TOL {
            bad += 1;
        }
    }
    o.check(bad == 0, format!("local-on-parallel equivalence: {bad} violations"));

    // risk transform against naive enumeration
    let mut worst = 0.0_f64;
    for _ in 0..INSTANCES {
        let n = rng.random_range(1..=6);
        let net = common::random_network(&mut rng, n);
        let dist = common::random_distribution(&mut rng, n);
        let costs = common::random_costs(&mut rng, n);
        let fast = plan_losses(&net, &dist, &costs).unwrap();
        let slow = brute_force_plan_risks(&net, &dist, &costs).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            worst = worst.max((a - b).abs());
        }
    }
    o.check(worst <= IDENTITY_TOL, format!("3^N transform vs enumeration: max deviation {worst:.2e}"));

    // common-cause groups with rho = 0 are independent
    let mut worst = 0.0_f64;
    for _ in 0..INSTANCES {
        let n = rng.random_range(1..=8);
        let p = common::random_marginals(&mut rng, n);
        let factor = if rng.random_bool(0.5) { FactorModel::Bernoulli } else { FactorModel::Gaussian };
        let mut groups = Vec::new();
        let mut start = 0;
        while start < n {
            let size = rng.random_range(1..=(n - start).min(3));
            let shared = p[start];
            groups.push(CauseGroup::shared((start..start + size).collect(), shared, 0.0, factor).unwrap());
            start += size;
        }
        let q: Vec<f64> = groups
            .iter()
            .flat_map(|g| {
                let netvoi::GroupLaw::Shared { p, .. } = *g.law() else { unreachable!() };
                g.members().iter().map(move |_| p)
            })
            .collect();
        let cc = JointDistribution::common_cause(n, groups).unwrap().pmf_table();
        let ind = JointDistribution::independent(q).unwrap().pmf_table();
        for (a, b) in cc.iter().zip(&ind) {
            worst = worst.max((a - b).abs());
        }
    }
    o.check(worst <= IDENTITY_TOL, format!("rho = 0 groups vs independent: max deviation {worst:.2e}"));

    // Monte Carlo against exact values
    let (mut misses, mut total) = (0, 0);
    for k in 0..INSTANCES {
        let n = rng.random_range(1..=8);
        let net = common::random_network(&mut rng, n);
        let dist = common::random_distribution(&mut rng, n);
        let cfg = SimulationConfig::new(4_000, k as u64).unwrap();
        let exact = system_failure_prob(&net, &dist).unwrap();
        total += 1;
        if !mc_system_failure(&net, &dist, &cfg).unwrap().agrees_with(exact) {
            misses += 1;
        }
        if k % 5 == 0 {
            let costs = common::random_costs(&mut rng, n);
            let sensors = common::random_sensors(&mut rng, n);
            let i = rng.random_range(0..n);
            let exact = voi_local(&net, &dist, &sensors, &costs).unwrap().voi[i];
            let est = mc_voi_local(&net, &dist, &sensors.for_component(i), &costs, i, &cfg).unwrap();
            total += 1;
            if !est.agrees_with(exact) {
                misses += 1;
            }
        }
    }
    let share = misses as f64 / total as f64;
    o.check(
        share <= MC_MISS_SHARE,
        format!("Monte Carlo within 3 sigma: {misses} of {total} outside ({:.2}%)", 100.0 * share),
    );
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let map = policy_map(0.0, 0.2, POLICY_GRID).unwrap();
    let c_r = 0.2;
    let mut bad = 0;
    for (a, &p1) in map.axis.iter().enumerate() {
        for (b, &p2) in map.axis.iter().enumerate().take(a + 1) {
            let l1 = p1 * c_r + c_r.min(p2);
            let l2 = p2 * c_r + c_r.min(p1);
            let want = if (l1 - l2).abs() <= 1e-12 {
                PairDecision::Tie
            } else if l1 < l2 {
                PairDecision::InspectFirst
            } else {
                PairDecision::InspectSecond
            };
            if map.cells[a][b] != Some(want) {
                bad += 1;
            }
        }
    }
    o.check(bad == 0, format!("rho = 0 map vs analytic rule: {bad} of {} cells differ", POLICY_GRID * (POLICY_GRID + 1) / 2));

    let mut counts = Vec::new();
    let mut frechet_bad = 0;
    for rho in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let map = policy_map(rho, 0.2, POLICY_GRID).unwrap();
        let mut count = 0;
        for (a, &p1) in map.axis.iter().enumerate() {
            for (b, &p2) in map.axis.iter().enumerate().take(a + 1) {
                let both = p1 * p2 + rho * (p1 * (1.0 - p1) * p2 * (1.0 - p2)).sqrt();
                let feasible = both >= (p1 + p2 - 1.0).max(0.0) - 1e-12 && both <= p2.min(p1) + 1e-12;
                if feasible != map.cells[a][b].is_some() {
                    frechet_bad += 1;
                }
                count += usize::from(feasible);
            }
        }
        counts.push(count);
    }
    o.check(frechet_bad == 0, format!("feasible cells follow the Frechet bounds ({frechet_bad} differ)"));
    o.check(
        counts.windows(2).all(|w| w[1] < w[0]),
        format!("feasible region shrinks with rho: {counts:?} cells for rho = 0, 0.2, ..., 0.8"),
    );
    let p = series_pair_policy(0.3, 0.1, 0.5, 0.2).unwrap();
    o.info(format!("rho = 0.5, p = (0.3, 0.1): {:?}", p.decision));
    o
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("two-component example", criterion_1, Duration::from_secs(1)),
        ("bi-linear sweep", criterion_2, Duration::from_secs(5)),
        ("six-component network, perfect sensors", criterion_3, Duration::from_secs(10)),
        ("six-component network, imperfect sensors", criterion_4, Duration::from_secs(10)),
        ("sixteen-component network", criterion_5, Duration::from_secs(600)),
        ("substation", criterion_6, Duration::from_secs(60)),
        ("property suites", criterion_7, Duration::from_secs(600)),
        ("series-pair policy map", criterion_8, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (k, (title, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        outcome.check(elapsed <= budget, format!("runtime {:.2}s (budget {}s)", elapsed.as_secs_f64(), budget.as_secs()));
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {title}", k + 1);
        for note in &outcome.notes {
            println!("       {note}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
