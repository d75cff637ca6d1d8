//! Substation with three disconnect switches sharing a common cause. Shows how
//! the ranking moves as their failure correlation grows.
//!
//! ```text
//! cargo run --release --example substation
//! ```

use netvoi::scenario::Scenario;
use netvoi::{voi_local, CauseGroup, FactorModel, JointDistribution, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/substation.json");
    let mut s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let costs = s.costs.clone().expect("fixture has costs");
    let n = s.network.n();
    let p = s.distribution.marginal_failures();

    for rho in [0.0, 0.4, 0.9] {
        let mut groups = vec![CauseGroup::shared(vec![0, 1, 2], p[0], rho, FactorModel::Bernoulli)?];
        for (i, &p_i) in p.iter().enumerate().skip(3) {
            groups.push(CauseGroup::single(i, p_i)?);
        }
        s.distribution = JointDistribution::common_cause(n, groups)?;
        let report = voi_local(&s.network, &s.distribution, &Sensors::perfect(), &costs)?;
        let top: Vec<String> = report
            .ranking()
            .into_iter()
            .take(5)
            .map(|i| format!("{} {:.3}", report.names[i], report.voi[i]))
            .collect();
        println!("rho = {rho}: {}", top.join(", "));
    }
    Ok(())
}
