//! Local VoI, its heuristic lower bound and the optimal maintenance plan after
//! each inspection outcome.
//!
//! ```text
//! cargo run --example local_metric
//! ```

use netvoi::scenario::Scenario;
use netvoi::{posterior_action_table, voi_heuristic, voi_local, LocalCostModel, Observation, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig9.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let names = s.network.names();
    let sensors = Sensors::perfect();

    // repairing c2 costs twice as much as the others
    let costs = LocalCostModel::new(10.0, vec![1.0, 2.0, 1.0, 1.0, 1.0, 1.0])?;
    let table = posterior_action_table(&s.network, &s.distribution, &sensors, &costs)?;
    println!("prior plan {} with loss {:.4}", table.prior_plan.describe(names), table.prior_loss);
    for (i, name) in names.iter().enumerate() {
        let silence = table.entry(i, Observation::Silence);
        let alarm = table.entry(i, Observation::Alarm);
        println!(
            "{name}: silence -> {:<10} alarm -> {:<10} (P[alarm] = {:.3})",
            silence.plan.describe(names),
            alarm.plan.describe(names),
            alarm.probability
        );
    }

    let exact = voi_local(&s.network, &s.distribution, &sensors, &costs)?;
    let heuristic = voi_heuristic(&s.network, &s.distribution, &sensors, &costs)?;
    println!("\n{:>4} {:>10} {:>10}", "", "local", "heuristic");
    for (i, name) in names.iter().enumerate() {
        println!("{name:>4} {:>10.5} {:>10.5}", exact.voi[i], heuristic.voi[i]);
    }
    Ok(())
}
