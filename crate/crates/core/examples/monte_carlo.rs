//! Checks exact local VoI values against the pre-posterior simulation on a
//! correlated scenario.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use netvoi::oracle::{mc_voi_local, SimulationConfig};
use netvoi::scenario::Scenario;
use netvoi::voi_local;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig9.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let costs = s.costs.clone().expect("fixture has costs");
    let sensors = netvoi::Sensors::uniform(0.05, 0.1)?;
    let exact = voi_local(&s.network, &s.distribution, &sensors, &costs)?;
    let cfg = SimulationConfig::new(100_000, 42)?;

    println!("{:>4} {:>10} {:>10} {:>10} {:>6}", "", "exact", "simulated", "std err", "ok");
    for i in 0..s.network.n() {
        let est = mc_voi_local(&s.network, &s.distribution, &sensors.for_component(i), &costs, i, &cfg)?;
        println!(
            "{:>4} {:>10.5} {:>10.5} {:>10.5} {:>6}",
            exact.names[i],
            exact.voi[i],
            est.mean,
            est.std_error,
            est.agrees_with(exact.voi[i])
        );
    }
    Ok(())
}
