//! Local VoI on a sixteen-component directed network. Builds the full table
//! of 2^16 plan losses, so run it in release mode.
//!
//! ```text
//! cargo run --release --example sixteen_component
//! ```

use std::time::Instant;

use netvoi::scenario::Scenario;
use netvoi::{voi_local, LocalCostModel, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig13.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let n = s.network.n();

    for ratio in [1e3, 1e4] {
        let costs = LocalCostModel::uniform(n, ratio, 1.0)?;
        let start = Instant::now();
        let report = voi_local(&s.network, &s.distribution, &Sensors::perfect(), &costs)?;
        let prior = report.plans.as_ref().map(|p| p.prior.describe(&report.names));
        println!("C_F/C_R = {ratio:e}: prior plan {}, {:.2?}", prior.unwrap_or_default(), start.elapsed());
        for i in report.ranking().into_iter().take(6) {
            println!("  {:>4} {:.5}", report.names[i], report.voi[i]);
        }
    }
    Ok(())
}
