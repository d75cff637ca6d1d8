//! Classical importance measures next to the global VoI for the six-component
//! network.
//!
//! ```text
//! cargo run --example importance_measures
//! ```

use netvoi::scenario::Scenario;
use netvoi::{importance_measures, rank_global, LossEnvelope, Metric, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/fig9.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let sensors = Sensors::perfect();

    let imp = importance_measures(&s.network, &s.distribution, &sensors)?;
    let g = rank_global(&s.network, &s.distribution, &sensors, &LossEnvelope::Quadratic)?;

    println!("{:>4} {:>9} {:>9} {:>9} {:>9} {:>11}", "", "BM", "CRT", "RAW", "RRW", "VoI global");
    for (i, name) in imp.names.iter().enumerate() {
        let rrw = if imp.rrw_infinite[i] { "inf".to_string() } else { format!("{:.4}", imp.rrw[i]) };
        println!(
            "{name:>4} {:>9.4} {:>9.4} {:>9.4} {rrw:>9} {:>11.6}",
            imp.bm[i], imp.crt[i], imp.raw[i], g.voi[i]
        );
    }
    for m in [Metric::Bm, Metric::Crt, Metric::Raw] {
        let order = imp.ranking(m).expect("importance metric");
        println!("{m:>4} ranking: {:?}", order.iter().map(|&i| &imp.names[i]).collect::<Vec<_>>());
    }
    println!("VoI ranking: {:?}", g.ranking().iter().map(|&i| &g.names[i]).collect::<Vec<_>>());
    Ok(())
}
