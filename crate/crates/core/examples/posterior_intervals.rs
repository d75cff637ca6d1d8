//! Posterior failure intervals of the two-interval scenario and how they
//! compare.
//!
//! ```text
//! cargo run --example posterior_intervals
//! ```

use netvoi::scenario::Scenario;
use netvoi::{interval_dominates, posterior_intervals, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_interval.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;

    for sensors in [Sensors::perfect(), Sensors::uniform(0.05, 0.1)?] {
        println!("{sensors:?}");
        let iv = posterior_intervals(&s.network, &s.distribution, &sensors)?;
        println!("  prior P[failure] = {:.5}", iv[0].prior);
        for (name, x) in s.network.names().iter().zip(&iv) {
            println!(
                "  {name:>3}: silence {:.5}  alarm {:.5}  P[alarm] {:.5}",
                x.lo, x.hi, x.alarm_prob
            );
        }
        println!("  c1 vs c2: {:?}", interval_dominates(&iv[0], &iv[1])?);
    }
    Ok(())
}
