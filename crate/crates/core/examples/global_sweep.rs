//! Global VoI of two components as the repair/failure cost ratio of a binary
//! decision varies. Each component is worth inspecting only while the
//! decision threshold lies inside its posterior interval.
//!
//! ```text
//! cargo run --example global_sweep
//! ```

use netvoi::global::voi_from_interval;
use netvoi::scenario::Scenario;
use netvoi::{posterior_intervals, regret_value, LossEnvelope, Sensors};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two_interval.json");
    let s = Scenario::from_json(&std::fs::read_to_string(path)?, 20)?;
    let iv = posterior_intervals(&s.network, &s.distribution, &Sensors::perfect())?;

    println!("{:>8} {:>10} {:>10} {:>10}", "p_tilde", "regret", "VoI(c1)", "VoI(c2)");
    for k in 1..=25 {
        let p_tilde = 0.002 * f64::from(k);
        let env = LossEnvelope::binary_with_peak(p_tilde)?;
        let rg = regret_value(&env, iv[0].prior)?;
        let v1 = voi_from_interval(&iv[0], &env)?.voi;
        let v2 = voi_from_interval(&iv[1], &env)?.voi;
        println!("{p_tilde:>8.3} {rg:>10.6} {v1:>10.6} {v2:>10.6}");
    }
    Ok(())
}
