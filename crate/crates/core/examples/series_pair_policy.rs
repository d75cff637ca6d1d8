//! Which of two correlated components in series to inspect, over a grid of
//! failure probabilities. Prints a coarse text map: `1`/`2` for the
//! preferred component, `=` for ties and `.` where the correlation is
//! infeasible.
//!
//! ```text
//! cargo run --example series_pair_policy
//! ```

use netvoi::local::{policy_map, series_pair_policy, PairDecision};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = series_pair_policy(0.3, 0.1, 0.5, 0.2)?;
    println!("p = (0.3, 0.1), rho = 0.5: {:?}, losses {:?}\n", p.decision, p.losses);

    for rho in [0.0, 0.5, -0.5] {
        let map = policy_map(rho, 0.2, 41)?;
        println!("rho = {rho} ({} feasible cells), rows p1 from 1 down to 0, columns p2", map.feasible_count());
        for row in map.cells.iter().rev().step_by(2) {
            let line: String = row
                .iter()
                .map(|c| match c {
                    Some(PairDecision::InspectFirst) => '1',
                    Some(PairDecision::InspectSecond) => '2',
                    Some(PairDecision::Tie) => '=',
                    None => '.',
                })
                .collect();
            println!("  {line}");
        }
        println!();
    }
    Ok(())
}
