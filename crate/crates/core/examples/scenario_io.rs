//! Builds a scenario document in code, writes it as JSON, reads it back and
//! renders a report.
//!
//! ```text
//! cargo run --example scenario_io
//! ```

use netvoi::output::{intervals_report, voi_report};
use netvoi::scenario::{parse_scenario, Scenario};
use netvoi::{posterior_intervals, rank_global};

const DOCUMENT: &str = r#"{
  "schema_version": "1",
  "name": "pump station",
  "components": [
    {"id": "pump_a", "p_fail": 0.05},
    {"id": "pump_b", "p_fail": 0.05},
    {"id": "valve", "p_fail": 0.02},
    {"id": "power", "p_fail": 0.01}
  ],
  "structure": {"formula": "series(parallel(pump_a, pump_b), valve, power)"},
  "dependence": {"type": "groups", "groups": [{"members": ["pump_a", "pump_b"], "rho": 0.3}]},
  "inspection": {"eps_fa": 0.02, "eps_fs": 0.05},
  "global": {"envelope": "binary", "c_repair": 1.0, "c_fail": 20.0}
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_scenario(DOCUMENT)?;
    let json = doc.to_json();
    assert_eq!(parse_scenario(&json)?, doc);
    println!("{json}");

    let s = Scenario::build(&doc, 20)?;
    let iv = posterior_intervals(&s.network, &s.distribution, &s.sensors)?;
    print!("{}", intervals_report(s.network.names(), &iv).to_csv());

    let env = s.envelope.clone().expect("document has a global section");
    let report = rank_global(&s.network, &s.distribution, &s.sensors, &env)?;
    print!("{}", voi_report(&report).to_json());

    match parse_scenario(r#"{"schema_version": "1", "components": []}"#) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("invalid document: {e}"),
    }
    Ok(())
}
