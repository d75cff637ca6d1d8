//! System failure probability of a bridge network, exact and by simulation.
//!
//! ```text
//! cargo run --example reliability
//! ```

use netvoi::oracle::{mc_system_failure, SimulationConfig};
use netvoi::{system_failure_prob, JointDistribution, Network, Node, StGraph, StructureFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    use Node::{Component as C, Sink, Source};

    // a and b lead out of the source, d and e into the sink, c bridges a and b
    let edges = vec![
        (Source, C(0)),
        (Source, C(1)),
        (C(0), C(2)),
        (C(2), C(1)),
        (C(0), C(3)),
        (C(1), C(4)),
        (C(3), Sink),
        (C(4), Sink),
    ];
    let net = Network::new(
        ["a", "b", "c", "d", "e"].map(String::from).to_vec(),
        StructureFunction::Graph(StGraph::new(5, edges, false)?),
    )?;
    let dist = JointDistribution::independent(vec![0.05, 0.1, 0.02, 0.1, 0.05])?;

    let exact = system_failure_prob(&net, &dist)?;
    let est = mc_system_failure(&net, &dist, &SimulationConfig::new(200_000, 1)?)?;
    println!("exact      P[failure] = {exact:.6}");
    println!("simulated  P[failure] = {:.6} +/- {:.6}", est.mean, est.std_error);
    Ok(())
}
