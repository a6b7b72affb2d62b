//! Grow an attributed random-walk graph and print its headline statistics.
//!
//! cargo run --release --example grow_arw -- [nodes] [seed]

use arw_core::arw::{self, ArwParams};
use arw_core::growth::seed_clique;
use arw_core::metrics::{global_assortativity, mean_local_clustering};
use arw_core::schedule::{AttributeSchedule, GrowthSchedule};

fn main() -> arw_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let nodes: usize = args.next().map_or(20_000, |a| a.parse().expect("nodes"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));

    let labels: Vec<String> = (0..3).map(|i| format!("c{i}")).collect();
    let initial = seed_clique(5, Some(&labels));
    let schedule = GrowthSchedule::constant(4.0, nodes - initial.node_count())
        .with_attributes(AttributeSchedule::balanced(3));

    for (name, params) in [
        ("homophilous", ArwParams::attributed(0.6, 0.05, 0.2, 0.5)),
        ("neutral", ArwParams::attributed(0.3, 0.3, 0.2, 0.5)),
        ("heterophilous", ArwParams::attributed(0.05, 0.6, 0.2, 0.5)),
    ] {
        let run = arw::grow(&initial, &schedule, &params, seed)?;
        let g = &run.graph;
        println!(
            "{name:>14}: {} nodes, {} edges, clustering {:.3}, r {:+.3}, truncated steps {}",
            g.node_count(),
            g.edge_count(),
            mean_local_clustering(g).unwrap_or(0.0),
            global_assortativity(g)?,
            run.report.truncations,
        );
    }
    Ok(())
}
