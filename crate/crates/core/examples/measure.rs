//! Full metrics report for a graph directory (nodes.tsv + edges.tsv), or for
//! a freshly grown graph when no directory is given.

use arw_core::arw::{self, ArwParams};
use arw_core::growth::seed_clique;
use arw_core::io::load_graph;
use arw_core::metrics::{MetricsReport, ReportOptions};
use arw_core::schedule::{AttributeSchedule, GrowthSchedule};

fn main() -> arw_core::Result<()> {
    let graph = match std::env::args().nth(1) {
        Some(dir) => load_graph(dir)?.graph,
        None => {
            let labels = vec!["c0".to_string(), "c1".to_string()];
            let schedule = GrowthSchedule::constant(3.0, 5_000).with_attributes(AttributeSchedule::balanced(2));
            arw::grow(&seed_clique(5, Some(&labels)), &schedule, &ArwParams::attributed(0.5, 0.1, 0.2, 0.5), 3)?.graph
        }
    };
    let report = MetricsReport::compute(&graph, &ReportOptions::default());
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
