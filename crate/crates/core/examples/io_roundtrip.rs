//! Write a graph as nodes.tsv / edges.tsv, read it back and check that
//! nothing changed.

use arw_core::arw::{self, ArwParams};
use arw_core::growth::seed_clique;
use arw_core::io::{load_graph, save_graph};
use arw_core::schedule::{AttributeSchedule, GrowthSchedule};

fn main() -> arw_core::Result<()> {
    let labels = vec!["c0".to_string(), "c1".to_string()];
    let schedule = GrowthSchedule::constant(2.5, 1_000).with_attributes(AttributeSchedule::balanced(2));
    let g = arw::grow(&seed_clique(4, Some(&labels)), &schedule, &ArwParams::attributed(0.4, 0.2, 0.3, 0.5), 1)?.graph;

    let dir = std::env::temp_dir().join("arw_io_roundtrip");
    save_graph(&g, &dir)?;
    let loaded = load_graph(&dir)?;
    println!("wrote {} nodes / {} edges to {}", g.node_count(), g.edge_count(), dir.display());
    println!("ingest report: {:?}", loaded.report);
    println!("edges identical: {}", loaded.graph.sorted_edges() == g.sorted_edges());
    Ok(())
}
