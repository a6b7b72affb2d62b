//! Proximity of new links: mean distance, in the snapshot each node joined,
//! between the targets it linked to. Random-walk growth keeps targets close;
//! uniform attachment does not.

use arw_core::arw::{self, ArwParams};
use arw_core::baselines;
use arw_core::growth::seed_clique;
use arw_core::metrics::{mean, proximity_statistics};
use arw_core::schedule::GrowthSchedule;
use arw_core::NodeId;

fn main() -> arw_core::Result<()> {
    let initial = seed_clique(5, None);
    let schedule = GrowthSchedule::constant(3.0, 3_000);
    let walk = arw::grow(&initial, &schedule, &ArwParams::unattributed(0.5, 0.1, 0.5), 9)?.graph;
    let uniform = baselines::grow_uniform(&initial, &schedule, 9)?.graph;

    for (name, g) in [("arw", &walk), ("uniform", &uniform)] {
        let late: Vec<NodeId> = (g.node_count() - 500..g.node_count()).map(|i| NodeId(i as u32)).collect();
        let stats: Vec<f64> = proximity_statistics(g, &late).into_iter().flatten().collect();
        println!("{name:>8}: mean proximity {:.3} over {} nodes", mean(&stats).unwrap_or(f64::NAN), stats.len());
    }
    Ok(())
}
