//! Densification power law: grow with a DPL out-degree schedule and recover
//! the exponent from snapshots.

use arw_core::arw::{self, ArwParams};
use arw_core::growth::seed_clique;
use arw_core::metrics::{dpl_exponent, snapshot_series_even};
use arw_core::schedule::GrowthSchedule;

fn main() -> arw_core::Result<()> {
    let initial = seed_clique(5, None);
    for alpha in [1.0, 1.1, 1.2] {
        let schedule = GrowthSchedule::densifying(alpha, 2.0, initial.node_count(), 20_000)?;
        let g = arw::grow(&initial, &schedule, &ArwParams::unattributed(0.5, 0.2, 0.5), 5)?.graph;
        let fitted = dpl_exponent(&snapshot_series_even(&g, 20))?;
        println!("alpha {alpha:.2}: {} edges, fitted exponent {fitted:.3}", g.edge_count());
    }
    Ok(())
}
