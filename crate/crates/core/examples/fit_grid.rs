//! Grid-search the unattributed walk model against a graph grown from a
//! known cell and show the top of the ranking.

use arw_core::arw::{self, ArwParams};
use arw_core::fitting::{self, FitSetup, GridSpec};
use arw_core::growth::seed_clique;
use arw_core::model::ModelSpec;
use arw_core::schedule::GrowthSchedule;

fn main() -> arw_core::Result<()> {
    let truth = ArwParams::unattributed(0.35, 0.25, 0.65);
    let target = arw::grow(&seed_clique(5, None), &GrowthSchedule::constant(3.0, 2_000), &truth, 21)?.graph;

    let setup = FitSetup::from_observed(&target)?;
    let grid = GridSpec::explicit(
        ModelSpec::Arw(truth),
        vec!["p_jump".into(), "p_out".into()],
        [0.05, 0.25, 0.45, 0.65, 0.85]
            .iter()
            .flat_map(|&j| [0.05, 0.35, 0.65, 0.95].map(|o| vec![j, o]))
            .collect(),
    )
    .with_replicates(3);
    let result = fitting::fit(&setup, &grid, 22)?;

    println!("truth p_jump 0.25 p_out 0.65; best {:?}", result.best_cell);
    for cell in result.ranking().iter().take(5) {
        println!("  #{} {:?} l2 {:.4}", cell.rank.unwrap(), cell.values, cell.l2.unwrap());
    }
    Ok(())
}
