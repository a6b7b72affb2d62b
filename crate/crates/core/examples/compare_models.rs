//! One-sided permutation tests: is the walk model closer to an observed
//! graph than preferential attachment, metric by metric?

use arw_core::arw::{self, ArwParams};
use arw_core::fitting::{compare_models, CompareOptions, FitSetup};
use arw_core::growth::seed_clique;
use arw_core::model::ModelSpec;
use arw_core::schedule::GrowthSchedule;

fn main() -> arw_core::Result<()> {
    let truth = ArwParams::unattributed(0.5, 0.2, 0.5);
    let observed = arw::grow(&seed_clique(5, None), &GrowthSchedule::constant(3.0, 2_000), &truth, 31)?.graph;
    let setup = FitSetup::from_observed(&observed)?;

    let options = CompareOptions { replicates: 20, ..CompareOptions::default() };
    let report = compare_models(&setup, &ModelSpec::Arw(truth), &ModelSpec::Dms { attractiveness: 1.0 }, &options, 32)?;
    for m in &report.metrics {
        println!(
            "{:>14}: arw {:.4} vs dms {:.4}, p = {:.4}, significant at {:?}",
            m.metric, m.mean_a, m.mean_b, m.p_value, m.significant_at
        );
    }
    Ok(())
}
