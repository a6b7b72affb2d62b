//! Reference growth models and the configuration null model.
//!
//! All scheduled models consume the same [`GrowthSchedule`] as the
//! attributed random walk, so comparisons hold the out-degree sequence and
//! the attribute stream fixed. Preferential weights use in-degree plus an
//! attractiveness offset, since every newly arrived node has in-degree zero.

mod preferential;
mod rewire;
mod sampler;
mod walks;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, check_probability};
use crate::graph::TemporalDigraph;
use crate::growth::{self, Generated};
use crate::schedule::GrowthSchedule;

pub use rewire::{SWAPS_PER_EDGE, configuration_rewire};

use preferential::PreferentialAttach;
use walks::{ForestFireAttach, MuWalkAttach, UniformAttach};

fn check_initial(initial: &TemporalDigraph) -> Result<()> {
    if initial.is_empty() {
        Err(Error::EmptyGraph)
    } else {
        Ok(())
    }
}

fn check_attractiveness(a: f64) -> Result<()> {
    if a.is_finite() && a >= 0.0 {
        Ok(())
    } else {
        Err(Error::param("attractiveness", format!("{a} is negative or not finite")))
    }
}

/// Each new node links `m(t)` distinct existing nodes chosen uniformly.
pub fn grow_uniform(initial: &TemporalDigraph, schedule: &GrowthSchedule, rng_seed: u64) -> Result<Generated> {
    check_initial(initial)?;
    growth::drive(initial, schedule, rng_seed, &mut UniformAttach)
}

/// Preferential attachment with weight `in_degree + attractiveness`.
pub fn grow_dms(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    attractiveness: f64,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    check_attractiveness(attractiveness)?;
    let mut attach = PreferentialAttach::new(initial, attractiveness, 1.0, 0.0);
    growth::drive(initial, schedule, rng_seed, &mut attach)
}

/// Preferential first link, then triangle closing with probability
/// `p_triangle` for each further link.
pub fn grow_hk(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    p_triangle: f64,
    attractiveness: f64,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    check_probability("p_triangle", p_triangle)?;
    check_attractiveness(attractiveness)?;
    let mut attach = PreferentialAttach::new(initial, attractiveness, 1.0, p_triangle);
    growth::drive(initial, schedule, rng_seed, &mut attach)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SanParams {
    pub p_triangle: f64,
    /// Weight multiplier for targets with a different attribute.
    pub sigma: f64,
    #[serde(default = "default_attractiveness")]
    pub attractiveness: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KaParams {
    /// Weight multiplier for targets with a different attribute.
    pub sigma: f64,
    #[serde(default = "default_attractiveness")]
    pub attractiveness: f64,
}

pub(crate) fn default_attractiveness() -> f64 {
    1.0
}

/// Holme-Kim style growth whose preferential step is weighted by attribute
/// similarity.
pub fn grow_san(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    params: &SanParams,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    check_probability("p_triangle", params.p_triangle)?;
    check_probability("sigma", params.sigma)?;
    check_attractiveness(params.attractiveness)?;
    let mut attach = PreferentialAttach::new(initial, params.attractiveness, params.sigma, params.p_triangle);
    growth::drive(initial, schedule, rng_seed, &mut attach)
}

/// Fitness attachment: weight `(in_degree + attractiveness) * similarity`.
pub fn grow_ka(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    params: &KaParams,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    check_probability("sigma", params.sigma)?;
    check_attractiveness(params.attractiveness)?;
    let mut attach = PreferentialAttach::new(initial, params.attractiveness, params.sigma, 0.0);
    growth::drive(initial, schedule, rng_seed, &mut attach)
}

/// Undirected walk from a uniform start that links each visited node with
/// probability `mu`.
pub fn grow_rw_mu(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    mu: f64,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    check_probability("mu", mu)?;
    if mu <= 0.0 {
        return Err(Error::param("mu", "must be positive or the walk never links"));
    }
    growth::drive(initial, schedule, rng_seed, &mut MuWalkAttach::new(mu))
}

/// Forest fire. Out-degrees are emergent; only the schedule's length,
/// epochs and attribute stream are used.
pub fn grow_forest_fire(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    p_forward: f64,
    p_backward: f64,
    rng_seed: u64,
) -> Result<Generated> {
    check_initial(initial)?;
    let mut attach = ForestFireAttach::new(p_forward, p_backward)?;
    growth::drive(initial, schedule, rng_seed, &mut attach)
}
