//! Structural and mixing measurements, and the distances between an
//! observed graph and a generated one.

mod assortativity;
mod clustering;
mod degrees;
mod ks;
mod paths;
mod report;
mod stats;

pub use assortativity::{
    LocalAssortativity, MixingMatrix, global_assortativity, local_assortativity, same_attribute_edge_fractions,
};
pub use clustering::{
    CurveBin, DegreeClusteringCurve, clustering_coefficients, local_clustering, mean_local_clustering, wre,
};
pub use degrees::{
    LognormalFit, SnapshotSize, dpl_exponent, evenly_spaced_cutoffs, graph_dpl_exponent, histogram, lognormal_fit,
    lognormal_fit_values, snapshot_series_by_epoch, snapshot_series_even,
};
pub use ks::{ks_p_value, ks_statistic};
pub use paths::{
    DistanceCensus, EFFECTIVE_DIAMETER_QUANTILE, average_path_length, effective_diameter,
    effective_diameter_interpolated, proximity_statistic, proximity_statistics,
};
pub use report::{Measure, MetricsReport, ReportOptions};
pub use stats::{mean, percentile, permutation_test_one_sided, spearman, standard_error, std_dev};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::TemporalDigraph;

/// Distances between an observed graph and one generated graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub ks_indegree: f64,
    pub ks_clustering: f64,
    pub wre: f64,
    /// `|r_G - r_Ĝ|`, absent when the observed graph has no defined
    /// assortativity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assort_abs_error: Option<f64>,
}

impl MetricVector {
    pub const NAMES: [&'static str; 4] = ["ks_indegree", "ks_clustering", "wre", "assort_abs_error"];

    /// Components in [`Self::NAMES`] order, with the assortativity error
    /// only when present and requested.
    pub fn components(&self, include_assortativity: bool) -> Vec<f64> {
        let mut v = vec![self.ks_indegree, self.ks_clustering, self.wre];
        if include_assortativity {
            if let Some(a) = self.assort_abs_error {
                v.push(a);
            }
        }
        v
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "ks_indegree" => Some(self.ks_indegree),
            "ks_clustering" => Some(self.ks_clustering),
            "wre" => Some(self.wre),
            "assort_abs_error" => self.assort_abs_error,
            _ => None,
        }
    }

    /// Component-wise mean. Assortativity is kept only if every vector has
    /// it.
    pub fn mean_of(vectors: &[MetricVector]) -> Option<MetricVector> {
        if vectors.is_empty() {
            return None;
        }
        let n = vectors.len() as f64;
        let avg = |f: fn(&MetricVector) -> f64| vectors.iter().map(f).sum::<f64>() / n;
        let assort: Option<Vec<f64>> = vectors.iter().map(|v| v.assort_abs_error).collect();
        Some(MetricVector {
            ks_indegree: avg(|v| v.ks_indegree),
            ks_clustering: avg(|v| v.ks_clustering),
            wre: avg(|v| v.wre),
            assort_abs_error: assort.map(|a| a.iter().sum::<f64>() / n),
        })
    }
}

/// Measurements of a graph that the comparison metrics need.
#[derive(Clone, Debug)]
pub struct GraphProfile {
    pub in_degrees: Vec<f64>,
    pub clustering: Vec<f64>,
    pub curve: DegreeClusteringCurve,
    pub assortativity: Option<f64>,
}

impl GraphProfile {
    pub fn new(graph: &TemporalDigraph) -> Self {
        let coefficients = clustering_coefficients(graph);
        GraphProfile {
            in_degrees: graph.in_degrees().into_iter().map(|k| k as f64).collect(),
            clustering: coefficients.iter().flatten().copied().collect(),
            curve: DegreeClusteringCurve::from_coefficients(graph, &coefficients),
            assortativity: if graph.is_attributed() {
                global_assortativity(graph).ok()
            } else {
                None
            },
        }
    }

    /// Distances from this (observed) profile to a generated one.
    ///
    /// A generated graph with no defined clustering scores the maximal
    /// KS distance 1; an observed graph without any positive clustering bin
    /// scores WRE 0 for every model; an undefined generated assortativity
    /// counts as 0.
    pub fn compare(&self, generated: &GraphProfile) -> Result<MetricVector> {
        let ks_indegree = ks_statistic(&self.in_degrees, &generated.in_degrees)?;
        let ks_clustering = match (self.clustering.is_empty(), generated.clustering.is_empty()) {
            (true, true) => 0.0,
            (true, false) | (false, true) => 1.0,
            (false, false) => ks_statistic(&self.clustering, &generated.clustering)?,
        };
        let wre = wre(&self.curve, &generated.curve).unwrap_or(0.0);
        let assort_abs_error = self
            .assortativity
            .map(|r| (r - generated.assortativity.unwrap_or(0.0)).abs());
        Ok(MetricVector {
            ks_indegree,
            ks_clustering,
            wre,
            assort_abs_error,
        })
    }

    pub fn compare_graph(&self, generated: &TemporalDigraph) -> Result<MetricVector> {
        self.compare(&GraphProfile::new(generated))
    }
}
