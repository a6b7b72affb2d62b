use rand::SeedableRng;
use rand::seq::index;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    DistanceCensus, EFFECTIVE_DIAMETER_QUANTILE, LocalAssortativity, LognormalFit, MixingMatrix, clustering_coefficients,
    graph_dpl_exponent, lognormal_fit, mean, proximity_statistics,
};
use crate::error::Result;
use crate::graph::{NodeId, TemporalDigraph};

/// A scalar measurement or the reason it is undefined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undefined: Option<String>,
}

impl Measure {
    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Measure {
                value: Some(v),
                undefined: None,
            },
            Err(e) => Measure {
                value: None,
                undefined: Some(e.to_string()),
            },
        }
    }

    fn from_option(v: Option<f64>, reason: &str) -> Self {
        Measure {
            value: v,
            undefined: v.is_none().then(|| reason.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportOptions {
    /// BFS sources for distance statistics.
    pub path_sample: usize,
    /// Nodes sampled for the mean proximity statistic.
    pub proximity_sample: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            path_sample: 1000,
            proximity_sample: 1000,
            seed: 0,
        }
    }
}

/// Every graph-level measurement, plus the per-node values behind the CSV
/// dumps.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub weak_components: usize,
    pub temporal_violations: usize,
    pub mean_out_degree: Measure,
    pub in_degree_lognormal: Option<LognormalFit>,
    pub mean_clustering: Measure,
    pub clustered_nodes: usize,
    pub global_assortativity: Measure,
    pub mixing_matrix: Option<MixingMatrix>,
    pub mean_local_assortativity: Measure,
    pub effective_diameter: Measure,
    pub effective_diameter_interpolated: Measure,
    pub average_path_length: Measure,
    pub dpl_exponent: Measure,
    pub mean_proximity: Measure,
    #[serde(skip)]
    pub clustering: Vec<Option<f64>>,
    #[serde(skip)]
    pub local_assortativity: Vec<Option<f64>>,
}

impl MetricsReport {
    pub fn compute(graph: &TemporalDigraph, options: &ReportOptions) -> Self {
        let n = graph.node_count();
        let clustering = clustering_coefficients(graph);
        let defined: Vec<f64> = clustering.iter().flatten().copied().collect();

        let mixing = MixingMatrix::from_graph(graph);
        let global = match &mixing {
            Ok(m) => Measure::from_result(m.assortativity()),
            Err(e) => Measure::from_option(None, &e.to_string()),
        };
        let local_values: Vec<Option<f64>> = match LocalAssortativity::new(graph) {
            Ok(mut la) => graph.nodes().map(|v| la.at(v)).collect(),
            Err(_) => vec![None; n],
        };
        let local_defined: Vec<f64> = local_values.iter().flatten().copied().collect();

        let census = DistanceCensus::sampled(graph, options.path_sample, options.seed);
        let proximity: Vec<f64> = proximity_statistics(graph, &proximity_sample(graph, options))
            .into_iter()
            .flatten()
            .collect();

        MetricsReport {
            nodes: n,
            edges: graph.edge_count(),
            weak_components: graph.weak_component_count(),
            temporal_violations: graph.temporal_violations(),
            mean_out_degree: Measure::from_option(
                (n > 0).then(|| graph.edge_count() as f64 / n as f64),
                "empty graph",
            ),
            in_degree_lognormal: lognormal_fit(&graph.in_degrees()).ok(),
            mean_clustering: Measure::from_option(mean(&defined), "no node has two in-neighbors"),
            clustered_nodes: defined.len(),
            global_assortativity: global,
            mixing_matrix: mixing.ok(),
            mean_local_assortativity: Measure::from_option(mean(&local_defined), "local assortativity undefined"),
            effective_diameter: Measure::from_result(census.quantile(EFFECTIVE_DIAMETER_QUANTILE)),
            effective_diameter_interpolated: Measure::from_result(
                census.interpolated_quantile(EFFECTIVE_DIAMETER_QUANTILE),
            ),
            average_path_length: Measure::from_result(census.mean()),
            dpl_exponent: Measure::from_result(graph_dpl_exponent(graph)),
            mean_proximity: Measure::from_option(mean(&proximity), "no node has two earlier targets"),
            clustering,
            local_assortativity: local_values,
        }
    }
}

fn proximity_sample(graph: &TemporalDigraph, options: &ReportOptions) -> Vec<NodeId> {
    let candidates: Vec<NodeId> = graph
        .nodes()
        .filter(|&v| graph.out_neighbors(v).iter().filter(|t| t.index() < v.index()).count() >= 2)
        .collect();
    if candidates.len() <= options.proximity_sample {
        return candidates;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x5052_4f58);
    let mut picked: Vec<NodeId> = index::sample(&mut rng, candidates.len(), options.proximity_sample)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    picked.sort_unstable();
    picked
}
