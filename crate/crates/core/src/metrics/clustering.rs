use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};

/// Directed local clustering over the in-neighborhood: the fraction of
/// ordered pairs of in-neighbors `(a, b)` with an edge `a -> b`.
/// `None` when the node has fewer than two in-neighbors.
pub fn local_clustering(graph: &TemporalDigraph, node: NodeId) -> Option<f64> {
    let mut marks = vec![u32::MAX; graph.node_count()];
    clustering_with_marks(graph, node, &mut marks)
}

fn clustering_with_marks(graph: &TemporalDigraph, node: NodeId, marks: &mut [u32]) -> Option<f64> {
    let ins = graph.in_neighbors(node);
    let k = ins.len();
    if k < 2 {
        return None;
    }
    for &a in ins {
        marks[a.index()] = node.0;
    }
    let links = ins
        .iter()
        .map(|&a| {
            graph
                .out_neighbors(a)
                .iter()
                .filter(|b| marks[b.index()] == node.0)
                .count()
        })
        .sum::<usize>();
    Some(links as f64 / (k * (k - 1)) as f64)
}

/// Local clustering of every node (`None` where undefined).
pub fn clustering_coefficients(graph: &TemporalDigraph) -> Vec<Option<f64>> {
    let mut marks = vec![u32::MAX; graph.node_count()];
    graph
        .nodes()
        .map(|v| clustering_with_marks(graph, v, &mut marks))
        .collect()
}

/// Mean local clustering over nodes where it is defined.
pub fn mean_local_clustering(graph: &TemporalDigraph) -> Option<f64> {
    let values: Vec<f64> = clustering_coefficients(graph).into_iter().flatten().collect();
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// One in-degree bin of a [`DegreeClusteringCurve`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveBin {
    pub nodes: usize,
    pub mean_clustering: f64,
}

/// Mean local clustering `c(k)` as a function of in-degree `k`, over nodes
/// with in-degree at least two.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegreeClusteringCurve {
    pub bins: BTreeMap<usize, CurveBin>,
}

impl DegreeClusteringCurve {
    pub fn from_graph(graph: &TemporalDigraph) -> Self {
        Self::from_coefficients(graph, &clustering_coefficients(graph))
    }

    pub fn from_coefficients(graph: &TemporalDigraph, coefficients: &[Option<f64>]) -> Self {
        let mut sums: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
        for (v, c) in graph.nodes().zip(coefficients) {
            if let Some(c) = c {
                let e = sums.entry(graph.in_degree(v)).or_default();
                e.0 += 1;
                e.1 += c;
            }
        }
        DegreeClusteringCurve {
            bins: sums
                .into_iter()
                .map(|(k, (n, s))| {
                    (
                        k,
                        CurveBin {
                            nodes: n,
                            mean_clustering: s / n as f64,
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

/// Weighted relative error between an observed curve `c(k)` and a model
/// curve `ĉ(k)`: `Σ_k w_k |c(k) - ĉ(k)| / c(k)` with `w_k ∝ n_k` over the
/// observed bins where `c(k) > 0`. Bins missing from the model count as
/// `ĉ(k) = 0`.
pub fn wre(observed: &DegreeClusteringCurve, model: &DegreeClusteringCurve) -> Result<f64> {
    let valid: Vec<(usize, &CurveBin)> = observed
        .bins
        .iter()
        .filter(|(_, b)| b.mean_clustering > 0.0)
        .map(|(&k, b)| (k, b))
        .collect();
    let total: usize = valid.iter().map(|(_, b)| b.nodes).sum();
    if total == 0 {
        return Err(Error::Undefined("WRE needs an observed bin with positive clustering"));
    }
    Ok(valid
        .iter()
        .map(|(k, b)| {
            let c_hat = model.bins.get(k).map_or(0.0, |m| m.mean_clustering);
            let w = b.nodes as f64 / total as f64;
            w * (b.mean_clustering - c_hat).abs() / b.mean_clustering
        })
        .sum())
}
