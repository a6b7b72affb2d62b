use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::TemporalDigraph;

/// Maximum-likelihood lognormal fit `(μ, σ)` to positive in-degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LognormalFit {
    pub mu: f64,
    pub sigma: f64,
}

/// Fits a lognormal to the positive entries of `in_degrees`; zeros are
/// dropped.
pub fn lognormal_fit(in_degrees: &[usize]) -> Result<LognormalFit> {
    let logs: Vec<f64> = in_degrees
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| (k as f64).ln())
        .collect();
    lognormal_fit_values(&logs)
}

/// Lognormal MLE from already log-transformed values.
pub fn lognormal_fit_values(logs: &[f64]) -> Result<LognormalFit> {
    if logs.len() < 2 {
        return Err(Error::Undefined("lognormal fit needs at least two positive values"));
    }
    let n = logs.len() as f64;
    let mu = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
    Ok(LognormalFit { mu, sigma: var.sqrt() })
}

/// Node and edge counts of one temporal snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotSize {
    pub nodes: usize,
    pub edges: usize,
}

/// Least-squares slope of `ln e(t)` against `ln n(t)`.
pub fn dpl_exponent(snapshots: &[SnapshotSize]) -> Result<f64> {
    if snapshots.len() < 3 {
        return Err(Error::Undefined("densification exponent needs at least three snapshots"));
    }
    if snapshots.iter().any(|s| s.nodes == 0 || s.edges == 0) {
        return Err(Error::Undefined("densification exponent needs nonempty snapshots"));
    }
    let xs: Vec<f64> = snapshots.iter().map(|s| (s.nodes as f64).ln()).collect();
    let ys: Vec<f64> = snapshots.iter().map(|s| (s.edges as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::Undefined("snapshots all have the same node count"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Edge counts of the prefixes `0..cutoff` for each cutoff (non-decreasing).
fn prefix_edge_counts(graph: &TemporalDigraph, cutoffs: &[usize]) -> Vec<SnapshotSize> {
    // an edge enters the snapshot once both endpoints have arrived
    let mut entering = vec![0usize; graph.node_count() + 1];
    for &(s, d) in graph.edges() {
        entering[s.index().max(d.index()) + 1] += 1;
    }
    let mut acc = 0usize;
    let cumulative: Vec<usize> = entering
        .into_iter()
        .map(|c| {
            acc += c;
            acc
        })
        .collect();
    cutoffs
        .iter()
        .map(|&c| SnapshotSize {
            nodes: c,
            edges: cumulative[c.min(graph.node_count())],
        })
        .collect()
}

/// Cumulative snapshot sizes at the end of every distinct epoch.
pub fn snapshot_series_by_epoch(graph: &TemporalDigraph) -> Vec<SnapshotSize> {
    let mut ends: BTreeMap<i64, usize> = BTreeMap::new();
    for v in graph.nodes() {
        let e = ends.entry(graph.epoch(v)).or_insert(0);
        *e = (*e).max(v.index() + 1);
    }
    let mut cutoffs: Vec<usize> = ends.into_values().collect();
    cutoffs.sort_unstable();
    prefix_edge_counts(graph, &cutoffs)
}

/// `count` snapshots with evenly spaced node counts ending at the full
/// graph.
pub fn evenly_spaced_cutoffs(node_count: usize, count: usize) -> Vec<usize> {
    (1..=count)
        .map(|i| (node_count * i) / count)
        .filter(|&c| c > 0)
        .collect()
}

/// Sizes of `count` evenly spaced node-prefix snapshots.
pub fn snapshot_series_even(graph: &TemporalDigraph, count: usize) -> Vec<SnapshotSize> {
    prefix_edge_counts(graph, &evenly_spaced_cutoffs(graph.node_count(), count))
}

/// Densification exponent across epoch snapshots, falling back to evenly
/// spaced node prefixes when there are fewer than three epochs.
pub fn graph_dpl_exponent(graph: &TemporalDigraph) -> Result<f64> {
    let mut series: Vec<SnapshotSize> = snapshot_series_by_epoch(graph)
        .into_iter()
        .filter(|s| s.edges > 0)
        .collect();
    if series.len() < 3 {
        series = snapshot_series_even(graph, 10)
            .into_iter()
            .filter(|s| s.edges > 0)
            .collect();
    }
    dpl_exponent(&series)
}

/// Counts of each integer value, as `(value, count)` in ascending order.
pub fn histogram(values: &[usize]) -> Vec<(usize, usize)> {
    let mut h: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in values {
        *h.entry(v).or_default() += 1;
    }
    h.into_iter().collect()
}
