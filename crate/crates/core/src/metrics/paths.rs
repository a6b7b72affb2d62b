use std::collections::VecDeque;

use rand::SeedableRng;
use rand::seq::index;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};

/// Fraction of reachable pairs counted by the effective diameter.
pub const EFFECTIVE_DIAMETER_QUANTILE: f64 = 0.9;

/// Reusable breadth-first search over undirected adjacency.
pub(crate) struct Bfs {
    dist: Vec<u32>,
    touched: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl Bfs {
    pub(crate) fn new(n: usize) -> Self {
        Bfs {
            dist: vec![u32::MAX; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn clear(&mut self) {
        for v in self.touched.drain(..) {
            self.dist[v.index()] = u32::MAX;
        }
        self.queue.clear();
    }

    /// Runs from `source`, calling `visit(node, distance)` for every reached
    /// node other than the source. Stops early when `visit` returns false.
    pub(crate) fn run<I, N, F>(&mut self, source: NodeId, neighbors: N, mut visit: F)
    where
        I: Iterator<Item = NodeId>,
        N: Fn(NodeId) -> I,
        F: FnMut(NodeId, u32) -> bool,
    {
        self.clear();
        self.dist[source.index()] = 0;
        self.touched.push(source);
        self.queue.push_back(source);
        while let Some(v) = self.queue.pop_front() {
            let d = self.dist[v.index()] + 1;
            for w in neighbors(v) {
                if self.dist[w.index()] == u32::MAX {
                    self.dist[w.index()] = d;
                    self.touched.push(w);
                    self.queue.push_back(w);
                    if !visit(w, d) {
                        return;
                    }
                }
            }
        }
    }
}

/// Histogram of finite undirected shortest-path distances over ordered
/// (source, target) pairs, `counts[d]` for `d ≥ 1`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DistanceCensus {
    pub counts: Vec<u64>,
    pub sources: usize,
}

impl DistanceCensus {
    /// BFS from every node.
    pub fn exact(graph: &TemporalDigraph) -> Self {
        let sources: Vec<NodeId> = graph.nodes().collect();
        Self::from_sources(graph, &sources)
    }

    /// BFS from `sample_size` distinct uniformly drawn sources, or from
    /// every node when the graph is no larger than the sample.
    pub fn sampled(graph: &TemporalDigraph, sample_size: usize, rng_seed: u64) -> Self {
        let n = graph.node_count();
        if n <= sample_size {
            return Self::exact(graph);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut sources: Vec<NodeId> = index::sample(&mut rng, n, sample_size)
            .into_iter()
            .map(NodeId::from)
            .collect();
        sources.sort_unstable();
        Self::from_sources(graph, &sources)
    }

    pub fn from_sources(graph: &TemporalDigraph, sources: &[NodeId]) -> Self {
        let mut bfs = Bfs::new(graph.node_count());
        let mut counts = vec![0u64];
        for &s in sources {
            bfs.run(s, |v| graph.undirected_neighbors(v), |_, d| {
                let d = d as usize;
                if counts.len() <= d {
                    counts.resize(d + 1, 0);
                }
                counts[d] += 1;
                true
            });
        }
        DistanceCensus {
            counts,
            sources: sources.len(),
        }
    }

    pub fn pairs(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Cumulative fraction of pairs at distance ≤ d, for d = 0, 1, ...
    pub fn cdf(&self) -> Vec<f64> {
        let total = self.pairs() as f64;
        let mut acc = 0u64;
        self.counts
            .iter()
            .map(|&c| {
                acc += c;
                acc as f64 / total
            })
            .collect()
    }

    /// Smallest distance `d` with at least `q` of the pairs at distance ≤ d.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if self.pairs() == 0 {
            return Err(Error::Undefined("no connected pairs"));
        }
        let cdf = self.cdf();
        let d = cdf.iter().position(|&c| c >= q - 1e-12).unwrap_or(cdf.len() - 1);
        Ok(d as f64)
    }

    /// Distance at which the piecewise-linear interpolation of the CDF
    /// between consecutive integer distances reaches `q`.
    pub fn interpolated_quantile(&self, q: f64) -> Result<f64> {
        let d = self.quantile(q)? as usize;
        let cdf = self.cdf();
        let hi = cdf[d];
        let lo = if d == 0 { 0.0 } else { cdf[d - 1] };
        if hi <= lo {
            return Ok(d as f64);
        }
        Ok((d as f64 - 1.0) + (q - lo) / (hi - lo))
    }

    pub fn mean(&self) -> Result<f64> {
        let pairs = self.pairs();
        if pairs == 0 {
            return Err(Error::Undefined("no connected pairs"));
        }
        let sum: f64 = self
            .counts
            .iter()
            .enumerate()
            .map(|(d, &c)| d as f64 * c as f64)
            .sum();
        Ok(sum / pairs as f64)
    }
}

/// 90th percentile of undirected shortest-path distances, taken as the
/// smallest integer distance covering 90% of connected pairs.
pub fn effective_diameter(graph: &TemporalDigraph, sample_size: usize, rng_seed: u64) -> Result<f64> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    DistanceCensus::sampled(graph, sample_size, rng_seed).quantile(EFFECTIVE_DIAMETER_QUANTILE)
}

/// Effective diameter with linear interpolation of the distance CDF between
/// integer distances.
pub fn effective_diameter_interpolated(graph: &TemporalDigraph, sample_size: usize, rng_seed: u64) -> Result<f64> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    DistanceCensus::sampled(graph, sample_size, rng_seed).interpolated_quantile(EFFECTIVE_DIAMETER_QUANTILE)
}

/// Mean finite undirected shortest-path distance from sampled sources.
pub fn average_path_length(graph: &TemporalDigraph, sample_size: usize, rng_seed: u64) -> Result<f64> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    DistanceCensus::sampled(graph, sample_size, rng_seed).mean()
}

/// Mean pairwise undirected distance among the targets of `node`, measured
/// in the snapshot of nodes that arrived before it. Pairs in different
/// components count as one more than the largest finite distance reached
/// from any target. `None` when fewer than two targets predate the node.
pub fn proximity_statistic(graph: &TemporalDigraph, node: NodeId) -> Option<f64> {
    let mut bfs = Bfs::new(graph.node_count());
    let mut marks = vec![false; graph.node_count()];
    proximity_with(graph, node, &mut bfs, &mut marks)
}

/// [`proximity_statistic`] for each node in `nodes`.
pub fn proximity_statistics(graph: &TemporalDigraph, nodes: &[NodeId]) -> Vec<Option<f64>> {
    let mut bfs = Bfs::new(graph.node_count());
    let mut marks = vec![false; graph.node_count()];
    nodes
        .iter()
        .map(|&v| proximity_with(graph, v, &mut bfs, &mut marks))
        .collect()
}

fn proximity_with(graph: &TemporalDigraph, node: NodeId, bfs: &mut Bfs, marks: &mut [bool]) -> Option<f64> {
    let snap = graph.snapshot(node.index());
    let mut targets: Vec<NodeId> = graph
        .out_neighbors(node)
        .iter()
        .copied()
        .filter(|&t| snap.contains(t))
        .collect();
    targets.sort_unstable();
    targets.dedup();
    let k = targets.len();
    if k < 2 {
        return None;
    }
    for &t in &targets {
        marks[t.index()] = true;
    }
    let mut sum = 0.0;
    let mut missing = 0usize;
    for (i, &a) in targets.iter().enumerate() {
        let later = k - 1 - i;
        if later == 0 {
            break;
        }
        let mut found = 0usize;
        bfs.run(a, |v| snap.undirected_neighbors(v), |w, d| {
            if marks[w.index()] && w > a {
                found += 1;
                sum += f64::from(d);
            }
            found < later
        });
        missing += later - found;
    }
    if missing > 0 {
        let mut max_finite = 0u32;
        for &a in &targets {
            bfs.run(a, |v| snap.undirected_neighbors(v), |_, d| {
                max_finite = max_finite.max(d);
                true
            });
        }
        sum += missing as f64 * f64::from(max_finite + 1);
    }
    for &t in &targets {
        marks[t.index()] = false;
    }
    let pairs = k * (k - 1) / 2;
    Some(sum / pairs as f64)
}
