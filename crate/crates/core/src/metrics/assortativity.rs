use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};

/// Fraction of edges between each (source attribute, target attribute)
/// pair. Edges touching a node without an attribute are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingMatrix {
    /// `fractions[i][j]`, indexed by attribute id.
    pub fractions: Vec<Vec<f64>>,
    pub edges_counted: usize,
}

impl MixingMatrix {
    pub fn from_graph(graph: &TemporalDigraph) -> Result<Self> {
        let k = graph.labels().len();
        let mut counts = vec![vec![0usize; k]; k];
        let mut total = 0usize;
        for &(s, d) in graph.edges() {
            if let (Some(a), Some(b)) = (graph.attribute(s), graph.attribute(d)) {
                counts[a.index()][b.index()] += 1;
                total += 1;
            }
        }
        if total == 0 {
            return Err(Error::Undefined("no edges between attributed nodes"));
        }
        let fractions = counts
            .into_iter()
            .map(|row| row.into_iter().map(|c| c as f64 / total as f64).collect())
            .collect();
        Ok(MixingMatrix {
            fractions,
            edges_counted: total,
        })
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.fractions.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let k = self.fractions.len();
        (0..k).map(|j| self.fractions.iter().map(|r| r[j]).sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        self.fractions.iter().enumerate().map(|(i, r)| r[i]).sum()
    }

    /// `Σ_i e_i· e_·i`, the same-attribute fraction expected under random
    /// rewiring.
    pub fn null_same_fraction(&self) -> f64 {
        self.row_sums()
            .iter()
            .zip(self.column_sums())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Number of attribute values appearing on a counted edge endpoint.
    pub fn classes_present(&self) -> usize {
        self.row_sums()
            .iter()
            .zip(self.column_sums())
            .filter(|(a, b)| **a > 0.0 || *b > 0.0)
            .count()
    }

    /// `r = (Σ e_ii - Σ e_i· e_·i) / (1 - Σ e_i· e_·i)`.
    pub fn assortativity(&self) -> Result<f64> {
        if self.classes_present() < 2 {
            return Err(Error::Undefined("assortativity needs at least two attribute classes"));
        }
        let null = self.null_same_fraction();
        let denom = 1.0 - null;
        if !(denom > 0.0) {
            return Err(Error::Undefined("assortativity denominator is zero"));
        }
        Ok((self.trace() - null) / denom)
    }
}

/// Global attribute assortativity coefficient.
pub fn global_assortativity(graph: &TemporalDigraph) -> Result<f64> {
    MixingMatrix::from_graph(graph)?.assortativity()
}

/// Fraction of each node's attributed incident edges (either direction)
/// whose other endpoint shares its attribute. `None` for nodes without an
/// attribute or without such edges.
pub fn same_attribute_edge_fractions(graph: &TemporalDigraph) -> Vec<Option<f64>> {
    graph
        .nodes()
        .map(|u| {
            let a = graph.attribute(u)?;
            let (mut same, mut total) = (0usize, 0usize);
            for w in graph.undirected_neighbors(u) {
                if let Some(b) = graph.attribute(w) {
                    total += 1;
                    same += usize::from(a == b);
                }
            }
            (total > 0).then(|| same as f64 / total as f64)
        })
        .collect()
}

/// Precomputed state for local assortativity queries.
pub struct LocalAssortativity<'g> {
    graph: &'g TemporalDigraph,
    fractions: Vec<Option<f64>>,
    null: f64,
    stamp: Vec<u32>,
    frontier: Vec<NodeId>,
}

impl<'g> LocalAssortativity<'g> {
    pub fn new(graph: &'g TemporalDigraph) -> Result<Self> {
        let mixing = MixingMatrix::from_graph(graph)?;
        if mixing.classes_present() < 2 {
            return Err(Error::Undefined("assortativity needs at least two attribute classes"));
        }
        let null = mixing.null_same_fraction();
        if !(1.0 - null > 0.0) {
            return Err(Error::Undefined("assortativity denominator is zero"));
        }
        Ok(LocalAssortativity {
            graph,
            fractions: same_attribute_edge_fractions(graph),
            null,
            stamp: vec![u32::MAX; graph.node_count()],
            frontier: Vec::new(),
        })
    }

    /// `Σ_b e_b· e_·b` of the whole graph.
    pub fn null_term(&self) -> f64 {
        self.null
    }

    /// `(S_i - null) / (1 - null)` where `S_i` is the mean same-attribute
    /// edge fraction over the nodes at undirected distance 1 or 2 from
    /// `node`.
    pub fn at(&mut self, node: NodeId) -> Option<f64> {
        let g = self.graph;
        let tag = node.0;
        self.stamp[node.index()] = tag;
        self.frontier.clear();
        let (mut sum, mut count) = (0.0, 0usize);
        for w in g.undirected_neighbors(node) {
            if self.stamp[w.index()] != tag {
                self.stamp[w.index()] = tag;
                self.frontier.push(w);
                if let Some(f) = self.fractions[w.index()] {
                    sum += f;
                    count += 1;
                }
            }
        }
        for i in 0..self.frontier.len() {
            let w = self.frontier[i];
            for x in g.undirected_neighbors(w) {
                if self.stamp[x.index()] != tag {
                    self.stamp[x.index()] = tag;
                    if let Some(f) = self.fractions[x.index()] {
                        sum += f;
                        count += 1;
                    }
                }
            }
        }
        // distinct stamp per query: reset the node so a later query from
        // the same id still sees it as unvisited
        self.stamp[node.index()] = u32::MAX;
        for i in 0..self.frontier.len() {
            let w = self.frontier[i];
            self.stamp[w.index()] = u32::MAX;
            for x in g.undirected_neighbors(w) {
                self.stamp[x.index()] = u32::MAX;
            }
        }
        (count > 0).then(|| (sum / count as f64 - self.null) / (1.0 - self.null))
    }
}

/// Local assortativity of one node.
pub fn local_assortativity(graph: &TemporalDigraph, node: NodeId) -> Result<f64> {
    LocalAssortativity::new(graph)?
        .at(node)
        .ok_or(Error::Undefined("node has no attributed two-hop neighborhood"))
}
