//! Temporal attributed directed graphs.
//!
//! Nodes are numbered densely in arrival order, so a node's [`NodeId`] is
//! also its arrival index. Each node carries an integer epoch (a year for
//! observed data, a step index for synthetic data) and at most one
//! categorical attribute. Edges point from the citing node to the cited
//! node, which for well-formed data is always the older one.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node identifier; equal to the node's arrival index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Interned attribute label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub u32);

impl AttrId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Default)]
pub struct TemporalDigraph {
    epochs: Vec<i64>,
    attrs: Vec<Option<AttrId>>,
    labels: Vec<String>,
    label_ids: HashMap<String, AttrId>,
    out_adj: Vec<Vec<NodeId>>,
    in_adj: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
}

impl TemporalDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a node and returns its id.
    pub fn add_node(&mut self, epoch: i64, attribute: Option<&str>) -> NodeId {
        let attr = attribute.map(|label| self.intern_label(label));
        self.push_node(epoch, attr)
    }

    /// Appends a node whose attribute is already interned in this graph.
    pub fn push_node(&mut self, epoch: i64, attr: Option<AttrId>) -> NodeId {
        debug_assert!(attr.is_none_or(|a| a.index() < self.labels.len()));
        let id = NodeId::from(self.epochs.len());
        self.epochs.push(epoch);
        self.attrs.push(attr);
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        id
    }

    pub fn intern_label(&mut self, label: &str) -> AttrId {
        if let Some(&id) = self.label_ids.get(label) {
            return id;
        }
        let id = AttrId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.label_ids.insert(label.to_owned(), id);
        id
    }

    pub fn label_id(&self, label: &str) -> Option<AttrId> {
        self.label_ids.get(label).copied()
    }

    /// Inserts `src -> dst`. Returns `false` if the edge already exists.
    pub fn add_edge(&mut self, src: NodeId, dst: NodeId) -> Result<bool> {
        self.check_node(src)?;
        self.check_node(dst)?;
        if src == dst {
            return Err(Error::SelfLoop(src));
        }
        if self.has_edge(src, dst) {
            return Ok(false);
        }
        self.push_edge_unchecked(src, dst);
        Ok(true)
    }

    /// Inserts an edge the caller knows to be new and loop-free.
    pub(crate) fn push_edge_unchecked(&mut self, src: NodeId, dst: NodeId) {
        debug_assert!(src != dst);
        debug_assert!(!self.has_edge(src, dst));
        self.out_adj[src.index()].push(dst);
        self.in_adj[dst.index()].push(src);
        self.edges.push((src, dst));
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        let outs = &self.out_adj[src.index()];
        let ins = &self.in_adj[dst.index()];
        if outs.len() <= ins.len() {
            outs.contains(&dst)
        } else {
            ins.contains(&src)
        }
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v.index() < self.epochs.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.epochs.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out_adj[v.index()]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.in_adj[v.index()]
    }

    /// Out-neighbors followed by in-neighbors. A mutual pair shows up twice.
    pub fn undirected_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out_adj[v.index()]
            .iter()
            .chain(self.in_adj[v.index()].iter())
            .copied()
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_adj[v.index()].len()
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_adj[v.index()].len()
    }

    #[inline]
    pub fn epoch(&self, v: NodeId) -> i64 {
        self.epochs[v.index()]
    }

    pub fn epochs(&self) -> &[i64] {
        &self.epochs
    }

    #[inline]
    pub fn attribute(&self, v: NodeId) -> Option<AttrId> {
        self.attrs[v.index()]
    }

    pub fn attributes(&self) -> &[Option<AttrId>] {
        &self.attrs
    }

    pub fn attribute_label(&self, v: NodeId) -> Option<&str> {
        self.attrs[v.index()].map(|a| self.labels[a.index()].as_str())
    }

    pub fn label(&self, attr: AttrId) -> &str {
        &self.labels[attr.index()]
    }

    /// All interned labels, indexed by [`AttrId`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// True when at least one node carries an attribute.
    pub fn is_attributed(&self) -> bool {
        self.attrs.iter().any(Option::is_some)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_adj.iter().map(Vec::len).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(Vec::len).collect()
    }

    /// Number of edges whose source arrived before its target.
    pub fn temporal_violations(&self) -> usize {
        self.edges.iter().filter(|(s, d)| s < d).count()
    }

    /// View restricted to the first `cutoff` arrivals.
    pub fn snapshot(&self, cutoff: usize) -> GraphSnapshot<'_> {
        GraphSnapshot {
            graph: self,
            cutoff: cutoff.min(self.node_count()),
        }
    }

    /// Partition of the nodes into weakly connected components.
    ///
    /// Blocks are listed in order of their smallest member, and each block is
    /// sorted.
    pub fn weakly_connected_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                let p = parent[x as usize];
                parent[x as usize] = parent[p as usize];
                x = p;
            }
            x
        }
        for &(s, d) in &self.edges {
            let a = find(&mut parent, s.0);
            let b = find(&mut parent, d.0);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi as usize] = lo;
            }
        }
        let mut block_of_root: HashMap<u32, usize> = HashMap::new();
        let mut blocks: Vec<Vec<NodeId>> = Vec::new();
        for v in 0..n as u32 {
            let root = find(&mut parent, v);
            let b = *block_of_root.entry(root).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(NodeId(v));
        }
        blocks
    }

    pub fn weak_component_count(&self) -> usize {
        self.weakly_connected_components().len()
    }

    /// Undirected breadth-first search from `start` that stops after
    /// `ceil(fraction * |V|)` nodes have been visited; returns the subgraph
    /// induced on the visited nodes.
    pub fn undirected_bfs_seed(&self, start: NodeId, fraction: f64) -> Result<InducedSubgraph> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        self.check_node(start)?;
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::param("fraction", format!("{fraction} is not in (0, 1]")));
        }
        let budget = ((fraction * self.node_count() as f64).ceil() as usize).max(1);
        let mut seen = vec![false; self.node_count()];
        let mut visited = Vec::with_capacity(budget);
        let mut queue = VecDeque::new();
        seen[start.index()] = true;
        queue.push_back(start);
        'bfs: while let Some(v) = queue.pop_front() {
            visited.push(v);
            if visited.len() >= budget {
                break;
            }
            for w in self.undirected_neighbors(v) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
            if queue.is_empty() {
                break 'bfs;
            }
        }
        Ok(self.induced_subgraph(&visited))
    }

    /// Subgraph induced on `nodes`, renumbered densely in arrival order.
    /// Attribute labels keep their ids.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> InducedSubgraph {
        let mut original: Vec<NodeId> = nodes.to_vec();
        original.sort_unstable();
        original.dedup();
        let mut new_id = vec![u32::MAX; self.node_count()];
        let mut graph = TemporalDigraph {
            labels: self.labels.clone(),
            label_ids: self.label_ids.clone(),
            ..Default::default()
        };
        for (i, &v) in original.iter().enumerate() {
            new_id[v.index()] = i as u32;
            graph.push_node(self.epoch(v), self.attribute(v));
        }
        for &(s, d) in &self.edges {
            let (a, b) = (new_id[s.index()], new_id[d.index()]);
            if a != u32::MAX && b != u32::MAX {
                graph.push_edge_unchecked(NodeId(a), NodeId(b));
            }
        }
        InducedSubgraph { graph, original }
    }

    /// Copy with the same nodes and labels but a different edge set.
    pub(crate) fn with_edges(&self, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut g = TemporalDigraph {
            epochs: self.epochs.clone(),
            attrs: self.attrs.clone(),
            labels: self.labels.clone(),
            label_ids: self.label_ids.clone(),
            out_adj: vec![Vec::new(); self.node_count()],
            in_adj: vec![Vec::new(); self.node_count()],
            edges: Vec::with_capacity(self.edge_count()),
        };
        for (s, d) in edges {
            g.push_edge_unchecked(s, d);
        }
        g
    }

    /// Edge list sorted by `(src, dst)`.
    pub fn sorted_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Result of [`TemporalDigraph::induced_subgraph`]: the subgraph plus the
/// original id of each of its nodes.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: TemporalDigraph,
    pub original: Vec<NodeId>,
}

/// The graph as it stood when `cutoff` nodes had arrived.
#[derive(Clone, Copy, Debug)]
pub struct GraphSnapshot<'a> {
    graph: &'a TemporalDigraph,
    cutoff: usize,
}

impl<'a> GraphSnapshot<'a> {
    pub fn graph(&self) -> &'a TemporalDigraph {
        self.graph
    }

    pub fn node_count(&self) -> usize {
        self.cutoff
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.cutoff
    }

    pub fn out_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        let cutoff = self.cutoff;
        self.graph
            .out_neighbors(v)
            .iter()
            .copied()
            .filter(move |w| w.index() < cutoff)
    }

    pub fn in_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        let cutoff = self.cutoff;
        self.graph
            .in_neighbors(v)
            .iter()
            .copied()
            .filter(move |w| w.index() < cutoff)
    }

    pub fn undirected_neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        self.out_neighbors(v).chain(self.in_neighbors(v))
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + 'a {
        let cutoff = self.cutoff;
        self.graph
            .edges()
            .iter()
            .copied()
            .filter(move |(s, d)| s.index() < cutoff && d.index() < cutoff)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Materializes the snapshot as a standalone graph.
    pub fn to_graph(&self) -> TemporalDigraph {
        let nodes: Vec<NodeId> = (0..self.cutoff).map(NodeId::from).collect();
        self.graph.induced_subgraph(&nodes).graph
    }
}
