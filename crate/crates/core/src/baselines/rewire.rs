use std::collections::HashSet;

use rand::{Rng, SeedableRng};

use crate::graph::{NodeId, TemporalDigraph};
use crate::growth::GrowthRng;

/// Attempted swaps per edge.
pub const SWAPS_PER_EDGE: usize = 10;

/// Degree-preserving randomization by directed double-edge swaps:
/// `(a -> b, c -> d)` becomes `(a -> d, c -> b)` whenever that creates no
/// self-loop and no duplicate. Every node keeps its in- and out-degree.
///
/// Swaps ignore arrival order, so the result may contain edges pointing
/// forward in time.
pub fn configuration_rewire(graph: &TemporalDigraph, rng_seed: u64) -> TemporalDigraph {
    let mut edges: Vec<(NodeId, NodeId)> = graph.edges().to_vec();
    let m = edges.len();
    if m < 2 {
        return graph.clone();
    }
    let mut present: HashSet<(NodeId, NodeId)> = edges.iter().copied().collect();
    let mut rng = GrowthRng::seed_from_u64(rng_seed);
    for _ in 0..SWAPS_PER_EDGE * m {
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        let (a, b) = edges[i];
        let (c, d) = edges[j];
        if a == c || b == d || a == d || c == b {
            continue;
        }
        if present.contains(&(a, d)) || present.contains(&(c, b)) {
            continue;
        }
        present.remove(&(a, b));
        present.remove(&(c, d));
        present.insert((a, d));
        present.insert((c, b));
        edges[i] = (a, d);
        edges[j] = (c, b);
    }
    graph.with_edges(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn preserves_degree_sequences() {
        let mut g = TemporalDigraph::new();
        for _ in 0..30 {
            g.add_node(0, None);
        }
        let mut rng = GrowthRng::seed_from_u64(5);
        for v in 1..30usize {
            for _ in 0..3 {
                let w = rng.random_range(0..v);
                let _ = g.add_edge(NodeId::from(v), NodeId::from(w));
            }
        }
        let r = configuration_rewire(&g, 17);
        assert_eq!(r.in_degrees(), g.in_degrees());
        assert_eq!(r.out_degrees(), g.out_degrees());
        assert_eq!(sorted(r.in_degrees()), sorted(g.in_degrees()));
        let set: HashSet<_> = r.edges().iter().collect();
        assert_eq!(set.len(), r.edge_count());
        assert!(r.edges().iter().all(|(s, d)| s != d));
        assert_ne!(r.sorted_edges(), g.sorted_edges());
    }

    #[test]
    fn no_legal_swap_leaves_graph_unchanged() {
        // 1 -> 0 and 2 -> 0 share a target, so every swap is a no-op
        let mut g = TemporalDigraph::new();
        for _ in 0..3 {
            g.add_node(0, None);
        }
        g.add_edge(NodeId(1), NodeId(0)).unwrap();
        g.add_edge(NodeId(2), NodeId(0)).unwrap();
        let r = configuration_rewire(&g, 1);
        assert_eq!(r.sorted_edges(), g.sorted_edges());
    }
}
