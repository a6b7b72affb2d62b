//! Degree-proportional attachment, optionally biased by attribute
//! similarity, and the triangle-closing step built on top of it.

use rand::Rng;
use rand::seq::IndexedRandom;

use super::sampler::WeightedSampler;
use crate::arw::WalkOutcome;
use crate::error::{Error, Result};
use crate::graph::{AttrId, NodeId, TemporalDigraph};
use crate::growth::{Attach, GrowthRng};

/// Attachment weights `(in_degree(v) + attractiveness) * s(u, v)` where
/// `s = 1` for equal attributes and `sigma` otherwise.
#[derive(Clone, Debug)]
pub(crate) struct PreferentialIndex {
    attractiveness: f64,
    sigma: f64,
    // slot 0: no attribute, slot a+1: attribute a
    classes: Vec<WeightedSampler>,
    members: Vec<Vec<NodeId>>,
    position: Vec<(u32, u32)>,
}

impl PreferentialIndex {
    pub(crate) fn new(graph: &TemporalDigraph, attractiveness: f64, sigma: f64) -> Self {
        let mut index = PreferentialIndex {
            attractiveness,
            sigma,
            classes: Vec::new(),
            members: Vec::new(),
            position: Vec::with_capacity(graph.node_count()),
        };
        for v in graph.nodes() {
            index.insert(v, graph.attribute(v), graph.in_degree(v));
        }
        index
    }

    fn slot(attr: Option<AttrId>) -> usize {
        attr.map_or(0, |a| a.index() + 1)
    }

    pub(crate) fn len(&self) -> usize {
        self.position.len()
    }

    fn insert(&mut self, v: NodeId, attr: Option<AttrId>, in_degree: usize) {
        debug_assert_eq!(v.index(), self.position.len());
        let slot = Self::slot(attr);
        if self.classes.len() <= slot {
            self.classes.resize_with(slot + 1, WeightedSampler::new);
            self.members.resize_with(slot + 1, Vec::new);
        }
        self.position.push((slot as u32, self.members[slot].len() as u32));
        self.members[slot].push(v);
        self.classes[slot].push(in_degree as f64 + self.attractiveness);
    }

    fn weight(&self, v: NodeId) -> f64 {
        let (slot, local) = self.position[v.index()];
        self.classes[slot as usize].weight(local as usize)
    }

    fn set_weight(&mut self, v: NodeId, w: f64) {
        let (slot, local) = self.position[v.index()];
        self.classes[slot as usize].set(local as usize, w);
    }

    /// Registers a newly attached node and bumps the in-degree of its targets.
    pub(crate) fn record(&mut self, graph: &TemporalDigraph, new_node: NodeId) {
        self.insert(new_node, graph.attribute(new_node), 0);
        for &v in graph.out_neighbors(new_node) {
            let w = self.weight(v);
            self.set_weight(v, w + 1.0);
        }
    }

    /// One weighted draw for a node of attribute `attr`; `None` when all
    /// remaining mass is zero.
    fn draw<R: Rng + ?Sized>(&self, attr: Option<AttrId>, rng: &mut R) -> Option<NodeId> {
        let own = Self::slot(attr);
        let same = self.classes.get(own).map_or(0.0, WeightedSampler::total).max(0.0);
        let all: f64 = self.classes.iter().map(|c| c.total().max(0.0)).sum();
        let other = (all - same).max(0.0);
        let total = same + self.sigma * other;
        if !(total > 1e-12) {
            return None;
        }
        let r = rng.random::<f64>() * total;
        if r < same {
            let local = self.classes[own].find(r);
            return Some(self.members[own][local]);
        }
        let mut rem = (r - same) / self.sigma;
        let mut last = None;
        for (slot, class) in self.classes.iter().enumerate() {
            if slot == own || !(class.total() > 0.0) {
                continue;
            }
            if rem < class.total() {
                return Some(self.members[slot][class.find(rem)]);
            }
            rem -= class.total();
            last = Some(slot);
        }
        // rounding pushed `rem` past the last class
        last.map(|slot| {
            let class = &self.classes[slot];
            self.members[slot][class.find(class.total() * (1.0 - f64::EPSILON))]
        })
    }

    /// Draws `m` distinct targets without replacement. When the remaining
    /// weighted mass is zero the rest are drawn uniformly from the nodes not
    /// chosen yet.
    pub(crate) fn draw_distinct<R: Rng + ?Sized>(
        &mut self,
        attr: Option<AttrId>,
        m: usize,
        rng: &mut R,
    ) -> Result<Vec<NodeId>> {
        let n = self.len();
        if m > n {
            return Err(Error::NotEnoughTargets {
                requested: m,
                available: n,
            });
        }
        let mut chosen = Vec::with_capacity(m);
        let mut saved = Vec::with_capacity(m);
        while chosen.len() < m {
            let v = self.draw(attr, rng).unwrap_or_else(|| uniform_excluding(n, &chosen, rng));
            saved.push((v, self.weight(v)));
            self.set_weight(v, 0.0);
            chosen.push(v);
        }
        for (v, w) in saved {
            self.set_weight(v, w);
        }
        Ok(chosen)
    }

    /// Single draw that avoids `exclude`.
    pub(crate) fn draw_excluding<R: Rng + ?Sized>(
        &mut self,
        attr: Option<AttrId>,
        exclude: &[NodeId],
        rng: &mut R,
    ) -> NodeId {
        let saved: Vec<(NodeId, f64)> = exclude.iter().map(|&v| (v, self.weight(v))).collect();
        for &(v, _) in &saved {
            self.set_weight(v, 0.0);
        }
        let v = self
            .draw(attr, rng)
            .unwrap_or_else(|| uniform_excluding(self.len(), exclude, rng));
        for (v, w) in saved {
            self.set_weight(v, w);
        }
        v
    }
}

fn uniform_excluding<R: Rng + ?Sized>(n: usize, exclude: &[NodeId], rng: &mut R) -> NodeId {
    debug_assert!(exclude.len() < n);
    loop {
        let v = NodeId::from(rng.random_range(0..n));
        if !exclude.contains(&v) {
            return v;
        }
    }
}

/// Preferential attachment with an optional triangle-closing step.
///
/// With `p_triangle = 0` this is plain (similarity-weighted) preferential
/// attachment; otherwise each link after the first closes a triangle with
/// probability `p_triangle` by linking a uniformly chosen undirected
/// neighbor of the previous target.
pub(crate) struct PreferentialAttach {
    index: PreferentialIndex,
    p_triangle: f64,
}

impl PreferentialAttach {
    pub(crate) fn new(graph: &TemporalDigraph, attractiveness: f64, sigma: f64, p_triangle: f64) -> Self {
        PreferentialAttach {
            index: PreferentialIndex::new(graph, attractiveness, sigma),
            p_triangle,
        }
    }
}

impl Attach for PreferentialAttach {
    fn attach(
        &mut self,
        graph: &TemporalDigraph,
        new_node: NodeId,
        m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome> {
        let attr = graph.attribute(new_node);
        let linked = if self.p_triangle <= 0.0 {
            self.index.draw_distinct(attr, m, rng)?
        } else {
            let existing = self.index.len();
            if m > existing {
                return Err(Error::NotEnoughTargets {
                    requested: m,
                    available: existing,
                });
            }
            let mut linked: Vec<NodeId> = Vec::with_capacity(m);
            let mut candidates = Vec::new();
            while linked.len() < m {
                let mut next = None;
                if let Some(&prev) = linked.last() {
                    if rng.random::<f64>() < self.p_triangle {
                        candidates.clear();
                        for w in graph.undirected_neighbors(prev) {
                            if w != new_node && !linked.contains(&w) && !candidates.contains(&w) {
                                candidates.push(w);
                            }
                        }
                        next = candidates.choose(rng).copied();
                    }
                }
                let v = match next {
                    Some(v) => v,
                    None => self.index.draw_excluding(attr, &linked, rng),
                };
                linked.push(v);
            }
            linked
        };
        Ok(WalkOutcome {
            linked,
            ..WalkOutcome::default()
        })
    }

    fn after_step(&mut self, graph: &TemporalDigraph, new_node: NodeId) {
        self.index.record(graph, new_node);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn dms_probability_matches_weights() {
        // in-degrees 3 and 1, attractiveness 1: P(first) = 4 / 6
        let mut g = TemporalDigraph::new();
        let a = g.add_node(0, None);
        let b = g.add_node(0, None);
        for _ in 0..3 {
            let c = g.add_node(1, None);
            g.add_edge(c, a).unwrap();
        }
        let d = NodeId(2);
        g.add_edge(d, b).unwrap();
        let mut index = PreferentialIndex::new(&g, 1.0, 1.0);
        // silence the three citing nodes so only a and b carry mass
        for v in [NodeId(2), NodeId(3), NodeId(4)] {
            index.set_weight(v, 0.0);
        }
        let mut rng = GrowthRng::seed_from_u64(1);
        let draws = 60_000;
        let hits = (0..draws).filter(|_| index.draw(None, &mut rng) == Some(a)).count();
        let frac = hits as f64 / draws as f64;
        assert!((frac - 2.0 / 3.0).abs() < 0.01, "{frac}");
    }

    #[test]
    fn zero_mass_falls_back_to_uniform() {
        let mut g = TemporalDigraph::new();
        for _ in 0..4 {
            g.add_node(0, None);
        }
        let mut index = PreferentialIndex::new(&g, 0.0, 1.0);
        let mut rng = GrowthRng::seed_from_u64(2);
        let mut picks = index.draw_distinct(None, 4, &mut rng).unwrap();
        picks.sort();
        assert_eq!(picks, (0..4).map(NodeId).collect::<Vec<_>>());
        assert!(index.draw_distinct(None, 5, &mut rng).is_err());
    }

    #[test]
    fn zero_sigma_never_crosses_classes() {
        let mut g = TemporalDigraph::new();
        for i in 0..10 {
            g.add_node(0, Some(if i < 5 { "x" } else { "y" }));
        }
        let x = g.label_id("x");
        let mut index = PreferentialIndex::new(&g, 1.0, 0.0);
        let mut rng = GrowthRng::seed_from_u64(3);
        for _ in 0..200 {
            for v in index.draw_distinct(x, 3, &mut rng).unwrap() {
                assert_eq!(g.attribute(v), x);
            }
        }
    }
}
