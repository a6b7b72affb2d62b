//! Uniform attachment, the undirected link-with-probability-mu walk, and
//! forest-fire burning.

use std::collections::VecDeque;

use rand::Rng;
use rand::seq::IndexedRandom;
use rand::seq::index;
use rand_distr::{Distribution, Geometric};

use crate::arw::{LinkMarks, WALK_STEP_LIMIT_PER_LINK, WalkOutcome, force_links};
use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};
use crate::growth::{Attach, GrowthRng};

pub(crate) struct UniformAttach;

impl Attach for UniformAttach {
    fn attach(
        &mut self,
        _graph: &TemporalDigraph,
        new_node: NodeId,
        m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome> {
        let existing = new_node.index();
        if m > existing {
            return Err(Error::NotEnoughTargets {
                requested: m,
                available: existing,
            });
        }
        let linked = index::sample(rng, existing, m)
            .into_iter()
            .map(NodeId::from)
            .collect();
        Ok(WalkOutcome {
            linked,
            ..WalkOutcome::default()
        })
    }
}

/// Walk on the undirected skeleton from a uniformly chosen start, linking
/// each visited, not yet linked node with probability `mu`.
pub(crate) struct MuWalkAttach {
    pub(crate) mu: f64,
    marks: LinkMarks,
}

impl MuWalkAttach {
    pub(crate) fn new(mu: f64) -> Self {
        MuWalkAttach {
            mu,
            marks: LinkMarks::default(),
        }
    }
}

impl Attach for MuWalkAttach {
    fn attach(
        &mut self,
        graph: &TemporalDigraph,
        new_node: NodeId,
        m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome> {
        let existing = new_node.index();
        if existing == 0 {
            return Err(Error::EmptyGraph);
        }
        self.marks.reset(graph.node_count());
        let target = m.min(existing);
        let start = NodeId::from(rng.random_range(0..existing));
        let mut outcome = WalkOutcome {
            truncated: m > existing,
            ..WalkOutcome::default()
        };
        let step_limit = WALK_STEP_LIMIT_PER_LINK.saturating_mul(target);
        let mut current = start;
        let mut steps = 0;
        let mut neighbors = Vec::new();
        while outcome.linked.len() < target {
            if !self.marks.is_marked(current) && rng.random::<f64>() < self.mu {
                self.marks.mark(current);
                outcome.linked.push(current);
                continue;
            }
            if steps >= step_limit {
                force_links(graph, new_node, start, target, rng, &mut self.marks, &mut outcome);
                break;
            }
            steps += 1;
            neighbors.clear();
            neighbors.extend(graph.undirected_neighbors(current));
            current = *neighbors.choose(rng).unwrap_or(&start);
        }
        outcome.steps = steps;
        Ok(outcome)
    }
}

/// Forest-fire burning: a uniform ambassador, then recursively a geometric
/// number of unburned out- and in-neighbors per burned node. The new node
/// links to everything burned.
pub(crate) struct ForestFireAttach {
    forward: Option<Geometric>,
    backward: Option<Geometric>,
}

impl ForestFireAttach {
    pub(crate) fn new(p_forward: f64, p_backward: f64) -> Result<Self> {
        // Number of failures before a success with probability 1 - p, mean
        // p / (1 - p). p = 1 burns every neighbor.
        let burn_count = |name: &'static str, p: f64| -> Result<Option<Geometric>> {
            crate::error::check_probability(name, p)?;
            if p >= 1.0 {
                Ok(None)
            } else {
                Geometric::new(1.0 - p)
                    .map(Some)
                    .map_err(|e| Error::param(name, e.to_string()))
            }
        };
        Ok(ForestFireAttach {
            forward: burn_count("p_forward", p_forward)?,
            backward: burn_count("p_backward", p_backward)?,
        })
    }
}

fn draw_count<R: Rng + ?Sized>(dist: &Option<Geometric>, rng: &mut R) -> usize {
    match dist {
        Some(g) => g.sample(rng).min(usize::MAX as u64) as usize,
        None => usize::MAX,
    }
}

impl Attach for ForestFireAttach {
    fn attach(
        &mut self,
        graph: &TemporalDigraph,
        new_node: NodeId,
        _m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome> {
        let existing = new_node.index();
        if existing == 0 {
            return Err(Error::EmptyGraph);
        }
        let ambassador = NodeId::from(rng.random_range(0..existing));
        let mut burned = vec![false; existing];
        burned[ambassador.index()] = true;
        let mut linked = vec![ambassador];
        let mut queue = VecDeque::from([ambassador]);
        let mut fresh = Vec::new();
        while let Some(v) = queue.pop_front() {
            let x = draw_count(&self.forward, rng);
            let y = draw_count(&self.backward, rng);
            for (neighbors, count) in [(graph.out_neighbors(v), x), (graph.in_neighbors(v), y)] {
                if count == 0 {
                    continue;
                }
                fresh.clear();
                fresh.extend(
                    neighbors
                        .iter()
                        .copied()
                        .filter(|w| w.index() < existing && !burned[w.index()]),
                );
                fresh.dedup();
                for &w in fresh.choose_multiple(rng, count) {
                    if !burned[w.index()] {
                        burned[w.index()] = true;
                        linked.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(WalkOutcome {
            linked,
            ..WalkOutcome::default()
        })
    }

    fn scheduled(&self) -> bool {
        false
    }
}
