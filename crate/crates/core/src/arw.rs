//! The attributed random-walk growth model.
//!
//! Every incoming node picks a seed with a bias towards (or away from) its
//! own attribute value, then walks the existing graph from that seed. At each
//! visited node it links with a probability that depends on whether the two
//! attributes match, jumps back to the seed with probability `p_jump`, and
//! otherwise steps along an out-edge (probability `p_out`) or an in-edge.
//! The walk stops once the node's out-degree budget is spent.

use std::collections::VecDeque;

use rand::Rng;
use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, check_probability};
use crate::graph::{AttrId, NodeId, TemporalDigraph};
use crate::growth::{self, Attach, Generated, GrowthRng};
use crate::schedule::GrowthSchedule;

/// A walk gives up and force-links after this many steps per requested link.
pub const WALK_STEP_LIMIT_PER_LINK: usize = 10_000;

/// Link probabilities used when a walker visits a node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LinkProbs {
    Attributed { p_same: f64, p_diff: f64 },
    Unattributed { p_link: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArwParams {
    #[serde(flatten)]
    pub link: LinkProbs,
    pub p_jump: f64,
    pub p_out: f64,
}

impl ArwParams {
    pub fn attributed(p_same: f64, p_diff: f64, p_jump: f64, p_out: f64) -> Self {
        ArwParams {
            link: LinkProbs::Attributed { p_same, p_diff },
            p_jump,
            p_out,
        }
    }

    pub fn unattributed(p_link: f64, p_jump: f64, p_out: f64) -> Self {
        ArwParams {
            link: LinkProbs::Unattributed { p_link },
            p_jump,
            p_out,
        }
    }

    pub fn is_attributed(&self) -> bool {
        matches!(self.link, LinkProbs::Attributed { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self.link {
            LinkProbs::Attributed { p_same, p_diff } => {
                check_probability("p_same", p_same)?;
                check_probability("p_diff", p_diff)?;
                if p_same + p_diff <= 0.0 {
                    return Err(Error::param("p_same", "p_same + p_diff must be positive"));
                }
            }
            LinkProbs::Unattributed { p_link } => check_probability("p_link", p_link)?,
        }
        check_probability("p_jump", self.p_jump)?;
        check_probability("p_out", self.p_out)
    }

    #[inline]
    fn link_probability(&self, a: Option<AttrId>, b: Option<AttrId>) -> f64 {
        match self.link {
            LinkProbs::Attributed { p_same, p_diff } => {
                if a == b {
                    p_same
                } else {
                    p_diff
                }
            }
            LinkProbs::Unattributed { p_link } => p_link,
        }
    }
}

/// Existing nodes grouped by attribute value, for seed selection.
#[derive(Clone, Debug, Default)]
pub struct ClassIndex {
    // slot 0 holds nodes without an attribute, slot a+1 holds attribute a
    classes: Vec<Vec<NodeId>>,
    len: usize,
}

impl ClassIndex {
    pub fn new(graph: &TemporalDigraph) -> Self {
        let mut index = ClassIndex::default();
        for v in graph.nodes() {
            index.insert(v, graph.attribute(v));
        }
        index
    }

    #[inline]
    fn slot(attr: Option<AttrId>) -> usize {
        attr.map_or(0, |a| a.index() + 1)
    }

    pub fn insert(&mut self, v: NodeId, attr: Option<AttrId>) {
        let slot = Self::slot(attr);
        if self.classes.len() <= slot {
            self.classes.resize_with(slot + 1, Vec::new);
        }
        self.classes[slot].push(v);
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn class_size(&self, attr: Option<AttrId>) -> usize {
        self.classes.get(Self::slot(attr)).map_or(0, Vec::len)
    }

    /// Draws a seed for a node with attribute `attr`. The same-attribute
    /// class is chosen with probability `p_same / (p_same + p_diff)`; an empty
    /// class falls back to the other one. Unattributed parameters draw
    /// uniformly from all nodes.
    pub fn select_seed<R: Rng + ?Sized>(
        &self,
        attr: Option<AttrId>,
        link: &LinkProbs,
        rng: &mut R,
    ) -> Result<NodeId> {
        if self.len == 0 {
            return Err(Error::EmptyGraph);
        }
        let (p_same, p_diff) = match *link {
            LinkProbs::Unattributed { .. } => return Ok(self.uniform(rng)),
            LinkProbs::Attributed { p_same, p_diff } => (p_same, p_diff),
        };
        if !(p_same + p_diff > 0.0) {
            return Err(Error::param("p_same", "p_same + p_diff must be positive"));
        }
        let slot = Self::slot(attr);
        let same: &[NodeId] = self.classes.get(slot).map_or(&[], Vec::as_slice);
        let others = self.len - same.len();
        let want_same = rng.random::<f64>() * (p_same + p_diff) < p_same;
        if (want_same && !same.is_empty()) || others == 0 {
            return Ok(same[rng.random_range(0..same.len())]);
        }
        let mut r = rng.random_range(0..others);
        for (s, class) in self.classes.iter().enumerate() {
            if s == slot {
                continue;
            }
            if r < class.len() {
                return Ok(class[r]);
            }
            r -= class.len();
        }
        unreachable!("class sizes sum to len")
    }

    fn uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> NodeId {
        let mut r = rng.random_range(0..self.len);
        for class in &self.classes {
            if r < class.len() {
                return class[r];
            }
            r -= class.len();
        }
        unreachable!("class sizes sum to len")
    }
}

/// Seed selection against the current contents of `graph`.
pub fn select_seed<R: Rng + ?Sized>(
    graph: &TemporalDigraph,
    attr: Option<AttrId>,
    link: &LinkProbs,
    rng: &mut R,
) -> Result<NodeId> {
    ClassIndex::new(graph).select_seed(attr, link, rng)
}

/// Position of a walker on the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkState {
    pub current: NodeId,
    pub seed: NodeId,
    pub steps_taken: usize,
    /// Moves since the walker last stood on its seed.
    pub hops_from_seed: usize,
}

impl WalkState {
    pub fn new(seed: NodeId) -> Self {
        WalkState {
            current: seed,
            seed,
            steps_taken: 0,
            hops_from_seed: 0,
        }
    }

    /// One traversal move: jump to the seed with probability `p_jump`, else
    /// follow an out-edge with probability `p_out` or an in-edge otherwise.
    /// When the chosen direction has no edges the other one is used; a node
    /// with no edges at all sends the walker back to its seed.
    pub fn advance<R: Rng + ?Sized>(
        &mut self,
        graph: &TemporalDigraph,
        p_jump: f64,
        p_out: f64,
        rng: &mut R,
    ) {
        self.steps_taken += 1;
        if rng.random::<f64>() < p_jump {
            self.current = self.seed;
            self.hops_from_seed = 0;
            return;
        }
        let outs = graph.out_neighbors(self.current);
        let ins = graph.in_neighbors(self.current);
        let (first, second) = if rng.random::<f64>() < p_out {
            (outs, ins)
        } else {
            (ins, outs)
        };
        let next = if first.is_empty() { second } else { first };
        match next.choose(rng) {
            Some(&w) => {
                self.current = w;
                self.hops_from_seed += 1;
            }
            None => {
                self.current = self.seed;
                self.hops_from_seed = 0;
            }
        }
    }
}

/// Targets chosen by one incoming node.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WalkOutcome {
    pub linked: Vec<NodeId>,
    pub steps: usize,
    /// Links added by the step-limit safeguard instead of the walk.
    pub forced_links: usize,
    /// True when fewer than the requested number of nodes were reachable.
    pub truncated: bool,
}

/// Per-node "already linked" marks, reset in O(1) between walks.
#[derive(Clone, Debug, Default)]
pub(crate) struct LinkMarks {
    stamp: Vec<u32>,
    current: u32,
}

impl LinkMarks {
    pub(crate) fn reset(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.current = self.current.wrapping_add(1);
        if self.current == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.current = 1;
        }
    }

    #[inline]
    pub(crate) fn is_marked(&self, v: NodeId) -> bool {
        self.stamp[v.index()] == self.current
    }

    #[inline]
    pub(crate) fn mark(&mut self, v: NodeId) {
        self.stamp[v.index()] = self.current;
    }
}

/// Runs one incoming node's walk from `seed` until it has linked `m_target`
/// distinct existing nodes.
///
/// `new_node` must already be in `graph` (so its attribute is known) and must
/// have no edges yet.
pub fn random_walk_attach<R: Rng + ?Sized>(
    graph: &TemporalDigraph,
    new_node: NodeId,
    seed: NodeId,
    params: &ArwParams,
    m_target: usize,
    rng: &mut R,
) -> Result<WalkOutcome> {
    params.validate()?;
    if seed.index() >= graph.node_count() || seed == new_node {
        return Err(Error::UnknownNode(seed));
    }
    let mut marks = LinkMarks::default();
    Ok(walk(graph, new_node, seed, params, m_target, rng, &mut marks))
}

fn walk<R: Rng + ?Sized>(
    graph: &TemporalDigraph,
    new_node: NodeId,
    seed: NodeId,
    params: &ArwParams,
    m_target: usize,
    rng: &mut R,
    marks: &mut LinkMarks,
) -> WalkOutcome {
    marks.reset(graph.node_count());
    let mut outcome = WalkOutcome::default();
    if m_target == 0 {
        return outcome;
    }
    let attr = graph.attribute(new_node);
    let step_limit = WALK_STEP_LIMIT_PER_LINK.saturating_mul(m_target);
    let mut state = WalkState::new(seed);
    loop {
        let v = state.current;
        if !marks.is_marked(v) && rng.random::<f64>() < params.link_probability(attr, graph.attribute(v)) {
            marks.mark(v);
            outcome.linked.push(v);
            if outcome.linked.len() == m_target {
                break;
            }
        }
        if state.steps_taken >= step_limit {
            force_links(graph, new_node, seed, m_target, rng, marks, &mut outcome);
            break;
        }
        state.advance(graph, params.p_jump, params.p_out, rng);
    }
    outcome.steps = state.steps_taken;
    outcome
}

/// Fills the remaining budget with uniformly chosen unlinked nodes from the
/// seed's weak component.
pub(crate) fn force_links<R: Rng + ?Sized>(
    graph: &TemporalDigraph,
    new_node: NodeId,
    seed: NodeId,
    m_target: usize,
    rng: &mut R,
    marks: &mut LinkMarks,
    outcome: &mut WalkOutcome,
) {
    let mut seen = vec![false; graph.node_count()];
    let mut queue = VecDeque::from([seed]);
    seen[seed.index()] = true;
    seen[new_node.index()] = true;
    let mut candidates = Vec::new();
    while let Some(v) = queue.pop_front() {
        if !marks.is_marked(v) {
            candidates.push(v);
        }
        for w in graph.undirected_neighbors(v) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    let needed = m_target - outcome.linked.len();
    if candidates.len() < needed {
        outcome.truncated = true;
    }
    for &v in candidates.choose_multiple(rng, needed) {
        marks.mark(v);
        outcome.linked.push(v);
        outcome.forced_links += 1;
    }
}

pub(crate) struct ArwAttach {
    params: ArwParams,
    classes: ClassIndex,
    marks: LinkMarks,
}

impl ArwAttach {
    pub(crate) fn new(params: ArwParams, initial: &TemporalDigraph) -> Self {
        ArwAttach {
            params,
            classes: ClassIndex::new(initial),
            marks: LinkMarks::default(),
        }
    }
}

impl Attach for ArwAttach {
    fn attach(
        &mut self,
        graph: &TemporalDigraph,
        new_node: NodeId,
        m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome> {
        let existing = self.classes.len();
        let seed = self
            .classes
            .select_seed(graph.attribute(new_node), &self.params.link, rng)?;
        let mut outcome = walk(graph, new_node, seed, &self.params, m.min(existing), rng, &mut self.marks);
        outcome.truncated |= m > existing;
        Ok(outcome)
    }

    fn after_step(&mut self, graph: &TemporalDigraph, new_node: NodeId) {
        self.classes.insert(new_node, graph.attribute(new_node));
    }
}

/// Grows `initial` by one node per schedule step using the attributed
/// random walk. The initial graph must be weakly connected.
pub fn grow(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    params: &ArwParams,
    rng_seed: u64,
) -> Result<Generated> {
    params.validate()?;
    growth::require_connected(initial)?;
    let mut attach = ArwAttach::new(*params, initial);
    growth::drive(initial, schedule, rng_seed, &mut attach)
}
