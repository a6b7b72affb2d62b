//! Schedule-driven growth loop shared by every scheduled model.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arw::WalkOutcome;
use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};
use crate::schedule::{GrowthSchedule, realize_out_degree};

/// Random stream used by every growth model.
pub type GrowthRng = ChaCha8Rng;

/// An edge-formation mechanism: picks the targets of one incoming node.
pub(crate) trait Attach {
    /// Chooses up to `m` distinct existing targets for `new_node`, which is
    /// already present in `graph` without edges.
    fn attach(
        &mut self,
        graph: &TemporalDigraph,
        new_node: NodeId,
        m: usize,
        rng: &mut GrowthRng,
    ) -> Result<WalkOutcome>;

    /// False for mechanisms whose out-degree is emergent rather than scheduled.
    fn scheduled(&self) -> bool {
        true
    }

    /// Called once the node and its edges are in the graph.
    fn after_step(&mut self, _graph: &TemporalDigraph, _new_node: NodeId) {}
}

/// Bookkeeping for one growth run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub steps: usize,
    /// Sum of the realized per-node out-degree targets.
    pub requested_links: usize,
    pub created_links: usize,
    /// Steps where the walk step limit fired and links were forced.
    pub forced_link_events: usize,
    pub forced_links: usize,
    /// Steps that formed fewer links than requested.
    pub truncations: usize,
}

/// A grown graph and how its growth went.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: TemporalDigraph,
    pub report: GrowthReport,
    /// Id of the first node added by growth; earlier ids are the initial graph.
    pub first_grown: NodeId,
}

/// Directed clique on `size` nodes at epoch 0, every newer node citing every
/// older one. With `labels`, attributes are assigned round-robin.
pub fn seed_clique(size: usize, labels: Option<&[String]>) -> TemporalDigraph {
    let mut g = TemporalDigraph::new();
    for i in 0..size {
        let label = labels.filter(|l| !l.is_empty()).map(|l| l[i % l.len()].as_str());
        g.add_node(0, label);
    }
    for i in 0..size {
        for j in 0..i {
            g.push_edge_unchecked(NodeId::from(i), NodeId::from(j));
        }
    }
    g
}

pub(crate) fn require_connected(initial: &TemporalDigraph) -> Result<()> {
    if initial.is_empty() {
        return Err(Error::EmptyGraph);
    }
    match initial.weak_component_count() {
        1 => Ok(()),
        k => Err(Error::Disconnected(k)),
    }
}

/// Runs the schedule against `initial`. Per step the random stream is used
/// in a fixed order: attribute draw, out-degree rounding, then the mechanism.
///
/// Realized out-degrees are at least one so that every node joins the
/// existing component.
pub(crate) fn drive<A: Attach>(
    initial: &TemporalDigraph,
    schedule: &GrowthSchedule,
    rng_seed: u64,
    attach: &mut A,
) -> Result<Generated> {
    schedule.validate()?;
    let mut graph = initial.clone();
    let sampler = match &schedule.attributes {
        Some(attrs) => Some(attrs.sampler(&mut graph)?),
        None => None,
    };
    let mut rng = GrowthRng::seed_from_u64(rng_seed);
    let first_grown = NodeId::from(graph.node_count());
    let mut report = GrowthReport::default();
    for (&m, &epoch) in schedule.out_degree.iter().zip(&schedule.epochs) {
        let attr = sampler.as_ref().map(|s| s.sample(epoch, &mut rng));
        let target = realize_out_degree(m, &mut rng).max(1);
        let u = graph.push_node(epoch, attr);
        let outcome = attach.attach(&graph, u, target, &mut rng)?;
        for &v in &outcome.linked {
            graph.push_edge_unchecked(u, v);
        }
        report.steps += 1;
        report.created_links += outcome.linked.len();
        if outcome.forced_links > 0 {
            report.forced_link_events += 1;
            report.forced_links += outcome.forced_links;
        }
        if attach.scheduled() {
            report.requested_links += target;
            if outcome.truncated || outcome.linked.len() < target {
                report.truncations += 1;
            }
        }
        attach.after_step(&graph, u);
    }
    Ok(Generated {
        graph,
        report,
        first_grown,
    })
}
