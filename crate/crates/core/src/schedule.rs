//! Growth schedules: how many edges each incoming node forms, which epoch it
//! belongs to, and the distribution its attribute is drawn from.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, weighted::WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttrId, NodeId, TemporalDigraph};

/// Per-step growth plan for `T` incoming nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSchedule {
    /// Mean-field out-degree `m(t)` for `t = 1..=T`.
    pub out_degree: Vec<f64>,
    /// Epoch `y(t)` of each incoming node.
    pub epochs: Vec<i64>,
    /// Attribute distribution conditioned on epoch; absent for unattributed growth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<AttributeSchedule>,
}

impl GrowthSchedule {
    /// `steps` arrivals with constant out-degree `m`; epochs are `1..=steps`.
    pub fn constant(m: f64, steps: usize) -> Self {
        GrowthSchedule {
            out_degree: vec![m; steps],
            epochs: (1..=steps as i64).collect(),
            attributes: None,
        }
    }

    /// Arrivals whose out-degree follows a densification power law; see
    /// [`dpl_outdegree`].
    pub fn densifying(alpha: f64, base: f64, initial_nodes: usize, steps: usize) -> Result<Self> {
        Ok(GrowthSchedule {
            out_degree: dpl_outdegree(alpha, base, initial_nodes, steps)?,
            epochs: (1..=steps as i64).collect(),
            attributes: None,
        })
    }

    /// Replays the arrivals of `observed` that are not part of the initial
    /// graph: epoch `y(t)` is the epoch of the t-th such node, `m(t)` is the
    /// mean out-degree of observed nodes in that epoch, and the attribute
    /// distribution is the observed one conditioned on epoch.
    pub fn from_observed(observed: &TemporalDigraph, initial: &[NodeId]) -> Result<Self> {
        if observed.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut in_initial = vec![false; observed.node_count()];
        for &v in initial {
            in_initial[v.index()] = true;
        }
        let epochs: Vec<i64> = observed
            .nodes()
            .filter(|v| !in_initial[v.index()])
            .map(|v| observed.epoch(v))
            .collect();
        let by_epoch = build_outdegree_schedule(observed)?;
        let out_degree = by_epoch.for_epochs(&epochs);
        let attributes = if observed.is_attributed() {
            Some(AttributeSchedule::from_observed(observed))
        } else {
            None
        };
        Ok(GrowthSchedule {
            out_degree,
            epochs,
            attributes,
        })
    }

    pub fn with_attributes(mut self, attributes: AttributeSchedule) -> Self {
        self.attributes = Some(attributes);
        self
    }

    pub fn len(&self) -> usize {
        self.out_degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_degree.is_empty()
    }

    /// Mean of `m(t)` over all steps.
    pub fn mean_out_degree(&self) -> f64 {
        if self.out_degree.is_empty() {
            return 0.0;
        }
        self.out_degree.iter().sum::<f64>() / self.out_degree.len() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.out_degree.len() != self.epochs.len() {
            return Err(Error::param(
                "schedule",
                format!(
                    "{} out-degrees but {} epochs",
                    self.out_degree.len(),
                    self.epochs.len()
                ),
            ));
        }
        if let Some(m) = self.out_degree.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::param("out_degree", format!("{m} is not a non-negative number")));
        }
        if let Some(attrs) = &self.attributes {
            attrs.validate()?;
        }
        Ok(())
    }
}

/// Unbiased integer realization of a fractional out-degree:
/// `floor(m) + Bernoulli(frac(m))`.
pub fn realize_out_degree<R: Rng + ?Sized>(m: f64, rng: &mut R) -> usize {
    let floor = m.floor();
    let frac = m - floor;
    floor as usize + usize::from(frac > 0.0 && rng.random::<f64>() < frac)
}

/// Mean out-degree per arrival epoch.
#[derive(Clone, Debug, PartialEq)]
pub struct OutDegreeByEpoch(BTreeMap<i64, f64>);

impl OutDegreeByEpoch {
    /// Value for `epoch`. Epochs without arrivals carry the value of the
    /// closest earlier epoch forward; epochs before the first one take the
    /// first value.
    pub fn get(&self, epoch: i64) -> f64 {
        self.0
            .range(..=epoch)
            .next_back()
            .or_else(|| self.0.iter().next())
            .map(|(_, &m)| m)
            .unwrap_or(0.0)
    }

    pub fn for_epochs(&self, epochs: &[i64]) -> Vec<f64> {
        epochs.iter().map(|&y| self.get(y)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.0.iter().map(|(&y, &m)| (y, m))
    }
}

/// Mean out-degree of the observed nodes arriving in each epoch.
pub fn build_outdegree_schedule(observed: &TemporalDigraph) -> Result<OutDegreeByEpoch> {
    if observed.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut sums: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    for v in observed.nodes() {
        let entry = sums.entry(observed.epoch(v)).or_default();
        entry.0 += observed.out_degree(v);
        entry.1 += 1;
    }
    Ok(OutDegreeByEpoch(
        sums.into_iter()
            .map(|(y, (edges, nodes))| (y, edges as f64 / nodes as f64))
            .collect(),
    ))
}

/// Out-degree schedule `m(t) = c * n(t)^(alpha - 1)` where `n(t)` is the
/// number of nodes present when the t-th node arrives (`initial_nodes + t - 1`)
/// and `c` makes `m(1) = base`.
pub fn dpl_outdegree(alpha: f64, base: f64, initial_nodes: usize, steps: usize) -> Result<Vec<f64>> {
    if !(alpha >= 1.0) {
        return Err(Error::param("alpha", format!("{alpha} < 1")));
    }
    if initial_nodes == 0 {
        return Err(Error::param("initial_nodes", "must be positive"));
    }
    if !(base.is_finite() && base >= 0.0) {
        return Err(Error::param("base", format!("{base} is not a non-negative number")));
    }
    let exponent = alpha - 1.0;
    let c = base / (initial_nodes as f64).powf(exponent);
    Ok((1..=steps)
        .map(|t| c * ((initial_nodes + t - 1) as f64).powf(exponent))
        .collect())
}

/// Categorical attribute distribution per epoch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchedule {
    pub labels: Vec<String>,
    /// Probabilities over `labels`, keyed by epoch. Lookups for epochs
    /// without an entry use the closest earlier epoch.
    pub by_epoch: BTreeMap<i64, Vec<f64>>,
}

impl AttributeSchedule {
    /// The same distribution for every epoch.
    pub fn stationary(labels: Vec<String>, probabilities: Vec<f64>) -> Self {
        AttributeSchedule {
            labels,
            by_epoch: BTreeMap::from([(i64::MIN, probabilities)]),
        }
    }

    /// Equal mass on `k` labels named `c0..c{k-1}`.
    pub fn balanced(k: usize) -> Self {
        let labels = (0..k).map(|i| format!("c{i}")).collect();
        Self::stationary(labels, vec![1.0 / k as f64; k])
    }

    /// Empirical attribute frequencies per epoch, ignoring nodes without an
    /// attribute.
    pub fn from_observed(observed: &TemporalDigraph) -> Self {
        let k = observed.labels().len();
        let mut counts: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
        for v in observed.nodes() {
            if let Some(a) = observed.attribute(v) {
                counts.entry(observed.epoch(v)).or_insert_with(|| vec![0.0; k])[a.index()] += 1.0;
            }
        }
        for row in counts.values_mut() {
            let total: f64 = row.iter().sum();
            row.iter_mut().for_each(|c| *c /= total);
        }
        AttributeSchedule {
            labels: observed.labels().to_vec(),
            by_epoch: counts,
        }
    }

    pub fn distribution(&self, epoch: i64) -> Option<&[f64]> {
        self.by_epoch
            .range(..=epoch)
            .next_back()
            .or_else(|| self.by_epoch.iter().next())
            .map(|(_, p)| p.as_slice())
    }

    pub fn validate(&self) -> Result<()> {
        if self.by_epoch.is_empty() {
            return Err(Error::param("attributes", "no distributions"));
        }
        for (epoch, p) in &self.by_epoch {
            if p.len() != self.labels.len() {
                return Err(Error::param(
                    "attributes",
                    format!("epoch {epoch}: {} weights for {} labels", p.len(), self.labels.len()),
                ));
            }
            let total: f64 = p.iter().sum();
            if p.iter().any(|w| !(*w >= 0.0)) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::param(
                    "attributes",
                    format!("epoch {epoch}: weights do not form a distribution"),
                ));
            }
        }
        Ok(())
    }

    /// Sampler whose draws are label ids interned in `graph`.
    pub(crate) fn sampler(&self, graph: &mut TemporalDigraph) -> Result<AttributeSampler> {
        self.validate()?;
        let ids: Vec<AttrId> = self.labels.iter().map(|l| graph.intern_label(l)).collect();
        let mut by_epoch = BTreeMap::new();
        for (&epoch, p) in &self.by_epoch {
            let index = WeightedIndex::new(p)
                .map_err(|e| Error::param("attributes", format!("epoch {epoch}: {e}")))?;
            by_epoch.insert(epoch, index);
        }
        Ok(AttributeSampler { ids, by_epoch })
    }
}

pub(crate) struct AttributeSampler {
    ids: Vec<AttrId>,
    by_epoch: BTreeMap<i64, WeightedIndex<f64>>,
}

impl AttributeSampler {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, epoch: i64, rng: &mut R) -> AttrId {
        let dist = self
            .by_epoch
            .range(..=epoch)
            .next_back()
            .or_else(|| self.by_epoch.iter().next())
            .map(|(_, d)| d)
            .expect("validated schedule has at least one epoch");
        self.ids[dist.sample(rng)]
    }
}
