//! Grid-search fitting of growth models to an observed graph, and
//! replicate-based significance tests between two fitted models.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TemporalDigraph};
use crate::metrics::{GraphProfile, MetricVector, permutation_test_one_sided};
use crate::model::ModelSpec;
use crate::schedule::GrowthSchedule;

/// Fraction of the observed graph used as the initial graph.
pub const INITIAL_FRACTION: f64 = 0.001;
pub const DEFAULT_SEARCH_REPLICATES: usize = 5;
pub const DEFAULT_FINAL_REPLICATES: usize = 100;
pub const DEFAULT_PERMUTATIONS: usize = 10_000;
pub const DEFAULT_ALPHA_LEVELS: [f64; 2] = [0.01, 0.001];

/// Mixes `stream` into `root` with the splitmix64 finalizer, one word at a
/// time.
pub fn derive_seed(root: u64, stream: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    stream.iter().fold(mix(root), |acc, &w| mix(acc ^ mix(w)))
}

/// `[0.05, 0.15, ..., 0.95]`.
pub fn default_lattice() -> Vec<f64> {
    (0..10).map(|i| (5 + 10 * i) as f64 / 100.0).collect()
}

/// Parameter grid over a model template.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Template; grid values override the named parameters.
    pub model: ModelSpec,
    /// Names of the parameters that vary, in cell-tuple order.
    pub params: Vec<String>,
    /// One value list per parameter; cells are their Cartesian product.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Vec<f64>>,
    /// Explicit cells, used instead of `values` when nonempty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Vec<f64>>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_true")]
    pub include_assortativity: bool,
}

fn default_replicates() -> usize {
    DEFAULT_SEARCH_REPLICATES
}

fn default_true() -> bool {
    true
}

impl GridSpec {
    /// Default lattice over every probability parameter of `model`.
    pub fn lattice(model: ModelSpec) -> Self {
        let params: Vec<String> = model
            .param_names()
            .into_iter()
            .filter(|p| *p != "attractiveness")
            .map(String::from)
            .collect();
        let values = vec![default_lattice(); params.len()];
        GridSpec {
            model,
            params,
            values,
            cells: Vec::new(),
            replicates: DEFAULT_SEARCH_REPLICATES,
            include_assortativity: true,
        }
    }

    /// Explicit cell list.
    pub fn explicit(model: ModelSpec, params: Vec<String>, cells: Vec<Vec<f64>>) -> Self {
        GridSpec {
            model,
            params,
            values: Vec::new(),
            cells,
            replicates: DEFAULT_SEARCH_REPLICATES,
            include_assortativity: true,
        }
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::param("replicates", "must be at least 1"));
        }
        for p in &self.params {
            if self.model.param(p).is_none() {
                return Err(Error::param(
                    "grid",
                    format!("model `{}` has no parameter `{p}`", self.model.tag()),
                ));
            }
        }
        let rows: &[Vec<f64>] = if self.cells.is_empty() {
            if self.values.len() != self.params.len() {
                return Err(Error::param("grid", "need one value list per parameter"));
            }
            if self.values.iter().any(Vec::is_empty) {
                return Err(Error::param("grid", "empty value list"));
            }
            &self.values
        } else {
            if self.cells.iter().any(|c| c.len() != self.params.len()) {
                return Err(Error::param("grid", "cell length differs from the parameter count"));
            }
            &self.cells
        };
        for v in rows.iter().flatten() {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::param("grid", format!("value {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Parameter tuples in lexicographic order (for a lattice) or in the
    /// given order (explicit cells).
    pub fn enumerate(&self) -> Vec<Vec<f64>> {
        if !self.cells.is_empty() {
            return self.cells.clone();
        }
        let mut sorted: Vec<Vec<f64>> = self.values.clone();
        for v in &mut sorted {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let mut out: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &sorted {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&x| {
                        let mut c = prefix.clone();
                        c.push(x);
                        c
                    })
                })
                .collect();
        }
        out
    }

    /// The template with the cell's values applied.
    pub fn model_for(&self, cell: &[f64]) -> Result<ModelSpec> {
        let mut spec = self.model;
        for (name, &v) in self.params.iter().zip(cell) {
            spec = spec.with_param(name, v)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// Initial graph and growth schedule derived from an observed graph, with
/// the observed measurements.
#[derive(Clone, Debug)]
pub struct FitSetup {
    pub initial: TemporalDigraph,
    pub schedule: GrowthSchedule,
    pub profile: GraphProfile,
}

impl FitSetup {
    /// Initial graph from an undirected BFS around the oldest node covering
    /// `INITIAL_FRACTION` of the nodes; the schedule replays the remaining
    /// arrivals.
    pub fn from_observed(observed: &TemporalDigraph) -> Result<Self> {
        Self::with_fraction(observed, INITIAL_FRACTION)
    }

    pub fn with_fraction(observed: &TemporalDigraph, fraction: f64) -> Result<Self> {
        let seed = observed.undirected_bfs_seed(NodeId(0), fraction)?;
        let schedule = GrowthSchedule::from_observed(observed, &seed.original)?;
        Ok(FitSetup {
            initial: seed.graph,
            schedule,
            profile: GraphProfile::new(observed),
        })
    }
}

/// Replicate results for one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub mean: MetricVector,
    pub replicates: Vec<MetricVector>,
    pub truncations: usize,
    pub forced_links: usize,
}

/// Grows `replicates` graphs and scores each against the observed profile.
/// Replicate `r` uses seed `derive_seed(rng_seed, [r])`.
pub fn evaluate_candidate(setup: &FitSetup, model: &ModelSpec, replicates: usize, rng_seed: u64) -> Result<CandidateScore> {
    if replicates == 0 {
        return Err(Error::param("replicates", "must be at least 1"));
    }
    let mut vectors = Vec::with_capacity(replicates);
    let (mut truncations, mut forced_links) = (0, 0);
    for r in 0..replicates {
        let generated = model.grow(&setup.initial, &setup.schedule, derive_seed(rng_seed, &[r as u64]))?;
        truncations += generated.report.truncations;
        forced_links += generated.report.forced_links;
        vectors.push(setup.profile.compare_graph(&generated.graph)?);
    }
    Ok(CandidateScore {
        mean: MetricVector::mean_of(&vectors).expect("at least one replicate"),
        replicates: vectors,
        truncations,
        forced_links,
    })
}

/// One grid cell's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub values: Vec<f64>,
    /// Replicate-mean metrics; absent when the cell failed.
    pub raw: Option<MetricVector>,
    pub normalized: Option<Vec<f64>>,
    pub l2: Option<f64>,
    /// 1 for the best cell.
    pub rank: Option<usize>,
    pub truncations: usize,
    pub forced_links: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CellResult {
    pub fn scored(values: Vec<f64>, score: &CandidateScore) -> Self {
        CellResult {
            values,
            raw: Some(score.mean),
            normalized: None,
            l2: None,
            rank: None,
            truncations: score.truncations,
            forced_links: score.forced_links,
            error: None,
        }
    }

    pub fn failed(values: Vec<f64>, error: &Error) -> Self {
        CellResult {
            values,
            raw: None,
            normalized: None,
            l2: None,
            rank: None,
            truncations: 0,
            forced_links: 0,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: Vec<String>,
    /// Names of the components entering the ℓ² score.
    pub components: Vec<String>,
    pub best_cell: Vec<f64>,
    pub best_model: Option<ModelSpec>,
    pub cells: Vec<CellResult>,
}

impl FitResult {
    /// Cells ordered by rank.
    pub fn ranking(&self) -> Vec<&CellResult> {
        let mut ranked: Vec<&CellResult> = self.cells.iter().filter(|c| c.rank.is_some()).collect();
        ranked.sort_by_key(|c| c.rank);
        ranked
    }

    pub fn rank_of(&self, values: &[f64]) -> Option<usize> {
        self.cells
            .iter()
            .find(|c| c.values.len() == values.len() && c.values.iter().zip(values).all(|(a, b)| (a - b).abs() < 1e-9))
            .and_then(|c| c.rank)
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Min-max normalizes each component across the valid cells (a constant
/// component normalizes to 0), scores each cell by the ℓ² norm of its
/// normalized vector and ranks cells by score, breaking ties by the
/// lexicographically smallest parameter tuple.
pub fn normalize_and_select(params: Vec<String>, mut cells: Vec<CellResult>, include_assortativity: bool) -> Result<FitResult> {
    let valid: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].raw.is_some()).collect();
    if valid.is_empty() {
        return Err(Error::Undefined("no valid grid cell"));
    }
    let use_assort = include_assortativity && valid.iter().all(|&i| cells[i].raw.unwrap().assort_abs_error.is_some());
    let raw: Vec<Vec<f64>> = valid
        .iter()
        .map(|&i| cells[i].raw.unwrap().components(use_assort))
        .collect();
    let dims = raw[0].len();
    let mut lo = vec![f64::INFINITY; dims];
    let mut hi = vec![f64::NEG_INFINITY; dims];
    for v in &raw {
        for j in 0..dims {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    for (&i, v) in valid.iter().zip(&raw) {
        let norm: Vec<f64> = (0..dims)
            .map(|j| {
                let span = hi[j] - lo[j];
                if span > 0.0 { (v[j] - lo[j]) / span } else { 0.0 }
            })
            .collect();
        cells[i].l2 = Some(norm.iter().map(|x| x * x).sum::<f64>().sqrt());
        cells[i].normalized = Some(norm);
    }
    let mut order = valid.clone();
    order.sort_by(|&a, &b| {
        let (la, lb) = (cells[a].l2.unwrap(), cells[b].l2.unwrap());
        if (la - lb).abs() <= 1e-12 {
            lexicographic(&cells[a].values, &cells[b].values)
        } else {
            la.total_cmp(&lb)
        }
    });
    for (rank, &i) in order.iter().enumerate() {
        cells[i].rank = Some(rank + 1);
    }
    let components = MetricVector::NAMES[..dims].iter().map(|s| s.to_string()).collect();
    Ok(FitResult {
        params,
        components,
        best_cell: cells[order[0]].values.clone(),
        best_model: None,
        cells,
    })
}

/// Evaluates every grid cell against the observed setup and selects the
/// best. All cells share the replicate seed sequence derived from
/// `rng_seed`, so results do not depend on evaluation order.
pub fn fit(setup: &FitSetup, grid: &GridSpec, rng_seed: u64) -> Result<FitResult> {
    grid.validate()?;
    let tuples = grid.enumerate();
    let cells: Vec<CellResult> = tuples
        .into_par_iter()
        .map(|values| {
            let outcome = grid
                .model_for(&values)
                .and_then(|spec| evaluate_candidate(setup, &spec, grid.replicates, rng_seed));
            match outcome {
                Ok(score) => CellResult::scored(values, &score),
                Err(e) => {
                    log::warn!("grid cell {values:?} failed: {e}");
                    CellResult::failed(values, &e)
                }
            }
        })
        .collect();
    let mut result = normalize_and_select(grid.params.clone(), cells, grid.include_assortativity)?;
    result.best_model = Some(grid.model_for(&result.best_cell)?);
    Ok(result)
}

/// Permutation test outcome for one metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricComparison {
    pub metric: String,
    pub mean_a: f64,
    pub mean_b: f64,
    /// One-sided p-value for `mean(a) < mean(b)`.
    pub p_value: f64,
    /// The alpha levels with `p_value ≤ alpha`.
    pub significant_at: Vec<f64>,
    pub values_a: Vec<f64>,
    pub values_b: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub model_a: ModelSpec,
    pub model_b: ModelSpec,
    pub replicates: usize,
    pub permutations: usize,
    pub alpha_levels: Vec<f64>,
    pub metrics: Vec<MetricComparison>,
    pub truncations_a: usize,
    pub truncations_b: usize,
}

impl SignificanceReport {
    pub fn metric(&self, name: &str) -> Option<&MetricComparison> {
        self.metrics.iter().find(|m| m.metric == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareOptions {
    pub replicates: usize,
    pub permutations: usize,
    pub alpha_levels: Vec<f64>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            replicates: DEFAULT_FINAL_REPLICATES,
            permutations: DEFAULT_PERMUTATIONS,
            alpha_levels: DEFAULT_ALPHA_LEVELS.to_vec(),
        }
    }
}

/// Grows replicates of both models (replicate `r` of each uses the same
/// seed) and tests, per metric, whether model A is closer to the observed
/// graph than model B.
pub fn compare_models(
    setup: &FitSetup,
    model_a: &ModelSpec,
    model_b: &ModelSpec,
    options: &CompareOptions,
    rng_seed: u64,
) -> Result<SignificanceReport> {
    let a = evaluate_candidate(setup, model_a, options.replicates, rng_seed)?;
    let b = evaluate_candidate(setup, model_b, options.replicates, rng_seed)?;
    let mut metrics = Vec::new();
    for (k, name) in MetricVector::NAMES.iter().enumerate() {
        let values_a: Option<Vec<f64>> = a.replicates.iter().map(|v| v.get(name)).collect();
        let values_b: Option<Vec<f64>> = b.replicates.iter().map(|v| v.get(name)).collect();
        let (Some(values_a), Some(values_b)) = (values_a, values_b) else {
            continue;
        };
        let p_value = permutation_test_one_sided(
            &values_a,
            &values_b,
            options.permutations,
            derive_seed(rng_seed, &[u64::MAX, k as u64]),
        )?;
        let significant_at = options.alpha_levels.iter().copied().filter(|&al| p_value <= al).collect();
        metrics.push(MetricComparison {
            metric: name.to_string(),
            mean_a: values_a.iter().sum::<f64>() / values_a.len() as f64,
            mean_b: values_b.iter().sum::<f64>() / values_b.len() as f64,
            p_value,
            significant_at,
            values_a,
            values_b,
        });
    }
    Ok(SignificanceReport {
        model_a: *model_a,
        model_b: *model_b,
        replicates: options.replicates,
        permutations: options.permutations,
        alpha_levels: options.alpha_levels.clone(),
        metrics,
        truncations_a: a.truncations,
        truncations_b: b.truncations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arw::ArwParams;
    use proptest::prelude::*;

    fn vector(x: f64, y: f64) -> MetricVector {
        MetricVector {
            ks_indegree: x,
            ks_clustering: y,
            wre: 0.5,
            assort_abs_error: None,
        }
    }

    fn cells(rows: &[(Vec<f64>, MetricVector)]) -> Vec<CellResult> {
        rows.iter()
            .map(|(values, v)| CellResult {
                values: values.clone(),
                raw: Some(*v),
                normalized: None,
                l2: None,
                rank: None,
                truncations: 0,
                forced_links: 0,
                error: None,
            })
            .collect()
    }

    #[test]
    fn lattice_values() {
        let l = default_lattice();
        assert_eq!(l.len(), 10);
        assert!((l[0] - 0.05).abs() < 1e-15 && (l[9] - 0.95).abs() < 1e-15);
        let g = GridSpec::lattice(ModelSpec::Arw(ArwParams::unattributed(0.5, 0.5, 0.5)));
        assert_eq!(g.params, vec!["p_link", "p_jump", "p_out"]);
        assert_eq!(g.enumerate().len(), 1000);
        g.validate().unwrap();
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let mut g = GridSpec::lattice(ModelSpec::ForestFire {
            p_forward: 0.1,
            p_backward: 0.1,
        });
        g.values = vec![vec![0.3, 0.1], vec![0.2, 0.4]];
        assert_eq!(
            g.enumerate(),
            vec![vec![0.1, 0.2], vec![0.1, 0.4], vec![0.3, 0.2], vec![0.3, 0.4]]
        );
        assert_eq!(g.model_for(&[0.3, 0.4]).unwrap().param("p_backward"), Some(0.4));
        g.values[0].push(1.5);
        assert!(g.validate().is_err());
    }

    #[test]
    fn single_cell_wins_with_zero_vector() {
        let r = normalize_and_select(vec!["x".into()], cells(&[(vec![0.5], vector(0.3, 0.9))]), true).unwrap();
        assert_eq!(r.best_cell, vec![0.5]);
        assert_eq!(r.cells[0].normalized.as_deref(), Some(&[0.0, 0.0, 0.0][..]));
        assert_eq!(r.cells[0].l2, Some(0.0));
    }

    #[test]
    fn tie_breaks_lexicographically() {
        let rows = vec![(vec![0.7], vector(0.1, 0.4)), (vec![0.2], vector(0.3, 0.2))];
        let r = normalize_and_select(vec!["x".into()], cells(&rows), true).unwrap();
        assert_eq!(r.cells[0].normalized.as_deref(), Some(&[0.0, 1.0, 0.0][..]));
        assert_eq!(r.cells[1].normalized.as_deref(), Some(&[1.0, 0.0, 0.0][..]));
        assert_eq!(r.best_cell, vec![0.2]);
        assert_eq!(r.rank_of(&[0.7]), Some(2));
    }

    #[test]
    fn no_valid_cells_is_an_error() {
        let failed = CellResult::failed(vec![0.1], &Error::EmptyGraph);
        assert!(normalize_and_select(vec!["x".into()], vec![failed], true).is_err());
    }

    #[test]
    fn seeds_differ_by_stream() {
        assert_ne!(derive_seed(1, &[0]), derive_seed(1, &[1]));
        assert_ne!(derive_seed(1, &[0]), derive_seed(2, &[0]));
        assert_eq!(derive_seed(7, &[3, 4]), derive_seed(7, &[3, 4]));
    }

    proptest! {
        #[test]
        fn dominating_cell_wins(
            rows in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..12),
        ) {
            let mut all: Vec<(Vec<f64>, MetricVector)> = rows
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| (vec![i as f64 / 100.0 + 0.1], vector(x + 0.01, y + 0.01)))
                .collect();
            all.push((vec![0.99], vector(0.0, 0.0)));
            let r = normalize_and_select(vec!["x".into()], cells(&all), true).unwrap();
            prop_assert_eq!(r.best_cell, vec![0.99]);
        }

        #[test]
        fn selection_invariant_under_affine_rescaling(
            rows in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..12),
            scale in 0.01f64..100.0,
            shift in -5.0f64..5.0,
        ) {
            let base: Vec<(Vec<f64>, MetricVector)> = rows
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| (vec![i as f64 / 100.0], vector(x, y)))
                .collect();
            let scaled: Vec<(Vec<f64>, MetricVector)> = base
                .iter()
                .map(|(c, v)| (c.clone(), MetricVector { ks_indegree: v.ks_indegree * scale + shift, ..*v }))
                .collect();
            let a = normalize_and_select(vec!["x".into()], cells(&base), true).unwrap();
            let b = normalize_and_select(vec!["x".into()], cells(&scaled), true).unwrap();
            for (ca, cb) in a.cells.iter().zip(&b.cells) {
                prop_assert!((ca.l2.unwrap() - cb.l2.unwrap()).abs() < 1e-9);
            }
        }
    }
}
