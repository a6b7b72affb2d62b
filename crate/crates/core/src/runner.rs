//! Reproducible batch runs. A [`RunConfig`] fully determines a run; every
//! artifact directory gets a `run.json` holding the config, so any output
//! can be regenerated with [`run`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::configuration_rewire;
use crate::error::{Error, Result};
use crate::fitting::{self, CompareOptions, FitSetup, GridSpec, derive_seed};
use crate::graph::TemporalDigraph;
use crate::growth::{GrowthReport, seed_clique};
use crate::io::{self, IngestReport, LoadedGraph};
use crate::metrics::{DegreeClusteringCurve, MetricsReport, ReportOptions, histogram};
use crate::model::ModelSpec;
use crate::schedule::{AttributeSchedule, GrowthSchedule};

pub const RUN_FILE: &str = "run.json";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    Generate(GenerateConfig),
    Metrics(MetricsConfig),
    Fit(FitConfig),
    Compare(CompareConfig),
    Rewire(RewireConfig),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Metrics(_) => "metrics",
            Command::Fit(_) => "fit",
            Command::Compare(_) => "compare",
            Command::Rewire(_) => "rewire",
        }
    }
}

/// Growth from a seed clique under a synthetic schedule, or from the BFS
/// seed of an observed graph replaying its arrivals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub model: ModelSpec,
    /// Total node count, seed graph included. Ignored with `observed`.
    #[serde(default)]
    pub nodes: usize,
    #[serde(default = "default_out_degree")]
    pub out_degree: f64,
    /// Densification exponent; out-degree grows as `n^(alpha - 1)` from
    /// `out_degree`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dpl_alpha: Option<f64>,
    /// Number of balanced attribute classes; none for an unattributed run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<usize>,
    #[serde(default = "default_seed_size")]
    pub seed_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<PathBuf>,
}

fn default_out_degree() -> f64 {
    3.0
}

fn default_seed_size() -> usize {
    5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    pub graph: PathBuf,
    #[serde(default)]
    pub dump_csv: bool,
    #[serde(default)]
    pub options: ReportOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub target: PathBuf,
    pub grid: GridSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub target: PathBuf,
    pub model_a: ModelSpec,
    pub model_b: ModelSpec,
    #[serde(default)]
    pub options: CompareOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewireConfig {
    pub graph: PathBuf,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig,
    #[serde(flatten)]
    result: T,
}

/// Files written by a run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    config: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn dir(&self) -> Result<&Path> {
        let dir = self.config.out.as_path();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(dir)
    }

    fn json<T: Serialize>(&mut self, name: &str, result: T) -> Result<()> {
        let path = self.dir()?.join(name);
        io::write_json(
            &Envelope {
                config: self.config,
                result,
            },
            &path,
        )?;
        self.files.push(path);
        Ok(())
    }

    fn graph(&mut self, graph: &TemporalDigraph) -> Result<()> {
        let dir = self.dir()?.to_path_buf();
        io::save_graph(graph, &dir)?;
        self.files.push(dir.join(io::NODES_FILE));
        self.files.push(dir.join(io::EDGES_FILE));
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let path = self.dir()?.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }
}

fn load(path: &Path) -> Result<LoadedGraph> {
    let loaded = io::load_graph(path)?;
    let r = &loaded.report;
    if r.duplicate_edges + r.self_loops + r.temporal_violations > 0 {
        log::warn!(
            "{}: dropped {} duplicate edges and {} self-loops; {} edges point forward in time",
            path.display(),
            r.duplicate_edges,
            r.self_loops,
            r.temporal_violations
        );
    }
    Ok(loaded)
}

/// Runs one command and writes its artifacts, `run.json` included.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let mut w = Writer {
        config,
        files: Vec::new(),
    };
    match &config.command {
        Command::Generate(c) => {
            let (initial, schedule) = generation_inputs(c)?;
            let generated = c.model.grow(&initial, &schedule, config.seed)?;
            w.graph(&generated.graph)?;
            w.json(RUN_FILE, GenerateResult { growth: generated.report })?;
        }
        Command::Metrics(c) => {
            let loaded = load(&c.graph)?;
            let options = ReportOptions {
                seed: config.seed,
                ..c.options
            };
            let report = MetricsReport::compute(&loaded.graph, &options);
            if c.dump_csv {
                dump_csvs(&mut w, &loaded.graph, &report)?;
            }
            w.json(
                "metrics.json",
                MetricsResult {
                    ingest: &loaded.report,
                    metrics: &report,
                },
            )?;
            w.json(RUN_FILE, ())?;
        }
        Command::Fit(c) => {
            let loaded = load(&c.target)?;
            let setup = FitSetup::from_observed(&loaded.graph)?;
            let result = fitting::fit(&setup, &c.grid, derive_seed(config.seed, &[1]))?;
            w.json("fit.json", &result)?;
            w.json(RUN_FILE, ())?;
        }
        Command::Compare(c) => {
            let loaded = load(&c.target)?;
            let setup = FitSetup::from_observed(&loaded.graph)?;
            let report = fitting::compare_models(&setup, &c.model_a, &c.model_b, &c.options, derive_seed(config.seed, &[2]))?;
            w.json("compare.json", &report)?;
            w.json(RUN_FILE, ())?;
        }
        Command::Rewire(c) => {
            let loaded = load(&c.graph)?;
            let rewired = configuration_rewire(&loaded.graph, config.seed);
            w.graph(&rewired)?;
            w.json(RUN_FILE, RewireResult { ingest: &loaded.report })?;
        }
    }
    Ok(RunOutput { files: w.files })
}

/// Reads a `run.json` and returns its config.
pub fn read_config(path: &Path) -> Result<RunConfig> {
    #[derive(Deserialize)]
    struct Stored {
        config: RunConfig,
    }
    let stored: Stored = io::read_json(path)?;
    Ok(stored.config)
}

#[derive(Serialize)]
struct GenerateResult {
    growth: GrowthReport,
}

#[derive(Serialize)]
struct MetricsResult<'a> {
    ingest: &'a IngestReport,
    metrics: &'a MetricsReport,
}

#[derive(Serialize)]
struct RewireResult<'a> {
    ingest: &'a IngestReport,
}

/// Initial graph and schedule for a generate run.
pub fn generation_inputs(c: &GenerateConfig) -> Result<(TemporalDigraph, GrowthSchedule)> {
    if let Some(path) = &c.observed {
        let loaded = load(path)?;
        let setup = FitSetup::from_observed(&loaded.graph)?;
        return Ok((setup.initial, setup.schedule));
    }
    if c.seed_size == 0 {
        return Err(Error::param("seed_size", "must be at least 1"));
    }
    if c.nodes < c.seed_size {
        return Err(Error::param(
            "nodes",
            format!("{} is smaller than the seed graph ({})", c.nodes, c.seed_size),
        ));
    }
    let steps = c.nodes - c.seed_size;
    let mut schedule = match c.dpl_alpha {
        Some(alpha) => GrowthSchedule::densifying(alpha, c.out_degree, c.seed_size, steps)?,
        None => GrowthSchedule::constant(c.out_degree, steps),
    };
    let attributes = match c.classes {
        Some(0) => return Err(Error::param("classes", "must be at least 1")),
        Some(k) => Some(AttributeSchedule::balanced(k)),
        None => None,
    };
    let initial = seed_clique(c.seed_size, attributes.as_ref().map(|a| a.labels.as_slice()));
    if let Some(a) = attributes {
        schedule = schedule.with_attributes(a);
    }
    Ok((initial, schedule))
}

/// Counts per bin of width `(hi - lo) / bins`, values clamped into range.
fn binned(values: impl Iterator<Item = f64>, lo: f64, hi: f64, bins: usize) -> Vec<Vec<String>> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for v in values {
        let b = (((v - lo) / width).floor().max(0.0) as usize).min(bins - 1);
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| {
            let start = lo + b as f64 * width;
            vec![format!("{start:.4}"), format!("{:.4}", start + width), c.to_string()]
        })
        .collect()
}

fn dump_csvs(w: &mut Writer, graph: &TemporalDigraph, report: &MetricsReport) -> Result<()> {
    let ins = histogram(&graph.in_degrees());
    let outs = histogram(&graph.out_degrees());
    let mut rows: Vec<Vec<String>> = Vec::new();
    let max = ins.last().map_or(0, |x| x.0).max(outs.last().map_or(0, |x| x.0));
    let lookup = |h: &[(usize, usize)], k: usize| h.binary_search_by_key(&k, |x| x.0).map_or(0, |i| h[i].1);
    for k in 0..=max {
        let (a, b) = (lookup(&ins, k), lookup(&outs, k));
        if a + b > 0 {
            rows.push(vec![k.to_string(), a.to_string(), b.to_string()]);
        }
    }
    w.csv("degree_histogram.csv", &["degree", "in_count", "out_count"], rows)?;

    w.csv(
        "clustering_histogram.csv",
        &["bin_start", "bin_end", "count"],
        binned(report.clustering.iter().flatten().copied(), 0.0, 1.0, 20),
    )?;

    let curve = DegreeClusteringCurve::from_coefficients(graph, &report.clustering);
    w.csv(
        "degree_clustering.csv",
        &["in_degree", "nodes", "mean_clustering"],
        curve
            .bins
            .iter()
            .map(|(k, b)| vec![k.to_string(), b.nodes.to_string(), b.mean_clustering.to_string()])
            .collect(),
    )?;

    w.csv(
        "local_assortativity_histogram.csv",
        &["bin_start", "bin_end", "count"],
        binned(report.local_assortativity.iter().flatten().copied(), -1.0, 1.0, 20),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arw::ArwParams;

    fn generate(dir: &Path, seed: u64) -> RunConfig {
        RunConfig {
            seed,
            out: dir.to_path_buf(),
            command: Command::Generate(GenerateConfig {
                model: ModelSpec::Arw(ArwParams::attributed(0.9, 0.1, 0.2, 0.5)),
                nodes: 300,
                out_degree: 2.5,
                dpl_alpha: None,
                classes: Some(2),
                seed_size: 5,
                observed: None,
            }),
        }
    }

    #[test]
    fn generate_is_byte_reproducible_from_run_json() {
        let tmp = tempfile::tempdir().unwrap();
        let a = tmp.path().join("a");
        run(&generate(&a, 7)).unwrap();
        let mut config = read_config(&a.join(RUN_FILE)).unwrap();
        assert_eq!(config, generate(&a, 7));
        let b = tmp.path().join("b");
        config.out = b.clone();
        run(&config).unwrap();
        for f in [io::NODES_FILE, io::EDGES_FILE] {
            assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        }
        let loaded = io::load_graph(&a).unwrap();
        assert_eq!(loaded.graph.node_count(), 300);
    }

    #[test]
    fn metrics_single_class_triangle() {
        let tmp = tempfile::tempdir().unwrap();
        let g = tmp.path().join("g");
        let mut tri = TemporalDigraph::new();
        for e in 0..3 {
            tri.add_node(e, Some("x"));
        }
        for (s, d) in [(1, 0), (2, 0), (2, 1)] {
            tri.add_edge(s.into(), d.into()).unwrap();
        }
        io::save_graph(&tri, &g).unwrap();
        let out = tmp.path().join("m");
        let config = RunConfig {
            seed: 1,
            out: out.clone(),
            command: Command::Metrics(MetricsConfig {
                graph: g,
                dump_csv: true,
                options: ReportOptions::default(),
            }),
        };
        let written = run(&config).unwrap();
        assert!(written.files.iter().any(|f| f.ends_with("degree_clustering.csv")));
        let json: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("metrics.json")).unwrap()).unwrap();
        assert!(json["metrics"]["global_assortativity"]["value"].is_null());
        assert!(json["metrics"]["global_assortativity"]["undefined"].is_string());
        assert_eq!(json["config"]["command"]["name"], "metrics");
    }

    #[test]
    fn bad_node_count_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        let mut c = generate(tmp.path(), 1);
        if let Command::Generate(g) = &mut c.command {
            g.nodes = 2;
        }
        assert!(run(&c).is_err());
    }
}
