use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arw_core::fitting::{CompareOptions, GridSpec};
use arw_core::io::read_json;
use arw_core::metrics::ReportOptions;
use arw_core::model::ModelSpec;
use arw_core::runner::{
    self, Command, CompareConfig, FitConfig, GenerateConfig, MetricsConfig, RewireConfig, RunConfig,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arw", version, about = "Grow, measure and fit directed attributed networks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grow a graph and write nodes.tsv / edges.tsv
    Generate {
        #[arg(long)]
        model: String,
        /// JSON file with the model parameters
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        nodes: usize,
        #[arg(long, default_value_t = 3.0)]
        out_degree: f64,
        #[arg(long)]
        dpl_alpha: Option<f64>,
        /// Balanced attribute classes
        #[arg(long)]
        classes: Option<usize>,
        #[arg(long, default_value_t = 5)]
        seed_size: usize,
        /// Replay the arrivals of an observed graph directory
        #[arg(long)]
        observed: Option<PathBuf>,
        #[arg(long, default_value_t = runner::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure a graph; writes metrics.json and optional CSV tables
    Metrics {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dump_csv: bool,
        #[arg(long, default_value_t = 1000)]
        path_sample: usize,
        #[arg(long, default_value_t = 1000)]
        proximity_sample: usize,
        #[arg(long, default_value_t = runner::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid-search a model against a target graph
    Fit {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        model: String,
        /// Grid JSON; defaults to the 0.05..0.95 lattice over all probabilities
        #[arg(long)]
        grid_file: Option<PathBuf>,
        /// Template parameters for the default lattice
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        no_assortativity: bool,
        #[arg(long, default_value_t = runner::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Permutation tests of model A against model B on a target graph
    Compare {
        #[arg(long)]
        target: PathBuf,
        /// Tagged model JSON
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = 100)]
        replicates: usize,
        #[arg(long, default_value_t = 10_000)]
        permutations: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.001])]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = runner::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degree-preserving random rewiring
    Rewire {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = runner::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rerun the config stored in a run.json
    Replay {
        run_json: PathBuf,
        /// Write to this directory instead of the stored one
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn model_from(tag: &str, params: Option<&Path>) -> arw_core::Result<ModelSpec> {
    let value = match params {
        Some(p) => read_json(p)?,
        None => serde_json::json!({}),
    };
    ModelSpec::from_json_with_tag(value, Some(tag))
}

fn config(cmd: Cmd) -> arw_core::Result<RunConfig> {
    Ok(match cmd {
        Cmd::Generate {
            model,
            params,
            nodes,
            out_degree,
            dpl_alpha,
            classes,
            seed_size,
            observed,
            seed,
            out,
        } => RunConfig {
            seed,
            out,
            command: Command::Generate(GenerateConfig {
                model: model_from(&model, params.as_deref())?,
                nodes,
                out_degree,
                dpl_alpha,
                classes,
                seed_size,
                observed,
            }),
        },
        Cmd::Metrics {
            graph,
            dump_csv,
            path_sample,
            proximity_sample,
            seed,
            out,
        } => RunConfig {
            seed,
            out,
            command: Command::Metrics(MetricsConfig {
                graph,
                dump_csv,
                options: ReportOptions {
                    path_sample,
                    proximity_sample,
                    seed,
                },
            }),
        },
        Cmd::Fit {
            target,
            model,
            grid_file,
            params,
            replicates,
            no_assortativity,
            seed,
            out,
        } => {
            let mut grid: GridSpec = match grid_file {
                Some(p) => read_json(&p)?,
                None => GridSpec::lattice(model_from(&model, params.as_deref())?),
            };
            if grid.model.tag() != model {
                return Err(arw_core::Error::param(
                    "model",
                    format!("grid file is for `{}`", grid.model.tag()),
                ));
            }
            if let Some(r) = replicates {
                grid.replicates = r;
            }
            if no_assortativity {
                grid.include_assortativity = false;
            }
            RunConfig {
                seed,
                out,
                command: Command::Fit(FitConfig { target, grid }),
            }
        }
        Cmd::Compare {
            target,
            a,
            b,
            replicates,
            permutations,
            alpha,
            seed,
            out,
        } => RunConfig {
            seed,
            out,
            command: Command::Compare(CompareConfig {
                target,
                model_a: read_json(&a)?,
                model_b: read_json(&b)?,
                options: CompareOptions {
                    replicates,
                    permutations,
                    alpha_levels: alpha,
                },
            }),
        },
        Cmd::Rewire { graph, seed, out } => RunConfig {
            seed,
            out,
            command: Command::Rewire(RewireConfig { graph }),
        },
        Cmd::Replay { run_json, out } => {
            let mut c = runner::read_config(&run_json)?;
            if let Some(out) = out {
                c.out = out;
            }
            c
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config(cli.command).and_then(|c| runner::run(&c)) {
        Ok(output) => {
            for f in output.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
