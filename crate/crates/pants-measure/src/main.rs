//! Command-line front end.
//!
//! Every subcommand reads JSON files, prints a single JSON document on
//! standard output, and encodes its verdict in the exit status: 0 for
//! success (audits: all checks pass), 1 for an audit that found a
//! counterexample, 2 for invalid input.  Identical inputs produce
//! byte-identical output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use pants_measure::additive::{AdditiveError, AdditiveFunction};
use pants_measure::enumerate::{self, AuditStatus, EnumerationError};
use pants_measure::io::{self, GraphOrScene, IoError};
use pants_measure::measure::TopologicalMeasure;
use pants_measure::normalize::{audit_normalization, normalize};
use pants_measure::quasistate;
use pants_measure::rational::{decimal_string, format_rational};
use pants_measure::surface::{GraphError, PantsGraph, Scene, SceneError, Submanifold};

#[derive(Parser)]
#[command(
    name = "pants-measure",
    version,
    about = "Exact topological measures and quasi-state values on surfaces"
)]
struct Cli {
    /// Refuse exhaustive sweeps that would need more than this many cases.
    #[arg(long, global = true, default_value_t = 4096)]
    budget: u64,

    /// Emit JSON on standard output (the default and only format).
    #[arg(long, global = true)]
    json: bool,

    /// Scheduling seed for cross-check ordering; results never depend on it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical pants graph of the given genus.
    GraphNew {
        #[arg(long)]
        genus: u32,
    },
    /// Check a scene file and list its regions and curves.
    SceneValidate { file: PathBuf },
    /// Reduce a subsurface file to its class of pants.
    Normalize { file: PathBuf },
    /// Evaluate the measure induced by --nu on a subsurface file.
    Eval {
        /// Function file, or the literal "complexity".
        #[arg(long, default_value = "complexity")]
        nu: String,
        file: PathBuf,
    },
    /// Audit the function laws, the reduction properties, and the measure
    /// axioms over a graph or scene file.
    Audit {
        /// Function file, or the literal "complexity".
        #[arg(long, default_value = "complexity")]
        nu: String,
        file: PathBuf,
    },
    /// Integrate a filtration file into its quasi-state value.
    Zeta {
        /// Function file, or the literal "complexity".
        #[arg(long, default_value = "complexity")]
        nu: String,
        file: PathBuf,
    },
    /// List the regions, curves, and canonical selections of a scene file.
    Enumerate { file: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Evaluation(#[from] AdditiveError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}

fn emit(value: serde_json::Value) {
    println!("{value}");
}

fn resolve_nu(arg: &str, graph: &Arc<PantsGraph>) -> Result<AdditiveFunction, CliError> {
    if arg == "complexity" {
        Ok(AdditiveFunction::complexity(Arc::clone(graph)))
    } else {
        Ok(io::load_nu(Path::new(arg), graph)?)
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    // --json names the only output format there is, and --seed would only
    // reorder work that runs sequentially here; both are accepted so
    // invocations stay stable across versions.
    let _ = (cli.json, cli.seed);
    let budget = cli.budget;
    match cli.command {
        Command::GraphNew { genus } => {
            let graph = PantsGraph::canonical(genus)?;
            emit(io::graph_json(&graph));
            Ok(true)
        }
        Command::SceneValidate { file } => {
            let scene = io::load_scene(&file)?;
            let map = scene.region_map();
            emit(json!({
                "genus": scene.graph().genus(),
                "regions": map.regions().iter().map(|r| r.region.id_string()).collect::<Vec<_>>(),
                "curves": map.curves().iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
            }));
            Ok(true)
        }
        Command::Normalize { file } => {
            let w = io::load_submanifold(&file)?;
            emit(json!({"class": {"members": normalize(&w).members()}}));
            Ok(true)
        }
        Command::Eval { nu, file } => {
            let w = io::load_submanifold(&file)?;
            let nu = resolve_nu(&nu, w.graph())?;
            let class = normalize(&w);
            let value = nu.eval(&class)?;
            emit(json!({
                "class": {"members": class.members()},
                "value": format_rational(&value),
                "decimal": decimal_string(&value, 6),
            }));
            Ok(true)
        }
        Command::Audit { nu, file } => {
            let (graph, scene) = match io::load_graph_or_scene(&file)? {
                GraphOrScene::Scene(scene) => (Arc::clone(scene.graph()), scene),
                GraphOrScene::Graph(graph) => {
                    // A bare graph is audited over its simplest scene: one
                    // curve on every edge.
                    let sizes: Vec<(&str, usize)> =
                        graph.edges().iter().map(|e| (e.id.as_str(), 1)).collect();
                    let scene =
                        Scene::with_auto_stacks(Arc::clone(&graph), &sizes, Vec::new())?;
                    (graph, Arc::new(scene))
                }
            };
            let nu = resolve_nu(&nu, &graph)?;
            let function = nu.validate(budget)?;
            let reduction = audit_normalization(&scene, budget)?;
            let measure = TopologicalMeasure::new(nu).audit(&scene, budget)?;
            let pass = function.status == AuditStatus::Pass
                && reduction.status == AuditStatus::Pass
                && measure.status == AuditStatus::Pass;
            emit(json!({
                "status": if pass { "pass" } else { "fail" },
                "function": function,
                "normalization": reduction,
                "measure": measure,
            }));
            Ok(pass)
        }
        Command::Zeta { nu, file } => {
            let f = io::load_filtration(&file)?;
            let nu = resolve_nu(&nu, f.scene().graph())?;
            let value = quasistate::zeta(&f, &nu)?;
            let mut payload = json!({
                "zeta": format_rational(&value),
                "decimal": decimal_string(&value, 6),
            });
            let warnings = f.warnings();
            if !warnings.is_empty() {
                payload["warnings"] = json!(warnings);
            }
            emit(payload);
            Ok(true)
        }
        Command::Enumerate { file } => {
            let scene = io::load_scene(&file)?;
            let count = enumerate::check_budget(&scene, budget)?;
            let map = scene.region_map();
            let mut canonical = Vec::new();
            for mask in 0..count {
                let w = Submanifold::from_mask(&scene, mask);
                if w.is_canonical() {
                    canonical.push(json!({
                        "in": enumerate::mask_region_ids(&scene, mask),
                        "class": {"members": normalize(&w).members()},
                    }));
                }
            }
            emit(json!({
                "regions": map.regions().iter().map(|r| r.region.id_string()).collect::<Vec<_>>(),
                "curves": map.curves().iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
                "selections": count,
                "canonical": canonical,
            }));
            Ok(true)
        }
    }
}
