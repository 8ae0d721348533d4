//! Command-line front end.
//!
//! Every run writes `result.json` (parameters, seed, library version, wall
//! time and the result record) plus the command's CSV table into the output
//! directory. Flags override the `params` of a `--config` file.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

pub use config::{Command, Experiment, ExperimentConfig};

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;

/// Exit status for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_)
        | Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::TooLarge { .. }
        | Error::Parse(_)
        | Error::Json(_) => 2,
        Error::NormDrift { .. } => 3,
        Error::Io(_) => 4,
        Error::Unnormalized { .. } | Error::Eigen => 1,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ctwalk",
    version,
    about = "Continuous-time quantum walk and adiabatic search experiments"
)]
pub struct Cli {
    /// JSON config file; flags given on the command line override its params.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory [default: the config's "out", else out/<command>].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Evaluate grid points and shots on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Run a config file as is.
    Run {
        #[arg(value_name = "CONFIG")]
        path: PathBuf,
    },
    /// Walk from one vertex of a graph.
    Walk(WalkArgs),
    /// Walk search for a marked vertex of the hypercube.
    Search(SearchArgs),
    /// Adiabatic search with an interpolating schedule.
    Adiabatic(AdiabaticArgs),
    /// Search under the hybrid weight family or either of its limits.
    Hybrid(HybridArgs),
    /// Lowest two levels of (1 - s) H_h + s H_m over s.
    Gapscan(GapscanArgs),
    /// Repeated short runs on a spin-glass instance.
    SkSample(SkSampleArgs),
    /// Entrance-to-exit transport across glued binary trees.
    GluedTrees(GluedTreesArgs),
    /// Unary versus binary encoding cost.
    EncodeTable(EncodeTableArgs),
    /// Fit a power law to tuned search times or minimum gaps.
    Scaling(ScalingArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    /// line, cycle, complete, hypercube, glued-trees or custom.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    /// Vertices, qubits (hypercube) or depth (glued trees).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Edge-list file for custom graphs.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long = "tf", alias = "t-final")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Marked vertex index.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Hopping rate, or "auto" to tune it.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<config::Auto>,
    /// Run time, or "auto" for 3 pi sqrt(N) / 2.
    #[arg(long = "tf", alias = "t-final")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<config::Auto>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct AdiabaticArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long = "tf", alias = "t-final")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Hopping rate [default: 1/n].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// linear, smoothstep or sine_squared.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct HybridArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long = "tf", alias = "t-final")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// Hopping rate [default: 1/n].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// hybrid_parametric, qw_constant or adiabatic_linear.
    #[arg(long)]
    #[serde(skip)]
    pub family: Option<String>,
    /// Bump weight of the hybrid family, in [0, 1].
    #[arg(long)]
    #[serde(skip)]
    pub mix: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct GapscanArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Hopping rate [default: 1/n].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Uniform scan points over s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SkSampleArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Ising JSON file instead of a generated instance.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<config::Auto>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_run: Option<config::Auto>,
}

#[derive(Debug, Args, Serialize)]
pub struct GluedTreesArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long = "tf", alias = "t-final")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct EncodeTableArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScalingArgs {
    /// qw-search or gap.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<String>,
    /// Inclusive range of qubit counts, e.g. 6..10.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_range: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

fn flags<T: Serialize>(args: &T) -> Result<Map<String, Value>> {
    match serde_json::to_value(args)? {
        Value::Object(m) => Ok(m),
        _ => Ok(Map::new()),
    }
}

fn hybrid_flags(a: &HybridArgs) -> Result<Map<String, Value>> {
    let mut m = flags(a)?;
    let family = a.family.as_ref().map(|f| f.replace('-', "_"));
    let schedule = match (family.as_deref(), a.mix) {
        (None, None) => None,
        (None | Some("hybrid_parametric"), mix) => {
            Some(json!({"family": "hybrid_parametric", "mix": mix.unwrap_or(0.5)}))
        }
        (Some(f), None) => Some(json!({ "family": f })),
        (Some(f), Some(_)) => {
            return Err(invalid(format!(
                "--mix applies only to hybrid_parametric, not {f}"
            )))
        }
    };
    if let Some(s) = schedule {
        m.insert("schedule".into(), s);
    }
    Ok(m)
}

impl Sub {
    fn command_and_flags(&self) -> Result<Option<(Command, Map<String, Value>)>> {
        Ok(Some(match self {
            Sub::Run { .. } => return Ok(None),
            Sub::Walk(a) => (Command::Walk, flags(a)?),
            Sub::Search(a) => (Command::Search, flags(a)?),
            Sub::Adiabatic(a) => (Command::Adiabatic, flags(a)?),
            Sub::Hybrid(a) => (Command::Hybrid, hybrid_flags(a)?),
            Sub::Gapscan(a) => (Command::Gapscan, flags(a)?),
            Sub::SkSample(a) => (Command::SkSample, flags(a)?),
            Sub::GluedTrees(a) => (Command::GluedTrees, flags(a)?),
            Sub::EncodeTable(a) => (Command::EncodeTable, flags(a)?),
            Sub::Scaling(a) => (Command::Scaling, flags(a)?),
        }))
    }
}

impl Cli {
    /// The effective config: file contents (if any) with flags laid over them.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.command {
            Sub::Run { path } => {
                if self.config.is_some() {
                    return Err(invalid("use either 'run CONFIG' or '--config', not both"));
                }
                ExperimentConfig::load(path)?
            }
            _ => {
                let (command, overrides) = self
                    .command
                    .command_and_flags()?
                    .expect("not a run subcommand");
                let mut cfg = match &self.config {
                    Some(path) => ExperimentConfig::load(path)?,
                    None => ExperimentConfig::new(command),
                };
                if cfg.command != command {
                    return Err(invalid(format!(
                        "config is for '{}', not '{command}'",
                        cfg.command
                    )));
                }
                cfg.merge(overrides);
                cfg
            }
        };
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        Ok(cfg)
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

/// Files written by one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub json: PathBuf,
    pub tables: Vec<PathBuf>,
}

/// Validates `config`, runs it, and writes its outputs.
pub fn run(config: &ExperimentConfig, exec: Execution) -> Result<RunOutput> {
    let exp = config.experiment()?;
    let dir = config
        .out
        .clone()
        .unwrap_or_else(|| Path::new("out").join(config.command.name()));
    std::fs::create_dir_all(&dir)?;
    let start = Instant::now();
    let artifacts = commands::execute(&exp, exec)?;
    let wall_time = start.elapsed().as_secs_f64();
    let record = json!({
        "command": config.command,
        "version": crate::VERSION,
        "params": exp,
        "seed": exp.seed(),
        "result": artifacts.result,
        "tables": artifacts.tables.iter().map(|t| t.0).collect::<Vec<_>>(),
        "wall_time": wall_time,
    });
    let json_path = dir.join("result.json");
    let mut text = serde_json::to_string_pretty(&record)?;
    text.push('\n');
    std::fs::write(&json_path, text)?;
    let mut tables = Vec::with_capacity(artifacts.tables.len());
    for (name, body) in &artifacts.tables {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        tables.push(path);
    }
    Ok(RunOutput {
        dir,
        json: json_path,
        tables,
    })
}

/// Parses `args`, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.resolve().and_then(|cfg| run(&cfg, cli.execution())) {
        Ok(out) => {
            println!("{}", out.json.display());
            for t in &out.tables {
                println!("{}", t.display());
            }
            0
        }
        Err(e) => {
            eprintln!("ctwalk: {e}");
            exit_code(&e)
        }
    }
}
