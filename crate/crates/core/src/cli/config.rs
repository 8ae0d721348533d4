//! Experiment configuration: one JSON document per run.
//!
//! ```json
//! { "command": "search", "params": { "n": 6, "m": 13, "gamma": "auto" }, "out": "results/search" }
//! ```
//!
//! Every level rejects unknown keys. Missing optional keys take the defaults
//! documented on each parameter record.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::dynamics::{SCurve, ScheduleFamily, DEFAULT_SAMPLES};
use crate::error::{invalid, Error, Result};
use crate::graph::GraphKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Walk,
    Search,
    Adiabatic,
    Hybrid,
    Gapscan,
    SkSample,
    GluedTrees,
    EncodeTable,
    Scaling,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Walk => "walk",
            Command::Search => "search",
            Command::Adiabatic => "adiabatic",
            Command::Hybrid => "hybrid",
            Command::Gapscan => "gapscan",
            Command::SkSample => "sk-sample",
            Command::GluedTrees => "glued-trees",
            Command::EncodeTable => "encode-table",
            Command::Scaling => "scaling",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The on-disk form of a run: a command, its raw parameters, and an
/// optional output directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            params: empty_object(),
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        if !cfg.params.is_object() {
            return Err(invalid("config 'params' must be an object"));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Overlays `overrides` onto `params`, key by key.
    pub fn merge(&mut self, overrides: Map<String, Value>) {
        if let Value::Object(p) = &mut self.params {
            p.extend(overrides);
        }
    }

    /// Parses and validates the parameter record for the command.
    pub fn experiment(&self) -> Result<Experiment> {
        let p = self.params.clone();
        let exp = match self.command {
            Command::Walk => Experiment::Walk(typed(p)?),
            Command::Search => Experiment::Search(typed(p)?),
            Command::Adiabatic => Experiment::Adiabatic(typed(p)?),
            Command::Hybrid => Experiment::Hybrid(typed(p)?),
            Command::Gapscan => Experiment::Gapscan(typed(p)?),
            Command::SkSample => Experiment::SkSample(typed(p)?),
            Command::GluedTrees => Experiment::GluedTrees(typed(p)?),
            Command::EncodeTable => Experiment::EncodeTable(typed(p)?),
            Command::Scaling => Experiment::Scaling(typed(p)?),
        };
        exp.validate()?;
        Ok(exp)
    }
}

fn typed<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| invalid(format!("params: {e}")))
}

/// A validated, typed experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Experiment {
    Walk(WalkParams),
    Search(SearchParams),
    Adiabatic(AdiabaticParams),
    Hybrid(HybridParams),
    Gapscan(GapscanParams),
    SkSample(SkSampleParams),
    GluedTrees(GluedTreesParams),
    EncodeTable(EncodeTableParams),
    Scaling(ScalingParams),
}

impl Experiment {
    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be positive, got {v}")))
            }
        };
        let samples = |s: usize| {
            if s >= 2 {
                Ok(())
            } else {
                Err(invalid("samples must be at least 2"))
            }
        };
        match self {
            Experiment::Walk(p) => {
                positive("t_final", p.t_final)?;
                positive("gamma", p.gamma)?;
                samples(p.samples)?;
                if p.graph == GraphKind::Custom && p.edges.is_none() {
                    return Err(invalid("graph 'custom' needs an 'edges' file"));
                }
            }
            Experiment::Search(p) => {
                if let Auto::Value(g) = p.gamma {
                    positive("gamma", g)?;
                }
                if let Auto::Value(t) = p.t_final {
                    positive("t_final", t)?;
                }
                samples(p.samples)?;
            }
            Experiment::Adiabatic(p) => {
                positive("t_final", p.t_final)?;
                if let Some(g) = p.gamma {
                    positive("gamma", g)?;
                }
                samples(p.samples)?;
            }
            Experiment::Hybrid(p) => {
                positive("t_final", p.t_final)?;
                if let Some(g) = p.gamma {
                    positive("gamma", g)?;
                }
                samples(p.samples)?;
            }
            Experiment::Gapscan(p) => {
                if let Some(g) = p.gamma {
                    positive("gamma", g)?;
                }
                if p.resolution < 16 {
                    return Err(invalid("resolution must be at least 16"));
                }
            }
            Experiment::SkSample(p) => {
                if let Auto::Value(g) = p.gamma {
                    positive("gamma", g)?;
                }
                if let Auto::Value(t) = p.t_run {
                    positive("t_run", t)?;
                }
                if p.shots == 0 {
                    return Err(invalid("shots must be at least 1"));
                }
            }
            Experiment::GluedTrees(p) => {
                positive("t_final", p.t_final)?;
                samples(p.samples)?;
            }
            Experiment::EncodeTable(p) => {
                if p.max_n == 0 || p.max_n > 62 {
                    return Err(invalid(format!(
                        "max_n must lie in 1..=62, got {}",
                        p.max_n
                    )));
                }
            }
            Experiment::Scaling(p) => {
                if p.n_range.len() < 2 {
                    return Err(invalid("scaling needs at least two sizes"));
                }
                samples(p.samples)?;
            }
        }
        Ok(())
    }

    /// The seed recorded in outputs, if the experiment consumes one.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Experiment::Walk(p) => p.seed,
            Experiment::SkSample(p) => Some(p.seed),
            Experiment::GluedTrees(p) => Some(p.seed),
            _ => None,
        }
    }
}

/// Literal string `"auto"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

/// A number or `"auto"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Auto {
    Auto(AutoTag),
    Value(f64),
}

impl Default for Auto {
    fn default() -> Self {
        Auto::Auto(AutoTag::Auto)
    }
}

impl FromStr for Auto {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Auto::default());
        }
        s.parse::<f64>()
            .map(Auto::Value)
            .map_err(|_| Error::Parse(format!("expected a number or 'auto', got '{s}'")))
    }
}

/// Inclusive range of qubit counts, written `"6..10"` or `[6, 7, 8]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NRange(pub Vec<usize>);

impl NRange {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for NRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a range like '6..10', got '{s}'"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(NRange((lo..=hi).collect()))
    }
}

impl Serialize for NRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<usize>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::List(v) => Ok(NRange(v)),
        }
    }
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn one() -> f64 {
    1.0
}

/// Walk on a graph from one vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkParams {
    #[serde(default = "default_graph")]
    pub graph: GraphKind,
    /// Vertices (line, cycle, complete), qubits (hypercube) or depth (glued trees).
    #[serde(default)]
    pub size: usize,
    /// Edge-list file for `custom` graphs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<PathBuf>,
    #[serde(default = "one")]
    pub gamma: f64,
    pub t_final: f64,
    /// Start vertex; the middle of a line, the entrance of glued trees, 0 otherwise.
    #[serde(default)]
    pub start: Option<usize>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_graph() -> GraphKind {
    GraphKind::Line
}

/// Walk search on the hypercube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub n: usize,
    pub m: usize,
    #[serde(default)]
    pub gamma: Auto,
    #[serde(default)]
    pub t_final: Auto,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

/// Adiabatic search; `gamma` defaults to `1/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdiabaticParams {
    pub n: usize,
    pub m: usize,
    pub t_final: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_curve")]
    pub curve: SCurve,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_curve() -> SCurve {
    SCurve::Linear
}

/// Search under an arbitrary weight family; `gamma` defaults to `1/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridParams {
    pub n: usize,
    pub m: usize,
    pub t_final: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_family")]
    pub schedule: ScheduleFamily,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_family() -> ScheduleFamily {
    ScheduleFamily::HybridParametric { mix: 0.5 }
}

/// Gap of `(1 - s) H_h + s H_m` over `s in [0, 1]`; `gamma` defaults to `1/n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapscanParams {
    pub n: usize,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    64
}

/// Repeated short runs on a spin glass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkSampleParams {
    #[serde(default = "default_sk_n")]
    pub n: usize,
    /// Seeds both the generated instance and the measurement streams.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Ising JSON file used instead of a generated instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub gamma: Auto,
    #[serde(default)]
    pub t_run: Auto,
}

fn default_sk_n() -> usize {
    5
}

fn default_seed() -> u64 {
    1
}

fn default_shots() -> usize {
    200
}

/// Entrance-to-exit transport across glued binary trees (`gamma = 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluedTreesParams {
    pub depth: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub t_final: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

/// Unary versus binary cost for `N = 2^n`, `n = 1..=max_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodeTableParams {
    #[serde(default = "default_max_n")]
    pub max_n: usize,
}

fn default_max_n() -> usize {
    20
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingProtocol {
    /// Tuned walk search; fits the peak time against `N`.
    QwSearch,
    /// Minimum adiabatic gap; fits it against `N`.
    Gap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingParams {
    pub protocol: ScalingProtocol,
    pub n_range: NRange,
    #[serde(default)]
    pub m: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}
