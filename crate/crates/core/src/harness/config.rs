use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::apps::App;
use crate::error::{Error, Result};
use crate::fabric::ChipConfig;
use crate::graph::{StructureConfig, VertexId};
use crate::metrics::EnergyModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AppKind {
    Bfs,
    Sssp,
    PageRank,
}

impl fmt::Display for AppKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AppKind::Bfs => "bfs",
            AppKind::Sssp => "sssp",
            AppKind::PageRank => "pagerank",
        })
    }
}

impl FromStr for AppKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bfs" => Ok(AppKind::Bfs),
            "sssp" => Ok(AppKind::Sssp),
            "pagerank" | "pr" => Ok(AppKind::PageRank),
            other => Err(Error::config(format!("unknown app `{other}`"))),
        }
    }
}

/// Where the input graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GraphSpec {
    /// Whitespace-separated `src dst [weight]` lines.
    File(PathBuf),
    Rmat {
        scale: u32,
        edge_factor: u32,
        a: f64,
        b: f64,
        c: f64,
        seed: u64,
    },
    /// Uniform directed G(n, m) without self-loops or duplicates.
    Er { n: u32, m: u64, seed: u64 },
    /// Vertex 0 receives an edge from each of `1..=hub_in`; every vertex
    /// also gets `out` edges to uniformly drawn other vertices.
    Hub { n: u32, hub_in: u32, out: u32, seed: u64 },
    /// Hub 0 linked both ways with leaves `1..=leaves`.
    Star { leaves: u32 },
    /// Path `0 -> 1 -> ... -> n-1`.
    Chain { n: u32 },
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
            GraphSpec::Rmat {
                scale,
                edge_factor,
                a,
                b,
                c,
                seed,
            } => write!(f, "rmat:scale={scale},edge_factor={edge_factor},a={a},b={b},c={c},seed={seed}"),
            GraphSpec::Er { n, m, seed } => write!(f, "er:n={n},m={m},seed={seed}"),
            GraphSpec::Hub { n, hub_in, out, seed } => write!(f, "hub:n={n},in={hub_in},out={out},seed={seed}"),
            GraphSpec::Star { leaves } => write!(f, "star:leaves={leaves}"),
            GraphSpec::Chain { n } => write!(f, "chain:n={n}"),
        }
    }
}

/// `key=value` parameters of a generator spec.
struct Params<'a> {
    kind: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(kind: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::config(format!("{kind}: expected key=value, got `{item}`")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Params { kind, pairs })
    }

    fn get<T: FromStr>(&self, key: &str, default: Option<T>) -> Result<T> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            Some((_, v)) => v
                .parse()
                .map_err(|_| Error::config(format!("{}: bad value `{v}` for `{key}`", self.kind))),
            None => default.ok_or_else(|| Error::config(format!("{}: missing `{key}`", self.kind))),
        }
    }

    fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !known.contains(k)) {
            Some((k, _)) => Err(Error::config(format!("{}: unknown parameter `{k}`", self.kind))),
            None => Ok(()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::config(format!("graph spec `{s}` lacks a `kind:` prefix")))?;
        if kind == "file" {
            if body.is_empty() {
                return Err(Error::config("file: needs a path"));
            }
            return Ok(GraphSpec::File(PathBuf::from(body)));
        }
        let p = Params::parse(kind, body)?;
        let spec = match kind {
            "rmat" => {
                p.reject_unknown(&["scale", "edge_factor", "a", "b", "c", "seed"])?;
                GraphSpec::Rmat {
                    scale: p.get("scale", None)?,
                    edge_factor: p.get("edge_factor", Some(16))?,
                    a: p.get("a", Some(0.45))?,
                    b: p.get("b", Some(0.25))?,
                    c: p.get("c", Some(0.15))?,
                    seed: p.get("seed", Some(1))?,
                }
            }
            "er" => {
                p.reject_unknown(&["n", "m", "seed"])?;
                GraphSpec::Er {
                    n: p.get("n", None)?,
                    m: p.get("m", None)?,
                    seed: p.get("seed", Some(1))?,
                }
            }
            "hub" => {
                p.reject_unknown(&["n", "in", "out", "seed"])?;
                GraphSpec::Hub {
                    n: p.get("n", None)?,
                    hub_in: p.get("in", None)?,
                    out: p.get("out", Some(4))?,
                    seed: p.get("seed", Some(1))?,
                }
            }
            "star" => {
                p.reject_unknown(&["leaves"])?;
                GraphSpec::Star {
                    leaves: p.get("leaves", None)?,
                }
            }
            "chain" => {
                p.reject_unknown(&["n"])?;
                GraphSpec::Chain { n: p.get("n", None)? }
            }
            other => return Err(Error::config(format!("unknown graph kind `{other}`"))),
        };
        Ok(spec)
    }
}

/// Output destinations. Empty means "do not write".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub stats_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
    pub results_path: Option<PathBuf>,
    pub mapping_path: Option<PathBuf>,
    /// Capture a congestion frame every this many cycles; 0 disables.
    pub frame_stride: u64,
    pub frame_dir: Option<PathBuf>,
}

/// Everything one run needs. Serialized as flat `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub chip: ChipConfig,
    pub graph: GraphSpec,
    /// Inclusive range for weights absent from the input.
    pub weight_min: u32,
    pub weight_max: u32,
    pub app: AppKind,
    pub source: VertexId,
    pub iterations: u32,
    pub damping: f64,
    pub structure: StructureConfig,
    pub energy: EnergyModel,
    pub lco_set_free: bool,
    pub check_invariants: bool,
    pub cycle_cap: u64,
    pub verify: bool,
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            chip: ChipConfig::default(),
            graph: GraphSpec::Chain { n: 3 },
            weight_min: 1,
            weight_max: 10,
            app: AppKind::Bfs,
            source: 0,
            iterations: 30,
            damping: 0.85,
            structure: StructureConfig::default(),
            energy: EnergyModel::default(),
            lco_set_free: true,
            check_invariants: false,
            cycle_cap: 100_000_000,
            verify: true,
            output: OutputConfig::default(),
        }
    }
}

/// Every recognised key, in serialization order.
pub const CONFIG_KEYS: &[&str] = &[
    "dim_x",
    "dim_y",
    "topology",
    "vc_count",
    "vc_buffer_capacity",
    "throttling",
    "seed",
    "graph",
    "weight_min",
    "weight_max",
    "app",
    "source",
    "iterations",
    "damping",
    "rpvo_max",
    "local_edge_list_size",
    "ghosts_per_object",
    "allocator",
    "vicinity_radius",
    "lco_set_free",
    "check_invariants",
    "cycle_cap",
    "verify",
    "stats_path",
    "json_path",
    "results_path",
    "mapping_path",
    "frame_stride",
    "frame_dir",
    "e_hop",
    "torus_link_factor",
    "e_op",
    "e_sram_access",
    "p_leak_cell",
    "cycle_time",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(Error::config(format!("bad boolean `{value}` for `{key}`"))),
    }
}

fn opt_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

impl ExperimentConfig {
    /// Parses `key = value` lines. Blank lines and `#` comments are skipped;
    /// unspecified keys keep their defaults.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            cfg.set(k.trim(), v.trim()).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_str(&fs::read_to_string(path)?)
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(format!("override `{assignment}` is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = &mut self.chip;
        let s = &mut self.structure;
        let e = &mut self.energy;
        let o = &mut self.output;
        match key {
            "dim_x" => c.dim_x = parse(key, value)?,
            "dim_y" => c.dim_y = parse(key, value)?,
            "topology" => c.topology = value.parse()?,
            "vc_count" => c.vc_count = parse(key, value)?,
            "vc_buffer_capacity" => c.vc_buffer_capacity = parse(key, value)?,
            "throttling" => c.throttling_enabled = parse_bool(key, value)?,
            "seed" => c.rng_seed = parse(key, value)?,
            "graph" => self.graph = value.parse()?,
            "weight_min" => self.weight_min = parse(key, value)?,
            "weight_max" => self.weight_max = parse(key, value)?,
            "app" => self.app = value.parse()?,
            "source" => self.source = parse(key, value)?,
            "iterations" => self.iterations = parse(key, value)?,
            "damping" => self.damping = parse(key, value)?,
            "rpvo_max" => s.rpvo_max = parse(key, value)?,
            "local_edge_list_size" => s.local_edge_list_size = parse(key, value)?,
            "ghosts_per_object" => s.ghosts_per_object = parse(key, value)?,
            "allocator" => s.allocator = value.parse()?,
            "vicinity_radius" => s.vicinity_radius = parse(key, value)?,
            "lco_set_free" => self.lco_set_free = parse_bool(key, value)?,
            "check_invariants" => self.check_invariants = parse_bool(key, value)?,
            "cycle_cap" => self.cycle_cap = parse(key, value)?,
            "verify" => self.verify = parse_bool(key, value)?,
            "stats_path" => o.stats_path = opt_path(value),
            "json_path" => o.json_path = opt_path(value),
            "results_path" => o.results_path = opt_path(value),
            "mapping_path" => o.mapping_path = opt_path(value),
            "frame_stride" => o.frame_stride = parse(key, value)?,
            "frame_dir" => o.frame_dir = opt_path(value),
            "e_hop" => e.e_hop = parse(key, value)?,
            "torus_link_factor" => e.torus_link_factor = parse(key, value)?,
            "e_op" => e.e_op = parse(key, value)?,
            "e_sram_access" => e.e_sram_access = parse(key, value)?,
            "p_leak_cell" => e.p_leak_cell = parse(key, value)?,
            "cycle_time" => e.cycle_time = parse(key, value)?,
            other => return Err(Error::config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Current value of `key` in the textual form `set` accepts.
    pub fn get(&self, key: &str) -> Option<String> {
        let c = &self.chip;
        let s = &self.structure;
        let e = &self.energy;
        let o = &self.output;
        Some(match key {
            "dim_x" => c.dim_x.to_string(),
            "dim_y" => c.dim_y.to_string(),
            "topology" => c.topology.to_string(),
            "vc_count" => c.vc_count.to_string(),
            "vc_buffer_capacity" => c.vc_buffer_capacity.to_string(),
            "throttling" => c.throttling_enabled.to_string(),
            "seed" => c.rng_seed.to_string(),
            "graph" => self.graph.to_string(),
            "weight_min" => self.weight_min.to_string(),
            "weight_max" => self.weight_max.to_string(),
            "app" => self.app.to_string(),
            "source" => self.source.to_string(),
            "iterations" => self.iterations.to_string(),
            "damping" => self.damping.to_string(),
            "rpvo_max" => s.rpvo_max.to_string(),
            "local_edge_list_size" => s.local_edge_list_size.to_string(),
            "ghosts_per_object" => s.ghosts_per_object.to_string(),
            "allocator" => s.allocator.to_string(),
            "vicinity_radius" => s.vicinity_radius.to_string(),
            "lco_set_free" => self.lco_set_free.to_string(),
            "check_invariants" => self.check_invariants.to_string(),
            "cycle_cap" => self.cycle_cap.to_string(),
            "verify" => self.verify.to_string(),
            "stats_path" => show_path(&o.stats_path),
            "json_path" => show_path(&o.json_path),
            "results_path" => show_path(&o.results_path),
            "mapping_path" => show_path(&o.mapping_path),
            "frame_stride" => o.frame_stride.to_string(),
            "frame_dir" => show_path(&o.frame_dir),
            "e_hop" => e.e_hop.to_string(),
            "torus_link_factor" => e.torus_link_factor.to_string(),
            "e_op" => e.e_op.to_string(),
            "e_sram_access" => e.e_sram_access.to_string(),
            "p_leak_cell" => e.p_leak_cell.to_string(),
            "cycle_time" => e.cycle_time.to_string(),
            _ => return None,
        })
    }

    /// Every key as `key = value`, one per line; parses back to `self`.
    pub fn to_kv_string(&self) -> String {
        CONFIG_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.get(k).expect("listed key")))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.chip.validate()?;
        self.structure.validate()?;
        self.energy.validate()?;
        if self.weight_min > self.weight_max {
            return Err(Error::config("weight_min exceeds weight_max"));
        }
        if !(0.0..=1.0).contains(&self.damping) {
            return Err(Error::config("damping must lie in [0, 1]"));
        }
        if self.cycle_cap == 0 {
            return Err(Error::config("cycle_cap must be positive"));
        }
        Ok(())
    }

    pub fn app(&self) -> App {
        match self.app {
            AppKind::Bfs => App::Bfs { source: self.source },
            AppKind::Sssp => App::Sssp { source: self.source },
            AppKind::PageRank => App::PageRank {
                iterations: self.iterations,
                damping: self.damping,
            },
        }
    }
}
