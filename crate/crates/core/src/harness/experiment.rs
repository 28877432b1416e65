use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::generators::{generate_chain, generate_er, generate_hub, generate_rmat, generate_star};
use super::ingest::{load_edge_list, LoadedGraph, WeightSource};
use super::oracle::{compare, oracle, Verdict};
use super::{AppKind, ExperimentConfig, GraphSpec};
use crate::apps::{deploy, extract_results, App, AppResult};
use crate::error::{Error, Result};
use crate::graph::{audit_store, build_graph};
use crate::metrics::{
    contention_histogram, write_stats_csv, Frame, FrameRecorder, Histogram, RunDetail, RunStats, DEFAULT_BINS,
};
use crate::runtime::{Chip, ChipOptions};

/// Loads or generates the graph named by `spec`. Generated graphs and
/// unweighted file lines get weights drawn from `[lo, hi]` with `seed`.
pub fn materialize(spec: &GraphSpec, lo: u32, hi: u32, seed: u64) -> Result<LoadedGraph> {
    let mut weights = WeightSource::new(lo, hi, seed);
    let mut edges = match *spec {
        GraphSpec::File(ref path) => return load_edge_list(path, &mut weights),
        GraphSpec::Rmat {
            scale,
            edge_factor,
            a,
            b,
            c,
            seed,
        } => generate_rmat(scale, edge_factor, a, b, c, seed)?,
        GraphSpec::Er { n, m, seed } => generate_er(n, m, seed)?,
        GraphSpec::Hub { n, hub_in, out, seed } => generate_hub(n, hub_in, out, seed)?,
        GraphSpec::Star { leaves } => generate_star(leaves),
        GraphSpec::Chain { n } => generate_chain(n),
    };
    for e in &mut edges.edges {
        e.weight = weights.draw();
    }
    Ok(LoadedGraph::dense(edges))
}

/// Everything a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub stats: RunStats,
    pub detail: RunDetail,
    pub results: AppResult,
    /// Oracle comparison, when verification was requested.
    pub verdict: Option<Verdict>,
    /// Invariant violations, when checking was requested.
    pub invariant_failures: Vec<String>,
    pub frames: Vec<Frame>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.verdict.as_ref().is_none_or(|v| v.pass)
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let graph = materialize(&cfg.graph, cfg.weight_min, cfg.weight_max, cfg.chip.rng_seed)?;
    run_on_graph(cfg, &graph)
}

/// Label history used to check that BFS levels and SSSP distances never
/// increase.
struct LabelMonitor {
    last: Vec<(u32, u64)>,
    violations: u64,
}

impl LabelMonitor {
    fn new(chip: &Chip) -> Self {
        LabelMonitor {
            last: chip.objects().map(|o| (o.app.level, o.app.distance)).collect(),
            violations: 0,
        }
    }

    fn observe(&mut self, chip: &Chip) {
        for (prev, o) in self.last.iter_mut().zip(chip.objects()) {
            let now = (o.app.level, o.app.distance);
            if now.0 > prev.0 || now.1 > prev.1 {
                self.violations += 1;
            }
            *prev = now;
        }
    }
}

/// Build, germinate, run to idle, extract and optionally verify.
pub fn run_on_graph(cfg: &ExperimentConfig, graph: &LoadedGraph) -> Result<RunOutcome> {
    cfg.validate()?;
    let app = cfg.app();
    let store = build_graph(&graph.edges, &cfg.chip, &cfg.structure)?;
    let mut failures = Vec::new();
    if cfg.check_invariants {
        failures.extend(audit_store(&store, &graph.edges));
    }
    let deployment = deploy(&app, &store)?;
    let directory = store.directory.clone();
    let opts = ChipOptions {
        lco_set_free: cfg.lco_set_free,
        check_invariants: cfg.check_invariants,
    };
    let mut chip = Chip::new(store, deployment.registry, deployment.host, opts);
    chip.germinate(deployment.germinate)?;

    let mut recorder = (cfg.output.frame_stride > 0).then(|| FrameRecorder::new(cfg.output.frame_stride));
    let mut monitor = cfg.check_invariants.then(|| LabelMonitor::new(&chip));
    chip.run_until_idle(cfg.cycle_cap, |c| {
        if let Some(r) = recorder.as_mut() {
            r.observe(c);
        }
        if let Some(m) = monitor.as_mut() {
            m.observe(c);
        }
    })?;

    let results = extract_results(&app, &chip, &directory)?;
    if cfg.check_invariants {
        failures.extend(post_run_checks(&app, &chip));
        if let Some(m) = monitor {
            if m.violations > 0 {
                failures.push(format!("{} label increases observed", m.violations));
            }
        }
    }

    let mut stats = RunStats::from_chip(&chip, &cfg.energy);
    stats.app = app.name().to_string();
    stats.graph = cfg.graph.to_string();
    stats.rpvo_max = cfg.structure.rpvo_max;
    stats.vertices = graph.edges.num_vertices as u64;
    stats.edges = graph.edges.edges.len() as u64;
    let verdict = if cfg.verify {
        Some(compare(&results, &oracle(&app, &graph.edges)?))
    } else {
        None
    };
    stats.verdict = match &verdict {
        None => "unchecked",
        Some(v) if v.pass => "pass",
        Some(_) => "fail",
    }
    .to_string();

    Ok(RunOutcome {
        stats,
        detail: RunDetail::from_chip(&chip),
        results,
        verdict,
        invariant_failures: failures,
        frames: recorder.map(|r| r.frames().to_vec()).unwrap_or_default(),
    })
}

/// Invariants checked once the chip is idle.
fn post_run_checks(app: &App, chip: &Chip) -> Vec<String> {
    let mut bad = Vec::new();
    let v = chip.violations();
    for (name, n) in [
        ("one-slot", v.one_slot),
        ("message conservation", v.conservation),
        ("buffer capacity", v.buffer_overflow),
        ("network progress", v.stalled_network),
    ] {
        if n > 0 {
            bad.push(format!("{name} violated in {n} cycles"));
        }
    }
    let pruning: u64 = chip.cells().iter().map(|c| c.counters.pruning_violations).sum();
    if pruning > 0 {
        bad.push(format!("{pruning} failed predicates would have changed state"));
    }
    let hops: u64 = chip.cells().iter().map(|c| c.counters.hops_received).sum();
    if hops != chip.network().total_hops() {
        bad.push(format!("hop audit: {hops} received vs {} counted", chip.network().total_hops()));
    }
    if chip.messages_created() != chip.messages_delivered() {
        bad.push("messages left undelivered".into());
    }
    if let App::PageRank { iterations, .. } = *app {
        for o in chip.objects().filter(|o| o.is_root()) {
            let pr = &o.app.pagerank;
            if pr.collapses != iterations || !pr.msg_count.is_empty() || !pr.rhizome_score.is_empty() {
                bad.push(format!(
                    "vertex {} member {:?}: {} collapses, {} open count gates, {} open score gates",
                    o.vertex,
                    o.member_index(),
                    pr.collapses,
                    pr.msg_count.len(),
                    pr.rhizome_score.len()
                ));
                break;
            }
        }
    }
    bad
}

/// One `key=v1|v2|...` sweep dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    pub fn parse(s: &str) -> Result<Self> {
        let (k, vs) = s
            .split_once('=')
            .ok_or_else(|| Error::config(format!("sweep axis `{s}` is not key=v1|v2")))?;
        let values: Vec<String> = vs.split('|').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(Error::config(format!("sweep axis `{s}` has an empty value")));
        }
        Ok(SweepAxis {
            key: k.trim().to_string(),
            values,
        })
    }
}

/// Every configuration of the cartesian product of `axes` over `base`,
/// first axis slowest.
pub fn sweep_configs(base: &ExperimentConfig, axes: &[SweepAxis]) -> Result<Vec<ExperimentConfig>> {
    let mut out = vec![base.clone()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.values.len());
        for cfg in &out {
            for v in &axis.values {
                let mut c = cfg.clone();
                c.set(&axis.key, v)?;
                next.push(c);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Runs every configuration of the sweep; one stats row each.
pub fn sweep(base: &ExperimentConfig, axes: &[SweepAxis]) -> Result<Vec<RunStats>> {
    sweep_configs(base, axes)?
        .iter()
        .map(|c| run_experiment(c).map(|o| o.stats))
        .collect()
}

#[derive(Serialize)]
struct JsonReport<'a> {
    stats: &'a RunStats,
    verdict: &'a Option<Verdict>,
    invariant_failures: &'a [String],
    contention_histograms: [Histogram; 4],
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes whichever outputs `cfg.output` names.
pub fn write_outputs(cfg: &ExperimentConfig, outcome: &RunOutcome, graph: Option<&LoadedGraph>) -> Result<()> {
    let o = &cfg.output;
    if let Some(p) = &o.stats_path {
        write_stats_csv(create(p)?, std::slice::from_ref(&outcome.stats))?;
    }
    if let Some(p) = &o.json_path {
        let report = JsonReport {
            stats: &outcome.stats,
            verdict: &outcome.verdict,
            invariant_failures: &outcome.invariant_failures,
            contention_histograms: contention_histogram(&outcome.detail.contention, DEFAULT_BINS),
        };
        let mut w = create(p)?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        writeln!(w)?;
    }
    if let Some(p) = &o.results_path {
        write_results(create(p)?, &outcome.results)?;
    }
    if let (Some(p), Some(g)) = (&o.mapping_path, graph) {
        g.write_mapping(create(p)?)?;
    }
    if let Some(dir) = &o.frame_dir {
        fs::create_dir_all(dir)?;
        for f in &outcome.frames {
            f.write_csv(create(&dir.join(format!("frame_{:08}.csv", f.cycle)))?)?;
        }
    }
    Ok(())
}

/// `vertex,value` lines; unreached vertices print as `inf`.
pub fn write_results<W: Write>(mut w: W, results: &AppResult) -> Result<()> {
    writeln!(w, "vertex,value")?;
    for v in 0..results.len() {
        writeln!(w, "{v},{}", results.value_string(v))?;
    }
    Ok(())
}

/// Reads back a file written by [`write_results`].
pub fn read_results<R: BufRead>(input: R, kind: AppKind) -> Result<AppResult> {
    fn finite<T: std::str::FromStr>(s: &str) -> Option<Option<T>> {
        if s == "inf" {
            Some(None)
        } else {
            s.parse().ok().map(Some)
        }
    }
    let mut values = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if i == 0 || line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let (v, val) = line.split_once(',').ok_or_else(|| bad("expected `vertex,value`"))?;
        let v: usize = v.parse().map_err(|_| bad("bad vertex id"))?;
        if v != values.len() {
            return Err(bad("vertices must be listed densely in order"));
        }
        values.push(val.to_string());
    }
    let err = |i: usize| Error::Parse {
        line: i + 2,
        msg: format!("bad {kind} value"),
    };
    Ok(match kind {
        AppKind::Bfs => AppResult::Levels(
            values
                .iter()
                .enumerate()
                .map(|(i, s)| finite(s).ok_or_else(|| err(i)))
                .collect::<Result<_>>()?,
        ),
        AppKind::Sssp => AppResult::Distances(
            values
                .iter()
                .enumerate()
                .map(|(i, s)| finite(s).ok_or_else(|| err(i)))
                .collect::<Result<_>>()?,
        ),
        AppKind::PageRank => AppResult::Scores(
            values
                .iter()
                .enumerate()
                .map(|(i, s)| s.parse().map_err(|_| err(i)))
                .collect::<Result<_>>()?,
        ),
    })
}
