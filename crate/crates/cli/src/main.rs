use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use ccasim::harness::{
    compare, materialize, oracle, profile, read_results, run_on_graph, sweep_configs, write_edge_list,
    write_outputs, write_results, ExperimentConfig, GraphSpec, SweepAxis, Verdict,
};
use ccasim::metrics::write_stats_csv;
use ccasim::Error;
use clap::{Args, Parser, Subcommand};

const EXIT_CONFIG: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_CYCLE_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "ccasim", version, about = "Cycle-level simulator for diffusive graph programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Write the stats CSV row here.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write per-vertex results here.
        #[arg(long)]
        results: Option<PathBuf>,
    },
    /// Run the cartesian product of the given axes, one stats row each.
    Sweep {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// An axis as `key=v1|v2|...`; repeatable.
        #[arg(long = "vary", value_name = "KEY=V1|V2")]
        vary: Vec<String>,
        /// Stats CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a synthetic edge list.
    Gen {
        /// Generator spec, e.g. `rmat:scale=10,edge_factor=16,seed=1`.
        spec: String,
        /// Edge list destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Draw weights from [lo, hi] and write them as a third column.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        weights: Option<Vec<u32>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Print degree and path-length statistics to stderr.
        #[arg(long)]
        profile: bool,
        /// Sources sampled for the mean path length.
        #[arg(long, default_value_t = 100)]
        samples: u32,
    },
    /// Compute oracle results only, or check a results file against them.
    Verify {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// A results file written by `run --results`.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Oracle results destination; stdout when omitted and no `--against`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat `key = value` configuration file.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override one key; repeatable, applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> ccasim::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        for s in &self.set {
            cfg.apply_override(s)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A failure that maps to a specific exit status.
enum Failure {
    Config(anyhow::Error),
    Mismatch(String),
    CycleCap(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CycleCap { .. } => Failure::CycleCap(e.into()),
            Error::Fault(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Config(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(e) => e.into(),
            Err(e) => Failure::Config(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.into())
    }
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn describe(v: &Verdict) -> String {
    match &v.first_mismatch {
        Some(i) => format!(
            "{} mismatching vertices, first at {i}, max abs error {:e}",
            v.mismatches, v.max_abs_error
        ),
        None => format!("max abs error {:e}", v.max_abs_error),
    }
}

fn run(cfg: ConfigArgs, stats: Option<PathBuf>, json: Option<PathBuf>, results: Option<PathBuf>) -> Result<(), Failure> {
    let mut cfg = cfg.load()?;
    cfg.output.stats_path = stats.or(cfg.output.stats_path);
    cfg.output.json_path = json.or(cfg.output.json_path);
    cfg.output.results_path = results.or(cfg.output.results_path);
    let graph = materialize(&cfg.graph, cfg.weight_min, cfg.weight_max, cfg.chip.rng_seed)?;
    let outcome = run_on_graph(&cfg, &graph)?;
    write_outputs(&cfg, &outcome, Some(&graph))?;
    let s = &outcome.stats;
    println!(
        "{} on {} ({} vertices, {} edges): {} cycles, {} messages, {:.3e} J, verdict {}",
        s.app, s.graph, s.vertices, s.edges, s.total_cycles, s.messages_created, s.energy_total, s.verdict
    );
    if !outcome.invariant_failures.is_empty() {
        let all = outcome.invariant_failures.join("; ");
        return Err(Failure::Mismatch(format!("invariant violations: {all}")));
    }
    match &outcome.verdict {
        Some(v) if !v.pass => Err(Failure::Mismatch(describe(v))),
        _ => Ok(()),
    }
}

fn sweep(cfg: ConfigArgs, vary: Vec<String>, out: Option<PathBuf>) -> Result<(), Failure> {
    let base = cfg.load()?;
    let axes = vary.iter().map(|a| SweepAxis::parse(a)).collect::<ccasim::Result<Vec<_>>>()?;
    let cfgs = sweep_configs(&base, &axes)?;
    let mut rows = Vec::with_capacity(cfgs.len());
    let mut failed = 0;
    for (i, c) in cfgs.iter().enumerate() {
        let graph = materialize(&c.graph, c.weight_min, c.weight_max, c.chip.rng_seed)?;
        let o = run_on_graph(c, &graph)?;
        eprintln!(
            "[{}/{}] {} cycles, verdict {}",
            i + 1,
            cfgs.len(),
            o.stats.total_cycles,
            o.stats.verdict
        );
        failed += usize::from(!o.passed() || !o.invariant_failures.is_empty());
        rows.push(o.stats);
    }
    write_stats_csv(output(&out)?, &rows)?;
    if failed > 0 {
        return Err(Failure::Mismatch(format!("{failed} of {} runs failed verification", rows.len())));
    }
    Ok(())
}

fn gen(
    spec: String,
    out: Option<PathBuf>,
    weights: Option<Vec<u32>>,
    seed: u64,
    show_profile: bool,
    samples: u32,
) -> Result<(), Failure> {
    let spec: GraphSpec = spec.parse()?;
    if matches!(spec, GraphSpec::File(_)) {
        return Err(Failure::Config(anyhow::anyhow!("gen needs a generator spec, not a file")));
    }
    let (lo, hi) = weights.as_deref().map_or((1, 1), |w| (w[0], w[1]));
    let edges = materialize(&spec, lo, hi, seed)?.edges;
    if show_profile {
        let p = profile(&edges, samples, seed);
        eprintln!("{}", serde_json::to_string_pretty(&p).map_err(anyhow::Error::from)?);
    }
    let mut w = output(&out)?;
    if weights.is_some() {
        write_edge_list(&mut w, &edges)?;
    } else {
        writeln!(w, "# {} vertices, {} edges", edges.num_vertices, edges.edges.len())?;
        for e in &edges.edges {
            writeln!(w, "{} {}", e.src, e.dst)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn verify(cfg: ConfigArgs, against: Option<PathBuf>, out: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = cfg.load()?;
    let graph = materialize(&cfg.graph, cfg.weight_min, cfg.weight_max, cfg.chip.rng_seed)?;
    let expected = oracle(&cfg.app(), &graph.edges)?;
    if against.is_none() || out.is_some() {
        let mut w = output(&out)?;
        write_results(&mut w, &expected)?;
        w.flush()?;
    }
    if let Some(p) = against {
        let file = File::open(&p).with_context(|| format!("opening {}", p.display()))?;
        let sim = read_results(BufReader::new(file), cfg.app)?;
        let v = compare(&sim, &expected);
        if !v.pass {
            return Err(Failure::Mismatch(describe(&v)));
        }
        eprintln!("{}: matches oracle ({})", p.display(), describe(&v));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            cfg,
            stats,
            json,
            results,
        } => run(cfg, stats, json, results),
        Command::Sweep { cfg, vary, out } => sweep(cfg, vary, out),
        Command::Gen {
            spec,
            out,
            weights,
            seed,
            profile,
            samples,
        } => gen(spec, out, weights, seed, profile, samples),
        Command::Verify { cfg, against, out } => verify(cfg, against, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::CycleCap(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CYCLE_CAP)
        }
    }
}
