//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#![allow(clippy::field_reassign_with_default)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ccasim::fabric::{random_traffic_trial, throttle_period, ChipConfig, Topology};
use ccasim::graph::{build_graph, compute_cutoff_chunk};
use ccasim::harness::{materialize, run_on_graph, AppKind, ExperimentConfig, LoadedGraph, RunOutcome};

const RMAT10: &str = "rmat:scale=10,edge_factor=16,a=0.45,b=0.25,c=0.15,seed=1";
const HUB: &str = "hub:n=4096,in=2048,out=4,seed=1";

/// Runs experiments and remembers every configuration and stats row so
/// later criteria can rerun and audit them.
#[derive(Default)]
struct Runner {
    log: Vec<(ExperimentConfig, String)>,
    invariant_failures: Vec<String>,
    runs: usize,
}

impl Runner {
    fn config(graph: &str, app: AppKind, dim: u32, topology: Topology, rpvo: u32) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.graph = graph.parse().expect("graph spec");
        cfg.app = app;
        cfg.iterations = 10;
        cfg.damping = 0.85;
        cfg.chip = ChipConfig::new(dim, dim, topology);
        cfg.structure.rpvo_max = rpvo;
        cfg.check_invariants = true;
        cfg.verify = true;
        cfg
    }

    fn graph(cfg: &ExperimentConfig) -> LoadedGraph {
        materialize(&cfg.graph, cfg.weight_min, cfg.weight_max, cfg.chip.rng_seed).expect("graph")
    }

    fn run(&mut self, cfg: &ExperimentConfig) -> Result<RunOutcome, String> {
        self.run_on(cfg, &Self::graph(cfg))
    }

    fn run_on(&mut self, cfg: &ExperimentConfig, graph: &LoadedGraph) -> Result<RunOutcome, String> {
        self.runs += 1;
        let label = format!(
            "{} {} {}x{} {} rpvo={}",
            cfg.app, cfg.graph, cfg.chip.dim_x, cfg.chip.dim_y, cfg.chip.topology, cfg.structure.rpvo_max
        );
        match run_on_graph(cfg, graph) {
            Ok(o) => {
                for f in &o.invariant_failures {
                    self.invariant_failures.push(format!("{label}: {f}"));
                }
                self.log.push((cfg.clone(), o.stats.csv_row().expect("csv")));
                Ok(o)
            }
            Err(e) => {
                self.invariant_failures.push(format!("{label}: {e}"));
                Err(format!("{label}: {e}"))
            }
        }
    }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Runner) -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_matrix(r: &mut Runner) -> Outcome {
    let graphs = ["chain:n=3", "star:leaves=99", RMAT10, "er:n=1000,m=9000,seed=1"];
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst_pr: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut count = 0;
    for g in graphs {
        for topology in [Topology::Mesh, Topology::TorusMesh] {
            for rpvo in [1, 4, 8] {
                for app in [AppKind::Bfs, AppKind::Sssp, AppKind::PageRank] {
                    let cfg = Runner::config(g, app, 16, topology, rpvo);
                    count += 1;
                    match r.run(&cfg) {
                        Ok(o) => {
                            let v = o.verdict.expect("verify is on");
                            if let Some(sum) = v.score_sum {
                                worst_pr = worst_pr.max(v.max_abs_error);
                                worst_sum = worst_sum.max((sum - 1.0).abs());
                                if (sum - 1.0).abs() > 1e-9 {
                                    failures.push(format!("{app} {g} {topology} rpvo={rpvo}: sum {sum}"));
                                }
                            }
                            if !v.pass {
                                failures.push(format!(
                                    "{app} {g} {topology} rpvo={rpvo}: {} mismatches",
                                    v.mismatches
                                ));
                            }
                        }
                        Err(e) => failures.push(e),
                    }
                }
            }
        }
    }
    let detail = format!(
        "{count} runs in {:.1}s, pagerank max error {worst_pr:.1e}, max |sum-1| {worst_sum:.1e}",
        start.elapsed().as_secs_f64()
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", failures.join("; ")))
    }
}

fn unit_values(_: &mut Runner) -> Outcome {
    let cutoff = compute_cutoff_chunk(431_795, 16);
    let t = |d, topo| throttle_period(&ChipConfig::new(d, d, topo));
    let got = [
        cutoff as u64,
        t(128, Topology::Mesh),
        t(128, Topology::TorusMesh),
        t(16, Topology::Mesh),
    ];
    check(
        got == [26_987, 181, 90, 22],
        format!("cutoff {} periods {} {} {}", got[0], got[1], got[2], got[3]),
    )
}

fn deadlock_freedom(_: &mut Runner) -> Outcome {
    let mut total = 0;
    let mut dirty = Vec::new();
    for dim in [4, 8] {
        for topology in [Topology::Mesh, Topology::TorusMesh] {
            for capacity in [1, 2, 4] {
                let mut cfg = ChipConfig::new(dim, dim, topology);
                cfg.vc_buffer_capacity = capacity;
                let messages = 4 * cfg.num_cells();
                for trial in 0..1000 {
                    let seed = (dim as u64) << 32 | (capacity as u64) << 16 | trial;
                    let rep = random_traffic_trial(&cfg, messages, seed, 1_000_000);
                    total += 1;
                    if !rep.clean() {
                        dirty.push(format!("{dim}x{dim} {topology} cap={capacity} trial {trial}: {rep:?}"));
                    }
                }
            }
        }
    }
    check(
        dirty.is_empty(),
        format!("{total} trials, {} violations {}", dirty.len(), dirty.first().cloned().unwrap_or_default()),
    )
}

/// The hub's rhizome members' cells and the hub runs at rpvo_max 1 and 8.
struct HubRuns {
    cycles: [u64; 2],
    hub_peak: [u64; 2],
    contention: [u64; 2],
}

fn hub_runs(r: &mut Runner) -> Result<HubRuns, String> {
    let mut out = HubRuns {
        cycles: [0; 2],
        hub_peak: [0; 2],
        contention: [0; 2],
    };
    for (i, rpvo) in [1, 8].into_iter().enumerate() {
        let cfg = Runner::config(HUB, AppKind::Bfs, 32, Topology::TorusMesh, rpvo);
        let graph = Runner::graph(&cfg);
        let store = build_graph(&graph.edges, &cfg.chip, &cfg.structure).map_err(|e| e.to_string())?;
        let o = r.run_on(&cfg, &graph)?;
        if !o.passed() {
            return Err(format!("rpvo={rpvo} failed the oracle"));
        }
        let members = store.directory.members(0).expect("hub vertex");
        let deliveries: Vec<u64> = o.detail.deliveries().collect();
        out.hub_peak[i] = members
            .iter()
            .map(|a| deliveries[cfg.chip.cell_id(a.cell)])
            .max()
            .unwrap_or(0);
        out.cycles[i] = o.stats.total_cycles;
        out.contention[i] = o.stats.contention_cycles;
    }
    Ok(out)
}

fn rhizome_direction(r: &mut Runner) -> Outcome {
    let h = hub_runs(r)?;
    check(
        h.cycles[1] < h.cycles[0] && h.hub_peak[0] >= 2 * h.hub_peak[1],
        format!(
            "cycles {} -> {}, peak hub-cell deliveries {} -> {}",
            h.cycles[0], h.cycles[1], h.hub_peak[0], h.hub_peak[1]
        ),
    )
}

fn contention_redistribution(r: &mut Runner) -> Outcome {
    let h = hub_runs(r)?;
    check(
        h.contention[1] < h.contention[0],
        format!("contention cycles {} -> {}", h.contention[0], h.contention[1]),
    )
}

fn torus_vs_mesh(r: &mut Runner) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for rpvo in [1, 8] {
        let mesh = r.run(&Runner::config(RMAT10, AppKind::Bfs, 16, Topology::Mesh, rpvo))?;
        let torus = r.run(&Runner::config(RMAT10, AppKind::Bfs, 16, Topology::TorusMesh, rpvo))?;
        let (m, t) = (&mesh.stats, &torus.stats);
        let per_hop_ratio = (t.energy_network / t.total_hops as f64) / (m.energy_network / m.total_hops as f64);
        let good = t.total_cycles < m.total_cycles
            && t.energy_network > m.energy_network
            && (per_hop_ratio - 1.5).abs() < 1e-12
            && mesh.passed()
            && torus.passed();
        ok &= good;
        parts.push(format!(
            "rpvo={rpvo}: cycles torus {} vs mesh {}, network energy {:.3e} vs {:.3e}, per-hop ratio {per_hop_ratio:.3}",
            t.total_cycles, m.total_cycles, t.energy_network, m.energy_network
        ));
    }
    check(ok, parts.join("; "))
}

fn lazy_diffuse_band(r: &mut Runner) -> Outcome {
    let o = r.run(&Runner::config(RMAT10, AppKind::Bfs, 16, Topology::TorusMesh, 1))?;
    let f = o.stats.predicate_true_fraction();
    check(
        (0.02..=0.40).contains(&f) && o.stats.diffusions_pruned > 0,
        format!(
            "predicate-true fraction {:.2}%, diffusions pruned {}",
            100.0 * f,
            o.stats.diffusions_pruned
        ),
    )
}

fn throttling_efficacy(r: &mut Runner) -> Outcome {
    let mut hwm = [0; 2];
    let mut pass = [false; 2];
    for (i, on) in [true, false].into_iter().enumerate() {
        let mut cfg = Runner::config(HUB, AppKind::Bfs, 32, Topology::TorusMesh, 1);
        cfg.chip.throttling_enabled = on;
        let o = r.run(&cfg)?;
        hwm[i] = o.stats.vc_occupancy_hwm_sum;
        pass[i] = o.passed();
    }
    check(
        hwm[0] < hwm[1] && pass[0] && pass[1],
        format!(
            "summed VC occupancy high-water mark: on {} vs off {}, oracle {:?}",
            hwm[0], hwm[1], pass
        ),
    )
}

fn determinism(r: &mut Runner) -> Outcome {
    let log = std::mem::take(&mut r.log);
    let mut differing = Vec::new();
    for (cfg, row) in &log {
        match run_on_graph(cfg, &Runner::graph(cfg)) {
            Ok(o) if o.stats.csv_row().expect("csv") == *row => {}
            _ => differing.push(format!("{} {} rpvo={}", cfg.app, cfg.graph, cfg.structure.rpvo_max)),
        }
    }
    check(
        differing.is_empty(),
        format!("{} runs repeated, {} differ {}", log.len(), differing.len(), differing.join("; ")),
    )
}

fn invariant_suite(r: &mut Runner) -> Outcome {
    check(
        r.invariant_failures.is_empty(),
        format!(
            "{} checked runs, {} violations {}",
            r.runs,
            r.invariant_failures.len(),
            r.invariant_failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle exactness", oracle_matrix),
        ("cutoff chunk and throttle period values", unit_values),
        ("deadlock freedom under random traffic", deadlock_freedom),
        ("rhizomes speed up a hub and spread its deliveries", rhizome_direction),
        ("rhizomes lower total contention", contention_redistribution),
        ("torus beats mesh on time, costs more network energy", torus_vs_mesh),
        ("lazy diffusion prunes most BFS work", lazy_diffuse_band),
        ("throttling lowers peak VC occupancy", throttling_efficacy),
        ("determinism", determinism),
        ("invariant suite", invariant_suite),
    ];
    let mut runner = Runner::default();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(|| f(&mut runner)))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("PASS {:>2} {name} ({secs:.1}s): {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
