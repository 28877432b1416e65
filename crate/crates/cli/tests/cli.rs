use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ccasim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccasim")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("exp.conf");
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const SMALL: &str = "dim_x = 4\ndim_y = 4\ngraph = er:n=60,m=240,seed=2\napp = sssp\n";

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let stats = dir.path().join("stats.csv");
    let json = dir.path().join("run.json");
    let results = dir.path().join("results.csv");
    let o = ccasim(&[
        "run",
        "--config",
        &cfg,
        "--stats",
        stats.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--results",
        results.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(&stats).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("app,graph,topology,"));
    assert!(csv.lines().nth(1).unwrap().ends_with(",pass"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["verdict"]["pass"], true);
    assert_eq!(v["contention_histograms"][0]["counts"].as_array().unwrap().len(), 25);
    assert_eq!(fs::read_to_string(&results).unwrap().lines().count(), 61);

    let again = ccasim(&["verify", "--config", &cfg, "--against", results.to_str().unwrap()]);
    assert_eq!(code(&again), 0, "{}", String::from_utf8_lossy(&again.stderr));
}

#[test]
fn tampered_results_exit_with_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let results = dir.path().join("results.csv");
    assert_eq!(code(&ccasim(&["run", "-c", &cfg, "--results", results.to_str().unwrap()])), 0);
    let text = fs::read_to_string(&results).unwrap().replacen("\n0,0\n", "\n0,5\n", 1);
    fs::write(&results, text).unwrap();
    assert_eq!(code(&ccasim(&["verify", "-c", &cfg, "--against", results.to_str().unwrap()])), 2);
}

#[test]
fn bad_config_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "dim_x = 4\nbogus_key = 1\n");
    let o = ccasim(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&ccasim(&["run", "--set", "rpvo_max=0"])), 1);
    assert_eq!(code(&ccasim(&["run", "--set", "graph=file:/nonexistent/edges.txt"])), 1);
}

#[test]
fn cycle_cap_exits_three() {
    let o = ccasim(&["run", "--set", "graph=chain:n=100", "--set", "cycle_cap=20"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn overrides_win_over_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let stats = dir.path().join("s.csv");
    let o = ccasim(&["run", "-c", &cfg, "--set", "topology=mesh", "--stats", stats.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(&stats).unwrap().lines().nth(1).unwrap().contains(",mesh,4,4,"));
}

#[test]
fn sweep_emits_one_row_per_combination() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("sweep.csv");
    let o = ccasim(&[
        "sweep",
        "-c",
        &cfg,
        "--vary",
        "rpvo_max=1|2|4",
        "--vary",
        "app=bfs|pagerank",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 7);
}

#[test]
fn generated_list_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    let o = ccasim(&["gen", "rmat:scale=6,edge_factor=4,seed=3", "--out", edges.to_str().unwrap(), "--profile"]);
    assert_eq!(code(&o), 0);
    let profile: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(profile["vertices"], 64);
    assert_eq!(profile["edges"], 256);
    let text = fs::read_to_string(&edges).unwrap();
    assert!(text.starts_with("# 64 vertices, 256 edges"));

    let graph = format!("graph=file:{}", edges.display());
    let r = ccasim(&["run", "--set", &graph, "--set", "app=bfs", "--set", "dim_x=4", "--set", "dim_y=4"]);
    assert_eq!(code(&r), 0, "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn gen_is_reproducible() {
    let a = ccasim(&["gen", "er:n=50,m=100,seed=9", "--weights", "1", "10"]);
    let b = ccasim(&["gen", "er:n=50,m=100,seed=9", "--weights", "1", "10"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let first = String::from_utf8(a.stdout).unwrap();
    assert_eq!(first.lines().nth(1).unwrap().split_whitespace().count(), 3);
}
