//! Configuration, graph ingestion and generation, sequential oracles and
//! experiment orchestration.

mod config;
mod experiment;
mod generators;
mod ingest;
mod oracle;

pub use config::{AppKind, ExperimentConfig, GraphSpec, OutputConfig, CONFIG_KEYS};
pub use experiment::{
    materialize, read_results, run_experiment, run_on_graph, sweep, sweep_configs, write_outputs, write_results, RunOutcome,
    SweepAxis,
};
pub use generators::{generate_chain, generate_er, generate_hub, generate_rmat, generate_star, profile, GraphProfile};
pub use ingest::{load_edge_list, parse_edge_list, write_edge_list, LoadedGraph, WeightSource};
pub use oracle::{bfs_levels, compare, dijkstra, oracle, pagerank, Verdict, SCORE_TOLERANCE};
