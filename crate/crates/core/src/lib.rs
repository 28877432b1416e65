//! Cycle-level simulator of a message-driven manycore chip running
//! asynchronous vertex-centric graph programs over rhizomatic vertex
//! objects.
//!
//! The crate is layered bottom-up: [`fabric`] (topology, routing, virtual
//! channels, throttling), [`graph`] (vertex objects, rhizomes, placement),
//! [`runtime`] (cells, queues, LCOs, the cycle loop), [`apps`] (BFS, SSSP,
//! PageRank), [`metrics`] (statistics and energy) and [`harness`]
//! (configuration, ingestion, generators, oracles, experiments).

pub mod apps;
pub mod error;
pub mod fabric;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod runtime;

pub use error::{Error, Result};
