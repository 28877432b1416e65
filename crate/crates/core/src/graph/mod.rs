//! Rhizomatic recursively-parallel vertex objects and their construction.

mod alloc;
mod audit;
mod build;
mod object;
mod rhizome;

pub use alloc::{AllocMode, AllocatorPolicy};
pub use audit::audit_store;
pub use build::{build_graph, GraphStore, StructureConfig, VertexDirectory};
pub use object::{AppSlots, Edge, ObjectRole, VertexId, VertexObject};
pub use rhizome::{compute_cutoff_chunk, RhizomeDescriptor};

use serde::{Deserialize, Serialize};

/// One directed input edge, after vertex-id compaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEdge {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub num_vertices: u32,
    pub edges: Vec<InputEdge>,
}

impl EdgeList {
    pub fn new(num_vertices: u32, edges: Vec<InputEdge>) -> Self {
        EdgeList { num_vertices, edges }
    }

    /// Unit-weight edge list from `(src, dst)` pairs.
    pub fn unweighted(num_vertices: u32, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let edges = pairs
            .into_iter()
            .map(|(src, dst)| InputEdge { src, dst, weight: 1 })
            .collect();
        EdgeList { num_vertices, edges }
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.num_vertices as usize];
        for e in &self.edges {
            deg[e.src as usize] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.num_vertices as usize];
        for e in &self.edges {
            deg[e.dst as usize] += 1;
        }
        deg
    }
}
