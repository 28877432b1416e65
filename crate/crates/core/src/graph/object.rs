use serde::{Deserialize, Serialize};

use crate::apps::PageRankSlots;
use crate::runtime::Address;

pub type VertexId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Root address of the destination vertex's assigned rhizome member.
    pub target: Address,
    pub weight: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectRole {
    /// Root of one RPVO; `member` is its index within the vertex's rhizome.
    Root { member: u16 },
    /// Holds only an edge chunk and links to further ghosts.
    Ghost { parent: Address },
}

/// Application state. Only roots consult it.
#[derive(Debug, Clone, PartialEq)]
pub struct AppSlots {
    pub level: u32,
    pub distance: u64,
    pub pagerank: PageRankSlots,
}

impl AppSlots {
    pub const UNREACHED_LEVEL: u32 = u32::MAX;
    pub const UNREACHED_DISTANCE: u64 = u64::MAX;
}

impl Default for AppSlots {
    fn default() -> Self {
        AppSlots {
            level: Self::UNREACHED_LEVEL,
            distance: Self::UNREACHED_DISTANCE,
            pagerank: PageRankSlots::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexObject {
    pub vertex: VertexId,
    pub role: ObjectRole,
    pub local_edges: Vec<Edge>,
    pub ghost_links: Vec<Address>,
    /// Sibling roots of the same vertex (roots only).
    pub rhizome_links: Vec<Address>,
    /// Total out-degree of the vertex, shared by every member.
    pub out_degree: u32,
    /// In-edges pointing at this member.
    pub local_in_degree: u32,
    /// Number of rhizome members of the vertex.
    pub members: u16,
    pub(crate) subtree_edges: u32,
    pub(crate) subtree_objects: u32,
    pub app: AppSlots,
}

impl VertexObject {
    pub fn root(vertex: VertexId, member: u16) -> Self {
        Self::with_role(vertex, ObjectRole::Root { member })
    }

    pub fn ghost(vertex: VertexId, parent: Address) -> Self {
        Self::with_role(vertex, ObjectRole::Ghost { parent })
    }

    fn with_role(vertex: VertexId, role: ObjectRole) -> Self {
        VertexObject {
            vertex,
            role,
            local_edges: Vec::new(),
            ghost_links: Vec::new(),
            rhizome_links: Vec::new(),
            out_degree: 0,
            local_in_degree: 0,
            members: 1,
            subtree_edges: 0,
            subtree_objects: 1,
            app: AppSlots::default(),
        }
    }

    #[inline]
    pub fn is_root(&self) -> bool {
        matches!(self.role, ObjectRole::Root { .. })
    }

    pub fn member_index(&self) -> Option<u16> {
        match self.role {
            ObjectRole::Root { member } => Some(member),
            ObjectRole::Ghost { .. } => None,
        }
    }
}
