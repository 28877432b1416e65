use serde::{Deserialize, Serialize};

use super::{
    compute_cutoff_chunk, AllocMode, AllocatorPolicy, Edge, EdgeList, RhizomeDescriptor, VertexId,
    VertexObject,
};
use crate::error::{Error, Result};
use crate::fabric::{ChipConfig, Coordinate};
use crate::runtime::Address;

/// Data-structure knobs for graph construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConfig {
    /// Maximum RPVOs per rhizome; 1 disables rhizomes.
    pub rpvo_max: u32,
    pub local_edge_list_size: u32,
    /// Ghost children per vertex object (g).
    pub ghosts_per_object: u32,
    pub allocator: AllocMode,
    pub vicinity_radius: u32,
}

impl Default for StructureConfig {
    fn default() -> Self {
        StructureConfig {
            rpvo_max: 1,
            local_edge_list_size: 8,
            ghosts_per_object: 2,
            allocator: AllocMode::Mixed,
            vicinity_radius: 2,
        }
    }
}

impl StructureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rpvo_max == 0 || self.rpvo_max > u16::MAX as u32 {
            return Err(Error::config("rpvo_max must be in 1..=65535"));
        }
        if self.local_edge_list_size == 0 {
            return Err(Error::config("local_edge_list_size must be positive"));
        }
        if self.ghosts_per_object == 0 {
            return Err(Error::config("ghosts_per_object must be positive"));
        }
        if self.vicinity_radius == 0 {
            return Err(Error::config("vicinity_radius must be positive"));
        }
        Ok(())
    }
}

/// vertex id -> root addresses of its rhizome members.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDirectory {
    members: Vec<Vec<Address>>,
}

impl VertexDirectory {
    pub fn members(&self, v: VertexId) -> Option<&[Address]> {
        self.members.get(v as usize).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &[Address])> {
        self.members
            .iter()
            .enumerate()
            .map(|(v, m)| (v as VertexId, m.as_slice()))
    }
}

/// A populated chip: per-cell object stores plus the vertex directory.
#[derive(Debug, Clone)]
pub struct GraphStore {
    pub cfg: ChipConfig,
    pub structure: StructureConfig,
    pub cells: Vec<Vec<VertexObject>>,
    pub directory: VertexDirectory,
    pub rhizomes: Vec<RhizomeDescriptor>,
    pub indegree_max: u32,
    pub cutoff_chunk: u32,
}

impl GraphStore {
    pub fn object(&self, addr: Address) -> &VertexObject {
        &self.cells[self.cfg.cell_id(addr.cell)][addr.slot as usize]
    }

    pub fn objects(&self) -> impl Iterator<Item = (Address, &VertexObject)> {
        self.cells.iter().enumerate().flat_map(move |(id, store)| {
            let cell = self.cfg.coord(id);
            store
                .iter()
                .enumerate()
                .map(move |(slot, obj)| (Address::new(cell, slot as u32), obj))
        })
    }

    pub fn num_objects(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }
}

/// Incremental construction of RPVO trees and rhizomes on a chip.
#[derive(Debug)]
pub struct GraphBuilder {
    cfg: ChipConfig,
    structure: StructureConfig,
    alloc: AllocatorPolicy,
    cells: Vec<Vec<VertexObject>>,
}

impl GraphBuilder {
    pub fn new(cfg: &ChipConfig, structure: &StructureConfig) -> Result<Self> {
        cfg.validate()?;
        structure.validate()?;
        Ok(GraphBuilder {
            cfg: cfg.clone(),
            structure: structure.clone(),
            alloc: AllocatorPolicy::new(structure.allocator, structure.vicinity_radius, cfg),
            cells: vec![Vec::new(); cfg.num_cells()],
        })
    }

    fn place(&mut self, cell: Coordinate, obj: VertexObject) -> Address {
        let store = &mut self.cells[self.cfg.cell_id(cell)];
        store.push(obj);
        Address::new(cell, (store.len() - 1) as u32)
    }

    pub fn object(&self, addr: Address) -> &VertexObject {
        &self.cells[self.cfg.cell_id(addr.cell)][addr.slot as usize]
    }

    fn object_mut(&mut self, addr: Address) -> &mut VertexObject {
        &mut self.cells[self.cfg.cell_id(addr.cell)][addr.slot as usize]
    }

    /// Allocates the first root of `vertex`.
    pub fn add_root(&mut self, vertex: VertexId) -> Address {
        let cell = self.alloc.allocate_root(None);
        self.place(cell, VertexObject::root(vertex, 0))
    }

    fn has_spare(&self, addr: Address) -> bool {
        let obj = self.object(addr);
        obj.subtree_edges < obj.subtree_objects * self.structure.local_edge_list_size
    }

    fn least_loaded(&self, candidates: impl Iterator<Item = Address>) -> Option<Address> {
        // min_by_key keeps the first minimum, i.e. the lowest ghost index.
        candidates.min_by_key(|a| self.object(*a).subtree_edges)
    }

    /// Inserts `edge` into the RPVO rooted at `root`.
    ///
    /// Descends from the root: an object with room takes the edge; otherwise
    /// the least-loaded child subtree that still has room is entered; when no
    /// subtree has room a new ghost is allocated under the current object if
    /// it has fewer than g children, else the least-loaded child is entered.
    pub fn insert_edge(&mut self, root: Address, edge: Edge) {
        let cap = self.structure.local_edge_list_size as usize;
        let g = self.structure.ghosts_per_object as usize;
        let mut path = Vec::new();
        let mut cur = root;
        loop {
            path.push(cur);
            let obj = self.object(cur);
            if obj.local_edges.len() < cap {
                break;
            }
            let children = obj.ghost_links.clone();
            if let Some(next) = self.least_loaded(children.iter().copied().filter(|c| self.has_spare(*c))) {
                cur = next;
                continue;
            }
            if children.len() < g {
                let vertex = obj.vertex;
                let cell = self.alloc.allocate_ghost(cur.cell);
                let ghost = self.place(cell, VertexObject::ghost(vertex, cur));
                self.object_mut(cur).ghost_links.push(ghost);
                for a in &path {
                    self.object_mut(*a).subtree_objects += 1;
                }
                cur = ghost;
                continue;
            }
            cur = self
                .least_loaded(children.into_iter())
                .expect("full object without children");
        }
        let holder = *path.last().expect("path is never empty");
        self.object_mut(holder).local_edges.push(edge);
        for a in path {
            self.object_mut(a).subtree_edges += 1;
        }
    }

    /// Picks the rhizome member an in-edge of `rz.vertex` points at, creating
    /// and wiring a new member when its block comes up.
    pub fn assign_in_edge(&mut self, rz: &mut RhizomeDescriptor) -> Address {
        let idx = rz.next_member_index();
        if idx == rz.members.len() {
            let cell = self.alloc.allocate_root(Some(rz.members[0].cell));
            let addr = self.place(cell, VertexObject::root(rz.vertex, idx as u16));
            for &m in &rz.members {
                self.object_mut(m).rhizome_links.push(addr);
                self.object_mut(addr).rhizome_links.push(m);
            }
            rz.members.push(addr);
        }
        let target = rz.members[idx];
        self.object_mut(target).local_in_degree += 1;
        target
    }

    fn finish(
        mut self,
        rhizomes: Vec<RhizomeDescriptor>,
        out_degree: &[u32],
        indegree_max: u32,
        cutoff_chunk: u32,
    ) -> GraphStore {
        for store in &mut self.cells {
            for obj in store.iter_mut() {
                obj.out_degree = out_degree[obj.vertex as usize];
                obj.members = rhizomes[obj.vertex as usize].members.len() as u16;
            }
        }
        let directory = VertexDirectory {
            members: rhizomes.iter().map(|rz| rz.members.clone()).collect(),
        };
        GraphStore {
            cfg: self.cfg,
            structure: self.structure,
            cells: self.cells,
            directory,
            rhizomes,
            indegree_max,
            cutoff_chunk,
        }
    }
}

/// Two-pass construction outside cycle accounting.
///
/// Pass 1 measures in-degrees. Pass 2 allocates every vertex's first root,
/// resolves the destination member of each edge in file order (growing
/// rhizomes as blocks fill up), then inserts each vertex's out-edges
/// round-robin across its own members.
pub fn build_graph(edges: &EdgeList, cfg: &ChipConfig, structure: &StructureConfig) -> Result<GraphStore> {
    let n = edges.num_vertices;
    for (i, e) in edges.edges.iter().enumerate() {
        if e.src >= n || e.dst >= n {
            return Err(Error::config(format!(
                "edge {i} ({} -> {}) references a vertex outside 0..{n}",
                e.src, e.dst
            )));
        }
    }

    let in_degree = edges.in_degrees();
    let out_degree = edges.out_degrees();
    let indegree_max = in_degree.iter().copied().max().unwrap_or(0).max(1);
    let cutoff_chunk = compute_cutoff_chunk(indegree_max, structure.rpvo_max);

    let mut builder = GraphBuilder::new(cfg, structure)?;
    let mut rhizomes: Vec<RhizomeDescriptor> = (0..n)
        .map(|v| {
            let first = builder.add_root(v);
            RhizomeDescriptor::new(v, first, cutoff_chunk, structure.rpvo_max)
        })
        .collect();

    let targets: Vec<Address> = edges
        .edges
        .iter()
        .map(|e| builder.assign_in_edge(&mut rhizomes[e.dst as usize]))
        .collect();

    let mut out_cursor = vec![0usize; n as usize];
    for (e, target) in edges.edges.iter().zip(targets) {
        let members = &rhizomes[e.src as usize].members;
        let k = &mut out_cursor[e.src as usize];
        let holder = members[*k % members.len()];
        *k += 1;
        builder.insert_edge(holder, Edge { target, weight: e.weight });
    }

    Ok(builder.finish(rhizomes, &out_degree, indegree_max, cutoff_chunk))
}
