use super::{AllocMode, EdgeList, GraphStore, ObjectRole};

/// Structural checks over a built store. Returns one line per violation.
///
/// Covers edge conservation (total and per vertex), edge targets resolving
/// to roots, the rhizome clique, the in-degree sharing bound, per-object
/// capacity limits and, outside Random allocation, ghost locality.
pub fn audit_store(store: &GraphStore, input: &EdgeList) -> Vec<String> {
    let mut bad = Vec::new();
    let st = &store.structure;
    let n = input.num_vertices as usize;

    let mut held = vec![0u64; n];
    let mut total = 0usize;
    for (addr, obj) in store.objects() {
        held[obj.vertex as usize] += obj.local_edges.len() as u64;
        total += obj.local_edges.len();
        if obj.local_edges.len() > st.local_edge_list_size as usize {
            bad.push(format!("{addr:?} holds {} edges", obj.local_edges.len()));
        }
        if obj.ghost_links.len() > st.ghosts_per_object as usize {
            bad.push(format!("{addr:?} has {} ghosts", obj.ghost_links.len()));
        }
        for e in &obj.local_edges {
            if !store.object(e.target).is_root() {
                bad.push(format!("edge of {addr:?} targets ghost {:?}", e.target));
            }
        }
        if let ObjectRole::Ghost { parent } = obj.role {
            if !obj.rhizome_links.is_empty() {
                bad.push(format!("ghost {addr:?} has rhizome links"));
            }
            let dist = addr.cell.chebyshev(parent.cell, &store.cfg);
            if st.allocator != AllocMode::Random && dist > st.vicinity_radius {
                bad.push(format!("ghost {addr:?} lies {dist} cells from its parent"));
            }
        }
    }
    if total != input.edges.len() {
        bad.push(format!("store holds {total} edges, input has {}", input.edges.len()));
    }
    for (v, (&have, want)) in held.iter().zip(input.out_degrees()).enumerate() {
        if have != want as u64 {
            bad.push(format!("vertex {v} holds {have} out-edges, expected {want}"));
        }
    }

    let in_degree = input.in_degrees();
    for (v, members) in store.directory.iter() {
        let r = members.len();
        if r == 0 || r > st.rpvo_max as usize {
            bad.push(format!("vertex {v} has {r} members"));
            continue;
        }
        let fair = (in_degree[v as usize] as u64).div_ceil(r as u64);
        let mut assigned = 0u64;
        for (i, &m) in members.iter().enumerate() {
            let obj = store.object(m);
            if obj.vertex != v || obj.member_index() != Some(i as u16) {
                bad.push(format!("member {i} of vertex {v} is misfiled"));
            }
            let mut links = obj.rhizome_links.clone();
            links.sort();
            let mut others: Vec<_> = members.iter().copied().filter(|a| *a != m).collect();
            others.sort();
            if links != others {
                bad.push(format!("member {i} of vertex {v} does not link every sibling"));
            }
            let share = obj.local_in_degree as u64;
            assigned += share;
            if share.abs_diff(fair) > store.cutoff_chunk as u64 {
                bad.push(format!(
                    "member {i} of vertex {v} absorbs {share} in-edges (fair share {fair})"
                ));
            }
        }
        if assigned != in_degree[v as usize] as u64 {
            bad.push(format!("vertex {v} members absorb {assigned} in-edges"));
        }
    }
    bad
}
