use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::apps::{App, AppResult};
use crate::error::{Error, Result};
use crate::graph::{EdgeList, VertexId};

fn adjacency(edges: &EdgeList) -> Vec<Vec<(u32, u32)>> {
    let mut adj = vec![Vec::new(); edges.num_vertices as usize];
    for e in &edges.edges {
        adj[e.src as usize].push((e.dst, e.weight));
    }
    adj
}

/// Queue-based BFS levels; unreachable vertices are `None`.
pub fn bfs_levels(edges: &EdgeList, source: VertexId) -> Vec<Option<u32>> {
    let adj = adjacency(edges);
    let mut level = vec![None; adj.len()];
    let mut q = VecDeque::new();
    level[source as usize] = Some(0);
    q.push_back(source);
    while let Some(u) = q.pop_front() {
        let next = level[u as usize].expect("queued vertices are labelled") + 1;
        for &(v, _) in &adj[u as usize] {
            if level[v as usize].is_none() {
                level[v as usize] = Some(next);
                q.push_back(v);
            }
        }
    }
    level
}

/// Binary-heap Dijkstra over integer weights.
pub fn dijkstra(edges: &EdgeList, source: VertexId) -> Vec<Option<u64>> {
    let adj = adjacency(edges);
    let mut dist: Vec<Option<u64>> = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = Some(0);
    heap.push(Reverse((0u64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u as usize].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u as usize] {
            let nd = d + w as u64;
            if dist[v as usize].is_none_or(|best| nd < best) {
                dist[v as usize] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Dense power iteration from the uniform vector: `iterations` steps of
/// `x' = (1 - d) / N + d * (A x + D / N)`, where `D` is the mass of
/// vertices without out-edges.
pub fn pagerank(edges: &EdgeList, iterations: u32, damping: f64) -> Vec<f64> {
    let n = edges.num_vertices as usize;
    if n == 0 {
        return Vec::new();
    }
    let out = edges.out_degrees();
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    for _ in 0..iterations {
        let mut acc = vec![0.0; n];
        for e in &edges.edges {
            acc[e.dst as usize] += x[e.src as usize] / out[e.src as usize] as f64;
        }
        let dangling: f64 = (0..n).filter(|&v| out[v] == 0).map(|v| x[v]).sum();
        for v in 0..n {
            x[v] = (1.0 - damping) / nf + damping * (acc[v] + dangling / nf);
        }
    }
    x
}

/// Reference result for `app`, computed straight from the edge list.
pub fn oracle(app: &App, edges: &EdgeList) -> Result<AppResult> {
    let check = |s: VertexId| {
        if s < edges.num_vertices {
            Ok(())
        } else {
            Err(Error::UnknownVertex(s))
        }
    };
    Ok(match *app {
        App::Bfs { source } => {
            check(source)?;
            AppResult::Levels(bfs_levels(edges, source))
        }
        App::Sssp { source } => {
            check(source)?;
            AppResult::Distances(dijkstra(edges, source))
        }
        App::PageRank { iterations, damping } => AppResult::Scores(pagerank(edges, iterations, damping)),
    })
}

/// Per-vertex PageRank tolerance and tolerance on the score sum.
pub const SCORE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub mismatches: u64,
    /// First differing vertex, as `vertex: simulated vs expected`.
    pub first_mismatch: Option<String>,
    pub max_abs_error: f64,
    /// Sum of scores (PageRank only).
    pub score_sum: Option<f64>,
}

/// Exact comparison for labels; per-vertex and sum tolerance for scores.
pub fn compare(sim: &AppResult, expected: &AppResult) -> Verdict {
    let mut v = Verdict {
        pass: true,
        mismatches: 0,
        first_mismatch: None,
        max_abs_error: 0.0,
        score_sum: None,
    };
    let note = |i: usize, v: &mut Verdict| {
        v.mismatches += 1;
        if v.first_mismatch.is_none() {
            v.first_mismatch = Some(format!("{i}: {} vs {}", sim.value_string(i), expected.value_string(i)));
        }
    };
    match (sim, expected) {
        (AppResult::Levels(a), AppResult::Levels(b)) if a.len() == b.len() => {
            for i in 0..a.len() {
                if a[i] != b[i] {
                    note(i, &mut v);
                }
            }
        }
        (AppResult::Distances(a), AppResult::Distances(b)) if a.len() == b.len() => {
            for i in 0..a.len() {
                if a[i] != b[i] {
                    note(i, &mut v);
                }
            }
        }
        (AppResult::Scores(a), AppResult::Scores(b)) if a.len() == b.len() => {
            for i in 0..a.len() {
                let err = (a[i] - b[i]).abs();
                v.max_abs_error = v.max_abs_error.max(err);
                if err.is_nan() || err > SCORE_TOLERANCE {
                    note(i, &mut v);
                }
            }
            let sum: f64 = a.iter().sum();
            v.score_sum = Some(sum);
            if sum.is_nan() || (sum - 1.0).abs() > SCORE_TOLERANCE {
                v.pass = false;
            }
        }
        _ => {
            v.mismatches = 1;
            v.first_mismatch = Some("result shapes differ".into());
        }
    }
    v.pass &= v.mismatches == 0;
    v
}
