use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::oracle::bfs_levels;
use crate::error::{Error, Result};
use crate::graph::EdgeList;

const GEN_STREAM: u64 = 0x6E4E_12A7;

fn rng(seed: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(GEN_STREAM);
    r
}

/// Recursive-matrix generator: `edge_factor * 2^scale` directed edges over
/// `2^scale` vertices. Each edge descends `scale` levels, picking quadrant
/// `a`, `b`, `c` or `1 - a - b - c`. Matrix rows index the destination, so
/// the `a + b` mass concentrates in-degree on low ids. Self-loops and
/// repeated edges are kept.
pub fn generate_rmat(scale: u32, edge_factor: u32, a: f64, b: f64, c: f64, seed: u64) -> Result<EdgeList> {
    if !(2..=30).contains(&scale) {
        return Err(Error::config(format!("rmat scale {scale} outside 2..=30")));
    }
    let probs = [a, b, c];
    if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || a + b + c > 1.0 + 1e-12 {
        return Err(Error::config(format!("rmat probabilities ({a}, {b}, {c}) are not a distribution")));
    }
    let n = 1u32 << scale;
    let m = edge_factor as u64 * n as u64;
    let mut r = rng(seed);
    let mut pairs = Vec::with_capacity(m as usize);
    for _ in 0..m {
        let (mut row, mut col) = (0u32, 0u32);
        for level in (0..scale).rev() {
            let x: f64 = r.gen();
            let (dr, dc) = if x < a {
                (0, 0)
            } else if x < a + b {
                (0, 1)
            } else if x < a + b + c {
                (1, 0)
            } else {
                (1, 1)
            };
            row |= dr << level;
            col |= dc << level;
        }
        pairs.push((col, row));
    }
    Ok(EdgeList::unweighted(n, pairs))
}

/// Uniform directed G(n, m): `m` distinct ordered pairs without self-loops.
pub fn generate_er(n: u32, m: u64, seed: u64) -> Result<EdgeList> {
    let max = n as u64 * (n as u64).saturating_sub(1);
    if n < 2 || m > max {
        return Err(Error::config(format!("er: m = {m} exceeds n(n-1) = {max}")));
    }
    let mut r = rng(seed);
    let draw = |r: &mut ChaCha8Rng| loop {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u != v {
            return (u, v);
        }
    };
    let pairs: Vec<(u32, u32)> = if m * 2 <= max {
        let mut seen = HashSet::with_capacity(m as usize);
        let mut out = Vec::with_capacity(m as usize);
        while (out.len() as u64) < m {
            let p = draw(&mut r);
            if seen.insert(p) {
                out.push(p);
            }
        }
        out
    } else {
        let mut excluded = HashSet::new();
        while (excluded.len() as u64) < max - m {
            excluded.insert(draw(&mut r));
        }
        let mut out: Vec<(u32, u32)> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .filter(|p| !excluded.contains(p))
            .collect();
        out.shuffle(&mut r);
        out
    };
    Ok(EdgeList::unweighted(n, pairs))
}

/// One hub (vertex 0) fed by vertices `1..=hub_in`, over a random backbone
/// of `out` edges per vertex.
pub fn generate_hub(n: u32, hub_in: u32, out: u32, seed: u64) -> Result<EdgeList> {
    if n < 2 || hub_in >= n {
        return Err(Error::config(format!("hub: need 2 <= n and in < n (n = {n}, in = {hub_in})")));
    }
    let mut r = rng(seed);
    let mut pairs: Vec<(u32, u32)> = (1..=hub_in).map(|v| (v, 0)).collect();
    for u in 0..n {
        for _ in 0..out {
            let v = loop {
                let v = r.gen_range(0..n);
                if v != u {
                    break v;
                }
            };
            pairs.push((u, v));
        }
    }
    Ok(EdgeList::unweighted(n, pairs))
}

/// Hub 0 linked both ways with every leaf.
pub fn generate_star(leaves: u32) -> EdgeList {
    EdgeList::unweighted(leaves + 1, (1..=leaves).flat_map(|l| [(0, l), (l, 0)]))
}

/// Path `0 -> 1 -> ... -> n-1`.
pub fn generate_chain(n: u32) -> EdgeList {
    EdgeList::unweighted(n, (1..n).map(|v| (v - 1, v)))
}

/// Degree statistics plus the mean hop distance from a sample of sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphProfile {
    pub vertices: u32,
    pub edges: u64,
    pub mean_out_degree: f64,
    pub max_out_degree: u32,
    pub max_in_degree: u32,
    pub dangling: u32,
    /// Mean finite BFS distance, averaged over up to `samples` sources.
    pub mean_path_length: f64,
    pub samples: u32,
}

pub fn profile(edges: &EdgeList, samples: u32, seed: u64) -> GraphProfile {
    let out = edges.out_degrees();
    let inn = edges.in_degrees();
    let n = edges.num_vertices;
    let mut r = rng(seed ^ 0x5A5A);
    let mut sources: Vec<u32> = (0..n).collect();
    sources.shuffle(&mut r);
    sources.truncate(samples as usize);
    let mut means = Vec::new();
    for &s in &sources {
        let levels = bfs_levels(edges, s);
        let reached: Vec<u64> = levels.iter().flatten().filter(|&&l| l > 0).map(|&l| l as u64).collect();
        if !reached.is_empty() {
            means.push(reached.iter().sum::<u64>() as f64 / reached.len() as f64);
        }
    }
    GraphProfile {
        vertices: n,
        edges: edges.edges.len() as u64,
        mean_out_degree: if n == 0 { 0.0 } else { edges.edges.len() as f64 / n as f64 },
        max_out_degree: out.iter().copied().max().unwrap_or(0),
        max_in_degree: inn.iter().copied().max().unwrap_or(0),
        dangling: out.iter().filter(|&&d| d == 0).count() as u32,
        mean_path_length: if means.is_empty() {
            0.0
        } else {
            means.iter().sum::<f64>() / means.len() as f64
        },
        samples: sources.len() as u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rmat_10_is_in_degree_skewed() {
        let g = generate_rmat(10, 16, 0.45, 0.25, 0.15, 1).unwrap();
        assert_eq!(g.num_vertices, 1024);
        assert_eq!(g.edges.len(), 16384);
        let max_in = *g.in_degrees().iter().max().unwrap() as f64;
        assert!(max_in > 10.0 * 16.0, "max in-degree {max_in}");
    }

    #[test]
    fn rmat_is_reproducible() {
        let a = generate_rmat(8, 4, 0.45, 0.25, 0.15, 5).unwrap();
        assert_eq!(a, generate_rmat(8, 4, 0.45, 0.25, 0.15, 5).unwrap());
        assert_ne!(a, generate_rmat(8, 4, 0.45, 0.25, 0.15, 6).unwrap());
    }

    #[test]
    fn rmat_rejects_bad_probabilities() {
        assert!(generate_rmat(4, 2, 0.6, 0.3, 0.2, 1).is_err());
        assert!(generate_rmat(1, 2, 0.25, 0.25, 0.25, 1).is_err());
    }

    #[test]
    fn symmetric_rmat_is_uniform() {
        let g = generate_rmat(4, 1000, 0.25, 0.25, 0.25, 3).unwrap();
        let expected = g.edges.len() as f64 / 16.0;
        let chi2: f64 = g
            .out_degrees()
            .iter()
            .map(|&d| (d as f64 - expected).powi(2) / expected)
            .sum();
        // 15 degrees of freedom; the 0.999 quantile is about 37.7.
        assert!(chi2 < 37.7, "chi-square {chi2}");
    }

    #[test]
    fn er_complete_when_m_is_maximal() {
        let g = generate_er(4, 12, 1).unwrap();
        let mut pairs: Vec<_> = g.edges.iter().map(|e| (e.src, e.dst)).collect();
        pairs.sort();
        let all: Vec<_> = (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        assert_eq!(pairs, all);
        assert!(generate_er(4, 13, 1).is_err());
    }

    #[test]
    fn er_mean_out_degree() {
        let g = generate_er(1000, 9000, 2).unwrap();
        assert_eq!(g.edges.len(), 9000);
        assert!((profile(&g, 0, 0).mean_out_degree - 9.0).abs() < 1e-12);
        let distinct: HashSet<_> = g.edges.iter().map(|e| (e.src, e.dst)).collect();
        assert_eq!(distinct.len(), 9000);
        assert!(g.edges.iter().all(|e| e.src != e.dst));
        assert_eq!(g, generate_er(1000, 9000, 2).unwrap());
    }

    #[test]
    fn hub_has_the_requested_in_degree() {
        let g = generate_hub(256, 128, 2, 1).unwrap();
        assert!(g.in_degrees()[0] >= 128);
        assert_eq!(g.edges.len(), 128 + 256 * 2);
    }

    #[test]
    fn star_and_chain_shapes() {
        let s = generate_star(100);
        assert_eq!(s.in_degrees()[0], 100);
        assert_eq!(s.out_degrees()[0], 100);
        let c = generate_chain(3);
        assert_eq!(c.edges.len(), 2);
        let p = profile(&c, 10, 1);
        assert_eq!(p.dangling, 1);
    }
}
