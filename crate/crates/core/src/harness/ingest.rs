use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeList, InputEdge};

const WEIGHT_STREAM: u64 = 0x3E16_4715;

/// An edge list with dense vertex ids and the original id of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedGraph {
    pub edges: EdgeList,
    /// `original_ids[v]` is the id vertex `v` had in the input.
    pub original_ids: Vec<u64>,
}

impl LoadedGraph {
    /// Wraps an already dense edge list.
    pub fn dense(edges: EdgeList) -> Self {
        let original_ids = (0..edges.num_vertices as u64).collect();
        LoadedGraph { edges, original_ids }
    }

    /// `dense_id,original_id` lines.
    pub fn write_mapping<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "vertex,original_id")?;
        for (v, id) in self.original_ids.iter().enumerate() {
            writeln!(w, "{v},{id}")?;
        }
        Ok(())
    }
}

/// Draws weights for edges whose input carried none.
#[derive(Debug, Clone)]
pub struct WeightSource {
    lo: u32,
    hi: u32,
    rng: ChaCha8Rng,
}

impl WeightSource {
    pub fn new(lo: u32, hi: u32, seed: u64) -> Self {
        assert!(lo <= hi, "empty weight range");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(WEIGHT_STREAM);
        WeightSource { lo, hi, rng }
    }

    pub fn draw(&mut self) -> u32 {
        self.rng.gen_range(self.lo..=self.hi)
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses `src dst [weight]` lines. `#` and `%` lines are comments. Vertex
/// ids are compacted to `0..N` in ascending order of the original id, so an
/// already dense input keeps its numbering.
pub fn parse_edge_list<R: BufRead>(input: R, weights: &mut WeightSource) -> Result<LoadedGraph> {
    let mut raw: Vec<(u64, u64, u32)> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(parse_err(lineno, format!("expected `src dst [weight]`, got `{t}`")));
        }
        let id = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| parse_err(lineno, format!("vertex id `{s}` is not a non-negative integer")))
        };
        let (src, dst) = (id(toks[0])?, id(toks[1])?);
        let w = match toks.get(2) {
            None => weights.draw(),
            Some(s) if s.starts_with('-') => return Err(parse_err(lineno, format!("negative weight `{s}`"))),
            Some(s) => s
                .parse()
                .map_err(|_| parse_err(lineno, format!("weight `{s}` is not a non-negative integer")))?,
        };
        raw.push((src, dst, w));
    }

    let mut ids: BTreeMap<u64, u32> = BTreeMap::new();
    for &(s, d, _) in &raw {
        ids.insert(s, 0);
        ids.insert(d, 0);
    }
    if ids.len() > u32::MAX as usize {
        return Err(Error::config("too many vertices"));
    }
    let mut original_ids = Vec::with_capacity(ids.len());
    for (dense, (orig, slot)) in ids.iter_mut().enumerate() {
        *slot = dense as u32;
        original_ids.push(*orig);
    }
    let edges = raw
        .into_iter()
        .map(|(s, d, weight)| InputEdge {
            src: ids[&s],
            dst: ids[&d],
            weight,
        })
        .collect();
    Ok(LoadedGraph {
        edges: EdgeList::new(original_ids.len() as u32, edges),
        original_ids,
    })
}

pub fn load_edge_list(path: &Path, weights: &mut WeightSource) -> Result<LoadedGraph> {
    let f = File::open(path)?;
    parse_edge_list(BufReader::new(f), weights)
}

/// Writes `src dst weight` lines.
pub fn write_edge_list<W: Write>(mut w: W, edges: &EdgeList) -> Result<()> {
    writeln!(w, "# {} vertices, {} edges", edges.num_vertices, edges.edges.len())?;
    for e in &edges.edges {
        writeln!(w, "{} {} {}", e.src, e.dst, e.weight)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<LoadedGraph> {
        parse_edge_list(s.as_bytes(), &mut WeightSource::new(1, 10, 7))
    }

    #[test]
    fn two_edges_three_vertices() {
        let g = parse("0 1\n1 2\n").unwrap();
        assert_eq!(g.edges.num_vertices, 3);
        assert_eq!(g.edges.edges.len(), 2);
        assert!(g.edges.edges.iter().all(|e| (1..=10).contains(&e.weight)));
    }

    #[test]
    fn explicit_weight_is_kept() {
        let g = parse("0 1 5").unwrap();
        assert_eq!(g.edges.edges[0].weight, 5);
    }

    #[test]
    fn comments_are_skipped() {
        let g = parse("# comment\n% another\n\n3 4 1\n").unwrap();
        assert_eq!(g.edges.edges.len(), 1);
    }

    #[test]
    fn sparse_ids_are_compacted() {
        let g = parse("100 7 1\n7 5000 1\n").unwrap();
        assert_eq!(g.original_ids, vec![7, 100, 5000]);
        let pairs: Vec<_> = g.edges.edges.iter().map(|e| (e.src, e.dst)).collect();
        assert_eq!(pairs, vec![(1, 0), (0, 2)]);
    }

    #[test]
    fn bad_tokens_report_their_line() {
        assert!(matches!(parse("0 1\nx 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("0 1\n1 2\n2 3 -4\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse("0\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn missing_weights_follow_the_seed() {
        let a = parse("0 1\n1 2\n2 0\n").unwrap();
        let b = parse("0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(a, b);
    }
}
