//! BFS, SSSP and PageRank as predicate/work/diffuse rules.

mod pagerank;
mod relax;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use pagerank::{trigger_cost, PageRankHandler, PageRankSlots, CONTRIBUTION_COST, GERMINATE_COST};
pub use relax::{Metric, RelaxHandler, RELAX_COST, RELAY_COST};

use crate::error::{Error, Result};
use crate::graph::{GraphStore, VertexDirectory, VertexId};
use crate::runtime::{ActionKind, ActionMessage, Chip, HandlerRegistry, HostReduction, Payload};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum App {
    Bfs { source: VertexId },
    Sssp { source: VertexId },
    PageRank { iterations: u32, damping: f64 },
}

impl App {
    pub fn name(&self) -> &'static str {
        match self {
            App::Bfs { .. } => "bfs",
            App::Sssp { .. } => "sssp",
            App::PageRank { .. } => "pagerank",
        }
    }
}

impl fmt::Display for App {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Handlers, host reduction and germination messages for `app` on `store`.
pub struct Deployment {
    pub registry: HandlerRegistry,
    pub host: HostReduction,
    pub germinate: Vec<ActionMessage>,
}

pub fn deploy(app: &App, store: &GraphStore) -> Result<Deployment> {
    let mut registry = HandlerRegistry::new();
    match *app {
        App::Bfs { source } | App::Sssp { source } => {
            let h = if matches!(app, App::Bfs { .. }) {
                RelaxHandler::bfs()
            } else {
                RelaxHandler::sssp()
            };
            let h = Arc::new(h);
            registry
                .register(h.primary_kind(), h.clone())
                .register(ActionKind::RhizomeShare, h.clone())
                .register(ActionKind::Germinate, h);
            let members = store.directory.members(source).ok_or(Error::UnknownVertex(source))?;
            let germinate = members
                .iter()
                .map(|&m| ActionMessage::local(m, ActionKind::Germinate, Payload::Value(0)))
                .collect();
            Ok(Deployment {
                registry,
                host: HostReduction::default(),
                germinate,
            })
        }
        App::PageRank { iterations, damping } => {
            if !(0.0..=1.0).contains(&damping) {
                return Err(Error::config(format!("damping {damping} outside [0, 1]")));
            }
            let n = store.directory.len() as u32;
            let h = Arc::new(PageRankHandler {
                iterations,
                damping,
                vertices: n,
            });
            for kind in [ActionKind::PageRank, ActionKind::LcoSet, ActionKind::Germinate, ActionKind::Trigger] {
                registry.register(kind, h.clone());
            }
            let dangling = store
                .directory
                .iter()
                .filter(|(_, m)| store.object(m[0]).out_degree == 0)
                .count() as u32;
            let germinate = store
                .directory
                .iter()
                .flat_map(|(_, m)| m.iter().copied())
                .map(|m| ActionMessage::local(m, ActionKind::Germinate, Payload::None))
                .collect();
            Ok(Deployment {
                registry,
                host: HostReduction::new(dangling, 1.0 / n.max(1) as f64),
                germinate,
            })
        }
    }
}

/// Final per-vertex application values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AppResult {
    Levels(Vec<Option<u32>>),
    Distances(Vec<Option<u64>>),
    Scores(Vec<f64>),
}

impl AppResult {
    pub fn len(&self) -> usize {
        match self {
            AppResult::Levels(v) => v.len(),
            AppResult::Distances(v) => v.len(),
            AppResult::Scores(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Value of vertex `v` as text; unreached vertices print as `inf`.
    pub fn value_string(&self, v: usize) -> String {
        fn opt<T: ToString>(x: Option<T>) -> String {
            x.map_or_else(|| "inf".to_string(), |x| x.to_string())
        }
        match self {
            AppResult::Levels(x) => opt(x[v]),
            AppResult::Distances(x) => opt(x[v]),
            AppResult::Scores(x) => format!("{:.17e}", x[v]),
        }
    }
}

/// Reads every vertex's value off its rhizome members, failing if members
/// disagree (or, for PageRank, if any member stopped short of the final
/// iteration).
pub fn extract_results(app: &App, chip: &Chip, directory: &VertexDirectory) -> Result<AppResult> {
    fn agree<T: PartialEq + Copy + fmt::Debug>(v: VertexId, vals: impl Iterator<Item = T>) -> Result<T> {
        let vals: Vec<T> = vals.collect();
        if vals.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Fault(format!("rhizome members of vertex {v} disagree: {vals:?}")));
        }
        Ok(vals[0])
    }
    match *app {
        App::Bfs { .. } => directory
            .iter()
            .map(|(v, m)| {
                let l = agree(v, m.iter().map(|a| chip.object(*a).app.level))?;
                Ok((l != u32::MAX).then_some(l))
            })
            .collect::<Result<_>>()
            .map(AppResult::Levels),
        App::Sssp { .. } => directory
            .iter()
            .map(|(v, m)| {
                let d = agree(v, m.iter().map(|a| chip.object(*a).app.distance))?;
                Ok((d != u64::MAX).then_some(d))
            })
            .collect::<Result<_>>()
            .map(AppResult::Distances),
        App::PageRank { iterations, .. } => directory
            .iter()
            .map(|(v, m)| {
                let it = agree(v, m.iter().map(|a| chip.object(*a).app.pagerank.iteration))?;
                if it != iterations {
                    return Err(Error::Fault(format!("vertex {v} finished {it} of {iterations} iterations")));
                }
                let bits = agree(v, m.iter().map(|a| chip.object(*a).app.pagerank.score.to_bits()))?;
                Ok(f64::from_bits(bits))
            })
            .collect::<Result<_>>()
            .map(AppResult::Scores),
    }
}
