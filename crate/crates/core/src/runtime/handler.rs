use std::fmt;
use std::sync::Arc;

use super::{ActionKind, ActionMessage, Address, HostReduction, Payload};
use crate::graph::{Edge, VertexObject};

/// Outcome of evaluating an action's predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    Pass,
    Fail,
    /// The action has no predicate (ghost relays, PageRank contributions).
    Unguarded,
}

/// One outgoing link of an object, as seen by a diffuse closure.
#[derive(Debug, Clone, Copy)]
pub enum Link<'a> {
    Edge(&'a Edge),
    Ghost,
    Rhizome,
}

/// Deferred propagation over an object's links, drained one propagate per
/// cycle from the diffuse queue.
///
/// Targets are visited in the order local edges, ghost children, rhizome
/// siblings; `edges` selects the first two groups, `rhizome` the last.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffuseClosure {
    pub origin: Address,
    /// Handler that owns liveness and emission for this closure.
    pub kind: ActionKind,
    pub captured: Payload,
    pub edges: bool,
    pub rhizome: bool,
    cursor: usize,
}

impl DiffuseClosure {
    pub fn new(origin: Address, kind: ActionKind, captured: Payload, edges: bool, rhizome: bool) -> Self {
        DiffuseClosure {
            origin,
            kind,
            captured,
            edges,
            rhizome,
            cursor: 0,
        }
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn target_count(&self, obj: &VertexObject) -> usize {
        let mut n = 0;
        if self.edges {
            n += obj.local_edges.len() + obj.ghost_links.len();
        }
        if self.rhizome {
            n += obj.rhizome_links.len();
        }
        n
    }

    pub fn remaining(&self, obj: &VertexObject) -> usize {
        self.target_count(obj) - self.cursor
    }

    /// Target under the cursor, or `None` when every target was served.
    pub fn next_target<'a>(&self, obj: &'a VertexObject) -> Option<(Address, Link<'a>)> {
        let mut i = self.cursor;
        if self.edges {
            if let Some(e) = obj.local_edges.get(i) {
                return Some((e.target, Link::Edge(e)));
            }
            i -= obj.local_edges.len();
            if let Some(&g) = obj.ghost_links.get(i) {
                return Some((g, Link::Ghost));
            }
            i -= obj.ghost_links.len();
        }
        if self.rhizome {
            if let Some(&r) = obj.rhizome_links.get(i) {
                return Some((r, Link::Rhizome));
            }
        }
        None
    }

    pub(crate) fn advance(&mut self) {
        self.cursor += 1;
    }
}

/// Result of running an action's work rule.
#[derive(Debug, Clone, Default)]
pub struct Work {
    /// Execution-slot cycles the action occupies, at least 1.
    pub cost: u32,
    pub closures: Vec<DiffuseClosure>,
}

impl Work {
    pub fn new(cost: u32) -> Self {
        Work {
            cost,
            closures: Vec::new(),
        }
    }

    pub fn with(mut self, closure: DiffuseClosure) -> Self {
        self.closures.push(closure);
        self
    }
}

/// What a work rule may touch besides its own object.
pub struct WorkContext<'a> {
    pub cycle: u64,
    pub host: &'a mut HostReduction,
    /// Local trigger actions, appended to the cell's action queue.
    pub triggers: Vec<ActionMessage>,
    /// Application-slot word accesses performed.
    pub sram: u64,
}

impl<'a> WorkContext<'a> {
    pub fn new(cycle: u64, host: &'a mut HostReduction) -> Self {
        WorkContext {
            cycle,
            host,
            triggers: Vec::new(),
            sram: 0,
        }
    }
}

/// Application rules for one or more action kinds.
///
/// Invariant: when `predicate` returns [`Guard::Fail`], `work` would leave
/// the object's application state unchanged.
pub trait ActionHandler: Send + Sync {
    fn predicate(&self, obj: &VertexObject, msg: &ActionMessage) -> Guard;

    fn work(&self, obj: &mut VertexObject, msg: &ActionMessage, ctx: &mut WorkContext<'_>) -> Work;

    /// Whether a queued closure still has anything useful to say.
    fn closure_live(&self, obj: &VertexObject, closure: &DiffuseClosure) -> bool;

    /// Message kind and payload for one target of `closure`.
    fn emit(&self, obj: &VertexObject, closure: &DiffuseClosure, link: Link<'_>) -> (ActionKind, Payload);

    /// Applies an `LcoSet` message to the addressed object's gate.
    fn lco_set(&self, obj: &mut VertexObject, msg: &ActionMessage, ctx: &mut WorkContext<'_>) {
        let _ = (obj, ctx);
        panic!("handler does not own LCOs (got {:?})", msg.kind);
    }
}

/// Action kind to handler table.
#[derive(Clone, Default)]
pub struct HandlerRegistry {
    table: [Option<Arc<dyn ActionHandler>>; ActionKind::COUNT],
}

impl HandlerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, kind: ActionKind, handler: Arc<dyn ActionHandler>) -> &mut Self {
        self.table[kind.index()] = Some(handler);
        self
    }

    pub fn get(&self, kind: ActionKind) -> Option<&dyn ActionHandler> {
        self.table[kind.index()].as_deref()
    }
}

impl fmt::Debug for HandlerRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kinds: Vec<usize> = (0..ActionKind::COUNT).filter(|&i| self.table[i].is_some()).collect();
        f.debug_struct("HandlerRegistry").field("kinds", &kinds).finish()
    }
}
