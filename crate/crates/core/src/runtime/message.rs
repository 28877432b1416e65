use serde::{Deserialize, Serialize};

use crate::fabric::{Coordinate, RouteState, Routed};

/// Global address of an object: owning cell plus slot in its store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Address {
    pub cell: Coordinate,
    pub slot: u32,
}

impl Address {
    pub const fn new(cell: Coordinate, slot: u32) -> Self {
        Address { cell, slot }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    Bfs,
    Sssp,
    PageRank,
    RhizomeShare,
    LcoSet,
    Germinate,
    /// Trigger action fired by a local LCO.
    Trigger,
}

impl ActionKind {
    pub const COUNT: usize = 7;

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Operands of one flit. Every variant fits in well under 256 bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    None,
    /// BFS level or SSSP distance.
    Value(u64),
    /// PageRank mass tagged with the iteration it belongs to.
    Score { value: f64, iteration: u32 },
    /// A rhizome member's partial sum for one iteration.
    Share { value: f64, iteration: u32, member: u16 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionMessage {
    pub target: Address,
    pub kind: ActionKind,
    pub payload: Payload,
    pub route: RouteState,
}

impl ActionMessage {
    /// A message travelling from `src` to `target`.
    pub fn new(src: Coordinate, target: Address, kind: ActionKind, payload: Payload) -> Self {
        ActionMessage {
            target,
            kind,
            payload,
            route: RouteState::new(src, target.cell),
        }
    }

    /// A message that never leaves its cell.
    pub fn local(target: Address, kind: ActionKind, payload: Payload) -> Self {
        Self::new(target.cell, target, kind, payload)
    }
}

impl Routed for ActionMessage {
    fn route(&self) -> &RouteState {
        &self.route
    }
    fn route_mut(&mut self) -> &mut RouteState {
        &mut self.route
    }
}
