use crate::graph::{AppSlots, VertexObject};
use crate::runtime::{
    ActionHandler, ActionKind, ActionMessage, DiffuseClosure, Guard, Link, Payload, Work, WorkContext,
};

/// Which label a relaxation maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Hop level; every edge weighs 1.
    Level,
    /// Weighted distance.
    Distance,
}

/// Cycles of a guarded action whose predicate held.
pub const RELAX_COST: u32 = 3;
/// Cycles of a ghost relay.
pub const RELAY_COST: u32 = 2;

/// BFS and SSSP: predicate `value < label`, work `label = min(label, value)`.
///
/// Roots diffuse `value + weight` over their edge chunk, `value` to ghost
/// children and, for actions arriving over an edge, `value` to every rhizome
/// sibling. Ghosts hold no label and relay unconditionally.
#[derive(Debug, Clone, Copy)]
pub struct RelaxHandler {
    pub metric: Metric,
}

impl RelaxHandler {
    pub fn bfs() -> Self {
        RelaxHandler { metric: Metric::Level }
    }

    pub fn sssp() -> Self {
        RelaxHandler {
            metric: Metric::Distance,
        }
    }

    pub fn primary_kind(&self) -> ActionKind {
        match self.metric {
            Metric::Level => ActionKind::Bfs,
            Metric::Distance => ActionKind::Sssp,
        }
    }

    pub fn label(&self, obj: &VertexObject) -> u64 {
        match self.metric {
            Metric::Level if obj.app.level == AppSlots::UNREACHED_LEVEL => u64::MAX,
            Metric::Level => obj.app.level as u64,
            Metric::Distance => obj.app.distance,
        }
    }

    fn set_label(&self, obj: &mut VertexObject, v: u64) {
        match self.metric {
            Metric::Level => obj.app.level = u32::try_from(v).expect("level exceeds u32"),
            Metric::Distance => obj.app.distance = v,
        }
    }
}

fn value(msg_or_closure: &Payload) -> u64 {
    match *msg_or_closure {
        Payload::Value(v) => v,
        other => panic!("relaxation expects a value operand, got {other:?}"),
    }
}

impl ActionHandler for RelaxHandler {
    fn predicate(&self, obj: &VertexObject, msg: &ActionMessage) -> Guard {
        if !obj.is_root() {
            return Guard::Unguarded;
        }
        if value(&msg.payload) < self.label(obj) {
            Guard::Pass
        } else {
            Guard::Fail
        }
    }

    fn work(&self, obj: &mut VertexObject, msg: &ActionMessage, ctx: &mut WorkContext<'_>) -> Work {
        let v = value(&msg.payload);
        let kind = self.primary_kind();
        if !obj.is_root() {
            return Work::new(RELAY_COST).with(DiffuseClosure::new(msg.target, kind, msg.payload, true, false));
        }
        let label = self.label(obj);
        ctx.sram += 1;
        if v >= label {
            return Work::new(RELAX_COST);
        }
        self.set_label(obj, v);
        let share = msg.kind == kind && obj.members > 1;
        Work::new(RELAX_COST).with(DiffuseClosure::new(msg.target, kind, msg.payload, true, share))
    }

    fn closure_live(&self, obj: &VertexObject, closure: &DiffuseClosure) -> bool {
        !obj.is_root() || self.label(obj) == value(&closure.captured)
    }

    fn emit(&self, _obj: &VertexObject, closure: &DiffuseClosure, link: Link<'_>) -> (ActionKind, Payload) {
        let v = value(&closure.captured);
        match link {
            Link::Edge(e) => {
                let w = match self.metric {
                    Metric::Level => 1,
                    Metric::Distance => e.weight as u64,
                };
                (self.primary_kind(), Payload::Value(v + w))
            }
            Link::Ghost => (self.primary_kind(), Payload::Value(v)),
            Link::Rhizome => (ActionKind::RhizomeShare, Payload::Value(v)),
        }
    }
}
