use std::collections::BTreeMap;

use crate::graph::VertexObject;
use crate::runtime::{
    rhizome_collapse, ActionHandler, ActionKind, ActionMessage, Address, AndGateLco, DiffuseClosure, Guard, LcoOp,
    Link, Payload, Work, WorkContext,
};

/// PageRank state of one rhizome member. Gates are keyed by iteration so
/// early contributions for the next iteration never mix with the current
/// one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PageRankSlots {
    pub score: f64,
    /// Iterations completed.
    pub iteration: u32,
    /// Incoming contributions, arity = member's local in-degree.
    pub msg_count: BTreeMap<u32, AndGateLco>,
    /// Partials of every member, arity = member count.
    pub rhizome_score: BTreeMap<u32, AndGateLco>,
    /// Rhizome gate fires so far.
    pub collapses: u32,
}

pub const CONTRIBUTION_COST: u32 = 3;
pub const GERMINATE_COST: u32 = 3;

/// Cycles of the collapse trigger: grows with the member count, within
/// [3, 70].
pub fn trigger_cost(members: u16) -> u32 {
    (3 + members as u32).clamp(3, 70)
}

/// Fixed-iteration PageRank with uniform redistribution of dangling mass.
///
/// Every member accumulates its in-edge share through `msg_count`; when that
/// fills, its partial goes to every sibling and into its own
/// `rhizome_score`. When the rhizome gate fills, the trigger computes
/// `score = (1 - d) / N + d * (total + D_k / N)` where `D_k` is the host
/// reduction of dangling scores, then diffuses `score / out_degree` over
/// the member's edge chunk until `iterations` are done.
#[derive(Debug, Clone, Copy)]
pub struct PageRankHandler {
    pub iterations: u32,
    pub damping: f64,
    pub vertices: u32,
}

impl PageRankHandler {
    fn n(&self) -> f64 {
        self.vertices as f64
    }

    fn begin_iteration(&self, obj: &mut VertexObject, me: Address, ctx: &mut WorkContext<'_>) -> Vec<DiffuseClosure> {
        let pr = &obj.app.pagerank;
        let k = pr.iteration;
        let mut out = Vec::new();
        if k >= self.iterations {
            return out;
        }
        if obj.out_degree == 0 {
            if obj.member_index() == Some(0) {
                ctx.host.contribute(k, pr.score);
            }
        } else {
            let share = Payload::Score {
                value: pr.score / obj.out_degree as f64,
                iteration: k,
            };
            out.push(DiffuseClosure::new(me, ActionKind::PageRank, share, true, false));
        }
        if obj.local_in_degree == 0 {
            out.extend(self.collapse(obj, me, k, 0.0, ctx));
        }
        out
    }

    fn collapse(
        &self,
        obj: &mut VertexObject,
        me: Address,
        k: u32,
        partial: f64,
        ctx: &mut WorkContext<'_>,
    ) -> Option<DiffuseClosure> {
        let member = obj.member_index().expect("collapse on a root");
        let members = obj.members;
        let gate = obj
            .app
            .pagerank
            .rhizome_score
            .entry(k)
            .or_insert_with(|| AndGateLco::new(members as u32, LcoOp::Sum));
        ctx.sram += 1;
        if let Some(total) = rhizome_collapse(gate, member, partial) {
            obj.app.pagerank.rhizome_score.remove(&k);
            self.fire(obj, me, k, total, ctx);
        }
        (members > 1).then(|| {
            let share = Payload::Share {
                value: partial,
                iteration: k,
                member,
            };
            DiffuseClosure::new(me, ActionKind::PageRank, share, false, true)
        })
    }

    fn fire(&self, obj: &mut VertexObject, me: Address, k: u32, total: f64, ctx: &mut WorkContext<'_>) {
        obj.app.pagerank.collapses += 1;
        let trigger = ActionMessage::local(me, ActionKind::Trigger, Payload::Score { value: total, iteration: k });
        if let Some(t) = ctx.host.gate_trigger(k, trigger) {
            ctx.triggers.push(t);
        }
    }
}

impl ActionHandler for PageRankHandler {
    fn predicate(&self, _obj: &VertexObject, _msg: &ActionMessage) -> Guard {
        Guard::Unguarded
    }

    fn work(&self, obj: &mut VertexObject, msg: &ActionMessage, ctx: &mut WorkContext<'_>) -> Work {
        let me = msg.target;
        match (msg.kind, msg.payload) {
            (ActionKind::Germinate, _) => {
                obj.app.pagerank.score = 1.0 / self.n();
                obj.app.pagerank.iteration = 0;
                ctx.sram += 2;
                let mut w = Work::new(GERMINATE_COST);
                w.closures = self.begin_iteration(obj, me, ctx);
                w
            }
            (ActionKind::PageRank, Payload::Score { value, iteration }) => {
                if !obj.is_root() {
                    return Work::new(super::RELAY_COST).with(DiffuseClosure::new(
                        me,
                        ActionKind::PageRank,
                        msg.payload,
                        true,
                        false,
                    ));
                }
                let arity = obj.local_in_degree;
                let gate = obj
                    .app
                    .pagerank
                    .msg_count
                    .entry(iteration)
                    .or_insert_with(|| AndGateLco::new(arity, LcoOp::Sum));
                ctx.sram += 2;
                let mut w = Work::new(CONTRIBUTION_COST);
                if let Some(partial) = gate.set(value) {
                    obj.app.pagerank.msg_count.remove(&iteration);
                    w.closures.extend(self.collapse(obj, me, iteration, partial, ctx));
                }
                w
            }
            (ActionKind::Trigger, Payload::Score { value: total, iteration: k }) => {
                let pr = &mut obj.app.pagerank;
                assert_eq!(pr.iteration, k, "trigger for iteration {k} out of order");
                let dangling = ctx.host.value(k).expect("trigger released before its reduction");
                pr.score = (1.0 - self.damping) / self.n() + self.damping * (total + dangling);
                pr.iteration = k + 1;
                ctx.sram += 2;
                let mut w = Work::new(trigger_cost(obj.members));
                w.closures = self.begin_iteration(obj, me, ctx);
                w
            }
            (kind, payload) => panic!("pagerank cannot execute {kind:?} with {payload:?}"),
        }
    }

    fn closure_live(&self, _obj: &VertexObject, _closure: &DiffuseClosure) -> bool {
        true
    }

    fn emit(&self, _obj: &VertexObject, closure: &DiffuseClosure, link: Link<'_>) -> (ActionKind, Payload) {
        match link {
            Link::Edge(_) | Link::Ghost => (ActionKind::PageRank, closure.captured),
            Link::Rhizome => (ActionKind::LcoSet, closure.captured),
        }
    }

    fn lco_set(&self, obj: &mut VertexObject, msg: &ActionMessage, ctx: &mut WorkContext<'_>) {
        let Payload::Share {
            value,
            iteration,
            member,
        } = msg.payload
        else {
            panic!("LcoSet without a share payload: {:?}", msg.payload);
        };
        let members = obj.members;
        let gate = obj
            .app
            .pagerank
            .rhizome_score
            .entry(iteration)
            .or_insert_with(|| AndGateLco::new(members as u32, LcoOp::Sum));
        ctx.sram += 1;
        if let Some(total) = gate.set_indexed(member as usize, value) {
            obj.app.pagerank.rhizome_score.remove(&iteration);
            self.fire(obj, msg.target, iteration, total, ctx);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trigger_cost_band() {
        assert_eq!(trigger_cost(1), 4);
        assert_eq!(trigger_cost(0), 3);
        assert_eq!(trigger_cost(200), 70);
    }
}
