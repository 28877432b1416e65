use std::collections::VecDeque;

use super::{
    ActionKind, ActionMessage, DiffuseClosure, Guard, HandlerRegistry, HostReduction, Link, WorkContext,
};
use crate::error::{Error, Result};
use crate::fabric::{throttle_check, Coordinate, Network, ThrottleState};
use crate::graph::VertexObject;
use crate::metrics::{CellCounters, CellStatus};

/// Everything a cell reads or writes outside itself during one cycle.
pub struct CycleEnv<'a> {
    pub cycle: u64,
    pub net: &'a mut Network<ActionMessage>,
    pub registry: &'a HandlerRegistry,
    pub host: &'a mut HostReduction,
    /// Halt period, or `None` when throttling is disabled.
    pub throttle_period: Option<u64>,
    /// Re-run the work rule on a copy for every failed predicate and check
    /// that it is a no-op.
    pub shadow_check: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueKind {
    Action,
    Diffuse,
}

#[derive(Debug, Clone)]
struct Running {
    remaining: u32,
    closures: Vec<DiffuseClosure>,
}

enum HeadOutcome {
    Staged,
    Pruned,
    Blocked,
}

/// One tile: object store, action and diffuse queues, one execution slot.
#[derive(Debug, Clone)]
pub struct ComputeCell {
    pub coord: Coordinate,
    pub objects: Vec<VertexObject>,
    action_queue: VecDeque<ActionMessage>,
    diffuse_queue: VecDeque<DiffuseClosure>,
    running: Option<Running>,
    /// Self-addressed propagates, delivered at the start of the next cycle.
    local_inbox: Vec<ActionMessage>,
    throttle: ThrottleState,
    filter_cursor: usize,
    pub counters: CellCounters,
    status: CellStatus,
    slot_ops: u32,
}

impl ComputeCell {
    pub fn new(coord: Coordinate, objects: Vec<VertexObject>) -> Self {
        ComputeCell {
            coord,
            objects,
            action_queue: VecDeque::new(),
            diffuse_queue: VecDeque::new(),
            running: None,
            local_inbox: Vec::new(),
            throttle: ThrottleState::default(),
            filter_cursor: 0,
            counters: CellCounters::default(),
            status: CellStatus::Idle,
            slot_ops: 0,
        }
    }

    pub fn action_queue_len(&self) -> usize {
        self.action_queue.len()
    }

    pub fn diffuse_queue_len(&self) -> usize {
        self.diffuse_queue.len()
    }

    pub fn local_inbox_len(&self) -> usize {
        self.local_inbox.len()
    }

    pub fn is_running(&self) -> bool {
        self.running.is_some()
    }

    pub fn status(&self) -> CellStatus {
        self.status
    }

    /// Execution-slot operations performed in the last scheduled cycle.
    pub fn slot_ops(&self) -> u32 {
        self.slot_ops
    }

    pub fn throttle(&self) -> ThrottleState {
        self.throttle
    }

    /// Nothing queued, running or waiting for local delivery.
    pub fn is_quiescent(&self) -> bool {
        self.action_queue.is_empty()
            && self.diffuse_queue.is_empty()
            && self.running.is_none()
            && self.local_inbox.is_empty()
    }

    pub(crate) fn take_local_inbox(&mut self) -> Vec<ActionMessage> {
        std::mem::take(&mut self.local_inbox)
    }

    fn object_index(&self, msg: &ActionMessage) -> Result<usize> {
        if msg.target.cell != self.coord {
            return Err(Error::Fault(format!(
                "message for {} delivered to {}",
                msg.target.cell, self.coord
            )));
        }
        let slot = msg.target.slot as usize;
        if slot >= self.objects.len() {
            return Err(Error::Fault(format!(
                "no object in slot {slot} of cell {} ({} objects)",
                self.coord,
                self.objects.len()
            )));
        }
        Ok(slot)
    }

    fn push_action(&mut self, msg: ActionMessage) {
        self.action_queue.push_back(msg);
        self.counters.sram_word_accesses += 1;
        let len = self.action_queue.len() as u64;
        self.counters.action_queue_hwm = self.counters.action_queue_hwm.max(len);
    }

    /// Network-to-queue boundary. With `lco_free`, `LcoSet` messages update
    /// their gate at once without touching the execution slot; everything
    /// else joins the action queue.
    pub fn deliver(
        &mut self,
        msg: ActionMessage,
        registry: &HandlerRegistry,
        host: &mut HostReduction,
        cycle: u64,
        lco_free: bool,
    ) -> Result<()> {
        let slot = self.object_index(&msg)?;
        self.counters.messages_received += 1;
        self.counters.hops_received += msg.route.hops as u64;
        if msg.kind == ActionKind::LcoSet && lco_free {
            let handler = lookup(registry, msg.kind)?;
            let mut ctx = WorkContext::new(cycle, host);
            handler.lco_set(&mut self.objects[slot], &msg, &mut ctx);
            self.counters.sram_word_accesses += ctx.sram;
            for t in ctx.triggers {
                self.push_action(t);
            }
            return Ok(());
        }
        self.push_action(msg);
        Ok(())
    }

    /// Places a host-injected action or released trigger straight into the
    /// action queue. Neither crosses the network, so neither is counted as
    /// a delivered message.
    pub(crate) fn enqueue_action(&mut self, msg: ActionMessage) -> Result<()> {
        self.object_index(&msg)?;
        self.push_action(msg);
        Ok(())
    }

    fn enqueue_closures(&mut self, closures: Vec<DiffuseClosure>) {
        for c in closures {
            let obj = &self.objects[c.origin.slot as usize];
            if c.target_count(obj) == 0 {
                continue;
            }
            self.diffuse_queue.push_back(c);
            self.counters.diffusions_created += 1;
        }
        let len = self.diffuse_queue.len() as u64;
        self.counters.diffuse_queue_hwm = self.counters.diffuse_queue_hwm.max(len);
    }

    fn occupy_slot(&mut self) {
        self.slot_ops += 1;
        self.counters.compute_cycles_busy += 1;
    }

    /// One cycle of the scheduling policy: continue a running action; else
    /// serve the diffuse head; else, when the head is blocked or absent, run
    /// the next action; else, when blocked with no actions, filter one
    /// queued closure; else idle.
    pub fn schedule_cycle(&mut self, env: &mut CycleEnv<'_>) -> Result<()> {
        self.slot_ops = 0;
        let halted = match env.throttle_period {
            Some(period) => throttle_check(&mut self.throttle, self.coord, env.net, env.cycle, period),
            None => false,
        };
        if halted {
            self.counters.throttled_cycles += 1;
        }
        let mut status = CellStatus::Idle;

        if let Some(run) = &mut self.running {
            run.remaining -= 1;
            if run.remaining == 0 {
                let run = self.running.take().expect("checked above");
                self.enqueue_closures(run.closures);
            }
            self.occupy_slot();
            status = CellStatus::Computing;
        } else {
            let mut blocked = false;
            if !self.diffuse_queue.is_empty() {
                match self.serve_diffuse_head(env, halted)? {
                    HeadOutcome::Staged => status = CellStatus::Staging,
                    HeadOutcome::Pruned => status = CellStatus::Computing,
                    HeadOutcome::Blocked => blocked = true,
                }
            }
            if status == CellStatus::Idle {
                if let Some(msg) = self.action_queue.pop_front() {
                    if blocked {
                        self.counters.actions_overlapped += 1;
                    }
                    self.start_action(msg, env)?;
                    status = CellStatus::Computing;
                } else if blocked && self.filter_diffuse(env.registry)?.is_some() {
                    status = CellStatus::Computing;
                }
            }
        }

        if env.net.congested_during(self.coord, env.cycle) {
            status = CellStatus::Congested;
        } else if halted {
            status = CellStatus::Throttled;
        }
        self.status = status;
        Ok(())
    }

    fn serve_diffuse_head(&mut self, env: &mut CycleEnv<'_>, halted: bool) -> Result<HeadOutcome> {
        let head = self.diffuse_queue.front().expect("caller checked");
        let obj = &self.objects[head.origin.slot as usize];
        let handler = lookup(env.registry, head.kind)?;
        self.counters.sram_word_accesses += 1;
        if !handler.closure_live(obj, head) {
            self.diffuse_queue.pop_front();
            self.counters.diffusions_pruned += 1;
            self.occupy_slot();
            return Ok(HeadOutcome::Pruned);
        }
        if halted {
            return Ok(HeadOutcome::Blocked);
        }
        let (target, link) = head.next_target(obj).expect("queued closures have targets");
        let (kind, payload) = handler.emit(obj, head, link);
        let weight_read = matches!(link, Link::Edge(_)) as u64;
        if target.cell == self.coord {
            self.local_inbox.push(ActionMessage::local(target, kind, payload));
            self.counters.local_messages += 1;
        } else {
            let msg = ActionMessage::new(self.coord, target, kind, payload);
            if env.net.inject(self.coord, msg).is_err() {
                return Ok(HeadOutcome::Blocked);
            }
        }
        self.counters.sram_word_accesses += 1 + weight_read;
        let head = self.diffuse_queue.front_mut().expect("still queued");
        head.advance();
        if head.remaining(&self.objects[head.origin.slot as usize]) == 0 {
            self.diffuse_queue.pop_front();
        }
        self.counters.propagates_staged += 1;
        self.occupy_slot();
        Ok(HeadOutcome::Staged)
    }

    fn start_action(&mut self, msg: ActionMessage, env: &mut CycleEnv<'_>) -> Result<()> {
        let slot = self.object_index(&msg)?;
        let handler = lookup(env.registry, msg.kind)?;
        self.counters.actions_invoked += 1;
        self.counters.sram_word_accesses += 1;
        let mut ctx = WorkContext::new(env.cycle, env.host);
        let obj = &mut self.objects[slot];
        let (cost, closures) = if msg.kind == ActionKind::LcoSet {
            handler.lco_set(obj, &msg, &mut ctx);
            (1, Vec::new())
        } else {
            ctx.sram += 1;
            match handler.predicate(obj, &msg) {
                Guard::Fail => {
                    self.counters.actions_predicate_false += 1;
                    if env.shadow_check {
                        let mut shadow = obj.clone();
                        let mut host = ctx.host.clone();
                        let mut sctx = WorkContext::new(env.cycle, &mut host);
                        handler.work(&mut shadow, &msg, &mut sctx);
                        if shadow.app != obj.app {
                            self.counters.pruning_violations += 1;
                        }
                    }
                    (1, Vec::new())
                }
                guard => {
                    if guard == Guard::Pass {
                        self.counters.actions_predicate_true += 1;
                    } else {
                        self.counters.actions_unguarded += 1;
                    }
                    let work = handler.work(obj, &msg, &mut ctx);
                    (work.cost.max(1), work.closures)
                }
            }
        };
        self.counters.sram_word_accesses += ctx.sram;
        for t in ctx.triggers {
            self.push_action(t);
        }
        self.occupy_slot();
        if cost == 1 {
            self.enqueue_closures(closures);
        } else {
            self.running = Some(Running {
                remaining: cost - 1,
                closures,
            });
        }
        Ok(())
    }

    /// Round-robin predicate check of one queued closure behind the head.
    /// Returns whether it was pruned, or `None` if there was nothing to
    /// check.
    fn filter_diffuse(&mut self, registry: &HandlerRegistry) -> Result<Option<bool>> {
        let len = self.diffuse_queue.len();
        if len < 2 {
            return Ok(None);
        }
        let idx = 1 + self.filter_cursor % (len - 1);
        let entry = &self.diffuse_queue[idx];
        let live = lookup(registry, entry.kind)?.closure_live(&self.objects[entry.origin.slot as usize], entry);
        self.counters.filter_evaluations += 1;
        self.counters.sram_word_accesses += 1;
        self.occupy_slot();
        if live {
            self.filter_cursor = idx;
        } else {
            self.diffuse_queue.remove(idx);
            self.counters.diffusions_pruned += 1;
            self.filter_cursor = idx - 1;
        }
        Ok(Some(!live))
    }

    /// Checks the predicate of one queued entry and drops it if false. Uses
    /// the execution slot for this cycle. Returns the number pruned.
    pub fn filter_pass(&mut self, queue: QueueKind, registry: &HandlerRegistry) -> Result<usize> {
        match queue {
            QueueKind::Diffuse => Ok(self.filter_diffuse(registry)?.map_or(0, usize::from)),
            QueueKind::Action => {
                let len = self.action_queue.len();
                if len == 0 {
                    return Ok(0);
                }
                let idx = self.filter_cursor % len;
                let msg = &self.action_queue[idx];
                let slot = self.object_index(msg)?;
                let guard = if msg.kind == ActionKind::LcoSet {
                    Guard::Unguarded
                } else {
                    lookup(registry, msg.kind)?.predicate(&self.objects[slot], msg)
                };
                self.counters.filter_evaluations += 1;
                self.counters.sram_word_accesses += 1;
                self.occupy_slot();
                if guard == Guard::Fail {
                    self.action_queue.remove(idx);
                    self.counters.actions_predicate_false += 1;
                    Ok(1)
                } else {
                    self.filter_cursor = idx + 1;
                    Ok(0)
                }
            }
        }
    }
}

fn lookup(registry: &HandlerRegistry, kind: ActionKind) -> Result<&dyn super::ActionHandler> {
    registry
        .get(kind)
        .ok_or_else(|| Error::Fault(format!("no handler registered for {kind:?}")))
}
