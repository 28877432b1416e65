use serde::{Deserialize, Serialize};

/// Per-cell event counters. High-water marks merge by max, everything else
/// by sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounters {
    pub messages_received: u64,
    /// Sum of hop counts of every message received.
    pub hops_received: u64,
    /// Propagates that stayed on this cell.
    pub local_messages: u64,
    pub actions_invoked: u64,
    pub actions_predicate_true: u64,
    pub actions_predicate_false: u64,
    pub actions_unguarded: u64,
    pub actions_overlapped: u64,
    pub diffusions_created: u64,
    pub diffusions_pruned: u64,
    pub propagates_staged: u64,
    pub filter_evaluations: u64,
    pub compute_cycles_busy: u64,
    pub sram_word_accesses: u64,
    pub action_queue_hwm: u64,
    pub diffuse_queue_hwm: u64,
    pub throttled_cycles: u64,
    /// Failed predicates whose shadow execution changed state.
    pub pruning_violations: u64,
}

impl CellCounters {
    pub fn merge(&mut self, o: &CellCounters) {
        self.messages_received += o.messages_received;
        self.hops_received += o.hops_received;
        self.local_messages += o.local_messages;
        self.actions_invoked += o.actions_invoked;
        self.actions_predicate_true += o.actions_predicate_true;
        self.actions_predicate_false += o.actions_predicate_false;
        self.actions_unguarded += o.actions_unguarded;
        self.actions_overlapped += o.actions_overlapped;
        self.diffusions_created += o.diffusions_created;
        self.diffusions_pruned += o.diffusions_pruned;
        self.propagates_staged += o.propagates_staged;
        self.filter_evaluations += o.filter_evaluations;
        self.compute_cycles_busy += o.compute_cycles_busy;
        self.sram_word_accesses += o.sram_word_accesses;
        self.action_queue_hwm = self.action_queue_hwm.max(o.action_queue_hwm);
        self.diffuse_queue_hwm = self.diffuse_queue_hwm.max(o.diffuse_queue_hwm);
        self.throttled_cycles += o.throttled_cycles;
        self.pruning_violations += o.pruning_violations;
    }
}

/// What a cell did in one cycle, in increasing precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellStatus {
    Idle,
    Computing,
    Staging,
    Throttled,
    /// One of the cell's output links refused an enqueue this cycle.
    Congested,
}

impl CellStatus {
    pub fn name(self) -> &'static str {
        match self {
            CellStatus::Idle => "idle",
            CellStatus::Computing => "computing",
            CellStatus::Staging => "staging",
            CellStatus::Throttled => "throttled",
            CellStatus::Congested => "congested",
        }
    }
}
