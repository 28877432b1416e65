use std::collections::VecDeque;

use super::Direction;

/// One physical output link of a cell: `vc_count` bounded FIFOs sharing a
/// single flit-per-cycle crossing.
#[derive(Debug, Clone)]
pub struct ChannelLink<M> {
    direction: Direction,
    capacity: u32,
    vcs: Vec<VecDeque<M>>,
    /// Occupancy at the start of the current cycle.
    start_len: Vec<u32>,
    accepted: Vec<u32>,
    contention_cycles: u64,
    last_refusal: Option<u64>,
    occupancy_hwm: u32,
}

impl<M> ChannelLink<M> {
    pub fn new(direction: Direction, vc_count: u32, capacity: u32) -> Self {
        ChannelLink {
            direction,
            capacity,
            vcs: (0..vc_count).map(|_| VecDeque::with_capacity(capacity as usize)).collect(),
            start_len: vec![0; vc_count as usize],
            accepted: vec![0; vc_count as usize],
            contention_cycles: 0,
            last_refusal: None,
            occupancy_hwm: 0,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn vc_count(&self) -> usize {
        self.vcs.len()
    }

    pub fn vc_len(&self, vc: usize) -> usize {
        self.vcs[vc].len()
    }

    pub fn occupancy(&self) -> usize {
        self.vcs.iter().map(VecDeque::len).sum()
    }

    pub fn occupancy_hwm(&self) -> u32 {
        self.occupancy_hwm
    }

    pub fn contention_cycles(&self) -> u64 {
        self.contention_cycles
    }

    /// Whether an enqueue into `vc` was refused during `cycle`.
    pub fn refused_during(&self, cycle: u64) -> bool {
        self.last_refusal == Some(cycle)
    }

    /// Space left in `vc` under the start-of-cycle snapshot rule.
    pub fn has_space(&self, vc: usize) -> bool {
        self.start_len[vc] + self.accepted[vc] < self.capacity
    }

    /// Charges a refused enqueue to this link. Several refusals within the
    /// same cycle count once.
    pub fn record_refusal(&mut self, cycle: u64) {
        if self.last_refusal != Some(cycle) {
            self.last_refusal = Some(cycle);
            self.contention_cycles += 1;
        }
    }

    /// Appends `msg` to `vc` if the snapshot says there is room; otherwise
    /// records contention for `cycle` and hands the message back.
    pub fn try_enqueue(&mut self, msg: M, vc: usize, cycle: u64) -> Result<(), M> {
        if !self.has_space(vc) {
            self.record_refusal(cycle);
            return Err(msg);
        }
        self.accepted[vc] += 1;
        self.vcs[vc].push_back(msg);
        assert!(
            self.vcs[vc].len() <= self.capacity as usize,
            "virtual channel overfilled"
        );
        Ok(())
    }

    /// Head of `vc`, if it was already buffered when the cycle began.
    pub(crate) fn eligible_head(&self, vc: usize) -> Option<&M> {
        if self.start_len[vc] > 0 {
            self.vcs[vc].front()
        } else {
            None
        }
    }

    pub(crate) fn pop(&mut self, vc: usize) -> Option<M> {
        self.vcs[vc].pop_front()
    }

    pub fn messages(&self) -> impl Iterator<Item = &M> {
        self.vcs.iter().flat_map(|q| q.iter())
    }

    /// Takes the occupancy snapshot for the next cycle.
    pub(crate) fn end_cycle(&mut self) {
        for (vc, q) in self.vcs.iter().enumerate() {
            self.start_len[vc] = q.len() as u32;
            self.accepted[vc] = 0;
        }
        self.occupancy_hwm = self.occupancy_hwm.max(self.occupancy() as u32);
    }
}
