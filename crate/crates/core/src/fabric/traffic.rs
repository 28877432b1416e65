use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{minimal_distance, ChipConfig, Coordinate, Network, RouteState};

/// Outcome of one synthetic-traffic trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrafficReport {
    pub messages: usize,
    pub delivered: usize,
    pub cycles: u64,
    /// Cycles that began with messages in flight yet moved none.
    pub stalled_cycles: u64,
    /// Deliveries at the wrong cell or over a non-minimal path.
    pub misrouted: usize,
    /// Virtual-channel FIFOs seen above capacity.
    pub overflow_cycles: u64,
}

impl TrafficReport {
    pub fn clean(&self) -> bool {
        self.delivered == self.messages && self.stalled_cycles == 0 && self.misrouted == 0 && self.overflow_cycles == 0
    }
}

/// Injects `messages` uniformly random non-local messages and runs until
/// every one is delivered or `cap` cycles pass. Every cell offers the head
/// of its own backlog each cycle, so links saturate quickly.
pub fn random_traffic_trial(cfg: &ChipConfig, messages: usize, seed: u64, cap: u64) -> TrafficReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.num_cells();
    let mut backlog: Vec<VecDeque<RouteState>> = vec![VecDeque::new(); n];
    for _ in 0..messages {
        let s = rng.gen_range(0..n);
        let mut d = rng.gen_range(0..n - 1);
        if d >= s {
            d += 1;
        }
        backlog[s].push_back(RouteState::new(cfg.coord(s), cfg.coord(d)));
    }
    let mut net: Network<RouteState> = Network::new(cfg);
    let mut report = TrafficReport {
        messages,
        delivered: 0,
        cycles: 0,
        stalled_cycles: 0,
        misrouted: 0,
        overflow_cycles: 0,
    };
    let check = |at: Coordinate, r: &RouteState, report: &mut TrafficReport| {
        report.delivered += 1;
        if at != r.dst || r.hops != minimal_distance(r.src, r.dst, cfg) {
            report.misrouted += 1;
        }
    };
    while report.delivered < messages && net.cycle() < cap {
        let in_flight = net.in_flight();
        for (at, r) in net.advance() {
            check(at, &r, &mut report);
        }
        if in_flight > 0 && net.last_progress() == 0 {
            report.stalled_cycles += 1;
        }
        for (id, q) in backlog.iter_mut().enumerate() {
            if let Some(r) = q.pop_front() {
                if let Err(r) = net.inject(cfg.coord(id), r) {
                    q.push_front(r);
                }
            }
        }
        if !net.buffers_within_capacity() {
            report.overflow_cycles += 1;
        }
        net.end_cycle();
    }
    report.cycles = net.cycle();
    report
}
