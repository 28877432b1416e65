use super::{route_next_hop, ChannelLink, ChipConfig, Coordinate, Direction, RouteState};

/// Anything that can travel the fabric.
pub trait Routed {
    fn route(&self) -> &RouteState;
    fn route_mut(&mut self) -> &mut RouteState;
}

impl Routed for RouteState {
    fn route(&self) -> &RouteState {
        self
    }
    fn route_mut(&mut self) -> &mut RouteState {
        self
    }
}

/// All output links of the chip, indexed `cell_id * 4 + direction`.
#[derive(Debug, Clone)]
pub struct Network<M> {
    cfg: ChipConfig,
    links: Vec<ChannelLink<M>>,
    cycle: u64,
    in_flight: usize,
    injected: u64,
    delivered: u64,
    total_hops: u64,
    last_progress: usize,
    buffered_peak: usize,
}

impl<M: Routed> Network<M> {
    pub fn new(cfg: &ChipConfig) -> Self {
        let links = (0..cfg.num_cells())
            .flat_map(|_| Direction::ALL)
            .map(|dir| ChannelLink::new(dir, cfg.vc_count, cfg.vc_buffer_capacity))
            .collect();
        Network {
            cfg: cfg.clone(),
            links,
            cycle: 0,
            in_flight: 0,
            injected: 0,
            delivered: 0,
            total_hops: 0,
            last_progress: 0,
            buffered_peak: 0,
        }
    }

    pub fn config(&self) -> &ChipConfig {
        &self.cfg
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    #[inline]
    fn link_index(&self, cell: Coordinate, dir: Direction) -> usize {
        self.cfg.cell_id(cell) * 4 + dir.index()
    }

    pub fn link(&self, cell: Coordinate, dir: Direction) -> &ChannelLink<M> {
        &self.links[self.link_index(cell, dir)]
    }

    pub fn links(&self) -> &[ChannelLink<M>] {
        &self.links
    }

    pub fn in_flight(&self) -> usize {
        self.in_flight
    }

    pub fn injected(&self) -> u64 {
        self.injected
    }

    pub fn delivered(&self) -> u64 {
        self.delivered
    }

    pub fn total_hops(&self) -> u64 {
        self.total_hops
    }

    /// Messages that moved or were delivered during the last advance.
    pub fn last_progress(&self) -> usize {
        self.last_progress
    }

    /// Largest number of messages buffered chip-wide at a cycle boundary.
    pub fn buffered_peak(&self) -> usize {
        self.buffered_peak
    }

    /// Whether any of the four output links of `cell` refused an enqueue
    /// during `cycle`.
    pub fn congested_during(&self, cell: Coordinate, cycle: u64) -> bool {
        let base = self.cfg.cell_id(cell) * 4;
        self.links[base..base + 4].iter().any(|l| l.refused_during(cycle))
    }

    /// Whether a message from `src` with header `route` would be admitted on
    /// its first link this cycle.
    pub fn would_accept(&self, src: Coordinate, route: &RouteState) -> bool {
        let (dir, next) = route_next_hop(src, route, &self.cfg);
        if self.cfg.neighbor(src, dir).is_none() {
            return false;
        }
        self.links[self.link_index(src, dir)].has_space(next.current_vc as usize)
    }

    /// Stages `msg` on the first link of its route out of `src`. A refusal is
    /// charged as contention on that link and the message is handed back.
    pub fn inject(&mut self, src: Coordinate, mut msg: M) -> Result<(), M> {
        debug_assert_ne!(src, msg.route().dst, "zero-hop messages bypass the network");
        let (dir, next) = route_next_hop(src, msg.route(), &self.cfg);
        let idx = self.link_index(src, dir);
        let vc = next.current_vc as usize;
        let cycle = self.cycle;
        let link = &mut self.links[idx];
        if !link.has_space(vc) {
            link.record_refusal(cycle);
            return Err(msg);
        }
        *msg.route_mut() = next;
        link.try_enqueue(msg, vc, cycle)?;
        self.in_flight += 1;
        self.injected += 1;
        Ok(())
    }

    /// Moves every eligible message at most one hop. Cells are scanned in id
    /// order, links N/E/S/W and virtual channels ascending; each physical
    /// link carries at most one flit per cycle. Messages arriving at their
    /// destination leave the network and are returned.
    pub fn advance(&mut self) -> Vec<(Coordinate, M)> {
        let mut delivered = Vec::new();
        let mut progress = 0;
        let cycle = self.cycle;
        for idx in 0..self.links.len() {
            let cell = self.cfg.coord(idx / 4);
            let dir = Direction::ALL[idx % 4];
            let Some(next_cell) = self.cfg.neighbor(cell, dir) else {
                continue;
            };
            for vc in 0..self.links[idx].vc_count() {
                let Some(head) = self.links[idx].eligible_head(vc) else {
                    continue;
                };
                let route = *head.route();
                if route.dst == next_cell {
                    let mut msg = self.links[idx].pop(vc).expect("eligible head vanished");
                    msg.route_mut().hops += 1;
                    self.total_hops += 1;
                    self.in_flight -= 1;
                    self.delivered += 1;
                    delivered.push((next_cell, msg));
                    progress += 1;
                    break;
                }
                let (dir2, mut next) = route_next_hop(next_cell, &route, &self.cfg);
                let target = self.link_index(next_cell, dir2);
                let vc2 = next.current_vc as usize;
                if self.links[target].has_space(vc2) {
                    let mut msg = self.links[idx].pop(vc).expect("eligible head vanished");
                    next.hops += 1;
                    *msg.route_mut() = next;
                    self.total_hops += 1;
                    if self.links[target].try_enqueue(msg, vc2, cycle).is_err() {
                        unreachable!("space was checked");
                    }
                    progress += 1;
                    break;
                }
                self.links[target].record_refusal(cycle);
            }
        }
        self.last_progress = progress;
        delivered
    }

    /// Closes the cycle: snapshots occupancy for the next one.
    pub fn end_cycle(&mut self) {
        let mut buffered = 0;
        for link in &mut self.links {
            link.end_cycle();
            buffered += link.occupancy();
        }
        debug_assert_eq!(buffered, self.in_flight);
        self.buffered_peak = self.buffered_peak.max(buffered);
        self.cycle += 1;
    }

    /// Every link FIFO is within capacity.
    pub fn buffers_within_capacity(&self) -> bool {
        self.links
            .iter()
            .all(|l| (0..l.vc_count()).all(|vc| l.vc_len(vc) <= l.capacity() as usize))
    }

    pub fn messages(&self) -> impl Iterator<Item = &M> {
        self.links.iter().flat_map(|l| l.messages())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fabric::Topology;

    fn inject(net: &mut Network<RouteState>, src: Coordinate, dst: Coordinate) {
        net.inject(src, RouteState::new(src, dst)).expect("injection refused");
    }

    #[test]
    fn two_hop_message_arrives_after_two_cycles() {
        let cfg = ChipConfig::new(4, 4, Topology::Mesh);
        let mut net = Network::new(&cfg);
        // Staged during cycle 0, first crossing during cycle 1.
        inject(&mut net, Coordinate::new(0, 0), Coordinate::new(2, 0));
        assert!(net.advance().is_empty());
        net.end_cycle();
        assert!(net.advance().is_empty());
        net.end_cycle();
        let delivered = net.advance();
        assert_eq!(delivered.len(), 1);
        assert_eq!(delivered[0].0, Coordinate::new(2, 0));
        assert_eq!(delivered[0].1.hops, 2);
        assert_eq!(net.in_flight(), 0);
    }

    #[test]
    fn blocked_message_stays_put() {
        let mut cfg = ChipConfig::new(4, 2, Topology::Mesh);
        cfg.vc_count = 1;
        cfg.vc_buffer_capacity = 1;
        let mut net = Network::new(&cfg);
        // Fill the East link out of (1,0) with a message headed further east.
        inject(&mut net, Coordinate::new(1, 0), Coordinate::new(3, 0));
        inject(&mut net, Coordinate::new(0, 0), Coordinate::new(3, 0));
        net.end_cycle();
        // (1,0)->(2,0) crossing frees its slot only at the next snapshot, so
        // the message behind it cannot advance this cycle.
        net.advance();
        assert_eq!(net.link(Coordinate::new(0, 0), Direction::East).occupancy(), 1);
        assert!(net.link(Coordinate::new(1, 0), Direction::East).contention_cycles() >= 1);
        assert!(net.buffers_within_capacity());
    }

    #[test]
    fn messages_take_one_hop_per_cycle_at_most() {
        let cfg = ChipConfig::new(8, 2, Topology::Mesh);
        let mut net = Network::new(&cfg);
        inject(&mut net, Coordinate::new(0, 0), Coordinate::new(7, 0));
        net.end_cycle();
        for cycle in 1..=7 {
            let out = net.advance();
            net.end_cycle();
            if cycle < 7 {
                assert!(out.is_empty(), "delivered early at cycle {cycle}");
            } else {
                assert_eq!(out.len(), 1);
            }
        }
    }
}
