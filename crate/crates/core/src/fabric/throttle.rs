use super::{ChipConfig, Coordinate, Network, Routed, Topology};

/// Halt period after observing neighbor congestion: the chip hypotenuse on a
/// mesh, half of it on a torus-mesh, rounded down.
pub fn throttle_period(cfg: &ChipConfig) -> u64 {
    let hyp = ((cfg.dim_x as f64).powi(2) + (cfg.dim_y as f64).powi(2)).sqrt();
    let t = match cfg.topology {
        Topology::Mesh => hyp,
        Topology::TorusMesh => hyp / 2.0,
    };
    t.floor() as u64
}

/// Per-cell throttle bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ThrottleState {
    /// First cycle at which the cell may stage messages again.
    pub halted_until: u64,
}

impl ThrottleState {
    pub fn is_halted(&self, cycle: u64) -> bool {
        cycle < self.halted_until
    }
}

/// Enters a halt window of `period` cycles (starting at `cycle`) when any
/// output link of `cell` refused an enqueue in the previous cycle. A cell
/// that is already halted keeps its current countdown. Returns whether the
/// cell is halted at `cycle`.
pub fn throttle_check<M: Routed>(
    state: &mut ThrottleState,
    cell: Coordinate,
    net: &Network<M>,
    cycle: u64,
    period: u64,
) -> bool {
    if !state.is_halted(cycle) && cycle > 0 && net.congested_during(cell, cycle - 1) {
        state.halted_until = cycle + period;
    }
    state.is_halted(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fabric::{Direction, RouteState};

    #[test]
    fn period_uses_floor_of_hypotenuse() {
        assert_eq!(throttle_period(&ChipConfig::new(128, 128, Topology::Mesh)), 181);
        assert_eq!(throttle_period(&ChipConfig::new(128, 128, Topology::TorusMesh)), 90);
        assert_eq!(throttle_period(&ChipConfig::new(16, 16, Topology::Mesh)), 22);
    }

    fn congested_east_link(cfg: &ChipConfig) -> Network<RouteState> {
        let mut net = Network::new(cfg);
        let src = Coordinate::new(0, 0);
        let dst = Coordinate::new(3, 0);
        for _ in 0..=cfg.vc_buffer_capacity {
            let _ = net.inject(src, RouteState::new(src, dst));
        }
        assert!(net.link(src, Direction::East).refused_during(0));
        net.end_cycle();
        net
    }

    #[test]
    fn no_congestion_means_no_halt() {
        let cfg = ChipConfig::new(16, 16, Topology::Mesh);
        let net: Network<RouteState> = Network::new(&cfg);
        let mut st = ThrottleState::default();
        assert!(!throttle_check(&mut st, Coordinate::new(0, 0), &net, 1, 22));
    }

    #[test]
    fn refusal_halts_for_period_without_restart() {
        let mut cfg = ChipConfig::new(16, 16, Topology::Mesh);
        cfg.vc_count = 1;
        let net = congested_east_link(&cfg);
        let period = throttle_period(&cfg);
        let mut st = ThrottleState::default();
        let cell = Coordinate::new(0, 0);
        assert!(throttle_check(&mut st, cell, &net, 1, period));
        assert_eq!(st.halted_until, 1 + 22);
        // Still halted; the countdown is not restarted.
        assert!(throttle_check(&mut st, cell, &net, 5, period));
        assert_eq!(st.halted_until, 23);
        assert!(st.is_halted(22));
        assert!(!st.is_halted(23));
        // A neighbor cell without refusals is unaffected.
        let mut other = ThrottleState::default();
        assert!(!throttle_check(&mut other, Coordinate::new(5, 5), &net, 1, period));
    }
}
