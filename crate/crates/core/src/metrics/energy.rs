use serde::{Deserialize, Serialize};

use super::RunStats;
use crate::error::{Error, Result};
use crate::fabric::Topology;

/// Linear energy coefficients.
///
/// The defaults are a placeholder profile with plausible magnitudes; only
/// ratios between runs are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    /// Joules per flit per hop.
    pub e_hop: f64,
    /// Hop multiplier on a torus-mesh (longer wrap wiring).
    pub torus_link_factor: f64,
    /// Joules per busy compute cycle.
    pub e_op: f64,
    /// Joules per 64-bit SRAM word access.
    pub e_sram_access: f64,
    /// Leakage watts per cell.
    pub p_leak_cell: f64,
    /// Seconds per cycle.
    pub cycle_time: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            e_hop: 2.0e-12,
            torus_link_factor: 1.5,
            e_op: 1.0e-12,
            e_sram_access: 0.5e-12,
            p_leak_cell: 1.0e-5,
            cycle_time: 5.0e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub network: f64,
    pub compute: f64,
    pub sram: f64,
    pub leakage: f64,
    pub total: f64,
}

impl EnergyModel {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.e_hop,
            self.torus_link_factor,
            self.e_op,
            self.e_sram_access,
            self.p_leak_cell,
            self.cycle_time,
        ];
        if all.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::config("energy coefficients must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Network, compute, SRAM and leakage terms of a finished run.
pub fn total_energy(stats: &RunStats, em: &EnergyModel, topology: Topology, num_cells: u64) -> EnergyBreakdown {
    let link = match topology {
        Topology::Mesh => 1.0,
        Topology::TorusMesh => em.torus_link_factor,
    };
    let network = stats.total_hops as f64 * em.e_hop * link;
    let compute = stats.compute_cycles_busy as f64 * em.e_op;
    let sram = stats.sram_word_accesses as f64 * em.e_sram_access;
    let leakage = num_cells as f64 * stats.total_cycles as f64 * em.p_leak_cell * em.cycle_time;
    EnergyBreakdown {
        network,
        compute,
        sram,
        leakage,
        total: network + compute + sram + leakage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stats(hops: u64, busy: u64, sram: u64, cycles: u64) -> RunStats {
        RunStats {
            total_hops: hops,
            compute_cycles_busy: busy,
            sram_word_accesses: sram,
            total_cycles: cycles,
            ..RunStats::default()
        }
    }

    #[test]
    fn idle_run_is_pure_leakage() {
        let em = EnergyModel::default();
        let e = total_energy(&stats(0, 0, 0, 100), &em, Topology::Mesh, 16);
        assert_eq!(e.total, e.leakage);
        assert_eq!(e.leakage, 16.0 * 100.0 * em.p_leak_cell * em.cycle_time);
    }

    #[test]
    fn torus_hops_cost_half_again() {
        let em = EnergyModel::default();
        let s = stats(1234, 5, 6, 7);
        let mesh = total_energy(&s, &em, Topology::Mesh, 4);
        let torus = total_energy(&s, &em, Topology::TorusMesh, 4);
        assert_eq!(torus.network, 1.5 * mesh.network);
        assert_eq!(torus.compute, mesh.compute);
    }

    #[test]
    fn network_term_is_linear_in_hops() {
        let em = EnergyModel::default();
        let a = total_energy(&stats(1000, 1, 1, 1), &em, Topology::Mesh, 4);
        let b = total_energy(&stats(2000, 1, 1, 1), &em, Topology::Mesh, 4);
        assert_eq!(b.network, 2.0 * a.network);
    }

    proptest! {
        #[test]
        fn monotone_in_counters_and_coefficients(
            hops in 0u64..1_000_000, busy in 0u64..1_000_000, sram in 0u64..1_000_000,
            cycles in 0u64..1_000_000, bump in 1u64..1000, scale in 1.0f64..10.0,
        ) {
            let em = EnergyModel::default();
            let base = total_energy(&stats(hops, busy, sram, cycles), &em, Topology::TorusMesh, 64).total;
            for s in [
                stats(hops + bump, busy, sram, cycles),
                stats(hops, busy + bump, sram, cycles),
                stats(hops, busy, sram + bump, cycles),
                stats(hops, busy, sram, cycles + bump),
            ] {
                prop_assert!(total_energy(&s, &em, Topology::TorusMesh, 64).total >= base);
            }
            let s = stats(hops, busy, sram, cycles);
            for em2 in [
                EnergyModel { e_hop: em.e_hop * scale, ..em },
                EnergyModel { e_op: em.e_op * scale, ..em },
                EnergyModel { e_sram_access: em.e_sram_access * scale, ..em },
                EnergyModel { p_leak_cell: em.p_leak_cell * scale, ..em },
                EnergyModel { torus_link_factor: em.torus_link_factor * scale, ..em },
            ] {
                prop_assert!(total_energy(&s, &em2, Topology::TorusMesh, 64).total >= base);
            }
        }
    }
}
