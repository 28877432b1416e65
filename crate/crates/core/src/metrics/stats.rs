use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{total_energy, CellCounters, EnergyModel};
use crate::error::Result;
use crate::fabric::Direction;
use crate::runtime::Chip;

/// One flat stats row. Field order is the CSV column order and is stable.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub app: String,
    pub graph: String,
    pub topology: String,
    pub dim_x: u32,
    pub dim_y: u32,
    pub rpvo_max: u32,
    pub throttling: bool,
    pub seed: u64,
    pub vertices: u64,
    pub edges: u64,
    pub objects: u64,
    pub total_cycles: u64,
    pub germinated: u64,
    pub messages_created: u64,
    pub messages_delivered: u64,
    pub local_messages: u64,
    pub total_hops: u64,
    pub contention_cycles: u64,
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
    /// Per-link occupancy high-water marks, summed over all links.
    pub vc_occupancy_hwm_sum: u64,
    /// Most messages buffered in the fabric at one cycle boundary.
    pub buffered_peak: u64,
    /// Largest number of messages received by a single cell.
    pub max_cell_deliveries: u64,
    pub throttled_cell_cycles: u64,
    pub energy_network: f64,
    pub energy_compute: f64,
    pub energy_sram: f64,
    pub energy_leakage: f64,
    pub energy_total: f64,
    pub verdict: String,
}

impl RunStats {
    /// Counters of a chip after its run. Label fields are left empty.
    pub fn from_chip(chip: &Chip, em: &EnergyModel) -> Self {
        let mut sum = CellCounters::default();
        for c in chip.cells() {
            sum.merge(&c.counters);
        }
        let net = chip.network();
        let cfg = chip.config();
        let mut s = RunStats {
            topology: cfg.topology.to_string(),
            dim_x: cfg.dim_x,
            dim_y: cfg.dim_y,
            throttling: cfg.throttling_enabled,
            seed: cfg.rng_seed,
            objects: chip.cells().iter().map(|c| c.objects.len() as u64).sum(),
            total_cycles: chip.cycle(),
            germinated: chip.germinated(),
            messages_created: chip.messages_created(),
            messages_delivered: chip.messages_delivered(),
            local_messages: sum.local_messages,
            total_hops: net.total_hops(),
            contention_cycles: net.links().iter().map(|l| l.contention_cycles()).sum(),
            actions_invoked: sum.actions_invoked,
            actions_predicate_true: sum.actions_predicate_true,
            actions_predicate_false: sum.actions_predicate_false,
            actions_unguarded: sum.actions_unguarded,
            actions_overlapped: sum.actions_overlapped,
            diffusions_created: sum.diffusions_created,
            diffusions_pruned: sum.diffusions_pruned,
            propagates_staged: sum.propagates_staged,
            filter_evaluations: sum.filter_evaluations,
            compute_cycles_busy: sum.compute_cycles_busy,
            sram_word_accesses: sum.sram_word_accesses,
            action_queue_hwm: sum.action_queue_hwm,
            diffuse_queue_hwm: sum.diffuse_queue_hwm,
            vc_occupancy_hwm_sum: net.links().iter().map(|l| l.occupancy_hwm() as u64).sum(),
            buffered_peak: net.buffered_peak() as u64,
            max_cell_deliveries: chip.cells().iter().map(|c| c.counters.messages_received).max().unwrap_or(0),
            throttled_cell_cycles: sum.throttled_cycles,
            ..RunStats::default()
        };
        let e = total_energy(&s, em, cfg.topology, cfg.num_cells() as u64);
        s.energy_network = e.network;
        s.energy_compute = e.compute;
        s.energy_sram = e.sram;
        s.energy_leakage = e.leakage;
        s.energy_total = e.total;
        s
    }

    /// Fraction of guarded actions whose predicate held.
    pub fn predicate_true_fraction(&self) -> f64 {
        let guarded = self.actions_predicate_true + self.actions_predicate_false;
        if guarded == 0 {
            return 0.0;
        }
        self.actions_predicate_true as f64 / guarded as f64
    }

    /// The row as CSV text, without a header.
    pub fn csv_row(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.serialize(self)?;
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }
}

/// Writes rows as CSV with a header line.
pub fn write_stats_csv<W: Write>(out: W, rows: &[RunStats]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-cell and per-link breakdowns of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunDetail {
    pub dim_x: u32,
    pub dim_y: u32,
    /// Contention cycles per cell, indexed by direction N, E, S, W.
    pub contention: Vec<[u64; 4]>,
    pub cells: Vec<CellCounters>,
}

impl RunDetail {
    pub fn from_chip(chip: &Chip) -> Self {
        let cfg = chip.config();
        let contention = cfg
            .coords()
            .map(|c| Direction::ALL.map(|d| chip.network().link(c, d).contention_cycles()))
            .collect();
        RunDetail {
            dim_x: cfg.dim_x,
            dim_y: cfg.dim_y,
            contention,
            cells: chip.cells().iter().map(|c| c.counters).collect(),
        }
    }

    pub fn deliveries(&self) -> impl Iterator<Item = u64> + '_ {
        self.cells.iter().map(|c| c.messages_received)
    }
}
