use super::{ActionMessage, ComputeCell, CycleEnv, HandlerRegistry, HostReduction};
use crate::error::{Error, Result};
use crate::fabric::{throttle_period, ChipConfig, Network};
use crate::graph::{GraphStore, VertexObject};
use crate::runtime::Address;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChipOptions {
    /// Apply `LcoSet` on delivery without charging a compute cycle.
    pub lco_set_free: bool,
    /// Check per-cycle invariants and shadow-execute failed predicates.
    pub check_invariants: bool,
}

impl Default for ChipOptions {
    fn default() -> Self {
        ChipOptions {
            lco_set_free: true,
            check_invariants: false,
        }
    }
}

/// Per-cycle invariant violations seen so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Violations {
    pub one_slot: u64,
    pub conservation: u64,
    pub buffer_overflow: u64,
    pub stalled_network: u64,
}

impl Violations {
    pub fn total(&self) -> u64 {
        self.one_slot + self.conservation + self.buffer_overflow + self.stalled_network
    }
}

/// The whole machine: cells, fabric, handlers and the host reduction.
#[derive(Debug)]
pub struct Chip {
    cfg: ChipConfig,
    cells: Vec<ComputeCell>,
    net: Network<ActionMessage>,
    registry: HandlerRegistry,
    host: HostReduction,
    period: Option<u64>,
    opts: ChipOptions,
    germinated: u64,
    violations: Violations,
}

impl Chip {
    pub fn new(store: GraphStore, registry: HandlerRegistry, host: HostReduction, opts: ChipOptions) -> Self {
        let cfg = store.cfg.clone();
        let cells = store
            .cells
            .into_iter()
            .enumerate()
            .map(|(id, objects)| ComputeCell::new(cfg.coord(id), objects))
            .collect();
        let period = cfg.throttling_enabled.then(|| throttle_period(&cfg));
        Chip {
            net: Network::new(&cfg),
            cfg,
            cells,
            registry,
            host,
            period,
            opts,
            germinated: 0,
            violations: Violations::default(),
        }
    }

    pub fn config(&self) -> &ChipConfig {
        &self.cfg
    }

    pub fn cycle(&self) -> u64 {
        self.net.cycle()
    }

    pub fn cells(&self) -> &[ComputeCell] {
        &self.cells
    }

    pub fn network(&self) -> &Network<ActionMessage> {
        &self.net
    }

    pub fn host(&self) -> &HostReduction {
        &self.host
    }

    pub fn violations(&self) -> Violations {
        self.violations
    }

    pub fn germinated(&self) -> u64 {
        self.germinated
    }

    pub fn object(&self, addr: Address) -> &VertexObject {
        &self.cells[self.cfg.cell_id(addr.cell)].objects[addr.slot as usize]
    }

    pub fn objects(&self) -> impl Iterator<Item = &VertexObject> {
        self.cells.iter().flat_map(|c| c.objects.iter())
    }

    /// Host-side injection at the current cycle, charged no hops.
    pub fn germinate(&mut self, msgs: impl IntoIterator<Item = ActionMessage>) -> Result<()> {
        for msg in msgs {
            let id = self.cell_index(msg.target)?;
            self.cells[id].enqueue_action(msg)?;
            self.germinated += 1;
        }
        Ok(())
    }

    fn cell_index(&self, addr: Address) -> Result<usize> {
        if addr.cell.x >= self.cfg.dim_x || addr.cell.y >= self.cfg.dim_y {
            return Err(Error::Fault(format!("address {addr:?} is off-chip")));
        }
        Ok(self.cfg.cell_id(addr.cell))
    }

    /// Messages staged so far: network injections plus local propagates.
    pub fn messages_created(&self) -> u64 {
        self.net.injected() + self.cells.iter().map(|c| c.counters.local_messages).sum::<u64>()
    }

    pub fn messages_delivered(&self) -> u64 {
        self.cells.iter().map(|c| c.counters.messages_received).sum()
    }

    pub fn messages_in_flight(&self) -> u64 {
        self.net.in_flight() as u64 + self.cells.iter().map(|c| c.local_inbox_len() as u64).sum::<u64>()
    }

    /// Idle oracle: no queued, running or in-flight work and no parked
    /// trigger anywhere.
    pub fn check_termination(&self) -> bool {
        self.net.in_flight() == 0 && self.host.pending() == 0 && self.cells.iter().all(ComputeCell::is_quiescent)
    }

    /// One lockstep cycle: network advance, deliveries (local, then
    /// network, then released triggers), scheduling of every cell in id
    /// order, occupancy snapshot.
    pub fn step(&mut self) -> Result<()> {
        let cycle = self.net.cycle();
        let in_flight_at_start = self.net.in_flight();
        let arrivals = self.net.advance();
        let lco_free = self.opts.lco_set_free;

        for id in 0..self.cells.len() {
            for msg in self.cells[id].take_local_inbox() {
                self.cells[id].deliver(msg, &self.registry, &mut self.host, cycle, lco_free)?;
            }
        }
        for (coord, msg) in arrivals {
            let id = self.cfg.cell_id(coord);
            self.cells[id].deliver(msg, &self.registry, &mut self.host, cycle, lco_free)?;
        }
        for msg in self.host.take_released() {
            let id = self.cell_index(msg.target)?;
            self.cells[id].enqueue_action(msg)?;
        }

        let mut env = CycleEnv {
            cycle,
            net: &mut self.net,
            registry: &self.registry,
            host: &mut self.host,
            throttle_period: self.period,
            shadow_check: self.opts.check_invariants,
        };
        for cell in &mut self.cells {
            cell.schedule_cycle(&mut env)?;
        }
        let progress = self.net.last_progress();
        self.net.end_cycle();

        if self.opts.check_invariants {
            self.violations.one_slot += self.cells.iter().filter(|c| c.slot_ops() > 1).count() as u64;
            if !self.net.buffers_within_capacity() {
                self.violations.buffer_overflow += 1;
            }
            if self.messages_created() != self.messages_delivered() + self.messages_in_flight() {
                self.violations.conservation += 1;
            }
            if in_flight_at_start > 0 && progress == 0 {
                self.violations.stalled_network += 1;
            }
        }
        Ok(())
    }

    /// Steps until the idle oracle fires. Fails with [`Error::CycleCap`]
    /// once `cap` cycles have elapsed. `observe` runs after every cycle.
    pub fn run_until_idle(&mut self, cap: u64, mut observe: impl FnMut(&Chip)) -> Result<u64> {
        while !self.check_termination() {
            if self.net.cycle() >= cap {
                return Err(Error::CycleCap { cap });
            }
            self.step()?;
            observe(self);
        }
        Ok(self.net.cycle())
    }
}
