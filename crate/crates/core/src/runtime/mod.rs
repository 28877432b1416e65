//! Compute-cell execution: queues, scheduling, LCOs and the cycle loop.

mod cell;
mod chip;
mod handler;
mod host;
mod lco;
mod message;

pub use cell::{ComputeCell, CycleEnv, QueueKind};
pub use chip::{Chip, ChipOptions, Violations};
pub use handler::{ActionHandler, DiffuseClosure, Guard, HandlerRegistry, Link, Work, WorkContext};
pub use host::HostReduction;
pub use lco::{rhizome_collapse, AndGateLco, LcoOp};
pub use message::{ActionKind, ActionMessage, Address, Payload};
