//! Run statistics, energy accounting, contention histograms and congestion
//! frames.

mod counters;
mod energy;
mod frames;
mod histogram;
mod stats;

pub use counters::{CellCounters, CellStatus};
pub use energy::{total_energy, EnergyBreakdown, EnergyModel};
pub use frames::{congestion_frame, Frame, FrameRecorder};
pub use histogram::{contention_histogram, Histogram, DEFAULT_BINS};
pub use stats::{write_stats_csv, RunDetail, RunStats};
