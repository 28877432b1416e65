use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::CellStatus;
use crate::error::Result;
use crate::runtime::Chip;

/// Status of every cell at the end of one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub cycle: u64,
    pub dim_x: u32,
    pub dim_y: u32,
    /// Row-major by cell id.
    pub cells: Vec<CellStatus>,
}

impl Frame {
    pub fn status(&self, x: u32, y: u32) -> CellStatus {
        self.cells[(y * self.dim_x + x) as usize]
    }

    pub fn count(&self, s: CellStatus) -> usize {
        self.cells.iter().filter(|c| **c == s).count()
    }

    /// `dim_y` lines of `dim_x` comma-separated status names.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for row in self.cells.chunks(self.dim_x as usize) {
            let names: Vec<&str> = row.iter().map(|s| s.name()).collect();
            writeln!(w, "{}", names.join(","))?;
        }
        Ok(())
    }
}

/// Snapshot of the status grid after the chip's most recent cycle.
pub fn congestion_frame(chip: &Chip) -> Frame {
    let cfg = chip.config();
    Frame {
        cycle: chip.cycle(),
        dim_x: cfg.dim_x,
        dim_y: cfg.dim_y,
        cells: chip.cells().iter().map(|c| c.status()).collect(),
    }
}

/// Captures a frame every `stride` cycles.
#[derive(Debug, Clone)]
pub struct FrameRecorder {
    stride: u64,
    frames: Vec<Frame>,
}

impl FrameRecorder {
    pub fn new(stride: u64) -> Self {
        assert!(stride > 0, "frame stride must be positive");
        FrameRecorder {
            stride,
            frames: Vec::new(),
        }
    }

    pub fn observe(&mut self, chip: &Chip) {
        if chip.cycle().is_multiple_of(self.stride) {
            self.frames.push(congestion_frame(chip));
        }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    /// One `frame_<cycle>.csv` per capture. Returns the written paths.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut out = Vec::with_capacity(self.frames.len());
        for f in &self.frames {
            let path = dir.join(format!("frame_{:08}.csv", f.cycle));
            f.write_csv(fs::File::create(&path)?)?;
            out.push(path);
        }
        Ok(out)
    }
}
