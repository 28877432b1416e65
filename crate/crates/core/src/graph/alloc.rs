use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fabric::{ChipConfig, Coordinate, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AllocMode {
    /// Every object lands on a uniformly random cell.
    Random,
    /// Objects land near their hint (ghosts near the parent, extra rhizome
    /// members near the first one).
    Vicinity,
    /// Rhizome roots spread uniformly, ghosts kept near their parent.
    Mixed,
}

impl fmt::Display for AllocMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AllocMode::Random => "random",
            AllocMode::Vicinity => "vicinity",
            AllocMode::Mixed => "mixed",
        })
    }
}

impl FromStr for AllocMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(AllocMode::Random),
            "vicinity" => Ok(AllocMode::Vicinity),
            "mixed" => Ok(AllocMode::Mixed),
            other => Err(Error::config(format!("unknown allocator `{other}`"))),
        }
    }
}

/// Chooses cells for new vertex objects. Seeded from the chip seed, so a
/// given configuration always produces the same placement.
#[derive(Debug, Clone)]
pub struct AllocatorPolicy {
    pub mode: AllocMode,
    pub vicinity_radius: u32,
    cfg: ChipConfig,
    rng: ChaCha8Rng,
}

const ALLOC_STREAM: u64 = 0xA110_C8ED;

impl AllocatorPolicy {
    pub fn new(mode: AllocMode, vicinity_radius: u32, cfg: &ChipConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(ALLOC_STREAM);
        AllocatorPolicy {
            mode,
            vicinity_radius,
            cfg: cfg.clone(),
            rng,
        }
    }

    fn uniform(&mut self) -> Coordinate {
        Coordinate::new(self.rng.gen_range(0..self.cfg.dim_x), self.rng.gen_range(0..self.cfg.dim_y))
    }

    /// Axis positions within `radius` of `center`, wrapping on a torus and
    /// clipped at mesh edges, without duplicates.
    fn axis_window(&self, center: u32, dim: u32) -> Vec<u32> {
        let r = self.vicinity_radius.min(dim) as i64;
        let mut out: Vec<u32> = (-r..=r)
            .filter_map(|off| {
                let p = center as i64 + off;
                match self.cfg.topology {
                    Topology::TorusMesh => Some(p.rem_euclid(dim as i64) as u32),
                    Topology::Mesh => (0..dim as i64).contains(&p).then_some(p as u32),
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Uniform over the cells within Chebyshev distance `vicinity_radius`.
    pub fn vicinity(&mut self, hint: Coordinate) -> Coordinate {
        let xs = self.axis_window(hint.x, self.cfg.dim_x);
        let ys = self.axis_window(hint.y, self.cfg.dim_y);
        let x = xs[self.rng.gen_range(0..xs.len())];
        let y = ys[self.rng.gen_range(0..ys.len())];
        Coordinate::new(x, y)
    }

    /// Cell for a new rhizome root. `hint` is the first member's cell, if any.
    pub fn allocate_root(&mut self, hint: Option<Coordinate>) -> Coordinate {
        match (self.mode, hint) {
            (AllocMode::Vicinity, Some(h)) => self.vicinity(h),
            _ => self.uniform(),
        }
    }

    /// Cell for a new ghost object whose parent sits at `parent`.
    pub fn allocate_ghost(&mut self, parent: Coordinate) -> Coordinate {
        match self.mode {
            AllocMode::Random => self.uniform(),
            AllocMode::Vicinity | AllocMode::Mixed => self.vicinity(parent),
        }
    }
}
