//! Chip topology, virtual-channel links and the per-cycle network model.
//!
//! Messages live in the output-link buffers of the cell they are about to
//! leave. Each cycle every link forwards at most one flit across to its
//! neighbor; admission into a buffer is decided against the occupancy seen
//! at the start of the cycle plus what was already accepted during it.

mod link;
mod network;
mod routing;
mod throttle;
mod traffic;

pub use link::ChannelLink;
pub use network::{Network, Routed};
pub use routing::{minimal_distance, route_next_hop, RouteState};
pub use throttle::{throttle_check, throttle_period, ThrottleState};
pub use traffic::{random_traffic_trial, TrafficReport};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Topology {
    Mesh,
    TorusMesh,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Mesh => "mesh",
            Topology::TorusMesh => "torus",
        })
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mesh" => Ok(Topology::Mesh),
            "torus" | "torusmesh" | "torus-mesh" | "torus_mesh" => Ok(Topology::TorusMesh),
            other => Err(Error::config(format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChipConfig {
    pub dim_x: u32,
    pub dim_y: u32,
    pub topology: Topology,
    /// Virtual channels per physical link.
    pub vc_count: u32,
    /// Messages per virtual-channel FIFO.
    pub vc_buffer_capacity: u32,
    pub throttling_enabled: bool,
    pub rng_seed: u64,
}

impl Default for ChipConfig {
    fn default() -> Self {
        ChipConfig {
            dim_x: 16,
            dim_y: 16,
            topology: Topology::TorusMesh,
            vc_count: 4,
            vc_buffer_capacity: 4,
            throttling_enabled: true,
            rng_seed: 1,
        }
    }
}

impl ChipConfig {
    pub fn new(dim_x: u32, dim_y: u32, topology: Topology) -> Self {
        ChipConfig {
            dim_x,
            dim_y,
            topology,
            ..ChipConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim_x < 2 || self.dim_y < 2 {
            return Err(Error::config(format!(
                "chip must be at least 2x2, got {}x{}",
                self.dim_x, self.dim_y
            )));
        }
        if self.vc_count == 0 {
            return Err(Error::config("vc_count must be positive"));
        }
        if self.topology == Topology::TorusMesh && self.vc_count < 2 {
            return Err(Error::config("a torus-mesh needs at least 2 virtual channels"));
        }
        if self.vc_buffer_capacity == 0 {
            return Err(Error::config("vc_buffer_capacity must be positive"));
        }
        Ok(())
    }

    pub fn num_cells(&self) -> usize {
        self.dim_x as usize * self.dim_y as usize
    }

    #[inline]
    pub fn cell_id(&self, c: Coordinate) -> usize {
        c.y as usize * self.dim_x as usize + c.x as usize
    }

    #[inline]
    pub fn coord(&self, id: usize) -> Coordinate {
        Coordinate {
            x: (id % self.dim_x as usize) as u32,
            y: (id / self.dim_x as usize) as u32,
        }
    }

    pub fn coords(&self) -> impl Iterator<Item = Coordinate> + '_ {
        (0..self.num_cells()).map(|id| self.coord(id))
    }

    /// The cell reached by leaving `c` in direction `dir`, or `None` when the
    /// link would fall off the edge of a mesh.
    pub fn neighbor(&self, c: Coordinate, dir: Direction) -> Option<Coordinate> {
        let (dx, dy) = (self.dim_x, self.dim_y);
        let torus = self.topology == Topology::TorusMesh;
        match dir {
            Direction::North if c.y > 0 => Some(Coordinate::new(c.x, c.y - 1)),
            Direction::North if torus => Some(Coordinate::new(c.x, dy - 1)),
            Direction::South if c.y + 1 < dy => Some(Coordinate::new(c.x, c.y + 1)),
            Direction::South if torus => Some(Coordinate::new(c.x, 0)),
            Direction::West if c.x > 0 => Some(Coordinate::new(c.x - 1, c.y)),
            Direction::West if torus => Some(Coordinate::new(dx - 1, c.y)),
            Direction::East if c.x + 1 < dx => Some(Coordinate::new(c.x + 1, c.y)),
            Direction::East if torus => Some(Coordinate::new(0, c.y)),
            _ => None,
        }
    }

    /// Whether leaving `c` towards `dir` uses a wrap-around link.
    pub fn crosses_wrap(&self, c: Coordinate, dir: Direction) -> bool {
        self.topology == Topology::TorusMesh
            && match dir {
                Direction::North => c.y == 0,
                Direction::South => c.y + 1 == self.dim_y,
                Direction::West => c.x == 0,
                Direction::East => c.x + 1 == self.dim_x,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Coordinate {
    pub x: u32,
    pub y: u32,
}

impl Coordinate {
    pub const fn new(x: u32, y: u32) -> Self {
        Coordinate { x, y }
    }

    /// Chebyshev distance, optionally measured around torus wrap links.
    pub fn chebyshev(self, other: Coordinate, cfg: &ChipConfig) -> u32 {
        let axis = |a: u32, b: u32, dim: u32| {
            let d = a.abs_diff(b);
            if cfg.topology == Topology::TorusMesh {
                d.min(dim - d)
            } else {
                d
            }
        };
        axis(self.x, other.x, cfg.dim_x).max(axis(self.y, other.y, cfg.dim_y))
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Link directions. North decreases `y`, South increases it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    North = 0,
    East = 1,
    South = 2,
    West = 3,
}

impl Direction {
    /// Scan order used everywhere a per-cycle order matters.
    pub const ALL: [Direction; 4] = [Direction::North, Direction::East, Direction::South, Direction::West];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn is_horizontal(self) -> bool {
        matches!(self, Direction::East | Direction::West)
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::East => "east",
            Direction::South => "south",
            Direction::West => "west",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_id_round_trips() {
        let cfg = ChipConfig::new(5, 3, Topology::Mesh);
        for id in 0..cfg.num_cells() {
            assert_eq!(cfg.cell_id(cfg.coord(id)), id);
        }
        assert_eq!(cfg.cell_id(Coordinate::new(4, 2)), 14);
    }

    #[test]
    fn rejects_degenerate_chips() {
        assert!(ChipConfig::new(1, 4, Topology::Mesh).validate().is_err());
        let mut torus = ChipConfig::new(4, 4, Topology::TorusMesh);
        torus.vc_count = 1;
        assert!(torus.validate().is_err());
        let mut mesh = ChipConfig::new(4, 4, Topology::Mesh);
        mesh.vc_count = 1;
        assert!(mesh.validate().is_ok());
    }

    #[test]
    fn mesh_edges_have_no_neighbors() {
        let cfg = ChipConfig::new(4, 4, Topology::Mesh);
        assert_eq!(cfg.neighbor(Coordinate::new(0, 0), Direction::West), None);
        assert_eq!(cfg.neighbor(Coordinate::new(3, 3), Direction::South), None);
        let torus = ChipConfig::new(4, 4, Topology::TorusMesh);
        assert_eq!(
            torus.neighbor(Coordinate::new(0, 0), Direction::West),
            Some(Coordinate::new(3, 0))
        );
        assert!(torus.crosses_wrap(Coordinate::new(0, 0), Direction::West));
        assert!(!torus.crosses_wrap(Coordinate::new(1, 0), Direction::West));
    }

    #[test]
    fn torus_chebyshev_wraps() {
        let cfg = ChipConfig::new(8, 8, Topology::TorusMesh);
        assert_eq!(Coordinate::new(0, 0).chebyshev(Coordinate::new(7, 6), &cfg), 2);
        let mesh = ChipConfig::new(8, 8, Topology::Mesh);
        assert_eq!(Coordinate::new(0, 0).chebyshev(Coordinate::new(7, 6), &mesh), 7);
    }
}
