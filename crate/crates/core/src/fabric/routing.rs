use serde::{Deserialize, Serialize};

use super::{ChipConfig, Coordinate, Direction, Topology};

/// Per-message routing bookkeeping carried in the flit header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteState {
    pub src: Coordinate,
    pub dst: Coordinate,
    /// Virtual channel of the link the message currently occupies.
    pub current_vc: u32,
    /// Turns and wrap crossings so far; each one bumps the virtual channel.
    pub turns_taken: u32,
    pub hops: u32,
    pub last_dir: Option<Direction>,
}

impl RouteState {
    pub fn new(src: Coordinate, dst: Coordinate) -> Self {
        RouteState {
            src,
            dst,
            current_vc: 0,
            turns_taken: 0,
            hops: 0,
            last_dir: None,
        }
    }
}

/// Chooses the direction along one axis. On a torus the shorter way round
/// wins; an exact tie goes to the direct (non-wrap) direction.
fn axis_step(cur: u32, dst: u32, dim: u32, topology: Topology, pos: Direction, neg: Direction) -> Direction {
    match topology {
        Topology::Mesh => {
            if dst > cur {
                pos
            } else {
                neg
            }
        }
        Topology::TorusMesh => {
            let forward = (dst + dim - cur) % dim;
            let backward = dim - forward;
            if forward < backward {
                pos
            } else if backward < forward {
                neg
            } else if dst > cur {
                pos
            } else {
                neg
            }
        }
    }
}

/// Horizontal-first dimension-order routing.
///
/// Returns the link to take out of `current` and the header state for the
/// hop across it. The virtual channel advances by one (modulo `vc_count`)
/// whenever the hop turns onto the other axis or crosses a wrap link.
pub fn route_next_hop(current: Coordinate, state: &RouteState, cfg: &ChipConfig) -> (Direction, RouteState) {
    debug_assert_ne!(current, state.dst, "route_next_hop called at the destination");
    let dst = state.dst;
    let dir = if current.x != dst.x {
        axis_step(current.x, dst.x, cfg.dim_x, cfg.topology, Direction::East, Direction::West)
    } else {
        axis_step(current.y, dst.y, cfg.dim_y, cfg.topology, Direction::South, Direction::North)
    };

    let turned = state
        .last_dir
        .is_some_and(|last| last.is_horizontal() != dir.is_horizontal());
    let wrapped = cfg.crosses_wrap(current, dir);

    let mut next = *state;
    if turned || wrapped {
        next.current_vc = (state.current_vc + 1) % cfg.vc_count;
        next.turns_taken += 1;
    }
    next.last_dir = Some(dir);
    (dir, next)
}

/// Analytic minimal hop count between two cells.
pub fn minimal_distance(a: Coordinate, b: Coordinate, cfg: &ChipConfig) -> u32 {
    let axis = |p: u32, q: u32, dim: u32| {
        let d = p.abs_diff(q);
        match cfg.topology {
            Topology::Mesh => d,
            Topology::TorusMesh => d.min(dim - d),
        }
    };
    axis(a.x, b.x, cfg.dim_x) + axis(a.y, b.y, cfg.dim_y)
}
