use serde::{Deserialize, Serialize};

use super::VertexId;
use crate::runtime::Address;

/// In-edges each rhizome member absorbs before the next member is created:
/// `max(1, floor(indegree_max / rpvo_max))`.
pub fn compute_cutoff_chunk(indegree_max: u32, rpvo_max: u32) -> u32 {
    assert!(rpvo_max >= 1, "rpvo_max must be positive");
    (indegree_max / rpvo_max).max(1)
}

/// The rhizome members of one vertex and the in-edge assignment cursor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhizomeDescriptor {
    pub vertex: VertexId,
    pub members: Vec<Address>,
    pub cutoff_chunk: u32,
    pub rpvo_max: u32,
    /// In-edges assigned so far.
    pub in_edge_assignment_cursor: u64,
}

impl RhizomeDescriptor {
    pub fn new(vertex: VertexId, first: Address, cutoff_chunk: u32, rpvo_max: u32) -> Self {
        RhizomeDescriptor {
            vertex,
            members: vec![first],
            cutoff_chunk,
            rpvo_max,
            in_edge_assignment_cursor: 0,
        }
    }

    /// Member index for the next in-edge. Consecutive blocks of
    /// `cutoff_chunk` in-edges go to consecutive members; once `rpvo_max`
    /// members exist the blocks cycle back to member 0. An index equal to
    /// `members.len()` means the caller has to create that member.
    pub fn next_member_index(&mut self) -> usize {
        let block = self.in_edge_assignment_cursor / self.cutoff_chunk as u64;
        self.in_edge_assignment_cursor += 1;
        (block % self.rpvo_max as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fabric::Coordinate;

    #[test]
    fn cutoff_from_max_in_degree() {
        assert_eq!(compute_cutoff_chunk(431_795, 16), 26_987);
        assert_eq!(compute_cutoff_chunk(431_795, 1), 431_795);
        assert_eq!(compute_cutoff_chunk(5, 16), 1);
        assert_eq!(compute_cutoff_chunk(100, 4), 25);
    }

    #[test]
    fn blocks_cycle_back_to_first_member() {
        let addr = Address::new(Coordinate::new(0, 0), 0);
        let mut rz = RhizomeDescriptor::new(0, addr, 3, 2);
        let mut pattern = Vec::new();
        for _ in 0..8 {
            let idx = rz.next_member_index();
            if idx == rz.members.len() {
                rz.members.push(Address::new(Coordinate::new(1, 0), idx as u32));
            }
            pattern.push(idx);
        }
        assert_eq!(pattern, vec![0, 0, 0, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn single_rpvo_takes_everything() {
        let addr = Address::new(Coordinate::new(0, 0), 0);
        let mut rz = RhizomeDescriptor::new(0, addr, 2, 1);
        assert!((0..10).all(|_| rz.next_member_index() == 0));
    }
}
