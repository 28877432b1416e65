use serde::{Deserialize, Serialize};

use crate::fabric::Direction;

pub const DEFAULT_BINS: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub direction: Direction,
    /// Upper end of the binned range; the lower end is 0.
    pub max: u64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn mass(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sum of bin-midpoint times count, a proxy for total contention.
    pub fn weighted_mass(&self) -> f64 {
        let width = self.max as f64 / self.counts.len() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| c as f64 * (i as f64 + 0.5) * width)
            .sum()
    }
}

/// Equal-width histograms over `[0, max]` of per-cell contention, one per
/// link direction. The maximum lands in the last bin.
pub fn contention_histogram(per_cell: &[[u64; 4]], bins: usize) -> [Histogram; 4] {
    assert!(bins > 0, "need at least one bin");
    Direction::ALL.map(|dir| {
        let d = dir.index();
        let max = per_cell.iter().map(|c| c[d]).max().unwrap_or(0);
        let mut counts = vec![0u64; bins];
        for c in per_cell {
            let b = if max == 0 {
                0
            } else {
                ((c[d] as u128 * bins as u128) / max as u128).min(bins as u128 - 1) as usize
            };
            counts[b] += 1;
        }
        Histogram {
            direction: dir,
            max,
            counts,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn all_zero_lands_in_one_bin() {
        let h = contention_histogram(&[[0; 4]; 16], DEFAULT_BINS);
        for d in &h {
            assert_eq!(d.counts[0], 16);
            assert_eq!(d.mass(), 16);
        }
    }

    #[test]
    fn lone_hot_cell_takes_the_top_bin() {
        let mut cells = vec![[0u64; 4]; 64];
        cells[9] = [100, 100, 100, 100];
        let h = contention_histogram(&cells, 25);
        assert_eq!(h[1].counts[24], 1);
        assert_eq!(h[1].counts[0], 63);
    }

    proptest! {
        #[test]
        fn mass_equals_cell_count(cells in prop::collection::vec(prop::array::uniform4(0u64..10_000), 1..200), bins in 1usize..40) {
            for h in contention_histogram(&cells, bins) {
                prop_assert_eq!(h.mass(), cells.len() as u64);
            }
        }
    }
}
