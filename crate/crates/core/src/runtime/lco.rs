use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LcoOp {
    Sum,
    Min,
    Max,
    Overwrite,
}

impl LcoOp {
    pub fn identity(self) -> f64 {
        match self {
            LcoOp::Sum | LcoOp::Overwrite => 0.0,
            LcoOp::Min => f64::INFINITY,
            LcoOp::Max => f64::NEG_INFINITY,
        }
    }

    pub fn apply(self, acc: f64, v: f64) -> f64 {
        match self {
            LcoOp::Sum => acc + v,
            LcoOp::Min => acc.min(v),
            LcoOp::Max => acc.max(v),
            LcoOp::Overwrite => v,
        }
    }
}

/// Counting gate: accumulates `arity` contributions under `op`, fires once
/// with the folded value, then resets.
///
/// Contributions made through [`set_indexed`](Self::set_indexed) are folded
/// in index order at fire time, so the result does not depend on arrival
/// order even for floating-point sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AndGateLco {
    arity: u32,
    count: u32,
    op: LcoOp,
    acc: f64,
    indexed: Vec<Option<f64>>,
    fires: u64,
}

impl AndGateLco {
    pub fn new(arity: u32, op: LcoOp) -> Self {
        assert!(arity > 0, "an LCO needs a positive arity");
        AndGateLco {
            arity,
            count: 0,
            op,
            acc: op.identity(),
            indexed: Vec::new(),
            fires: 0,
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn fires(&self) -> u64 {
        self.fires
    }

    pub fn is_pending(&self) -> bool {
        self.count > 0
    }

    /// Adds one contribution. Returns the folded value when this set fills
    /// the gate.
    pub fn set(&mut self, v: f64) -> Option<f64> {
        self.acc = self.op.apply(self.acc, v);
        self.bump()
    }

    /// Adds the contribution of participant `index`; each index may
    /// contribute once per fill.
    pub fn set_indexed(&mut self, index: usize, v: f64) -> Option<f64> {
        assert!(index < self.arity as usize, "participant {index} out of range");
        if self.indexed.is_empty() {
            self.indexed = vec![None; self.arity as usize];
        }
        assert!(self.indexed[index].is_none(), "participant {index} set twice");
        self.indexed[index] = Some(v);
        self.bump()
    }

    fn bump(&mut self) -> Option<f64> {
        self.count += 1;
        debug_assert!(self.count <= self.arity);
        if self.count < self.arity {
            return None;
        }
        let mut out = self.acc;
        if !self.indexed.is_empty() {
            out = self
                .indexed
                .drain(..)
                .map(|v| v.expect("filled gate has every participant"))
                .fold(out, |a, v| self.op.apply(a, v));
        }
        self.count = 0;
        self.acc = self.op.identity();
        self.fires += 1;
        Some(out)
    }
}

/// Local half of a rhizome collapse: the member's own partial goes into its
/// gate; the caller ships the same partial to every sibling. Returns the
/// total when the member's gate fills.
pub fn rhizome_collapse(lco: &mut AndGateLco, member: u16, partial: f64) -> Option<f64> {
    lco.set_indexed(member as usize, partial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fires_once_at_arity_then_resets() {
        let mut g = AndGateLco::new(3, LcoOp::Sum);
        assert_eq!(g.set(1.0), None);
        assert_eq!(g.set(2.0), None);
        assert_eq!(g.set(3.0), Some(6.0));
        assert_eq!(g.count(), 0);
        assert_eq!(g.set(5.0), None);
        assert_eq!(g.fires(), 1);
    }

    #[test]
    fn single_member_collapse_fires_on_self() {
        let mut g = AndGateLco::new(1, LcoOp::Sum);
        assert_eq!(rhizome_collapse(&mut g, 0, 0.25), Some(0.25));
    }

    #[test]
    fn min_fold_over_levels() {
        let mut g = AndGateLco::new(2, LcoOp::Min);
        g.set(4.0);
        assert_eq!(g.set(2.0), Some(2.0));
    }

    #[test]
    fn three_member_sum_agrees_everywhere() {
        let partials = [0.2, 0.3, 0.5];
        let orders = [[0, 1, 2], [2, 0, 1], [1, 2, 0]];
        let totals: Vec<f64> = orders
            .iter()
            .map(|order| {
                let mut g = AndGateLco::new(3, LcoOp::Sum);
                order
                    .iter()
                    .find_map(|&i| rhizome_collapse(&mut g, i as u16, partials[i]))
                    .unwrap()
            })
            .collect();
        assert!((totals[0] - 1.0).abs() < 1e-12);
        assert!(totals.iter().all(|t| t.to_bits() == totals[0].to_bits()));
    }

    proptest! {
        #[test]
        fn indexed_fold_is_order_independent(
            vals in prop::collection::vec(-1e6f64..1e6, 1..12),
            seed in any::<u64>(),
        ) {
            let n = vals.len();
            let mut order: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut a = AndGateLco::new(n as u32, LcoOp::Sum);
            let mut b = AndGateLco::new(n as u32, LcoOp::Sum);
            let mut fired_a = Vec::new();
            let mut fired_b = Vec::new();
            for i in 0..n {
                fired_a.extend(a.set_indexed(i, vals[i]));
                fired_b.extend(b.set_indexed(order[i], vals[order[i]]));
            }
            prop_assert_eq!(fired_a.len(), 1);
            prop_assert_eq!(fired_b.len(), 1);
            prop_assert_eq!(fired_a[0].to_bits(), fired_b[0].to_bits());
        }

        #[test]
        fn min_gate_fires_exactly_once(vals in prop::collection::vec(0u32..1000, 1..20)) {
            let mut g = AndGateLco::new(vals.len() as u32, LcoOp::Min);
            let fired: Vec<f64> = vals.iter().filter_map(|&v| g.set(v as f64)).collect();
            prop_assert_eq!(fired, vec![*vals.iter().min().unwrap() as f64]);
        }
    }
}
