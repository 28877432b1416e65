use std::collections::BTreeMap;

use super::{ActionMessage, AndGateLco, LcoOp};

/// Zero-cost chip-wide reduction, modelled like the hardware idle signal.
///
/// Each iteration collects `arity` contributions; the scaled sum becomes
/// readable once complete. Trigger actions that need an incomplete value are
/// parked and released when it completes.
#[derive(Debug, Clone)]
pub struct HostReduction {
    arity: u32,
    scale: f64,
    gates: BTreeMap<u32, AndGateLco>,
    done: BTreeMap<u32, f64>,
    deferred: BTreeMap<u32, Vec<ActionMessage>>,
    released: Vec<ActionMessage>,
}

impl Default for HostReduction {
    fn default() -> Self {
        Self::new(0, 1.0)
    }
}

impl HostReduction {
    pub fn new(arity: u32, scale: f64) -> Self {
        HostReduction {
            arity,
            scale,
            gates: BTreeMap::new(),
            done: BTreeMap::new(),
            deferred: BTreeMap::new(),
            released: Vec::new(),
        }
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn contribute(&mut self, iteration: u32, v: f64) {
        assert!(self.arity > 0, "contribution to an empty reduction");
        let arity = self.arity;
        let gate = self
            .gates
            .entry(iteration)
            .or_insert_with(|| AndGateLco::new(arity, LcoOp::Sum));
        if let Some(total) = gate.set(v) {
            self.gates.remove(&iteration);
            self.done.insert(iteration, total * self.scale);
            if let Some(parked) = self.deferred.remove(&iteration) {
                self.released.extend(parked);
            }
        }
    }

    /// Completed value for `iteration`.
    pub fn value(&self, iteration: u32) -> Option<f64> {
        if self.arity == 0 {
            return Some(0.0);
        }
        self.done.get(&iteration).copied()
    }

    /// Hands `msg` back if `iteration` is complete, otherwise parks it.
    pub fn gate_trigger(&mut self, iteration: u32, msg: ActionMessage) -> Option<ActionMessage> {
        if self.value(iteration).is_some() {
            return Some(msg);
        }
        self.deferred.entry(iteration).or_default().push(msg);
        None
    }

    pub(crate) fn take_released(&mut self) -> Vec<ActionMessage> {
        std::mem::take(&mut self.released)
    }

    /// Parked plus released-but-undelivered triggers.
    pub fn pending(&self) -> usize {
        self.deferred.values().map(Vec::len).sum::<usize>() + self.released.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fabric::Coordinate;
    use crate::runtime::{ActionKind, Address, Payload};

    #[test]
    fn parks_until_complete() {
        let mut h = HostReduction::new(2, 0.5);
        let msg = ActionMessage::local(Address::new(Coordinate::new(0, 0), 0), ActionKind::Trigger, Payload::None);
        assert!(h.gate_trigger(0, msg.clone()).is_none());
        assert_eq!(h.pending(), 1);
        h.contribute(0, 1.0);
        assert!(h.value(0).is_none());
        h.contribute(0, 3.0);
        assert_eq!(h.value(0), Some(2.0));
        assert_eq!(h.take_released(), vec![msg.clone()]);
        assert!(h.gate_trigger(0, msg).is_some());
    }

    #[test]
    fn empty_reduction_is_always_zero() {
        let h = HostReduction::new(0, 1.0);
        assert_eq!(h.value(17), Some(0.0));
    }
}
