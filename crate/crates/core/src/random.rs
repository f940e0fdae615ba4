//! Seeded instance generators.
//!
//! The stream is SplitMix64 with state initialised to the seed: each draw adds
//! `0x9e3779b97f4a7c15` to the state and returns the finalised state. A value
//! below `k` is drawn as `next_u64() % k`.
//!
//! `random_ca` draws the memory index first (into the subsets of size at most
//! `max_memory`, ordered by size then lexicographically), then one symbol per
//! rule entry in pattern order. `random_global_map` draws one encoded
//! configuration per table entry in order.

use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::ca::{subsets_up_to, CellularAutomaton, GlobalMap};
use crate::config::ConfigSpace;
use crate::error::{Error, Result};
use crate::rack::FiniteRack;

pub struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.next_u64() % k as u64) as usize
    }
}

pub fn random_ca(rack: &Arc<FiniteRack>, q: usize, max_memory: usize, seed: u64) -> Result<CellularAutomaton> {
    random_ca_from(&mut Stream::new(seed), rack, q, max_memory)
}

/// Draws from an existing stream, for sequences of automata.
pub fn random_ca_from(stream: &mut Stream, rack: &Arc<FiniteRack>, q: usize, max_memory: usize) -> Result<CellularAutomaton> {
    if max_memory > rack.order() {
        return Err(Error::Invalid(format!("max memory {max_memory} exceeds rack order {}", rack.order())));
    }
    if q == 0 {
        return Err(Error::Invalid("alphabet size must be positive".into()));
    }
    let subsets = subsets_up_to(rack.order(), max_memory);
    let memory = subsets[stream.below(subsets.len())].clone();
    let patterns = q.pow(memory.len() as u32);
    let rule = (0..patterns).map(|_| stream.below(q)).collect();
    CellularAutomaton::new(rack.clone(), q, memory, rule)
}

pub fn random_global_map(space: &ConfigSpace, seed: u64) -> GlobalMap {
    random_global_map_from(&mut Stream::new(seed), space)
}

pub fn random_global_map_from(stream: &mut Stream, space: &ConfigSpace) -> GlobalMap {
    GlobalMap::from_fn(space, |_| stream.below(space.size()))
}
