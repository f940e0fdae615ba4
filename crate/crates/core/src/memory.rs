//! Deciding whether a map `A^R -> A^R` is a cellular automaton with a given
//! memory set, and finding minimal memory sets by subset scan.

use crate::ca::{CellularAutomaton, GlobalMap};
use crate::config::{check_memory, ConfigSpace};
use crate::error::{Error, Result};
use crate::rack::mask_to_subset;
use crate::verdict::{Verdict, Witness, WitnessKind};

/// Upper bound on `2^n * q^n` for subset scans.
pub const SUBSET_SCAN_LIMIT: u128 = 1 << 24;

/// A local rule read off a map. `constrained[p]` is false for patterns never
/// produced by any `(x, r)`; those entries hold symbol 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRule {
    pub memory: Vec<usize>,
    pub rule: Vec<usize>,
    pub constrained: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Rule(OracleRule),
    /// `MemoryConflict`: elements `[r, r']`, configs `[x, y]`, outputs on each side.
    Conflict(Witness),
}

impl OracleOutcome {
    pub fn is_rule(&self) -> bool {
        matches!(self, OracleOutcome::Rule(_))
    }

    pub fn rule(self) -> Option<OracleRule> {
        match self {
            OracleOutcome::Rule(r) => Some(r),
            OracleOutcome::Conflict(_) => None,
        }
    }
}

/// Scans `x` (outer) and `r` (inner), assigning `(r.x)|_M -> F(x)(r)`.
pub fn memory_oracle(space: &ConfigSpace, f: &GlobalMap, memory: &[usize]) -> Result<OracleOutcome> {
    f.check_space(space)?;
    check_memory(memory)?;
    space.rack().check_subset(memory)?;
    let patterns = space.q().pow(memory.len() as u32);
    let mut seen: Vec<Option<(usize, usize, usize)>> = vec![None; patterns];
    for x in 0..space.size() {
        let fx = f.apply(x);
        for r in 0..space.n() {
            let p = space.shifted_pattern(r, x, memory);
            let out = space.digit(fx, r);
            match seen[p] {
                None => seen[p] = Some((x, r, out)),
                Some((x0, r0, out0)) if out0 != out => {
                    return Ok(OracleOutcome::Conflict(
                        Witness::new(WitnessKind::MemoryConflict).elements([r0, r]).configs([x0, x]).sides([out0], [out]),
                    ));
                }
                Some(_) => {}
            }
        }
    }
    let rule = seen.iter().map(|e| e.map_or(0, |(_, _, out)| out)).collect();
    let constrained = seen.iter().map(Option::is_some).collect();
    Ok(OracleOutcome::Rule(OracleRule { memory: memory.to_vec(), rule, constrained }))
}

/// Recomputes both sides of a `MemoryConflict` witness: the two outputs, and
/// whether the shifted patterns coincide.
pub fn conflict_sides(space: &ConfigSpace, f: &GlobalMap, memory: &[usize], w: &Witness) -> (usize, usize, bool) {
    let (r0, r1) = (w.elements[0], w.elements[1]);
    let (x0, x1) = (w.configs[0], w.configs[1]);
    let same = space.shifted_pattern(r0, x0, memory) == space.shifted_pattern(r1, x1, memory);
    (space.digit(f.apply(x0), r0), space.digit(f.apply(x1), r1), same)
}

/// Every memory set of a map, found by scanning all `2^n` subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryFamily {
    pub n: usize,
    /// `admits[mask]`: the subset with bitmask `mask` is a memory set.
    pub admits: Vec<bool>,
}

impl MemoryFamily {
    pub fn scan(space: &ConfigSpace, f: &GlobalMap) -> Result<Self> {
        f.check_space(space)?;
        let n = space.n();
        let cost = (1u128 << n).saturating_mul(space.size() as u128);
        if n >= 64 || cost > SUBSET_SCAN_LIMIT {
            return Err(Error::SizeLimitExceeded { what: "memory subset scan".into(), requested: cost, limit: SUBSET_SCAN_LIMIT });
        }
        let admits = (0..1u64 << n)
            .map(|mask| Ok(memory_oracle(space, f, &mask_to_subset(mask, n))?.is_rule()))
            .collect::<Result<_>>()?;
        Ok(MemoryFamily { n, admits })
    }

    pub fn full(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    pub fn is_ca(&self) -> bool {
        self.admits[self.full() as usize]
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.admits.len() as u64).filter(|&m| self.admits[m as usize])
    }

    /// Memory sets of minimal cardinality, as bitmasks in increasing order.
    pub fn minima(&self) -> Vec<u64> {
        let best = self.masks().map(u64::count_ones).min();
        self.masks().filter(|m| Some(m.count_ones()) == best).collect()
    }

    pub fn intersection(&self) -> Option<u64> {
        self.masks().reduce(|a, b| a & b)
    }

    /// `M` a memory set and `M ⊆ M'` implies `M'` a memory set.
    /// Witness configs are the two bitmasks.
    pub fn monotonicity_witness(&self) -> Option<Witness> {
        self.masks().find_map(|m| {
            (0..self.n).map(|e| m | 1 << e).find(|&up| !self.admits[up as usize]).map(|up| {
                Witness::new(WitnessKind::MemoryFamily).configs([m as usize, up as usize]).sides([1], [0])
            })
        })
    }

    /// `M1`, `M2` memory sets implies `M1 ∩ M2` a memory set.
    /// Witness configs are `[M1, M2]`, `lhs` the intersection.
    pub fn intersection_witness(&self) -> Option<Witness> {
        let masks: Vec<u64> = self.masks().collect();
        masks.iter().enumerate().find_map(|(i, &a)| {
            masks[i + 1..].iter().find(|&&b| !self.admits[(a & b) as usize]).map(|&b| {
                Witness::new(WitnessKind::MemoryFamily).configs([a as usize, b as usize]).sides([(a & b) as usize], [0])
            })
        })
    }
}

#[derive(Debug, Clone)]
pub struct MinimalMemory {
    /// All minimal-cardinality memory sets.
    pub minima: Vec<Vec<usize>>,
    /// Intersection of every memory set.
    pub intersection: Vec<usize>,
    /// Rule for the first minimum.
    pub rule: OracleRule,
    /// HOLDS iff the minimum is unique and equals the intersection.
    pub verdict: Verdict,
}

impl MinimalMemory {
    pub fn memory(&self) -> &[usize] {
        &self.minima[0]
    }

    /// The automaton with the first minimal memory set.
    pub fn automaton(&self, space: &ConfigSpace) -> Result<CellularAutomaton> {
        CellularAutomaton::new(space.rack().clone(), space.q(), self.rule.memory.clone(), self.rule.rule.clone())
    }
}

/// Minimal memory sets of `f`. `NotACellularAutomaton` if the full universe
/// is not a memory set.
pub fn minimal_memory(space: &ConfigSpace, f: &GlobalMap) -> Result<MinimalMemory> {
    let all: Vec<usize> = (0..space.n()).collect();
    if let OracleOutcome::Conflict(w) = memory_oracle(space, f, &all)? {
        return Err(Error::NotACellularAutomaton { witness: Box::new(w) });
    }
    let family = MemoryFamily::scan(space, f)?;
    let n = space.n();
    let minima = family.minima();
    let intersection = family.intersection().unwrap_or(family.full());
    let witness = if minima.len() > 1 {
        Some(Witness::new(WitnessKind::MinimalMemory).configs([minima[0] as usize, minima[1] as usize]).sides([minima[0] as usize], [minima[1] as usize]))
    } else if minima[0] != intersection {
        Some(Witness::new(WitnessKind::MinimalMemory).configs([minima[0] as usize, intersection as usize]).sides([minima[0] as usize], [intersection as usize]))
    } else {
        None
    };
    let instance = format!("minimal memory, n={n}, q={}", space.q());
    let verdict = Verdict::from_witness("P3.16", instance, witness).with_note("witness configs are subset bitmasks");
    let minima: Vec<Vec<usize>> = minima.into_iter().map(|m| mask_to_subset(m, n)).collect();
    let rule = memory_oracle(space, f, &minima[0])?.rule().expect("minimum admits a rule");
    Ok(MinimalMemory { minima, intersection: mask_to_subset(intersection, n), rule, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Budget;
    use crate::rack::{subset_to_mask, FiniteRack};
    use std::sync::Arc;

    fn d3_space() -> ConfigSpace {
        ConfigSpace::new(Arc::new(FiniteRack::dihedral(3).unwrap()), 2, Budget::default()).unwrap()
    }

    #[test]
    fn oracle_recovers_rule() {
        let space = d3_space();
        let tau = CellularAutomaton::new(space.rack().clone(), 2, vec![0, 2], vec![0, 1, 1, 0]).unwrap();
        let f = tau.global_map(&space).unwrap();
        let rule = memory_oracle(&space, &f, &[0, 2]).unwrap().rule().unwrap();
        assert_eq!(rule.rule, vec![0, 1, 1, 0]);
        assert!(rule.constrained.iter().all(|&c| c));
    }

    #[test]
    fn identity_map_conflicts() {
        let space = d3_space();
        let id = GlobalMap::identity(&space);
        match memory_oracle(&space, &id, &[0, 1, 2]).unwrap() {
            OracleOutcome::Conflict(w) => {
                let (a, b, same) = conflict_sides(&space, &id, &[0, 1, 2], &w);
                assert!(same);
                assert_eq!((vec![a], vec![b]), (w.lhs.clone(), w.rhs.clone()));
                assert_ne!(a, b);
            }
            OracleOutcome::Rule(_) => panic!("identity on D3 is not a CA"),
        }
        // the documented pair: x=[a,b,c] at r=0 and y=[b,c,a] at r=1 share a pattern
        let x = space.encode(&crate::Configuration::new(2, vec![1, 0, 0]).unwrap()).unwrap();
        let y = space.encode(&crate::Configuration::new(2, vec![0, 0, 1]).unwrap()).unwrap();
        assert_eq!(space.shifted_pattern(0, x, &[0, 1, 2]), space.shifted_pattern(1, y, &[0, 1, 2]));
        assert!(matches!(minimal_memory(&space, &id), Err(Error::NotACellularAutomaton { .. })));
    }

    #[test]
    fn constant_map_has_empty_memory() {
        let space = d3_space();
        let f = GlobalMap::constant(&space, 7);
        let rule = memory_oracle(&space, &f, &[]).unwrap().rule().unwrap();
        assert_eq!(rule.rule, vec![1]);
        let mm = minimal_memory(&space, &f).unwrap();
        assert_eq!(mm.minima, vec![Vec::<usize>::new()]);
        assert!(mm.verdict.is_holds());
    }

    #[test]
    fn identity_rule_minimal_memory() {
        let space = d3_space();
        let tau = CellularAutomaton::new(space.rack().clone(), 2, vec![0], vec![0, 1]).unwrap();
        let mm = minimal_memory(&space, &tau.global_map(&space).unwrap()).unwrap();
        assert_eq!(mm.minima, vec![vec![0]]);
        assert_eq!(mm.intersection, vec![0]);
        assert!(mm.verdict.is_holds());
        assert_eq!(mm.automaton(&space).unwrap(), tau);
    }

    #[test]
    fn unconstrained_patterns_are_flagged() {
        // on the trivial rack the pattern on {0,1} always comes from one x
        let space = ConfigSpace::new(Arc::new(FiniteRack::trivial(2).unwrap()), 2, Budget::default()).unwrap();
        let f = GlobalMap::constant(&space, 0);
        let rule = memory_oracle(&space, &f, &[0, 1]).unwrap().rule().unwrap();
        assert!(rule.constrained.iter().all(|&c| c));
        let space = d3_space();
        let uniform_only = GlobalMap::from_fn(&space, |x| if space.is_uniform(x) { x } else { 0 });
        let rule = memory_oracle(&space, &uniform_only, &[]);
        assert!(rule.unwrap().rule().is_none());
    }

    #[test]
    fn family_properties_on_small_cas() {
        let space = d3_space();
        for tau in crate::ca::enumerate_cas(space.rack(), 2, 2, 1 << 16).unwrap() {
            let f = tau.global_map(&space).unwrap();
            let family = MemoryFamily::scan(&space, &f).unwrap();
            assert!(family.admits[subset_to_mask(tau.memory()) as usize]);
            assert!(family.monotonicity_witness().is_none());
        }
    }

}
