//! Claim registry, instance generation and suite reports.
//!
//! Every claim id maps to one checker in [`claims`]. Checkers emit one verdict
//! per generated instance; claims stated for a restricted universe also emit
//! verdicts in restricted mode, where `S` is derived from an anchor
//! configuration `x`:
//!
//! - `P3.12`, `L3.15`, `P3.16`, `T4.3`: `S = Stab(x, Eq(tau))`.
//! - `P5.1`: `S = Stab(x) ∩ Eq(sigma) ∩ Eq(tau)`.
//! - `P5.3`, `P5.4`, `T5.6`: `S = Stab(x) ∩ E`, with `E` the intersection of
//!   `Eq` over every automaton on the universe (enumerated as all rules on the
//!   full memory set, so only when `q^(q^n)` is at most [`UNIVERSAL_EQ_LIMIT`]).
//!
//! A restricted instance needs `S` to be a non-empty subrack containing the
//! memory sets involved; otherwise it is SKIPPED with the reason.

mod claims;
mod report;

use std::sync::Arc;

use crate::config::Budget;
use crate::error::{Error, Result};
use crate::io::resolve_rack;
use crate::rack::FiniteRack;
use crate::verdict::Verdict;

pub use claims::universal_eq;
pub use report::{run_suite, ErroredClaim, Record, Report, SuiteConfig};

pub const CLAIM_IDS: [&str; 20] = [
    "R2-inner-conj",
    "Rem2.8",
    "L2.14",
    "P2.15",
    "P2.19",
    "P3.5",
    "P3.7",
    "L3.10",
    "P3.11",
    "P3.12",
    "L3.15",
    "P3.16",
    "Rem3.17",
    "P4.1",
    "P4.2",
    "T4.3",
    "P5.1",
    "P5.3",
    "P5.4",
    "T5.6",
];

/// Claims checked in both ambient and restricted mode.
pub const RESTRICTED_CLAIMS: [&str; 8] = ["P3.12", "L3.15", "P3.16", "T4.3", "P5.1", "P5.3", "P5.4", "T5.6"];

/// Largest number of full-memory rules enumerated to compute `E`.
pub const UNIVERSAL_EQ_LIMIT: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaGenerator {
    /// Every automaton with `|M| <= max_memory`.
    Exhaustive { max_memory: usize },
    /// `count` seeded draws with `|M| <= max_memory`.
    Random { count: usize, max_memory: usize },
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub label: String,
    pub rack: Arc<FiniteRack>,
    pub q: usize,
    /// Automata for single-automaton claims.
    pub generator: CaGenerator,
    /// Pairs for `P5.1` range over generated automata with `|M|` at most this.
    pub pair_max_memory: usize,
    /// Triples for `P5.3` range over generated automata with `|M|` at most this.
    pub triple_max_memory: usize,
    /// Anchor `x` for restricted mode; `None` scans every configuration.
    pub anchor: Option<usize>,
    /// Seeded random maps added to `T4.3`.
    pub random_maps: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl InstanceSpec {
    pub fn new(label: impl Into<String>, rack: FiniteRack, q: usize) -> Self {
        InstanceSpec {
            label: label.into(),
            rack: Arc::new(rack),
            q,
            generator: CaGenerator::Exhaustive { max_memory: 2 },
            pair_max_memory: 1,
            triple_max_memory: 1,
            anchor: None,
            random_maps: 0,
            seed: 0,
            budget: Budget::default(),
        }
    }

    /// From a rack spec (`builtin:...` or a path); the label is the spec.
    pub fn from_spec(spec: &str, q: usize) -> Result<Self> {
        Ok(Self::new(spec.strip_prefix("builtin:").unwrap_or(spec), resolve_rack(spec)?, q))
    }

    pub fn with_generator(mut self, generator: CaGenerator) -> Self {
        self.generator = generator;
        self
    }

    pub fn with_random_maps(mut self, count: usize) -> Self {
        self.random_maps = count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_anchor(mut self, anchor: Option<usize>) -> Self {
        self.anchor = anchor;
        self
    }

    pub fn with_tuple_memory(mut self, pairs: usize, triples: usize) -> Self {
        self.pair_max_memory = pairs;
        self.triple_max_memory = triples;
        self
    }
}

pub fn is_claim(id: &str) -> bool {
    CLAIM_IDS.contains(&id)
}

/// One verdict per generated instance of `claim`.
pub fn verify_claim(claim: &str, spec: &InstanceSpec) -> Result<Vec<Verdict>> {
    if !is_claim(claim) {
        return Err(Error::UnknownClaim(claim.to_string()));
    }
    let verdicts = claims::check(claim, spec)?;
    let prefix = format!("{} q={}", spec.label, spec.q);
    Ok(verdicts
        .into_iter()
        .map(|mut v| {
            v.claim = claim.to_string();
            v.instance = format!("{prefix} | {}", v.instance);
            v
        })
        .collect())
}

/// Re-runs the checker and looks for a verdict identical to `certificate`.
pub fn replay(spec: &InstanceSpec, certificate: &Verdict) -> Result<bool> {
    Ok(verify_claim(&certificate.claim, spec)?.contains(certificate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::{Mode, Status};

    fn spec(s: &str) -> InstanceSpec {
        InstanceSpec::from_spec(s, 2).unwrap()
    }

    #[test]
    fn every_claim_has_a_checker() {
        let s = spec("builtin:trivial:2");
        for id in CLAIM_IDS {
            assert!(!verify_claim(id, &s).unwrap().is_empty(), "{id}");
        }
        assert_eq!(verify_claim("P9.9", &s).unwrap_err(), Error::UnknownClaim("P9.9".into()));
    }

    #[test]
    fn restricted_claims_report_both_modes() {
        let s = spec("builtin:dihedral:3");
        for id in RESTRICTED_CLAIMS {
            let vs = verify_claim(id, &s).unwrap();
            assert!(vs.iter().any(|v| v.mode == Mode::Ambient), "{id}");
            assert!(vs.iter().any(|v| v.mode == Mode::Restricted), "{id}");
        }
    }

    #[test]
    fn stabilizer_shelves_on_dihedral_racks() {
        for n in 3..=8 {
            let vs = verify_claim("L2.14", &spec(&format!("builtin:dihedral:{n}"))).unwrap();
            assert!(vs.iter().all(Verdict::is_holds));
        }
    }

    #[test]
    fn composition_failure_on_dihedral_three() {
        let s = spec("builtin:dihedral:3").with_generator(CaGenerator::Exhaustive { max_memory: 1 });
        let vs = verify_claim("P5.1", &s).unwrap();
        let fail = vs
            .iter()
            .find(|v| v.mode == Mode::Ambient && v.instance.contains("sigma: M=[0] rule=[0, 1] | tau: M=[0] rule=[0, 1]"))
            .unwrap();
        assert_eq!(fail.status, Status::Fails);
        assert!(replay(&s, fail).unwrap());
    }

    #[test]
    fn shelf_claims_on_trivial_rack() {
        let s = spec("builtin:trivial:3");
        let vs = verify_claim("P5.3", &s).unwrap();
        assert!(vs.iter().filter(|v| v.facet == "memory-identity").all(Verdict::is_holds));
        // negation outside identity-rule automata separates the two sides
        assert!(vs.iter().any(|v| v.facet == "main" && v.is_fails()));
    }

    #[test]
    fn idempotence_skipped_off_quandles() {
        let vs = verify_claim("P5.4", &spec("builtin:cyclic:3")).unwrap();
        assert!(vs.iter().all(|v| v.status == Status::Skipped));
    }
}
