use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{verify_claim, CaGenerator, InstanceSpec, CLAIM_IDS};
use crate::config::Budget;
use crate::error::Result;
use crate::io::resolve_rack;
use crate::verdict::{Mode, Status, Verdict};

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub specs: Vec<InstanceSpec>,
    pub claims: Vec<String>,
    pub seed: u64,
    /// Certificates kept per record; `None` keeps all.
    pub max_certificates: Option<usize>,
    /// Only this mode, if set.
    pub mode: Option<Mode>,
}

impl SuiteConfig {
    /// Built-ins up to order 4 plus two order-3 racks from groups, `q = 2`.
    pub fn default_suite(seed: u64, budget: Budget) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        labels.extend((1..=4).map(|n| format!("builtin:trivial:{n}")));
        labels.extend((2..=4).map(|n| format!("builtin:cyclic:{n}")));
        labels.extend((3..=4).map(|n| format!("builtin:dihedral:{n}")));
        labels.extend(["builtin:transpositions:3", "builtin:conj:cyclic:3", "builtin:core:cyclic:4"].map(String::from));
        let specs = labels
            .iter()
            .map(|l| {
                let spec = InstanceSpec::from_spec(l, 2)?.with_seed(seed).with_budget(budget);
                Ok(if l == "builtin:dihedral:3" { spec.with_random_maps(100) } else { spec })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::for_specs(specs, seed))
    }

    /// Every claim over one rack spec.
    pub fn single(rack: &str, q: usize, seed: u64, budget: Budget, generator: CaGenerator) -> Result<Self> {
        resolve_rack(rack)?;
        let spec = InstanceSpec::from_spec(rack, q)?.with_seed(seed).with_budget(budget).with_generator(generator);
        Ok(Self::for_specs(vec![spec], seed))
    }

    pub fn for_specs(specs: Vec<InstanceSpec>, seed: u64) -> Self {
        SuiteConfig { specs, claims: CLAIM_IDS.iter().map(|s| s.to_string()).collect(), seed, max_certificates: None, mode: None }
    }

    pub fn with_claims(mut self, claims: Vec<String>) -> Self {
        self.claims = claims;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub mode: Mode,
    pub facet: String,
    pub instances: usize,
    pub holds: usize,
    pub fails: usize,
    pub skipped: usize,
    pub certificates: Vec<Verdict>,
    /// Failures beyond the certificate cap.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub certificates_omitted: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErroredClaim {
    pub id: String,
    pub rack: String,
    pub error: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub racks: Vec<String>,
    pub claims: Vec<String>,
    pub records: Vec<Record>,
    pub errored: Vec<ErroredClaim>,
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl Report {
    pub fn record(&self, id: &str, mode: Mode, facet: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id && r.mode == mode && r.facet == facet)
    }

    pub fn records_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.id == id)
    }

    pub fn total(&self, status: Status) -> usize {
        self.records
            .iter()
            .map(|r| match status {
                Status::Holds => r.holds,
                Status::Fails => r.fails,
                Status::Skipped => r.skipped,
            })
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The JSON without the `timing` field.
    pub fn to_json_without_timing(&self) -> String {
        let mut value = serde_json::to_value(self).expect("reports serialize");
        value.as_object_mut().map(|o| o.remove("timing"));
        serde_json::to_string_pretty(&value).expect("reports serialize")
    }

    /// One line per record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!(
                "{:<14} {:<10} {:<16} instances={:<6} holds={:<6} fails={:<6} skipped={}\n",
                r.id,
                r.mode.as_str(),
                r.facet,
                r.instances,
                r.holds,
                r.fails,
                r.skipped
            ));
        }
        for e in &self.errored {
            out.push_str(&format!("{:<14} ERRORED on {}: {} ({})\n", e.id, e.rack, e.error, e.message));
        }
        out
    }
}

const NOTES: [&str; 3] = [
    "P2.15, P4.1, P4.2: A^R is finite and discrete, so continuity reduces to the checked coordinate and locality identities.",
    "restricted mode: S is derived from every anchor configuration; see each certificate's instance for S.",
    "infinite alphabets and infinite racks are out of scope.",
];

pub fn run_suite(config: &SuiteConfig) -> Report {
    let start = Instant::now();
    let mut grouped: BTreeMap<(usize, Mode, String), Record> = BTreeMap::new();
    let mut errored = Vec::new();
    for (claim_index, claim) in config.claims.iter().enumerate() {
        for spec in &config.specs {
            match verify_claim(claim, spec) {
                Ok(verdicts) => {
                    for v in verdicts {
                        if config.mode.is_some_and(|m| m != v.mode) {
                            continue;
                        }
                        let record = grouped.entry((claim_index, v.mode, v.facet.clone())).or_insert_with(|| Record {
                            id: claim.clone(),
                            mode: v.mode,
                            facet: v.facet.clone(),
                            instances: 0,
                            holds: 0,
                            fails: 0,
                            skipped: 0,
                            certificates: Vec::new(),
                            certificates_omitted: 0,
                        });
                        record.instances += 1;
                        match v.status {
                            Status::Holds => record.holds += 1,
                            Status::Skipped => record.skipped += 1,
                            Status::Fails => {
                                record.fails += 1;
                                if config.max_certificates.is_none_or(|cap| record.certificates.len() < cap) {
                                    record.certificates.push(v);
                                } else {
                                    record.certificates_omitted += 1;
                                }
                            }
                        }
                    }
                }
                Err(e) => errored.push(ErroredClaim {
                    id: claim.clone(),
                    rack: spec.label.clone(),
                    error: e.name().to_string(),
                    message: e.to_string(),
                }),
            }
        }
    }
    Report {
        seed: config.seed,
        racks: config.specs.iter().map(|s| s.label.clone()).collect(),
        claims: config.claims.clone(),
        records: grouped.into_values().collect(),
        errored,
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
        timing: Timing { wall_ms: start.elapsed().as_millis() },
    }
}
