//! Outcomes of claim checks.
//!
//! A failing check carries a [`Witness`]: the point of the scanned domain where
//! the two sides of the checked identity disagree, plus both evaluated sides.
//! Points are element indices and encoded configurations, so a witness can be
//! re-evaluated later to reproduce the same inequality.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Holds,
    Fails,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Ambient,
    Restricted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ambient => "ambient",
            Mode::Restricted => "restricted",
        }
    }
}

/// What a witness point means; selects how it is replayed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// elements `[r, s, t]`: `r>(s>t)` vs `(r>s)>(r>t)`.
    SelfDistributivity,
    /// elements `[r1, r2]`: the permutations `phi_{r1>r2}` vs `phi_r1 phi_r2 phi_r1^-1`.
    InnerConjugation,
    /// elements `[r1, r2]`: `r1>r2` is missing from the subset in `rhs`.
    ShelfClosure,
    /// elements `[r1, r2]` and `[x]` (action point, not a configuration).
    ActionCompatibility,
    /// a subset closed under `>` whose restricted rows are not bijective.
    ClosedNotSubrack,
    /// elements `[r]`, configs `[x]`: the two stabilizer characterizations.
    StabilizerCharacterization,
    /// elements `[r1, r2]`, configs `[x]`: shift action compatibility on configurations.
    ShiftCompatibility,
    /// elements `[r]`, configs `[x, y]`: `r.x == r.y` with `x != y`.
    ShiftNotInjective,
    /// elements `[r, s]`, configs `[x]`: `(r.x)(s)` vs `x(r >^-1 s)`.
    ShiftCoordinate,
    /// elements `[s]`, configs `[x]`: `F(s.x)` vs `s.F(x)` (encoded).
    Equivariance,
    /// elements `[r]`, configs `[x]`: `F(x)(r)` vs `mu(x|M)`.
    Locality,
    /// elements `[r, r']`, configs `[x, y]`: equal shifted patterns, different outputs.
    MemoryConflict,
    /// elements `[r]`, configs `[x]`: two maps evaluated at one cell.
    Pointwise,
    /// elements `[r, s]`, configs `[x]`: first identity of the shift-commutation formula.
    ShiftedEvaluation,
    /// configs `[x]`: `Stab(x, Eq)` vs `Stab(F(x), Eq)` as subsets.
    StabilizerInclusion,
    /// elements `[m1, m2]`: `m1 >^-1 m2` outside `M`, or `[m]` missing from `M >^-1 M`.
    SetIdentity,
    /// subsets: a memory-set family property fails (elements list the offending set).
    MemoryFamily,
    /// configs `[x, y]` (or `[x]`, elements `[r]`): a locality probe for continuity.
    Continuity,
    /// two minimal-cardinality memory sets, or the set vs the intersection of all.
    MinimalMemory,
    /// free-form comparison of two derived values.
    Comparison,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub elements: Vec<usize>,
    pub configs: Vec<usize>,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl Witness {
    pub fn new(kind: WitnessKind) -> Self {
        Witness { kind, elements: Vec::new(), configs: Vec::new(), lhs: Vec::new(), rhs: Vec::new() }
    }

    pub fn elements(mut self, e: impl Into<Vec<usize>>) -> Self {
        self.elements = e.into();
        self
    }

    pub fn configs(mut self, c: impl Into<Vec<usize>>) -> Self {
        self.configs = c.into();
        self
    }

    pub fn sides(mut self, lhs: impl Into<Vec<usize>>, rhs: impl Into<Vec<usize>>) -> Self {
        self.lhs = lhs.into();
        self.rhs = rhs.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub mode: Mode,
    pub facet: String,
    pub status: Status,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(claim: &str, instance: impl Into<String>) -> Self {
        Verdict {
            claim: claim.to_string(),
            mode: Mode::Ambient,
            facet: "main".to_string(),
            status: Status::Holds,
            instance: instance.into(),
            witness: None,
            note: None,
        }
    }

    pub fn fails(claim: &str, instance: impl Into<String>, witness: Witness) -> Self {
        Verdict { status: Status::Fails, witness: Some(witness), ..Verdict::holds(claim, instance) }
    }

    pub fn skipped(claim: &str, instance: impl Into<String>, reason: impl Into<String>) -> Self {
        Verdict { status: Status::Skipped, note: Some(reason.into()), ..Verdict::holds(claim, instance) }
    }

    /// HOLDS when `witness` is `None`.
    pub fn from_witness(claim: &str, instance: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Verdict::fails(claim, instance, w),
            None => Verdict::holds(claim, instance),
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_facet(mut self, facet: impl Into<String>) -> Self {
        self.facet = facet.into();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }
}

/// Combines sub-verdicts of one instance: the first failure wins, then HOLDS,
/// and SKIPPED only if every part was skipped.
pub fn merge(claim: &str, instance: &str, parts: Vec<Verdict>) -> Verdict {
    if let Some(fail) = parts.iter().find(|v| v.is_fails()) {
        let mut v = fail.clone();
        v.claim = claim.to_string();
        v.instance = instance.to_string();
        return v;
    }
    if parts.iter().any(Verdict::is_holds) || parts.is_empty() {
        return Verdict::holds(claim, instance);
    }
    let reason = parts.iter().filter_map(|v| v.note.clone()).next().unwrap_or_default();
    Verdict::skipped(claim, instance, reason)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_stable() {
        let v = Verdict::fails(
            "P5.1",
            "dihedral:3",
            Witness::new(WitnessKind::Pointwise).elements([1]).configs([2]).sides([1], [0]),
        );
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"claim":"P5.1","mode":"ambient","facet":"main","status":"FAILS","instance":"dihedral:3","witness":{"kind":"pointwise","elements":[1],"configs":[2],"lhs":[1],"rhs":[0]}}"#
        );
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn merge_prefers_failures() {
        let h = Verdict::holds("X", "i");
        let s = Verdict::skipped("X", "i", "why");
        let f = Verdict::fails("X", "i", Witness::new(WitnessKind::Comparison));
        assert!(merge("X", "i", vec![h.clone(), f.clone(), s.clone()]).is_fails());
        assert!(merge("X", "i", vec![s.clone(), h]).is_holds());
        assert_eq!(merge("X", "i", vec![s]).status, Status::Skipped);
    }
}
