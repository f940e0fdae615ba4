//! Equivariance sets, `Stab(x, Eq)`, the shift-commutation identities,
//! locality, and the finite Curtis–Hedlund comparison.

use std::collections::HashMap;
use std::sync::Arc;

use crate::ca::{CellularAutomaton, GlobalMap};
use crate::config::{Budget, ConfigSpace};
use crate::error::{Error, Result};
use crate::memory::{memory_oracle, OracleOutcome};
use crate::verdict::{Verdict, Witness, WitnessKind};

/// `(F(s.x), s.F(x))`, encoded.
pub fn equivariance_sides(space: &ConfigSpace, f: &GlobalMap, s: usize, x: usize) -> (usize, usize) {
    (f.apply(space.shift(s, x)), space.shift(s, f.apply(x)))
}

/// Lowest `x` with `F(s.x) != s.F(x)`.
pub fn equivariance_witness_at(space: &ConfigSpace, f: &GlobalMap, s: usize) -> Option<Witness> {
    (0..space.size()).find_map(|x| {
        let (lhs, rhs) = equivariance_sides(space, f, s, x);
        (lhs != rhs).then(|| Witness::new(WitnessKind::Equivariance).elements([s]).configs([x]).sides([lhs], [rhs]))
    })
}

/// First violation of `S`-equivariance, scanning `S` in the given order.
pub fn equivariance_witness(space: &ConfigSpace, f: &GlobalMap, subset: &[usize]) -> Option<Witness> {
    subset.iter().find_map(|&s| equivariance_witness_at(space, f, s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqSet {
    pub members: Vec<usize>,
    /// `>`-closure of `members`.
    pub closure: Verdict,
}

/// `Eq(F) = {r : F(r.x) = r.F(x) for all x}`.
pub fn eq_set(space: &ConfigSpace, f: &GlobalMap) -> Result<EqSet> {
    f.check_space(space)?;
    let members: Vec<usize> = (0..space.n()).filter(|&r| equivariance_witness_at(space, f, r).is_none()).collect();
    let closure = Verdict::from_witness("P3.7", format!("Eq = {members:?}"), space.rack().closure_witness(&members));
    Ok(EqSet { members, closure })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabEq {
    pub members: Vec<usize>,
    /// `>`-closure of `members`.
    pub closure: Verdict,
    /// `Stab(x, Eq) ⊆ Stab(F(x), Eq)`, with equality when `F` is injective.
    pub inclusion: Verdict,
}

/// `Stab(x) ∩ Eq`, given `Eq` already computed.
pub fn stab_eq_with(space: &ConfigSpace, f: &GlobalMap, eq: &[usize], x: usize) -> StabEq {
    let members = stab_eq_members(space, eq, x);
    let image = stab_eq_members(space, eq, f.apply(x));
    let injective = f.is_bijective();
    let instance = format!("Stab({x}, Eq)");
    let ok = if injective { members == image } else { members.iter().all(|r| image.contains(r)) };
    let inclusion = if ok {
        Verdict::holds("P3.11", instance.clone())
    } else {
        Verdict::fails(
            "P3.11",
            instance.clone(),
            Witness::new(WitnessKind::StabilizerInclusion).configs([x]).sides(members.clone(), image),
        )
    };
    let inclusion = if injective { inclusion.with_facet("equality") } else { inclusion.with_facet("inclusion") };
    let closure = Verdict::from_witness("P3.11", instance, space.rack().closure_witness(&members)).with_facet("closure");
    StabEq { members, closure, inclusion }
}

pub fn stab_eq(space: &ConfigSpace, f: &GlobalMap, x: usize) -> Result<StabEq> {
    let eq = eq_set(space, f)?;
    if x >= space.size() {
        return Err(Error::IndexOutOfRange { index: x as u128, bound: space.size() as u128 });
    }
    Ok(stab_eq_with(space, f, &eq.members, x))
}

pub fn stab_eq_members(space: &ConfigSpace, eq: &[usize], x: usize) -> Vec<usize> {
    eq.iter().copied().filter(|&r| space.shift(r, x) == x).collect()
}

/// `(F(r.x)(s), F(s.x)(s > r))`.
pub fn shifted_evaluation_sides(space: &ConfigSpace, f: &GlobalMap, r: usize, s: usize, x: usize) -> (usize, usize) {
    let lhs = space.digit(f.apply(space.shift(r, x)), s);
    let rhs = space.digit(f.apply(space.shift(s, x)), space.rack().op(s, r));
    (lhs, rhs)
}

/// Both identities `F(r.x)(s) = F(s.x)(s>r)` and `(r.F(x))(s) = F(x)(r>^-1 s)`.
///
/// The second is a `ShiftCoordinate` witness on the configuration `F(x)`.
pub fn prop35_check(space: &ConfigSpace, f: &GlobalMap) -> Result<Verdict> {
    f.check_space(space)?;
    let n = space.n();
    let instance = format!("shift commutation, n={n}, q={}", space.q());
    for x in 0..space.size() {
        for r in 0..n {
            for s in 0..n {
                let (lhs, rhs) = shifted_evaluation_sides(space, f, r, s, x);
                if lhs != rhs {
                    let w = Witness::new(WitnessKind::ShiftedEvaluation).elements([r, s]).configs([x]).sides([lhs], [rhs]);
                    return Ok(Verdict::fails("P3.5", instance, w));
                }
                let fx = f.apply(x);
                let lhs = space.digit(space.shift(r, fx), s);
                let rhs = space.digit(fx, space.rack().inv_op(r, s));
                if lhs != rhs {
                    let w = Witness::new(WitnessKind::ShiftCoordinate).elements([r, s]).configs([fx]).sides([lhs], [rhs]);
                    return Ok(Verdict::fails("P3.5", instance, w));
                }
            }
        }
    }
    Ok(Verdict::holds("P3.5", instance))
}

/// Continuity at finite scale: `F(x)(r)` is determined by `x` on `r >^-1 M`.
///
/// Witness: elements `[r]`, configs `[x, y]` agreeing on the dependence set.
pub fn locality_check(space: &ConfigSpace, tau: &CellularAutomaton) -> Result<Verdict> {
    let f = tau.global_map(space)?;
    let instance = tau.label();
    for r in 0..space.n() {
        let dep = tau.dependence_set(r)?;
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for x in 0..space.size() {
            let key = space.pattern(x, &dep);
            let out = space.digit(f.apply(x), r);
            let first = *seen.entry(key).or_insert(x);
            let expected = space.digit(f.apply(first), r);
            if expected != out {
                let w = Witness::new(WitnessKind::Continuity).elements([r]).configs([first, x]).sides([expected], [out]);
                return Ok(Verdict::fails("P4.2", instance, w));
            }
        }
    }
    Ok(Verdict::holds("P4.2", instance).with_note("A^R is finite and discrete; continuity reduces to locality"))
}

/// A map restricted to a subrack, with the space it lives on.
#[derive(Debug, Clone)]
pub struct Restricted {
    pub elements: Vec<usize>,
    pub space: ConfigSpace,
    pub map: GlobalMap,
}

impl Restricted {
    /// `F_S`, reading `F` with `background` outside `S`.
    pub fn new(space: &ConfigSpace, f: &GlobalMap, subset: &[usize], background: usize) -> Result<Self> {
        let sub = space.rack().induced(subset)?;
        let sub_space = ConfigSpace::new(Arc::new(sub.rack), space.q(), Budget::new(space.size()))?;
        let map = f.restrict(space, &sub.elements, background)?;
        Ok(Restricted { elements: sub.elements, space: sub_space, map })
    }

    pub fn local(&self, ambient: usize) -> Option<usize> {
        self.elements.binary_search(&ambient).ok()
    }

    fn local_memory(&self, memory: &[usize]) -> Result<Vec<usize>> {
        memory.iter().map(|&m| self.local(m).ok_or(Error::MemoryNotContained { element: m })).collect()
    }
}

/// `F_S` is `S`-equivariant and `F_S(y)(r) = mu(y|_M)` for all `y` in `A^S`, `r` in `S`.
///
/// Witness indices are local to `S`.
pub fn local_characterization_check(
    space: &ConfigSpace,
    f: &GlobalMap,
    subset: &[usize],
    memory: &[usize],
    rule: &[usize],
    background: usize,
) -> Result<Verdict> {
    let restricted = Restricted::new(space, f, subset, background)?;
    let local_memory = restricted.local_memory(memory)?;
    let expected = space.q().pow(memory.len() as u32);
    if rule.len() != expected {
        return Err(Error::Mismatch(format!("rule has {} entries, expected {expected}", rule.len())));
    }
    let (sub, fs) = (&restricted.space, &restricted.map);
    let instance = format!("S={:?} M={memory:?} rule={rule:?}", restricted.elements);
    let note = format!("witness indices are local to S={:?}", restricted.elements);
    let all: Vec<usize> = (0..sub.n()).collect();
    if let Some(w) = equivariance_witness(sub, fs, &all) {
        return Ok(Verdict::fails("P3.12", instance, w).with_note(format!("S-equivariance fails; {note}")));
    }
    for y in 0..sub.size() {
        let mu = rule[sub.pattern(y, &local_memory)];
        let fy = fs.apply(y);
        if let Some(r) = (0..sub.n()).find(|&r| sub.digit(fy, r) != mu) {
            let w = Witness::new(WitnessKind::Locality).elements([r]).configs([y]).sides([sub.digit(fy, r)], [mu]);
            return Ok(Verdict::fails("P3.12", instance, w).with_note(format!("local rule fails; {note}")));
        }
    }
    Ok(Verdict::holds("P3.12", instance))
}

/// The two sides of the finite Curtis–Hedlund comparison on a subrack.
#[derive(Debug, Clone)]
pub struct CurtisHedlund {
    /// Some `M ⊆ S` is a memory set for `F_S`.
    pub is_ca: bool,
    /// `F_S` commutes with every shift of `S`.
    pub equivariant: bool,
    pub verdict: Verdict,
}

/// HOLDS iff "`F_S` is a CA on `S`" and "`F_S` is `S`-equivariant" agree.
///
/// `M = S` decides the first side, since memory sets are upward closed.
/// Witness: `Comparison` with elements `S`, sides `[is_ca]` vs `[equivariant]`,
/// configs the local counterexample of whichever side is false.
pub fn curtis_hedlund_check(space: &ConfigSpace, f: &GlobalMap, subset: &[usize], background: usize) -> Result<CurtisHedlund> {
    let restricted = Restricted::new(space, f, subset, background)?;
    let (sub, fs) = (&restricted.space, &restricted.map);
    let all: Vec<usize> = (0..sub.n()).collect();
    let conflict = match memory_oracle(sub, fs, &all)? {
        OracleOutcome::Rule(_) => None,
        OracleOutcome::Conflict(w) => Some(w),
    };
    let eq_witness = equivariance_witness(sub, fs, &all);
    let (is_ca, equivariant) = (conflict.is_none(), eq_witness.is_none());
    let instance = format!("S={:?}", restricted.elements);
    let verdict = if is_ca == equivariant {
        Verdict::holds("T4.3", instance)
    } else {
        let configs = conflict.or(eq_witness).map(|w| w.configs).unwrap_or_default();
        let w = Witness::new(WitnessKind::Comparison)
            .elements(restricted.elements.clone())
            .configs(configs)
            .sides([is_ca as usize], [equivariant as usize]);
        let direction = if is_ca { "CA but not S-equivariant" } else { "S-equivariant but not a CA" };
        Verdict::fails("T4.3", instance, w).with_note(format!("{direction}; continuity holds by finiteness"))
    };
    Ok(CurtisHedlund { is_ca, equivariant, verdict })
}
