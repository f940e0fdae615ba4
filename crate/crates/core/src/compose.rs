//! Composition `sigma ▶ tau = sigma ∘ tau`, the memory set `M1 >^-1 M2` with its
//! composed rule, and the shelf, idempotence and invertibility claims.

use crate::ca::{first_pointwise_difference, CellularAutomaton, GlobalMap};
use crate::config::ConfigSpace;
use crate::error::{Error, Result};
use crate::memory::minimal_memory;
use crate::rack::FiniteRack;
use crate::verdict::{Verdict, Witness, WitnessKind};

#[derive(Debug, Clone)]
pub struct Composition {
    /// `x -> sigma(tau(x))`.
    pub composite: GlobalMap,
    /// Memory `M1 >^-1 M2` with the composed rule.
    pub claimed: CellularAutomaton,
    /// Pointwise comparison, `lhs` from the composite, `rhs` from the claimed CA.
    pub verdict: Verdict,
}

/// `{m1 >^-1 m2 : m1 in M1, m2 in M2}`, sorted.
pub fn composed_memory(rack: &FiniteRack, m1: &[usize], m2: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = m1.iter().flat_map(|&a| m2.iter().map(move |&b| rack.inv_op(a, b))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The composed local rule: for `y` on `M3`, `ybar(m1) = mu2(m2 -> y(m1 >^-1 m2))`
/// and `mu3(y) = mu1(ybar)`.
pub fn claimed_composite(sigma: &CellularAutomaton, tau: &CellularAutomaton) -> Result<CellularAutomaton> {
    check_pair(sigma, tau)?;
    let rack = sigma.rack();
    let q = sigma.q();
    let memory = composed_memory(rack, sigma.memory(), tau.memory());
    let position = |cell: usize| memory.binary_search(&cell).map_err(|_| Error::PatternNotCovered { position: cell });
    // slots[i][j]: index in M3 of m1_i >^-1 m2_j
    let slots = sigma
        .memory()
        .iter()
        .map(|&a| tau.memory().iter().map(|&b| position(rack.inv_op(a, b))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    CellularAutomaton::from_fn(rack.clone(), q, memory.clone(), |y| {
        let ybar: usize = slots
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let inner: usize = row.iter().enumerate().map(|(j, &k)| y[k] * q.pow(j as u32)).sum();
                tau.rule()[inner] * q.pow(i as u32)
            })
            .sum();
        sigma.rule()[ybar]
    })
}

fn check_pair(sigma: &CellularAutomaton, tau: &CellularAutomaton) -> Result<()> {
    if sigma.rack() != tau.rack() || sigma.q() != tau.q() {
        return Err(Error::Mismatch("automata must share rack and alphabet".into()));
    }
    Ok(())
}

pub fn compose_checked(space: &ConfigSpace, sigma: &CellularAutomaton, tau: &CellularAutomaton) -> Result<Composition> {
    let composite = sigma.global_map(space)?.after(&tau.global_map(space)?);
    let claimed = claimed_composite(sigma, tau)?;
    let claimed_map = claimed.global_map(space)?;
    let instance = format!("sigma: {} | tau: {}", sigma.label(), tau.label());
    let verdict = Verdict::from_witness("P5.1", instance, first_pointwise_difference(space, &composite, &claimed_map))
        .with_note(format!("claimed memory {:?}", claimed.memory()));
    Ok(Composition { composite, claimed, verdict })
}

/// `M >^-1 M = M`. Witness elements `[m1, m2]` with `lhs = [m1 >^-1 m2]` outside
/// `M`, or elements `[m]` for a member of `M` not produced.
pub fn set_identity_witness(rack: &FiniteRack, memory: &[usize]) -> Option<Witness> {
    for &a in memory {
        for &b in memory {
            let c = rack.inv_op(a, b);
            if !memory.contains(&c) {
                return Some(Witness::new(WitnessKind::SetIdentity).elements([a, b]).sides([c], memory.to_vec()));
            }
        }
    }
    let produced = composed_memory(rack, memory, memory);
    memory
        .iter()
        .find(|m| !produced.contains(m))
        .map(|&m| Witness::new(WitnessKind::SetIdentity).elements([m]).sides(produced.clone(), memory.to_vec()))
}

pub fn set_identity_check(claim: &str, rack: &FiniteRack, memory: &[usize]) -> Verdict {
    Verdict::from_witness(claim, format!("M={memory:?}"), set_identity_witness(rack, memory)).with_facet("memory-identity")
}

#[derive(Debug, Clone)]
pub struct ShelfClaims {
    /// `sigma ▶ (tau ▶ psi)` vs `(sigma ▶ tau) ▶ (sigma ▶ psi)`.
    pub main: Verdict,
    /// `M >^-1 M = M` for each of the three memory sets.
    pub set_identity: Vec<Verdict>,
}

pub fn shelf_claims_check(
    space: &ConfigSpace,
    sigma: &CellularAutomaton,
    tau: &CellularAutomaton,
    psi: &CellularAutomaton,
) -> Result<ShelfClaims> {
    check_pair(sigma, tau)?;
    check_pair(sigma, psi)?;
    let (s, t, p) = (sigma.global_map(space)?, tau.global_map(space)?, psi.global_map(space)?);
    let (lhs, rhs) = shelf_sides(&s, &t, &p);
    let instance = format!("sigma: {} | tau: {} | psi: {}", sigma.label(), tau.label(), psi.label());
    let main = Verdict::from_witness("P5.3", instance, first_pointwise_difference(space, &lhs, &rhs));
    let set_identity = [sigma, tau, psi].iter().map(|ca| set_identity_check("P5.3", space.rack(), ca.memory())).collect();
    Ok(ShelfClaims { main, set_identity })
}

/// The two sides of the shelf comparison as maps.
pub fn shelf_sides(s: &GlobalMap, t: &GlobalMap, p: &GlobalMap) -> (GlobalMap, GlobalMap) {
    (s.after(&t.after(p)), s.after(t).after(&s.after(p)))
}

#[derive(Debug, Clone)]
pub struct Idempotence {
    /// `tau ▶ tau` vs `tau`; SKIPPED off quandles.
    pub main: Verdict,
    pub set_identity: Verdict,
}

pub fn idempotence_check(space: &ConfigSpace, tau: &CellularAutomaton) -> Result<Idempotence> {
    let instance = tau.label();
    let set_identity = set_identity_check("P5.4", space.rack(), tau.memory());
    if !space.rack().is_quandle() {
        let reason = "universe is not a quandle";
        return Ok(Idempotence {
            main: Verdict::skipped("P5.4", instance.clone(), reason),
            set_identity: Verdict::skipped("P5.4", instance, reason).with_facet("memory-identity"),
        });
    }
    let t = tau.global_map(space)?;
    let main = Verdict::from_witness("P5.4", instance, first_pointwise_difference(space, &t.after(&t), &t));
    Ok(Idempotence { main, set_identity })
}

pub fn is_bijective(space: &ConfigSpace, tau: &CellularAutomaton) -> Result<bool> {
    Ok(tau.global_map(space)?.is_bijective())
}

#[derive(Debug, Clone)]
pub struct Inversion {
    pub bijective: bool,
    pub inverse: Option<GlobalMap>,
    /// The inverse as a CA on its first minimal memory set.
    pub inverse_ca: Option<CellularAutomaton>,
    /// SKIPPED when not bijective; FAILS when the inverse is not a CA.
    pub verdict: Verdict,
}

pub fn invert_checked(space: &ConfigSpace, tau: &CellularAutomaton) -> Result<Inversion> {
    let f = tau.global_map(space)?;
    let instance = tau.label();
    let Some(inverse) = f.inverse() else {
        return Ok(Inversion {
            bijective: false,
            inverse: None,
            inverse_ca: None,
            verdict: Verdict::skipped("T5.6", instance, "not bijective"),
        });
    };
    match minimal_memory(space, &inverse) {
        Ok(mm) => {
            let ca = mm.automaton(space)?;
            let verdict = Verdict::holds("T5.6", instance).with_note(format!("inverse memory {:?}", ca.memory()));
            Ok(Inversion { bijective: true, inverse: Some(inverse), inverse_ca: Some(ca), verdict })
        }
        Err(Error::NotACellularAutomaton { witness }) => Ok(Inversion {
            bijective: true,
            inverse: Some(inverse),
            inverse_ca: None,
            verdict: Verdict::fails("T5.6", instance, *witness).with_note("inverse admits no memory set"),
        }),
        Err(e) => Err(e),
    }
}
