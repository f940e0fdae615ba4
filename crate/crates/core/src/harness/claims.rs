use std::sync::Arc;

use super::{CaGenerator, InstanceSpec, UNIVERSAL_EQ_LIMIT};
use crate::ca::{enumerate_cas, CellularAutomaton, GlobalMap};
use crate::compose::{compose_checked, idempotence_check, invert_checked, set_identity_check, shelf_claims_check};
use crate::config::{Budget, ConfigSpace};
use crate::equivariance::{
    curtis_hedlund_check, eq_set, local_characterization_check, locality_check, prop35_check, stab_eq_members,
    stab_eq_with,
};
use crate::error::{Error, Result};
use crate::memory::{minimal_memory, MemoryFamily};
use crate::random::{random_ca_from, random_global_map_from, Stream};
use crate::rack::FiniteRack;
use crate::verdict::{Mode, Verdict, Witness, WitnessKind};

/// Largest rule table enumerated by the exhaustive generator.
const RULE_BUDGET: usize = 1 << 16;

struct Prepared {
    ca: CellularAutomaton,
    map: GlobalMap,
    eq: Vec<usize>,
}

struct Ctx<'a> {
    spec: &'a InstanceSpec,
    space: ConfigSpace,
    anchors: Vec<usize>,
}

impl Ctx<'_> {
    fn rack(&self) -> &Arc<FiniteRack> {
        self.space.rack()
    }

    fn automata(&self) -> Result<Vec<CellularAutomaton>> {
        let rack = self.rack();
        match self.spec.generator {
            CaGenerator::Exhaustive { max_memory } => enumerate_cas(rack, self.spec.q, max_memory, RULE_BUDGET),
            CaGenerator::Random { count, max_memory } => {
                let mut stream = Stream::new(self.spec.seed);
                (0..count).map(|_| random_ca_from(&mut stream, rack, self.spec.q, max_memory.min(rack.order()))).collect()
            }
        }
    }

    fn prepared(&self) -> Result<Vec<Prepared>> {
        self.automata()?.into_iter().map(|ca| self.prepare(ca)).collect()
    }

    fn pool(&self, max_memory: usize) -> Result<Vec<Prepared>> {
        Ok(self.prepared()?.into_iter().filter(|p| p.ca.memory().len() <= max_memory).collect())
    }

    fn prepare(&self, ca: CellularAutomaton) -> Result<Prepared> {
        let map = ca.global_map(&self.space)?;
        let eq = eq_set(&self.space, &map)?.members;
        Ok(Prepared { ca, map, eq })
    }

    /// Distinct non-empty subracks `Stab(x) ∩ within` over the anchors that contain `required`.
    fn subracks(&self, within: &[usize], required: &[&[usize]]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for &x in &self.anchors {
            let s = stab_eq_members(&self.space, within, x);
            let ok = !s.is_empty()
                && self.rack().is_subrack(&s)
                && required.iter().all(|m| m.iter().all(|e| s.contains(e)));
            if ok && !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

fn restricted(v: Verdict, s: &[usize]) -> Verdict {
    let mut v = v.with_mode(Mode::Restricted);
    v.instance = format!("S={s:?} | {}", v.instance);
    v
}

const NO_SUBRACK: &str = "no anchor yields a non-empty subrack S containing the memory sets";

fn no_subrack(instance: String) -> Verdict {
    skipped_restricted(instance, NO_SUBRACK)
}

fn subspace(ca: &CellularAutomaton, budget: Budget) -> Result<ConfigSpace> {
    ConfigSpace::new(ca.rack().clone(), ca.q(), budget)
}

/// `∩ Eq(tau)` over every automaton on the universe, when enumerable.
pub fn universal_eq(space: &ConfigSpace) -> Result<Option<Vec<usize>>> {
    let n = space.n();
    let rules = match Budget::new(UNIVERSAL_EQ_LIMIT).power(space.q(), space.size(), "universal rule count") {
        Ok(count) => count,
        Err(Error::SizeLimitExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let all: Vec<usize> = (0..n).collect();
    let mut common: Vec<usize> = all.clone();
    for code in 0..rules {
        if common.is_empty() {
            break;
        }
        let rule: Vec<usize> = (0..space.size()).map(|p| code / space.q().pow(p as u32) % space.q()).collect();
        let ca = CellularAutomaton::new(space.rack().clone(), space.q(), all.clone(), rule)?;
        let eq = eq_set(space, &ca.global_map(space)?)?.members;
        common.retain(|r| eq.contains(r));
    }
    Ok(Some(common))
}

pub(super) fn check(claim: &str, spec: &InstanceSpec) -> Result<Vec<Verdict>> {
    let space = ConfigSpace::new(spec.rack.clone(), spec.q, spec.budget)?;
    let anchors = match spec.anchor {
        Some(x) if x >= space.size() => {
            return Err(Error::IndexOutOfRange { index: x as u128, bound: space.size() as u128 })
        }
        Some(x) => vec![x],
        None => (0..space.size()).collect(),
    };
    let ctx = Ctx { spec, space, anchors };
    match claim {
        "R2-inner-conj" => Ok(vec![ctx.rack().inner_conjugation_check()]),
        "Rem2.8" => rem28(&ctx),
        "L2.14" => Ok((0..ctx.space.size()).map(|x| ctx.space.config_stabilizer(x).closure).collect()),
        "P2.15" => Ok(vec![ctx.space.shift_action_check()]),
        "P2.19" => Ok((0..ctx.space.size()).map(|x| ctx.space.config_stabilizer(x).agreement).collect()),
        "P3.5" => per_ca(&ctx, |p| prop35_check(&ctx.space, &p.map).map(|v| vec![v])),
        "P3.7" => per_ca(&ctx, |p| Ok(vec![eq_set(&ctx.space, &p.map)?.closure.with_note(p.ca.label())])),
        "L3.10" => l310(&ctx),
        "P3.11" => p311(&ctx),
        "P3.12" => p312(&ctx),
        "L3.15" => l315(&ctx),
        "P3.16" => p316(&ctx),
        "Rem3.17" => per_ca(&ctx, |p| rem317(&ctx.space, p).map(|v| vec![v])),
        "P4.1" => Ok(vec![ctx.space.shift_continuity_check()]),
        "P4.2" => per_ca(&ctx, |p| locality_check(&ctx.space, &p.ca).map(|v| vec![v])),
        "T4.3" => t43(&ctx),
        "P5.1" => p51(&ctx),
        "P5.3" => p53(&ctx),
        "P5.4" => p54(&ctx),
        "T5.6" => t56(&ctx),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

fn per_ca(ctx: &Ctx, mut f: impl FnMut(&Prepared) -> Result<Vec<Verdict>>) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for p in ctx.prepared()? {
        out.extend(f(&p)?.into_iter().map(|mut v| {
            if !v.instance.contains(&p.ca.label()) {
                v.instance = format!("{} | {}", p.ca.label(), v.instance);
            }
            v
        }));
    }
    Ok(out)
}

fn rem28(ctx: &Ctx) -> Result<Vec<Verdict>> {
    match ctx.rack().closed_implies_subrack_check() {
        Ok(v) => Ok(vec![v]),
        Err(Error::SizeLimitExceeded { .. }) => Ok(vec![Verdict::skipped("", "closed subsets", "too many subsets to scan")]),
        Err(e) => Err(e),
    }
}

fn l310(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let n = ctx.space.n();
    per_ca(ctx, |p| {
        let instance = p.ca.label();
        if !ctx.rack().is_trivial() {
            return Ok(vec![Verdict::skipped("", instance, "universe is not a trivial rack")]);
        }
        let all: Vec<usize> = (0..n).collect();
        let missing = all.iter().copied().find(|r| !p.eq.contains(r));
        let witness = missing.map(|r| {
            let w = crate::equivariance::equivariance_witness_at(&ctx.space, &p.map, r);
            w.unwrap_or_else(|| Witness::new(WitnessKind::Equivariance).elements([r]))
        });
        Ok(vec![Verdict::from_witness("", instance, witness)])
    })
}

fn p311(ctx: &Ctx) -> Result<Vec<Verdict>> {
    per_ca(ctx, |p| {
        let mut out = Vec::new();
        for &x in &ctx.anchors {
            let st = stab_eq_with(&ctx.space, &p.map, &p.eq, x);
            out.push(st.closure);
            out.push(st.inclusion);
        }
        Ok(out)
    })
}

fn p312(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let all: Vec<usize> = (0..ctx.space.n()).collect();
    per_ca(ctx, |p| {
        let (m, rule) = (p.ca.memory(), p.ca.rule());
        let mut out = vec![local_characterization_check(&ctx.space, &p.map, &all, m, rule, 0)?];
        let subsets = ctx.subracks(&p.eq, &[m]);
        if subsets.is_empty() {
            out.push(no_subrack(String::new()));
        }
        for s in subsets {
            out.push(restricted(local_characterization_check(&ctx.space, &p.map, &s, m, rule, 0)?, &s));
        }
        Ok(out)
    })
}

fn family_verdicts(space: &ConfigSpace, f: &GlobalMap, instance: &str) -> Result<Vec<Verdict>> {
    let family = MemoryFamily::scan(space, f)?;
    let note = "witness configs are subset bitmasks";
    Ok(vec![
        Verdict::from_witness("", instance, family.intersection_witness()).with_facet("intersection").with_note(note),
        Verdict::from_witness("", instance, family.monotonicity_witness()).with_facet("monotonicity").with_note(note),
    ])
}

/// `facets` name the verdicts `f` emits, so skipped instances land in the same records.
fn for_restrictions(
    ctx: &Ctx,
    p: &Prepared,
    facets: &[&str],
    mut f: impl FnMut(&ConfigSpace, &CellularAutomaton) -> Result<Vec<Verdict>>,
) -> Result<Vec<Verdict>> {
    let subsets = ctx.subracks(&p.eq, &[p.ca.memory()]);
    if subsets.is_empty() {
        return Ok(facets.iter().map(|f| no_subrack(String::new()).with_facet(*f)).collect());
    }
    let mut out = Vec::new();
    for s in subsets {
        let (local, _) = p.ca.restrict(&s)?;
        let sub = subspace(&local, ctx.spec.budget)?;
        out.extend(f(&sub, &local)?.into_iter().map(|v| restricted(v, &s)));
    }
    Ok(out)
}

fn l315(ctx: &Ctx) -> Result<Vec<Verdict>> {
    per_ca(ctx, |p| {
        let mut out = family_verdicts(&ctx.space, &p.map, "")?;
        out.extend(for_restrictions(ctx, p, &["intersection", "monotonicity"], |sub, local| family_verdicts(sub, &local.global_map(sub)?, ""))?);
        Ok(out)
    })
}

fn p316(ctx: &Ctx) -> Result<Vec<Verdict>> {
    per_ca(ctx, |p| {
        let mut out = vec![minimal_memory(&ctx.space, &p.map)?.verdict];
        out.extend(for_restrictions(ctx, p, &["main"], |sub, local| Ok(vec![minimal_memory(sub, &local.global_map(sub)?)?.verdict]))?);
        Ok(out)
    })
}

fn rem317(space: &ConfigSpace, p: &Prepared) -> Result<Verdict> {
    let empty = minimal_memory(space, &p.map)?.memory().is_empty();
    let constant = p.map.is_constant();
    let witness = (empty != constant)
        .then(|| Witness::new(WitnessKind::Comparison).sides([empty as usize], [constant as usize]));
    Ok(Verdict::from_witness("", "", witness).with_note("lhs: minimal memory is empty; rhs: map is constant"))
}

fn t43(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let all: Vec<usize> = (0..ctx.space.n()).collect();
    let mut out = per_ca(ctx, |p| {
        let mut out = vec![curtis_hedlund_check(&ctx.space, &p.map, &all, 0)?.verdict];
        let subsets = ctx.subracks(&p.eq, &[p.ca.memory()]);
        if subsets.is_empty() {
            out.push(no_subrack(String::new()));
        }
        for s in subsets {
            out.push(restricted(curtis_hedlund_check(&ctx.space, &p.map, &s, 0)?.verdict, &s));
        }
        Ok(out)
    })?;
    let mut stream = Stream::new(ctx.spec.seed);
    for i in 0..ctx.spec.random_maps {
        let f = random_global_map_from(&mut stream, &ctx.space);
        let label = format!("random map #{i} seed={}", ctx.spec.seed);
        let mut v = curtis_hedlund_check(&ctx.space, &f, &all, 0)?.verdict;
        v.instance = format!("{label} | {}", v.instance);
        out.push(v);
        let eq = eq_set(&ctx.space, &f)?.members;
        let subsets = ctx.subracks(&eq, &[]);
        if subsets.is_empty() {
            out.push(no_subrack(label.clone()));
        }
        for s in subsets {
            let mut v = restricted(curtis_hedlund_check(&ctx.space, &f, &s, 0)?.verdict, &s);
            v.instance = format!("{label} | {}", v.instance);
            out.push(v);
        }
    }
    Ok(out)
}

fn p51(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let pool = ctx.pool(ctx.spec.pair_max_memory)?;
    let mut out = Vec::new();
    for a in &pool {
        for b in &pool {
            out.push(compose_checked(&ctx.space, &a.ca, &b.ca)?.verdict);
            let common: Vec<usize> = a.eq.iter().copied().filter(|r| b.eq.contains(r)).collect();
            let subsets = ctx.subracks(&common, &[a.ca.memory(), b.ca.memory()]);
            let label = format!("sigma: {} | tau: {}", a.ca.label(), b.ca.label());
            if subsets.is_empty() {
                out.push(no_subrack(label));
            }
            for s in subsets {
                let (sa, _) = a.ca.restrict(&s)?;
                let (sb, _) = b.ca.restrict(&s)?;
                let sub = subspace(&sa, ctx.spec.budget)?;
                out.push(restricted(compose_checked(&sub, &sa, &sb)?.verdict, &s));
            }
        }
    }
    Ok(out)
}

/// Restricted subracks `Stab(x) ∩ E`, or the SKIPPED reason.
fn universal_subracks(ctx: &Ctx, required: &[&[usize]], e: &Option<Vec<usize>>) -> std::result::Result<Vec<Vec<usize>>, &'static str> {
    let Some(e) = e else {
        return Err("E is not enumerable within the rule budget");
    };
    let subsets = ctx.subracks(e, required);
    if subsets.is_empty() {
        return Err("no anchor yields a non-empty subrack Stab(x) ∩ E containing the memory sets");
    }
    Ok(subsets)
}

fn skipped_restricted(instance: String, reason: &str) -> Verdict {
    Verdict::skipped("", instance, reason).with_mode(Mode::Restricted)
}

fn p53(ctx: &Ctx) -> Result<Vec<Verdict>> {
    let pool = ctx.pool(ctx.spec.triple_max_memory)?;
    let e = universal_eq(&ctx.space)?;
    let mut out: Vec<Verdict> =
        pool.iter().map(|p| set_identity_check("", ctx.rack(), p.ca.memory()).with_note(p.ca.label())).collect();
    for a in &pool {
        for b in &pool {
            for c in &pool {
                out.push(shelf_claims_check(&ctx.space, &a.ca, &b.ca, &c.ca)?.main);
                let label = format!("sigma: {} | tau: {} | psi: {}", a.ca.label(), b.ca.label(), c.ca.label());
                match universal_subracks(ctx, &[a.ca.memory(), b.ca.memory(), c.ca.memory()], &e) {
                    Err(reason) => out.push(skipped_restricted(label, reason)),
                    Ok(subsets) => {
                        for s in subsets {
                            let (sa, _) = a.ca.restrict(&s)?;
                            let (sb, _) = b.ca.restrict(&s)?;
                            let (sc, _) = c.ca.restrict(&s)?;
                            let sub = subspace(&sa, ctx.spec.budget)?;
                            out.push(restricted(shelf_claims_check(&sub, &sa, &sb, &sc)?.main, &s));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn per_ca_universal(
    ctx: &Ctx,
    facets: &[&str],
    ambient: impl Fn(&ConfigSpace, &CellularAutomaton) -> Result<Vec<Verdict>>,
) -> Result<Vec<Verdict>> {
    let e = universal_eq(&ctx.space)?;
    per_ca(ctx, |p| {
        let mut out = ambient(&ctx.space, &p.ca)?;
        match universal_subracks(ctx, &[p.ca.memory()], &e) {
            Err(reason) => out.extend(facets.iter().map(|f| skipped_restricted(String::new(), reason).with_facet(*f))),
            Ok(subsets) => {
                for s in subsets {
                    let (local, _) = p.ca.restrict(&s)?;
                    let sub = subspace(&local, ctx.spec.budget)?;
                    out.extend(ambient(&sub, &local)?.into_iter().map(|v| restricted(v, &s)));
                }
            }
        }
        Ok(out)
    })
}

fn p54(ctx: &Ctx) -> Result<Vec<Verdict>> {
    per_ca_universal(ctx, &["main", "memory-identity"], |space, ca| {
        let idem = idempotence_check(space, ca)?;
        Ok(vec![idem.main, idem.set_identity])
    })
}

fn t56(ctx: &Ctx) -> Result<Vec<Verdict>> {
    per_ca_universal(ctx, &["main"], |space, ca| Ok(vec![invert_checked(space, ca)?.verdict]))
}
