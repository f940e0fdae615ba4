use std::sync::Arc;

use proptest::prelude::*;

use rackca::action::RackAction;
use rackca::ca::subsets_up_to;
use rackca::config::shift;
use rackca::equivariance::{eq_set, stab_eq};
use rackca::harness::{replay, run_suite, verify_claim, CaGenerator, InstanceSpec, SuiteConfig, CLAIM_IDS};
use rackca::io::{resolve_rack, Document};
use rackca::memory::{memory_oracle, OracleOutcome};
use rackca::random::{random_ca, random_global_map};
use rackca::verdict::{Mode, Status};
use rackca::{Budget, ConfigSpace, Configuration, FiniteGroup, FiniteRack, GroupKind, Permutation};

const SMALL_RACKS: [&str; 10] = [
    "builtin:trivial:3",
    "builtin:trivial:4",
    "builtin:cyclic:3",
    "builtin:cyclic:4",
    "builtin:dihedral:3",
    "builtin:dihedral:4",
    "builtin:dihedral:5",
    "builtin:affine:5:2",
    "builtin:transpositions:3",
    "builtin:core:cyclic:4",
];

fn small_rack() -> impl Strategy<Value = Arc<FiniteRack>> {
    proptest::sample::select(&SMALL_RACKS[..]).prop_map(|s| Arc::new(resolve_rack(s).unwrap()))
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn decode(x: usize, n: usize, q: usize) -> Vec<usize> {
    (0..n).map(|i| x / q.pow(i as u32) % q).collect()
}

#[test]
fn builtin_groups_round_trip_up_to_order_120() {
    let mut groups = Vec::new();
    groups.extend((1..=120).map(|n| FiniteGroup::builtin(GroupKind::Cyclic, n).unwrap()));
    groups.extend((1..=60).map(|n| FiniteGroup::builtin(GroupKind::Dihedral, n).unwrap()));
    groups.extend((1..=5).map(|n| FiniteGroup::builtin(GroupKind::Symmetric, n).unwrap()));
    for g in groups {
        let reloaded = FiniteGroup::from_table(&g.table()).unwrap();
        assert_eq!(reloaded.table(), g.table());
    }
}

#[test]
fn builtin_racks_round_trip_up_to_order_12() {
    let mut specs: Vec<String> = Vec::new();
    for n in 1..=12 {
        specs.push(format!("trivial:{n}"));
        specs.push(format!("cyclic:{n}"));
        specs.push(format!("dihedral:{n}"));
        specs.push(format!("core:cyclic:{n}"));
        for a in 1..n {
            if (1..=n).all(|d| !(a % d == 0 && n % d == 0) || d == 1) {
                specs.push(format!("affine:{n}:{a}"));
            }
        }
    }
    specs.extend(["conj:symmetric:3", "conj:dihedral:4", "core:symmetric:3", "transpositions:4"].map(String::from));
    for spec in specs {
        let rack = resolve_rack(&format!("builtin:{spec}")).unwrap();
        let reloaded = FiniteRack::from_table(&rack.table()).unwrap();
        assert_eq!(reloaded.is_quandle(), rack.is_quandle(), "{spec}");
        let cyclic = spec.starts_with("cyclic:") && spec != "cyclic:1";
        assert_eq!(rack.is_quandle(), !cyclic, "{spec}");
        assert!(rack.inner_conjugation_check().is_holds(), "{spec}");
    }
}

#[test]
fn constant_actions_are_valid_rack_actions() {
    for spec in ["builtin:trivial:4", "builtin:cyclic:4", "builtin:dihedral:4", "builtin:dihedral:3", "builtin:core:cyclic:4"] {
        let rack = Arc::new(resolve_rack(spec).unwrap());
        for m in 1..=4 {
            for sigma in all_permutations(m) {
                let action = RackAction::from_permutation(rack.clone(), &Permutation::new(sigma).unwrap()).unwrap();
                for x in 0..m {
                    assert!(action.stabilizer(x).unwrap().closure.is_holds());
                }
            }
        }
    }
}

#[test]
fn trivial_slice_has_no_failures_outside_the_shelf_claims() {
    for n in 1..=4 {
        let spec = InstanceSpec::from_spec(&format!("builtin:trivial:{n}"), 2).unwrap();
        for id in CLAIM_IDS {
            for v in verify_claim(id, &spec).unwrap() {
                if matches!(id, "P5.3" | "P5.4") && v.facet == "main" {
                    continue;
                }
                assert_ne!(v.status, Status::Fails, "{id} {}: {:?}", v.instance, v.witness);
            }
        }
    }
}

#[test]
fn shelf_claims_fail_on_trivial_racks() {
    // negation composed with an identity-rule automaton separates both sides,
    // so the shelf identity does not hold even on the trivial rack
    let spec = InstanceSpec::from_spec("builtin:trivial:2", 2).unwrap();
    let vs = verify_claim("P5.3", &spec).unwrap();
    let fail = vs.iter().find(|v| v.mode == Mode::Ambient && v.facet == "main" && v.is_fails()).unwrap();
    assert!(replay(&spec, fail).unwrap());
}

#[test]
fn dihedral_slice_has_composition_findings() {
    let spec = InstanceSpec::from_spec("builtin:dihedral:3", 2).unwrap();
    for id in ["P5.1", "P5.3", "P5.4"] {
        assert!(verify_claim(id, &spec).unwrap().iter().any(|v| v.is_fails()), "{id}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_multiplication_is_associative(
        kind in proptest::sample::select(vec![GroupKind::Cyclic, GroupKind::Dihedral, GroupKind::Symmetric]),
        n in 1usize..5,
        abc in (0usize..1000, 0usize..1000, 0usize..1000),
    ) {
        let g = FiniteGroup::builtin(kind, n).unwrap();
        let k = g.order();
        let (a, b, c) = (abc.0 % k, abc.1 % k, abc.2 % k);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
    }

    #[test]
    fn inner_automorphism_inverts_inverse_row(rack in small_rack(), r in 0usize..16) {
        let r = r % rack.order();
        let phi = rack.inner_automorphism(r).unwrap();
        for s in 0..rack.order() {
            prop_assert_eq!(phi.apply(rack.inv_op(r, s)), s);
        }
    }

    #[test]
    fn closed_subsets_are_subracks(rack in small_rack(), mask in 0u32..32) {
        let subset: Vec<usize> = (0..rack.order()).filter(|&i| mask >> i & 1 == 1).collect();
        if rack.is_closed_subset(&subset) {
            prop_assert!(rack.is_subrack(&subset));
        }
    }

    #[test]
    fn shift_permutes_configurations(rack in small_rack(), q in 2usize..4, r in 0usize..16) {
        let r = r % rack.order();
        let space = ConfigSpace::new(rack.clone(), q, Budget::default()).unwrap();
        let mut seen = vec![false; space.size()];
        for x in 0..space.size() {
            let y = space.shift(r, x);
            prop_assert!(!seen[y]);
            seen[y] = true;
            let cells = Configuration::new(q, decode(x, rack.order(), q)).unwrap();
            prop_assert_eq!(shift(&rack, r, &cells).unwrap().encode().unwrap(), y);
        }
    }

    #[test]
    fn output_depends_only_on_the_dependence_set(
        rack in small_rack(),
        seed in any::<u64>(),
        r in 0usize..16,
        x in 0usize..1024,
        noise in 0usize..1024,
    ) {
        let tau = random_ca(&rack, 2, 2, seed).unwrap();
        let n = rack.order();
        let r = r % n;
        let deps = tau.dependence_set(r).unwrap();
        let xs = decode(x % (1 << n), n, 2);
        let noise = decode(noise % (1 << n), n, 2);
        let ys: Vec<usize> = (0..n).map(|s| if deps.contains(&s) { xs[s] } else { noise[s] }).collect();
        let fx = tau.apply(&Configuration::new(2, xs).unwrap()).unwrap();
        let fy = tau.apply(&Configuration::new(2, ys).unwrap()).unwrap();
        prop_assert_eq!(fx.get(r), fy.get(r));
    }

    #[test]
    fn supersets_of_memory_sets_are_memory_sets(rack in small_rack(), seed in any::<u64>()) {
        let tau = random_ca(&rack, 2, 2, seed).unwrap();
        let space = ConfigSpace::new(rack.clone(), 2, Budget::default()).unwrap();
        let f = tau.global_map(&space).unwrap();
        for m in subsets_up_to(rack.order(), rack.order()) {
            if tau.memory().iter().all(|x| m.contains(x)) {
                let admitted = matches!(memory_oracle(&space, &f, &m).unwrap(), OracleOutcome::Rule(_));
                prop_assert!(admitted, "{:?} contains {:?}", m, tau.memory());
            }
        }
    }

    #[test]
    fn eq_set_is_closed(rack in small_rack(), seed in any::<u64>()) {
        let tau = random_ca(&rack, 2, 2, seed).unwrap();
        let space = ConfigSpace::new(rack.clone(), 2, Budget::default()).unwrap();
        let eq = eq_set(&space, &tau.global_map(&space).unwrap()).unwrap();
        prop_assert!(eq.closure.is_holds());
        prop_assert!(rack.is_closed_subset(&eq.members));
        if rack.is_trivial() {
            prop_assert_eq!(eq.members.len(), rack.order());
        }
    }

    #[test]
    fn memory_sets_intersect_on_equivariant_subracks(rack in small_rack(), seed in any::<u64>(), x in 0usize..1024) {
        let tau = random_ca(&rack, 2, 2, seed).unwrap();
        let space = ConfigSpace::new(rack.clone(), 2, Budget::default()).unwrap();
        let f = tau.global_map(&space).unwrap();
        let s = stab_eq(&space, &f, x % space.size()).unwrap().members;
        prop_assume!(!s.is_empty() && rack.is_subrack(&s) && tau.memory().iter().all(|m| s.contains(m)));
        let (local, _) = tau.restrict(&s).unwrap();
        let sub = ConfigSpace::new(local.rack().clone(), 2, Budget::default()).unwrap();
        let fs = local.global_map(&sub).unwrap();
        let admitted: Vec<Vec<usize>> = subsets_up_to(sub.n(), sub.n())
            .into_iter()
            .filter(|m| matches!(memory_oracle(&sub, &fs, m).unwrap(), OracleOutcome::Rule(_)))
            .collect();
        for a in &admitted {
            for b in &admitted {
                let both: Vec<usize> = a.iter().copied().filter(|e| b.contains(e)).collect();
                prop_assert!(admitted.contains(&both), "{:?} and {:?} but not {:?}", a, b, both);
            }
        }
    }

    #[test]
    fn bijective_maps_invert(rack in small_rack(), seed in any::<u64>()) {
        let space = ConfigSpace::new(rack.clone(), 2, Budget::default()).unwrap();
        let f = random_global_map(&space, seed);
        match f.inverse() {
            Some(g) => {
                prop_assert!(f.is_bijective());
                prop_assert!((0..space.size()).all(|x| g.apply(f.apply(x)) == x && f.apply(g.apply(x)) == x));
            }
            None => prop_assert!(!f.is_bijective()),
        }
    }

    #[test]
    fn documents_round_trip(rack in small_rack(), seed in any::<u64>()) {
        let doc = Document::rack(&rack);
        prop_assert_eq!(&Document::parse(&doc.to_json()).unwrap().into_rack().unwrap(), rack.as_ref());
        let tau = random_ca(&rack, 3, 2, seed).unwrap();
        let back = Document::parse(&Document::ca(&tau).to_json()).unwrap().into_ca(None).unwrap();
        prop_assert_eq!(back, tau);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn failure_certificates_replay(rack in proptest::sample::select(&SMALL_RACKS[..]), seed in any::<u64>()) {
        let spec = InstanceSpec::from_spec(rack, 2)
            .unwrap()
            .with_seed(seed)
            .with_generator(CaGenerator::Random { count: 6, max_memory: 2 })
            .with_random_maps(6);
        for id in ["P3.12", "T4.3", "P5.1", "P5.4", "T5.6"] {
            let verdicts = verify_claim(id, &spec).unwrap();
            for v in verdicts.iter().filter(|v| v.is_fails()) {
                let text = serde_json::to_string(v).unwrap();
                prop_assert!(replay(&spec, &serde_json::from_str(&text).unwrap()).unwrap(), "{}", text);
            }
        }
    }

    #[test]
    fn reports_are_deterministic(rack in proptest::sample::select(&SMALL_RACKS[..]), seed in any::<u64>()) {
        let spec = InstanceSpec::from_spec(rack, 2)
            .unwrap()
            .with_seed(seed)
            .with_generator(CaGenerator::Random { count: 4, max_memory: 2 })
            .with_random_maps(4);
        let config = SuiteConfig::for_specs(vec![spec], seed);
        prop_assert_eq!(run_suite(&config).to_json_without_timing(), run_suite(&config).to_json_without_timing());
    }
}
