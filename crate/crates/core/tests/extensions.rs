use hyperclass::ext::{module_h2, normalized, Cocycle2, ExtensionGroup};
use hyperclass::groupmod::{FiniteGroup, GModule};
use hyperclass::intlin::BigInt;
use hyperclass::reciprocity::{bar_cup_map, nakayama_map, ModulePairing, ShiftRoute};
use hyperclass::sample::{random_module, rng};
use hyperclass::tate::{class_to_bar, BarCochain};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const GROUPS: [&str; 5] = ["C2", "C3", "C4", "V4", "S3"];

/// A random module with a cocycle in a chosen class of its `H^2`.
fn cocycle(seed: u64, gi: usize, coords: &[i64]) -> (GModule, Cocycle2, Vec<BigInt>) {
    let g = FiniteGroup::named(GROUPS[gi % GROUPS.len()]).unwrap();
    let m = random_module(&mut rng(seed), &g, 2);
    let h2 = module_h2(&m);
    let c: Vec<BigInt> = (0..h2.moduli().len()).map(|i| BigInt::from(coords[i % coords.len()])).collect();
    let class = h2.class_of(&c);
    let bar = normalized(&m, class_to_bar(&class).unwrap());
    let f = Cocycle2::new(&m, bar).unwrap();
    (m, f, class.coords())
}

/// Normalized 1-cochain from a flat list of small integers.
fn cochain(m: &GModule, raw: &[i64]) -> BarCochain {
    let g = m.group();
    let e = g.identity();
    BarCochain::from_fn(g, 1, |t| {
        (0..m.rank())
            .map(|k| if t[0] == e { BigInt::from(0) } else { BigInt::from(raw[(t[0] * m.rank() + k) % raw.len()]) })
            .collect()
    })
}

fn small_ints() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, rng_seed: RngSeed::Fixed(0xe7), ..ProptestConfig::default() })]

    #[test]
    fn class_survives_the_round_trip(seed in any::<u64>(), gi in 0usize..5, k in small_ints()) {
        let (_, f, coords) = cocycle(seed, gi, &k);
        prop_assert_eq!(f.class().coords(), coords.clone());
        prop_assert_eq!(ExtensionGroup::new(f).cocycle_class().coords(), coords);
    }

    #[test]
    fn extension_group_laws(seed in any::<u64>(), gi in 0usize..5, k in small_ints()) {
        let (_, f, _) = cocycle(seed, gi, &k);
        let e = ExtensionGroup::new(f);
        let all = e.samples(1);
        let step = (all.len() / 16).max(1);
        let some: Vec<_> = all.into_iter().step_by(step).collect();
        prop_assert!(e.check_associative(&some));
        for x in &some {
            prop_assert!(e.eq_elem(&e.mul(x, &e.inv(x)), &e.identity()));
            prop_assert_eq!(e.project(&e.mul(x, &e.section(0))), e.group().mul(x.sigma, 0));
        }
    }

    #[test]
    fn cohomologous_cocycles(seed in any::<u64>(), gi in 0usize..5, k in small_ints(), c in small_ints()) {
        let (m, f, coords) = cocycle(seed, gi, &k);
        let moved = f.perturb(&cochain(&m, &c)).unwrap();
        prop_assert_eq!(moved.class().coords(), coords);
        let (a, b) = (ExtensionGroup::new(f.clone()), ExtensionGroup::new(moved.clone()));
        let eq = a.equivalence(&b);
        prop_assert!(eq.is_some());
        prop_assert!(a.check_equivalence(&b, &eq.unwrap()));
        prop_assert!(nakayama_map(&f).unwrap().same_map(&nakayama_map(&moved).unwrap()));
    }

    #[test]
    fn factor_extension_ignores_the_section(seed in any::<u64>(), gi in 0usize..5, k in small_ints()) {
        let (_, f, _) = cocycle(seed, gi, &k);
        let e = ExtensionGroup::new(f);
        for n in e.group().subgroups().unwrap().into_iter().filter(|n| n.is_normal()) {
            let a = e.factor_extension_with(&n, false).unwrap();
            let b = e.factor_extension_with(&n, true).unwrap();
            prop_assert_eq!(a.class.coords(), b.class.coords(), "{}", n.label());
        }
    }
}

proptest! {
    // the connecting-map route builds modules of rank |G|^2 · rank
    #![proptest_config(ProptestConfig { cases: 10, rng_seed: RngSeed::Fixed(0xc2), ..ProptestConfig::default() })]

    #[test]
    fn both_cup_routes_agree(seed in any::<u64>(), gi in 0usize..4, k in small_ints()) {
        let (m, f, _) = cocycle(seed, gi, &k);
        let p = ModulePairing::scalar(&m);
        let route = ShiftRoute::new(&p, &f).unwrap();
        for h in m.group().subgroups().unwrap() {
            for q in 0..=1 {
                let bar = bar_cup_map(&p, &f, q, &h, 4).unwrap();
                let shifted = route.cup(&h, q, 4).unwrap();
                prop_assert!(bar.same_map(&shifted), "{} q={}", h.label(), q);
            }
        }
    }
}
