use hyperclass::groupmod::{FiniteGroup, GComplex, GModule};
use hyperclass::intlin::FgAbGroup;
use hyperclass::sample::{random_complex, random_module, rng};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const GROUPS: [&str; 6] = ["C2", "C3", "C4", "V4", "S3", "C6"];

fn complex(seed: u64, gi: usize) -> GComplex {
    let g = FiniteGroup::named(GROUPS[gi % GROUPS.len()]).unwrap();
    random_complex(&mut rng(seed), &g, 3, 3)
}

fn same_homology(a: &GComplex, qa: i32, b: &GComplex, qb: i32) -> bool {
    a.homology(qa).module.underlying().moduli() == b.homology(qb).module.underlying().moduli()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(0xc0c0), ..ProptestConfig::default() })]

    #[test]
    fn shifted_homology(seed in any::<u64>(), gi in 0usize..6, k in -2i32..=2) {
        let c = complex(seed, gi);
        let s = c.shift(k);
        for q in -4..=3 {
            prop_assert!(same_homology(&s, q, &c, q + k), "q={}, k={}", q, k);
        }
    }

    #[test]
    fn truncation_then_homology(seed in any::<u64>(), gi in 0usize..6, n in -3i32..=2) {
        let c = complex(seed, gi);
        let t = c.truncate(n);
        for q in -4..=3 {
            if q <= n {
                prop_assert!(same_homology(&t, q, &c, q), "q={}, n={}", q, n);
            } else {
                prop_assert!(t.homology(q).module.underlying().is_trivial());
            }
        }
    }

    #[test]
    fn restriction_is_a_module(seed in any::<u64>(), gi in 0usize..6) {
        let g = FiniteGroup::named(GROUPS[gi % GROUPS.len()]).unwrap();
        let m = random_module(&mut rng(seed), &g, 4);
        for h in g.subgroups().unwrap() {
            let r = m.restrict(&h);
            let (hg, _) = h.as_group();
            prop_assert!(GModule::new(&hg, r.underlying().clone(), r.actions().to_vec()).is_ok());
        }
    }
}

#[test]
fn restricted_induced_module_is_free() {
    for name in ["C4", "V4", "S3", "D4"] {
        let g = FiniteGroup::named(name).unwrap();
        for rank in 1..=2 {
            let ind = GModule::induced(&g, &FgAbGroup::free(rank));
            for h in g.subgroups().unwrap() {
                let r = ind.restrict(&h);
                let (hg, _) = h.as_group();
                let (inv, _) = r.invariants(&hg.whole());
                // Z[H]^k has invariants Z^k, k = [G:H]·rank
                assert_eq!(inv.to_string(), format!("Z^{}", g.order() / h.order() * rank), "{name} {}", h.label());
                let again = GModule::induced(&hg, &FgAbGroup::free(rank * g.order() / h.order()));
                assert_eq!(again.rank(), r.rank());
            }
        }
    }
}
