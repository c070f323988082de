use hyperclass::groupmod::{FiniteGroup, GComplex, GHom, GModule, QuotientGroup, Subgroup};
use hyperclass::intlin::{BigInt, ColumnEchelon, FgAbGroup, IntMatrix, Lattice, Subquotient};
use hyperclass::sample::{random_complex, random_module, rng};
use hyperclass::shiftmod::{trivialize_complex, ShiftStep, DEFAULT_RANK_BUDGET};
use hyperclass::tate::{chain_map_induced, inflate_module, inflation_map, norm_quotient, restriction_map, TateComplex};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const GROUPS: [&str; 5] = ["C2", "C3", "C4", "V4", "S3"];

fn group(i: usize) -> FiniteGroup {
    FiniteGroup::named(GROUPS[i % GROUPS.len()]).unwrap()
}

/// `A^H / N_H A`, straight from the definition.
fn invariants_mod_norm(m: &GModule) -> FgAbGroup {
    let all: Vec<usize> = m.group().elements().collect();
    let mut bounds = m.norm_matrix().col_vecs();
    bounds.extend(m.underlying().relation_cols());
    Subquotient::new(m.invariant_lattice(&all), &bounds).group
}

/// `ker N_H / I_H A`.
fn norm_kernel_mod_augmentation(m: &GModule) -> FgAbGroup {
    let n = m.rank();
    let rels = m.underlying().relations().clone();
    let e = ColumnEchelon::new(&m.norm_matrix().hstack(&rels), true);
    let mut gens: Vec<Vec<BigInt>> = e.kernel_basis().into_iter().map(|mut v| { v.truncate(n); v }).collect();
    gens.extend(m.underlying().relation_cols());
    let ker = Lattice::from_generators(gens, n);
    let mut bounds = m.underlying().relation_cols();
    for s in m.group().elements() {
        bounds.extend(m.action(s).sub(&IntMatrix::identity(n)).col_vecs());
    }
    Subquotient::new(ker, &bounds).group
}

fn window_for(c: &GComplex, q_hi: i32) -> usize {
    let (lo, _) = c.range().unwrap_or((0, 0));
    ((q_hi - lo).max(2 - lo.min(0)) + 2) as usize
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 20, rng_seed: RngSeed::Fixed(0x7a7e), ..ProptestConfig::default() })]

    #[test]
    fn low_degrees_match_definitions(seed in any::<u64>(), gi in 0usize..5) {
        let g = group(gi);
        let m = random_module(&mut rng(seed), &g, 3);
        for h in g.subgroups().unwrap() {
            let mh = m.restrict(&h);
            let tc = TateComplex::tate_module(&mh, 3).unwrap();
            prop_assert_eq!(tc.cohomology(0).unwrap().to_string(), invariants_mod_norm(&mh).to_string(), "{}", h.label());
            prop_assert_eq!(tc.cohomology(-1).unwrap().to_string(), norm_kernel_mod_augmentation(&mh).to_string(), "{}", h.label());
        }
    }

    #[test]
    fn above_the_top_and_at_the_top(seed in any::<u64>(), gi in 0usize..5) {
        let c = random_complex(&mut rng(seed), &group(gi), 3, 2);
        let Some((lo, n)) = c.range() else { return Ok(()) };
        let top = n + 2;
        let ord = TateComplex::ordinary(&c, top).unwrap();
        let tate = TateComplex::tate(&c, (top - lo) as usize + 1).unwrap();
        for q in n + 1..=top {
            prop_assert_eq!(ord.cohomology(q).unwrap().to_string(), tate.cohomology(q).unwrap().to_string());
        }
        let nq = norm_quotient(&TateComplex::ordinary(&c, n).unwrap(), n).unwrap();
        prop_assert_eq!(nq.to_string(), tate.cohomology(n).unwrap().to_string());
    }

    #[test]
    fn shifting_a_complex(seed in any::<u64>(), gi in 0usize..5) {
        let g = group(gi);
        let c = random_complex(&mut rng(seed), &g, 2, 2);
        let s = c.shift(1);
        let w = window_for(&s, 3);
        for h in g.subgroups().unwrap() {
            let a = TateComplex::tate_over(&h, &s, w).unwrap();
            let b = TateComplex::tate_over(&h, &c, w).unwrap();
            for q in -2..=1 {
                prop_assert_eq!(a.cohomology(q).unwrap().to_string(), b.cohomology(q + 1).unwrap().to_string());
            }
        }
    }
}

proptest! {
    // each pushout step costs a Tate complex on both sides
    #![proptest_config(ProptestConfig { cases: 32, rng_seed: RngSeed::Fixed(0x9e1), ..ProptestConfig::default() })]

    #[test]
    fn quasi_isomorphisms_preserve_tate_groups(seed in any::<u64>(), gi in 0usize..5) {
        let c = random_complex(&mut rng(seed), &group(gi), 2, 2);
        let (_, _, cert) = trivialize_complex(&c, 3, DEFAULT_RANK_BUDGET).unwrap();
        for step in &cert.steps {
            let ShiftStep::Pushout(p) = step else { continue };
            let w = window_for(&p.before, 2).max(window_for(&p.after, 2));
            let (tb, ta) = (TateComplex::tate(&p.before, w).unwrap(), TateComplex::tate(&p.after, w).unwrap());
            for q in -2..=2 {
                let map = chain_map_induced(&tb.cohomology(q).unwrap(), &ta.cohomology(q).unwrap(), &p.maps).unwrap();
                prop_assert!(map.is_iso(), "degree {} step at {}", q, p.degree);
            }
        }
    }
}

#[test]
fn restriction_after_inflation_on_c4() {
    let g = FiniteGroup::cyclic(4);
    let z = GModule::trivial_z(&g);
    let h2 = TateComplex::tate_module(&z, 4).unwrap().cohomology(2).unwrap();
    let sub = Subgroup::generated_by(&g, &[2]);
    let q = QuotientGroup::new(&sub).unwrap();
    let zq = GModule::trivial_z(&q.group);
    let src = TateComplex::tate_module(&zq, 4).unwrap().cohomology(2).unwrap();
    let incl = GHom::new(&inflate_module(&zq, &q), &z, IntMatrix::identity(1)).unwrap();
    let inf = inflation_map(&src, &q, &incl, &h2).unwrap();
    let (_, res) = restriction_map(&h2, &sub).unwrap();
    // Z/2 → Z/4 → Z/2 is 1 ↦ 2 ↦ 0
    assert!(res.after(&inf).is_zero());
    assert_eq!(inf.apply(&[BigInt::from(1)]), vec![BigInt::from(2)]);
}
