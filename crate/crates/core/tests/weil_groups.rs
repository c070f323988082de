use hyperclass::ext::Cocycle2;
use hyperclass::intlin::BigInt;
use hyperclass::weil::{build_weil_group, synthetic_formation, FormationSpec, WeilGroupData};

/// Builtins small enough to build repeatedly.
fn small() -> Vec<WeilGroupData> {
    ["finite_field(2)", "finite_field(3)", "finite_field(5)", "relation_module(C3)", "relation_module(V4)", "relation_module(S3)", "padded_two_term(C2)"]
        .iter()
        .map(|s| {
            let spec: FormationSpec = s.parse().unwrap();
            build_weil_group(&synthetic_formation(&spec).unwrap()).unwrap()
        })
        .collect()
}

#[test]
fn weil_groups_of_small_formations() {
    for wd in small() {
        let name = &wd.formation.name;
        for c in wd.local_checks() {
            assert!(c.ok, "{name}: {} at {} ({})", c.check, c.subgroup, c.detail);
        }
        assert_eq!(wd.local.len(), wd.formation.group.subgroups().unwrap().len());

        // the fundamental class generates a cyclic group of order |G|
        let order = wd.beta.group.canonical().elem_order(&wd.beta.coords());
        assert_eq!(order, Some(BigInt::from(wd.formation.group.order())), "{name}");

        let w = &wd.weil;
        for s in w.group().elements() {
            assert_eq!(w.project(&w.section(s)), s);
        }
        let r = w.module().rank();
        let a: Vec<BigInt> = (0..r).map(|i| BigInt::from(i as i64 + 1)).collect();
        assert_eq!(w.project(&w.iota(&a)), w.group().identity());

        let back = Cocycle2::from_json(wd.alpha_a.module(), &wd.alpha_a.to_json()).unwrap();
        assert_eq!(back.class().coords(), wd.alpha_a.class().coords(), "{name}");
    }
}
