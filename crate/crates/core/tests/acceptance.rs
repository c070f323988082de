use hyperclass::ext::module_h2;
use hyperclass::groupmod::{FiniteGroup, GComplex, GModule};
use hyperclass::intlin::{unit_vec, BigInt, FgAbGroup};
use hyperclass::reciprocity::{abelianization_of, cup_iso_table, ModulePairing};
use hyperclass::sample::{random_complex, random_module, rng};
use hyperclass::shiftmod::{lower_terms_vanish, trivialize_complex, DEFAULT_RANK_BUDGET};
use hyperclass::tate::{norm_quotient, BarCochain, TateComplex};
use hyperclass::weil::{
    build_weil_group, build_weil_group_with, compare_artin, artin_map, synthetic_formation, verify_class_complex,
    verify_weil_axioms, weil_isomorphism, ClassComplex, FormationSpec, WeilGroupData, WeilOptions,
};
use std::time::Instant;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cyclic_table() -> Check {
    let t0 = Instant::now();
    for n in [2, 3, 4, 6] {
        let g = FiniteGroup::cyclic(n);
        let t = TateComplex::tate_module(&GModule::trivial_z(&g), 5).map_err(err)?;
        for q in -4..=4 {
            let got = t.cohomology(q).map_err(err)?.to_string();
            let want = if q % 2 == 0 { format!("Z/{n}") } else { "0".into() };
            ensure(got == want, || format!("C{n}, q={q}: {got}, expected {want}"))?;
        }
    }
    ensure(t0.elapsed().as_secs_f64() < 10.0, || format!("took {:.1}s", t0.elapsed().as_secs_f64()))
}

fn induced_vanishing() -> Check {
    for name in ["C4", "V4", "S3"] {
        let g = FiniteGroup::named(name).unwrap();
        for b in [FgAbGroup::free(1), FgAbGroup::from_moduli(&[0, 2])] {
            let ind = GComplex::concentrated(&GModule::induced(&g, &b), 0);
            for h in g.subgroups().map_err(err)? {
                let t = TateComplex::tate_over(&h, &ind, 4).map_err(err)?;
                for q in -3..=3 {
                    let c = t.cohomology(q).map_err(err)?;
                    ensure(c.is_trivial(), || format!("{name}, {}, q={q}: {c}", h.label()))?;
                }
            }
        }
    }
    Ok(())
}

const SMALL_GROUPS: [&str; 5] = ["C2", "C3", "C4", "V4", "S3"];

fn shift_identity() -> Check {
    let mut r = rng(20);
    for i in 0..20 {
        let g = FiniteGroup::named(SMALL_GROUPS[i % SMALL_GROUPS.len()]).unwrap();
        let a = random_module(&mut r, &g, 3);
        let shifted = TateComplex::tate(&GComplex::concentrated(&a, -1), 5).map_err(err)?;
        let plain = TateComplex::tate_module(&a, 5).map_err(err)?;
        for q in -3..=2 {
            let (l, rr) = (shifted.cohomology(q).map_err(err)?, plain.cohomology(q + 1).map_err(err)?);
            ensure(l.moduli() == rr.moduli(), || format!("module {i} over {}: q={q}: {l} vs {rr}", g.order()))?;
        }
    }
    Ok(())
}

const COMPLEX_GROUPS: [&str; 6] = ["C2", "C3", "C4", "V4", "S3", "C6"];

fn random_complexes() -> Vec<GComplex> {
    let mut r = rng(50);
    (0..50)
        .map(|i| {
            let g = FiniteGroup::named(COMPLEX_GROUPS[i % COMPLEX_GROUPS.len()]).unwrap();
            random_complex(&mut r, &g, 3, 2)
        })
        .collect()
}

fn trivialization(complexes: &[GComplex]) -> Check {
    for (i, c) in complexes.iter().enumerate() {
        let (_, _, cert) = trivialize_complex(c, 4, DEFAULT_RANK_BUDGET).map_err(|e| format!("complex {i}: {e}"))?;
        if let Some(bad) = cert.table.failures().next() {
            return Err(format!("complex {i}: {} at q={}: {} vs {}", bad.subgroup, bad.q, bad.input, bad.output));
        }
        ensure(lower_terms_vanish(&cert).map_err(err)?, || format!("complex {i}: lower terms not acyclic"))?;
    }
    Ok(())
}

fn high_degree_identities(complexes: &[GComplex], classes: &[ClassComplex]) -> Check {
    let all = complexes.iter().chain(classes.iter().map(|c| &c.complex));
    for (i, c) in all.enumerate() {
        let Some((lo, n)) = c.range() else { continue };
        let top = 3;
        let ord = TateComplex::ordinary(c, top).map_err(err)?;
        let tate = TateComplex::tate(c, (top - lo) as usize + 1).map_err(err)?;
        for q in n + 1..=top {
            let (a, b) = (ord.cohomology(q).map_err(err)?, tate.cohomology(q).map_err(err)?);
            ensure(a.moduli() == b.moduli(), || format!("complex {i}, q={q}: {a} vs {b}"))?;
        }
        let nq = norm_quotient(&ord, n).map_err(err)?;
        let t = tate.cohomology(n).map_err(err)?;
        ensure(nq.isomorphic(&t.canonical()), || format!("complex {i}, q={n}: {nq} vs {t}"))?;
    }
    Ok(())
}

fn class_gate(relation: &[ClassComplex]) -> Check {
    for cc in relation {
        let rep = verify_class_complex(cc).map_err(err)?;
        ensure(rep.passed, || format!("{} fails the gate", cc.name))?;
    }
    let v4 = FiniteGroup::klein4();
    let z = GModule::trivial_z(&v4);
    let h2 = module_h2(&z);
    for i in 0..h2.moduli().len() {
        let bad = ClassComplex { name: "V4/Z".into(), group: v4.clone(), complex: GComplex::concentrated(&z, 0), alpha: h2.generator(i) };
        let rep = verify_class_complex(&bad).map_err(err)?;
        let whole = rep.rows.iter().find(|r| r.order == 4).unwrap();
        ensure(!rep.passed && whole.h2 == "Z/2 + Z/2", || format!("negative control: {} {}", rep.passed, whole.h2))?;
    }
    Ok(())
}

fn cup_isomorphisms(built: &[WeilGroupData]) -> Check {
    let qs: Vec<i32> = (-3..=1).collect();
    for wd in built {
        let p = ModulePairing::scalar(&wd.a);
        let rows = cup_iso_table(&p, &wd.alpha_a, &qs).map_err(err)?;
        if let Some(r) = rows.iter().find(|r| !r.ok) {
            return Err(format!("{}: {} q={}: {} -> {}", wd.formation.name, r.subgroup, r.q, r.source, r.target));
        }
    }
    Ok(())
}

fn finite_fields(built: &[WeilGroupData]) -> Check {
    for wd in built.iter().filter(|w| w.formation.name.starts_with("finite_field")) {
        let n = wd.formation.group.order();
        let w = &wd.weil;
        let wab = &w.abelianization().group;
        ensure(wab.to_string() == "Z^1", || format!("n={n}: W^ab = {wab}"))?;
        ensure(wd.cl.underlying().to_string() == "Z^1", || format!("n={n}: kernel {}", wd.cl.underlying()))?;
        // u^n = ι(1), and ι(1) = n·u in the abelianization
        let u = w.section(1);
        let mut p = w.identity();
        for _ in 0..n {
            p = w.mul(&p, &u);
        }
        ensure(w.eq_elem(&p, &w.iota(&[BigInt::from(1)])), || format!("n={n}: u^n is not the kernel generator"))?;
        let one = w.ab_project(&w.iota(&[BigInt::from(1)]));
        let un = w.ab_project(&u).iter().map(|x| x * BigInt::from(n)).collect::<Vec<_>>();
        ensure(wab.eq_elem(&one, &un), || format!("n={n}: kernel generator is not n times u"))?;
        // f_K(1) = u: the inverse of multiplication by n
        let fk = wd.whole().f.as_ref().ok_or("f_K missing")?;
        ensure(wab.eq_elem(&fk.apply(&[BigInt::from(1)]), &w.ab_project(&u)), || format!("n={n}: f_K(1) != u"))?;
        let art = artin_map(wd).map_err(err)?;
        let x = art.source().from_canonical(&[BigInt::from(1)]);
        let gen = art.target().reduce(&unit_vec(n, 1));
        ensure(art.target().reduce(&art.apply(&x)) == gen, || format!("n={n}: Artin(1) is not the generator"))?;
    }
    Ok(())
}

fn axioms(built: &[WeilGroupData]) -> Check {
    for wd in built {
        let rep = verify_weil_axioms(wd).map_err(err)?;
        let first = rep.failures().next().map(|r| format!("axiom {} at {}: {}", r.axiom, r.location, r.detail));
        if let Some(f) = first {
            return Err(format!("{}: {f}", wd.formation.name));
        }
    }
    let cc = synthetic_formation(&FormationSpec::FiniteField { n: 4 }).map_err(err)?;
    let bad = build_weil_group_with(&cc, &WeilOptions { beta_multiple: 2, ..Default::default() }).map_err(err)?;
    let rep = verify_weil_axioms(&bad).map_err(err)?;
    ensure(!rep.passed[2], || "corrupted build passes axiom 3".into())?;
    let loc = rep.failures().find(|r| r.axiom == 3).map(|r| r.location.clone()).unwrap_or_default();
    ensure(!loc.is_empty(), || "axiom 3 failure not located".into())
}

fn artin_agreement(built: &[WeilGroupData]) -> Check {
    for wd in built {
        let rep = compare_artin(wd).map_err(err)?;
        let gab = abelianization_of(&wd.formation.group).order().ok_or("infinite abelianization")?;
        let distinct: std::collections::BTreeSet<_> = rep.images.iter().map(|(_, y)| y.clone()).collect();
        ensure(rep.agree, || format!("{}: routes disagree", wd.formation.name))?;
        ensure(BigInt::from(rep.elements) == gab && distinct.len() == rep.elements, || {
            format!("{}: {} -> {} is not bijective", wd.formation.name, rep.source, rep.target)
        })?;
    }
    Ok(())
}

fn uniqueness(built: &[WeilGroupData]) -> Check {
    for (i, wd) in built.iter().enumerate() {
        let g = &wd.formation.group;
        let r = wd.cl.rank();
        let e = g.identity();
        let c = BarCochain::from_fn(g, 1, |t| {
            if t[0] == e {
                vec![BigInt::from(0); r]
            } else {
                (0..r).map(|k| BigInt::from(((t[0] * 7 + k * 3 + i) % 5) as i64 - 2)).collect()
            }
        });
        let other = build_weil_group_with(&wd.formation, &WeilOptions { perturbation: Some(c), ..Default::default() })
            .map_err(err)?;
        ensure(weil_isomorphism(wd, &other).is_some(), || format!("{}: no isomorphism", wd.formation.name))?;
    }
    let cc = synthetic_formation(&FormationSpec::FiniteField { n: 3 }).map_err(err)?;
    let w1 = build_weil_group(&cc).map_err(err)?;
    let w2 = build_weil_group_with(&cc, &WeilOptions { beta_multiple: 2, ..Default::default() }).map_err(err)?;
    ensure(weil_isomorphism(&w1, &w2).is_none(), || "non-cohomologous builds are isomorphic".into())
}

fn main() {
    let start = Instant::now();
    let mut failures = 0;
    let mut run = |n: u32, name: &str, f: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("PASS {n:>2} {name} ({secs:.1}s)"),
            Err(e) => {
                failures += 1;
                println!("FAIL {n:>2} {name} ({secs:.1}s): {e}");
            }
        }
    };
    run(1, "cyclic cohomology table", &mut cyclic_table);
    run(2, "induced modules are cohomologically trivial", &mut induced_vanishing);
    run(3, "shift identity on 20 random modules", &mut shift_identity);
    let complexes = random_complexes();
    run(4, "trivialization of 50 random complexes", &mut || trivialization(&complexes));
    let specs = FormationSpec::builtins();
    let classes: Vec<ClassComplex> = specs.iter().map(|s| synthetic_formation(s).expect("formation")).collect();
    run(5, "high-degree and norm-quotient identities", &mut || high_degree_identities(&complexes, &classes));
    let relation: Vec<ClassComplex> =
        classes.iter().filter(|c| c.name.starts_with("relation_module")).cloned().collect();
    run(6, "class-complex gate", &mut || class_gate(&relation));
    let built: Vec<WeilGroupData> = classes.iter().map(|c| build_weil_group(c).expect("build")).collect();
    run(7, "cup with the fundamental class", &mut || cup_isomorphisms(&built));
    run(8, "finite-field Weil groups", &mut || finite_fields(&built));
    run(9, "Weil group axioms", &mut || axioms(&built));
    run(10, "Artin map agreement", &mut || artin_agreement(&built));
    run(11, "uniqueness up to Weil isomorphism", &mut || uniqueness(&built));
    println!("{failures} failures, {:.1}s total", start.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
