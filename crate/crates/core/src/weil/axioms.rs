//! The four Weil group axioms, Weil isomorphisms and the Artin map.

use super::build::{cokernel_on, invariant_map, transfer_to_invariants, WeilGroupData};
use crate::error::{Error, Result};
use crate::ext::{module_h2, ExtElement, TransferTarget};
use crate::groupmod::{FiniteGroup, GComplex, GHom, GModule, QuotientGroup, Subgroup};
use crate::intlin::{unit_vec, AbHom, BigInt, FgAbGroup, IntMatrix};
use crate::reciprocity::{abelianization_of, h0, nakayama_map};
use crate::tate::{bar_to_class, edge_h2, inflate_module, inflation, push_cochain, BarCochain, TateComplex};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomRow {
    pub axiom: u8,
    pub location: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub rows: Vec<AxiomRow>,
    pub passed: [bool; 4],
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.passed.iter().all(|&p| p)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomRow> {
        self.rows.iter().filter(|r| !r.ok)
    }
}

fn row(axiom: u8, location: String, fails: Vec<String>) -> AxiomRow {
    AxiomRow { axiom, location, ok: fails.is_empty(), detail: fails.join("; ") }
}

/// `h'` as a subgroup of `h.as_group()`.
fn localize(h: &Subgroup, inner: &Subgroup) -> Result<Subgroup> {
    let (hg, _) = h.as_group();
    let el = inner
        .elements()
        .iter()
        .map(|&x| h.local_index(x).ok_or_else(|| Error::NotASubgroup(inner.label())))
        .collect::<Result<Vec<_>>>()?;
    Subgroup::from_elements(&hg, el)
}

pub fn verify_weil_axioms(wd: &WeilGroupData) -> Result<AxiomReport> {
    let mut rows = Vec::new();
    for l in &wd.local {
        let fails: Vec<String> = l.checks.iter().filter(|c| !c.ok).map(|c| c.check.clone()).collect();
        rows.push(row(1, format!("f_E over {}", l.subgroup.label()), fails));
    }
    for i in 0..wd.local.len() {
        for j in 0..wd.local.len() {
            if wd.local[j].subgroup.is_subgroup_of(&wd.local[i].subgroup) {
                rows.push(axiom1(wd, i, j)?);
            }
        }
    }
    rows.extend(axiom2(wd)?);
    for i in 0..wd.local.len() {
        for j in 0..wd.local.len() {
            let (h, n) = (&wd.local[i].subgroup, &wd.local[j].subgroup);
            if n.is_normal_in(h) {
                rows.push(axiom3(wd, i, j)?);
            }
        }
    }
    rows.push(axiom4(wd));
    let passed = [1u8, 2, 3, 4].map(|a| rows.iter().filter(|r| r.axiom == a).all(|r| r.ok));
    Ok(AxiomReport { rows, passed })
}

/// Transfer `W(L/E)^{ab} → W(L/E')^{ab}` after `f_E` equals `f_{E'}` after
/// the inclusion `C(E) → C(E')`.
fn axiom1(wd: &WeilGroupData, i: usize, j: usize) -> Result<AxiomRow> {
    let (big, small) = (&wd.local[i], &wd.local[j]);
    let loc = format!("{} in {}", small.subgroup.label(), big.subgroup.label());
    let (Some(fi), Some(fj)) = (&big.f, &small.f) else {
        return Ok(row(1, loc, vec!["f_E unavailable".into()]));
    };
    let cols: Option<Vec<Vec<BigInt>>> = big
        .inv_incl
        .matrix()
        .col_vecs()
        .iter()
        .map(|v| small.inv_incl.preimage(v))
        .collect();
    let Some(cols) = cols else { return Ok(row(1, loc, vec!["invariants not nested".into()])) };
    let incl = AbHom::new(big.ce.clone(), small.ce.clone(), IntMatrix::from_cols(&cols, small.ce.ngens()))?;
    let v = big.w.transfer(&TransferTarget::Preimage(localize(&big.subgroup, &small.subgroup)?))?;
    let tgt = fj.target();
    if v.target().relations() != tgt.relations() {
        return Ok(row(1, loc, vec!["transfer target presentation differs".into()]));
    }
    let mut fails = Vec::new();
    for k in 0..big.ce.ngens() {
        let x = unit_vec(big.ce.ngens(), k);
        if !tgt.eq_elem(&v.apply(&fi.apply(&x)), &fj.apply(&incl.apply(&x))) {
            fails.push(format!("generator {k}"));
        }
    }
    Ok(row(1, loc, fails))
}

/// Conjugation by generators of `W` carries `W(L/E)` onto `W(L/E^σ)`,
/// compatibly with `σ` acting on `C(E)`.
fn axiom2(wd: &WeilGroupData) -> Result<Vec<AxiomRow>> {
    let g = &wd.formation.group;
    let w = &wd.weil;
    let rc = wd.cl.rank();
    let mut gens: Vec<ExtElement> = g.generators().into_iter().map(|s| w.section(s)).collect();
    gens.extend((0..rc).map(|k| w.iota(&unit_vec(rc, k))));
    let mut rows = Vec::new();
    for (wi, x) in gens.iter().enumerate() {
        let sigma = x.sigma;
        for li in &wd.local {
            let loc = format!("generator {wi} on {}", li.subgroup.label());
            let hs = li.subgroup.conjugate(sigma);
            let j = wd.index_of(&hs).expect("conjugate is a subgroup");
            let lj = &wd.local[j];
            let (Some(fi), Some(fj)) = (&li.f, &lj.f) else {
                rows.push(row(2, loc, vec!["f_E unavailable".into()]));
                continue;
            };
            // σ on invariants
            let cols: Option<Vec<Vec<BigInt>>> = li
                .inv_incl
                .matrix()
                .col_vecs()
                .iter()
                .map(|v| lj.inv_incl.preimage(&wd.a.act(sigma, v)))
                .collect();
            let Some(cols) = cols else {
                rows.push(row(2, loc, vec!["σ does not carry invariants".into()]));
                continue;
            };
            let act = AbHom::new(li.ce.clone(), lj.ce.clone(), IntMatrix::from_cols(&cols, lj.ce.ngens()))?;
            // conjugation on abelianizations
            let (hgi, embi) = li.subgroup.as_group();
            let mut images: Vec<ExtElement> = (0..rc).map(|k| w.conj(x, &w.iota(&unit_vec(rc, k)))).collect();
            images.extend(hgi.elements().map(|s| w.conj(x, &w.section(embi[s]))));
            let proj: Option<Vec<Vec<BigInt>>> = images
                .iter()
                .map(|y| lj.subgroup.local_index(y.sigma).map(|s| lj.w.ab_project(&ExtElement { a: y.a.clone(), sigma: s })))
                .collect();
            let Some(proj) = proj else {
                rows.push(row(2, loc, vec!["conjugate leaves the preimage".into()]));
                continue;
            };
            let tab = lj.w.abelianization().group.clone();
            let conj = match AbHom::new(li.w.abelianization().group.clone(), tab.clone(), IntMatrix::from_cols(&proj, tab.ngens())) {
                Ok(c) => c,
                Err(e) => {
                    rows.push(row(2, loc, vec![e.to_string()]));
                    continue;
                }
            };
            let mut fails = Vec::new();
            if !conj.is_iso() {
                fails.push("conjugation not onto".into());
            }
            for k in 0..li.ce.ngens() {
                let e = unit_vec(li.ce.ngens(), k);
                if !tab.eq_elem(&conj.apply(&fi.apply(&e)), &fj.apply(&act.apply(&e))) {
                    fails.push(format!("square fails on generator {k}"));
                }
            }
            rows.push(row(2, loc, fails));
        }
    }
    Ok(rows)
}

/// Invariants of `m` under `n`, as a module over `G/N` acting through the
/// section `sec` (global indices).
fn invariant_module(m: &GModule, n: &Subgroup, q: &FiniteGroup, sec: &[usize]) -> Result<(GModule, AbHom)> {
    let (inv, incl) = m.invariants(n);
    let action: Option<Vec<IntMatrix>> = q
        .elements()
        .map(|x| {
            let cols: Option<Vec<Vec<BigInt>>> =
                incl.matrix().col_vecs().iter().map(|v| incl.preimage(&m.act(sec[x], v))).collect();
            cols.map(|c| IntMatrix::from_cols(&c, inv.ngens()))
        })
        .collect();
    let action = action.ok_or_else(|| Error::NotEquivariant("invariants are not stable".into()))?;
    Ok((GModule::new(q, inv, action)?, incl))
}

/// Factor extensions of `U` and `W` for `H' ⊴ H`: the inflation identity
/// for the class on `A^{H'}`, then the layer class pushed through the edge
/// map against the class of the `W` factor extension.
fn axiom3(wd: &WeilGroupData, i: usize, j: usize) -> Result<AxiomRow> {
    let (big, small) = (&wd.local[i], &wd.local[j]);
    let loc = format!("{} normal in {}", small.subgroup.label(), big.subgroup.label());
    let h = &big.subgroup;
    let (hg, emb) = h.as_group();
    let nloc = localize(h, &small.subgroup)?;
    let fu = big.u.factor_extension(&nloc)?;
    let quot: &QuotientGroup = &fu.quotient;
    let q = &quot.group;
    let sec: Vec<usize> = quot.section.iter().map(|&s| emb[s]).collect();
    let mut fails = Vec::new();

    // U side: transport to A^{H'}
    let (aq, incl) = invariant_module(&wd.a, &small.subgroup, q, &sec)?;
    let v = transfer_to_invariants(&fu.kernel, aq.underlying(), &incl)?;
    let v = match GHom::new(fu.extension.module(), &aq, v.matrix().clone()) {
        Ok(v) => v,
        Err(e) => return Ok(row(3, loc, vec![format!("transfer not equivariant: {e}")])),
    };
    if !v.hom.is_iso() {
        fails.push("transfer onto A^H' not bijective".into());
    }
    let alpha_q: BarCochain = fu.extension.cocycle().values().map_values(&v.hom);

    // Infl(α) = [H':1]·Res α_A
    let target = module_h2(&wd.a.restrict(h));
    let ah = wd.a.restrict(h);
    let infl_hom = GHom::new(&inflate_module(&aq, quot), &ah, incl.matrix().clone())?;
    let c = bar_to_class(&alpha_q, &module_h2(&aq))?;
    let inf = inflation(&c, quot, &infl_hom, &target)?;
    let expected = bar_to_class(&big.u.cocycle().values().scale(small.subgroup.order() as i64), &target)?;
    if inf.coords() != expected.coords() {
        fails.push(format!("Infl gives {:?}, expected {:?}", inf.coords(), expected.coords()));
    }
    debug_assert_eq!(hg.order(), h.order());

    // the layer complex: invariants of the trivialized complex under H'
    let mut terms = BTreeMap::new();
    let mut incls = BTreeMap::new();
    for (&deg, m) in wd.top.terms() {
        let (mq, mi) = if deg == 0 { (aq.clone(), incl.clone()) } else { invariant_module(m, &small.subgroup, q, &sec)? };
        terms.insert(deg, mq);
        incls.insert(deg, mi);
    }
    let mut diffs = BTreeMap::new();
    for (&deg, src) in &incls {
        let Some(tgt) = incls.get(&(deg + 1)) else { continue };
        let d = wd.top.diff_hom(deg);
        let r = invariant_map(&d, &small.subgroup, tgt, tgt.source())?;
        debug_assert_eq!(r.source().ngens(), src.source().ngens());
        diffs.insert(deg, r.matrix().clone());
    }
    let layer = GComplex::new(q, terms, diffs)?;
    let tcq = TateComplex::ordinary(&layer, 2)?;
    let hq = tcq.cohomology(2)?;
    let qn = BigInt::from(q.order());
    if !(hq.group().is_cyclic() && hq.group().order() == Some(qn.clone())) {
        fails.push(format!("layer H^2 is {hq}"));
    }
    let tcq_a = tcq.with_coefficients(&GComplex::concentrated(&aq, 0))?;
    let ca = bar_to_class(&alpha_q, &tcq_a.cohomology(2)?)?;
    let id = GHom::new(&aq, &layer.term(0), IntMatrix::identity(aq.rank()))?;
    let layer_class = hq.class(push_cochain(&tcq_a, &tcq, &BTreeMap::from([(0, id)]), 2, &ca.cocycle))?;
    if layer_class.order() != Some(qn) {
        fails.push("layer class is not a generator".into());
    }
    let edge = edge_h2(&layer_class)?;
    let top = layer.top_projection(0);
    let pushed = bar_to_class(&alpha_q.map_values(&top.hom), &edge.group)?;
    if pushed.coords() != edge.coords() {
        fails.push("edge and pushforward disagree".into());
    }

    // W side, read in C(E') through f_{E'}^{-1}
    match &small.f {
        None => fails.push("f_E' unavailable".into()),
        Some(fj) => {
            let fw = big.w.factor_extension(&nloc)?;
            let finv = fj.inverse().expect("f_E' is bijective");
            let ce = cokernel_on(small.lower.as_ref(), &small.invariants);
            let ident = AbHom::new(ce, top.target.underlying().clone(), IntMatrix::identity(small.invariants.ngens()))?;
            match GHom::new(fw.extension.module(), &top.target, ident.matrix().mul(finv.matrix())) {
                Err(e) => fails.push(format!("f_E' not equivariant: {e}")),
                Ok(m) => {
                    let wf = bar_to_class(&fw.extension.cocycle().values().map_values(&m.hom), &edge.group)?;
                    if wf.coords() != edge.coords() {
                        fails.push(format!("factor class {:?}, expected {:?}", wf.coords(), edge.coords()));
                    }
                }
            }
        }
    }
    Ok(row(3, loc, fails))
}

/// `ker g = ι(C(L))` is abelian.
fn axiom4(wd: &WeilGroupData) -> AxiomRow {
    let w = &wd.weil;
    let r = wd.cl.rank();
    let gens: Vec<ExtElement> = (0..r).map(|k| w.iota(&unit_vec(r, k))).collect();
    let mut fails = Vec::new();
    for (a, x) in gens.iter().enumerate() {
        for (b, y) in gens.iter().enumerate().skip(a + 1) {
            if !w.eq_elem(&w.mul(x, y), &w.mul(y, x)) {
                fails.push(format!("({a}, {b})"));
            }
        }
    }
    row(4, "kernel of the projection".into(), fails)
}

/// Extension equivalence `W₁ → W₂` over the identity of `G` and `C(L)`,
/// required to commute with every `f_E`.
#[derive(Clone, Debug)]
pub struct WeilIsomorphism {
    pub shift: BarCochain,
}

pub fn weil_isomorphism(w1: &WeilGroupData, w2: &WeilGroupData) -> Option<WeilIsomorphism> {
    if w1.cl.actions() != w2.cl.actions() {
        return None;
    }
    let eq = w1.weil.equivalence(&w2.weil)?;
    let g = &w1.formation.group;
    let n = g.order();
    let rc = w1.cl.rank();
    for (l1, l2) in w1.local.iter().zip(&w2.local) {
        let (Some(f1), Some(f2)) = (&l1.f, &l2.f) else { return None };
        let (hg, emb) = l1.subgroup.as_group();
        let mut imgs: Vec<Vec<BigInt>> =
            (0..rc).map(|k| l2.w.ab_project(&ExtElement { a: unit_vec(rc, k), sigma: hg.identity() })).collect();
        imgs.extend(hg.elements().map(|s| l2.w.ab_project(&ExtElement { a: eq.shift.get(n, &[emb[s]]).to_vec(), sigma: s })));
        let tab = l2.w.abelianization().group.clone();
        let phi = AbHom::new(l1.w.abelianization().group.clone(), tab.clone(), IntMatrix::from_cols(&imgs, tab.ngens())).ok()?;
        let pi = |wd: &WeilGroupData, l: &super::build::LocalData| {
            AbHom::new(l.ce.clone(), wd.cl.underlying().clone(), wd.to_cl.matrix().mul(l.inv_incl.matrix()))
        };
        let (p1, p2) = (pi(w1, l1).ok()?, pi(w2, l2).ok()?);
        for k in 0..l1.ce.ngens() {
            let x = unit_vec(l1.ce.ngens(), k);
            let y = p2.preimage(&p1.apply(&x))?;
            if !tab.eq_elem(&phi.apply(&f1.apply(&x)), &f2.apply(&y)) {
                return None;
            }
        }
    }
    Some(WeilIsomorphism { shift: eq.shift })
}

/// Artin map `C(K)/N C(L) → G^{ab}` through `f_K` and the projection of `W`.
pub fn artin_map(wd: &WeilGroupData) -> Result<AbHom> {
    let k = wd.whole();
    let fk = k.f.as_ref().ok_or(Error::NotVerifiedWeilGroup)?;
    let g = &wd.formation.group;
    let n = g.order();
    let src = norm_quotient_source(wd);
    let wab = wd.weil.abelianization().group.clone();
    let rc = wd.cl.rank();
    let mut p = IntMatrix::zeros(n, wab.ngens());
    for s in g.elements() {
        p.set(s, rc + s, BigInt::from(1));
    }
    let proj = AbHom::new(wab, abelianization_of(g), p)?;
    AbHom::new(src, abelianization_of(g), proj.matrix().mul(fk.matrix()))
}

/// `C(K)` with the norms of `A` added as relations.
fn norm_quotient_source(wd: &WeilGroupData) -> FgAbGroup {
    let k = wd.whole();
    let nm = wd.a.norm_matrix();
    let norms: Vec<Vec<BigInt>> = (0..wd.a.rank())
        .map(|i| k.inv_incl.preimage(&nm.col(i)).expect("norms are invariant"))
        .collect();
    let mut rels = k.ce.relation_cols();
    rels.extend(norms);
    FgAbGroup::from_relation_cols(k.ce.ngens(), &rels)
}

/// The inverse of the Nakayama map of `β`, precomposed with
/// `C(K)/N C(L) → Ĥ^0(G, C(L))`.
pub fn artin_via_nakayama(wd: &WeilGroupData) -> Result<AbHom> {
    let k = wd.whole();
    let src = norm_quotient_source(wd);
    let h = h0(&wd.cl)?;
    let cols: Vec<Vec<BigInt>> = (0..k.ce.ngens())
        .map(|i| {
            let y = wd.to_cl.hom.apply(&k.inv_incl.apply(&unit_vec(k.ce.ngens(), i)));
            Ok(bar_to_class(&BarCochain { degree: 0, values: vec![y] }, &h)?.coords())
        })
        .collect::<Result<_>>()?;
    let to_h0 = AbHom::new(src, h.canonical(), IntMatrix::from_cols(&cols, h.moduli().len()))?;
    let nk = nakayama_map(wd.weil.cocycle())?;
    let inv = nk.inverse().ok_or_else(|| Error::RouteMismatch("Nakayama map is not bijective".into()))?;
    Ok(inv.after(&to_h0))
}

#[derive(Clone, Debug, Serialize)]
pub struct ArtinReport {
    pub source: String,
    pub target: String,
    pub elements: usize,
    pub agree: bool,
    pub images: Vec<(Vec<String>, Vec<String>)>,
}

/// Both Artin routes on every element of `C(K)/N C(L)`.
pub fn compare_artin(wd: &WeilGroupData) -> Result<ArtinReport> {
    let a = artin_map(wd)?;
    let b = artin_via_nakayama(wd)?;
    let src = a.source().clone();
    let tgt = a.target().clone();
    let elems = src.enumerate(1 << 12).ok_or(Error::IndexInfinite)?;
    let mut agree = true;
    let mut images = Vec::new();
    for c in &elems {
        let x = src.from_canonical(c);
        let (ya, yb) = (tgt.reduce(&a.apply(&x)), tgt.reduce(&b.apply(&x)));
        agree &= ya == yb;
        let s = |v: &[BigInt]| v.iter().map(|t| t.to_string()).collect();
        images.push((s(c), s(&ya)));
    }
    Ok(ArtinReport { source: src.to_string(), target: tgt.to_string(), elements: elems.len(), agree, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::build::{build_weil_group, build_weil_group_with, WeilOptions};
    use crate::weil::formation::{synthetic_formation, FormationSpec};

    fn build(spec: FormationSpec) -> WeilGroupData {
        build_weil_group(&synthetic_formation(&spec).unwrap()).unwrap()
    }

    #[test]
    fn finite_field_axioms_and_artin() {
        let wd = build(FormationSpec::FiniteField { n: 4 });
        let rep = verify_weil_axioms(&wd).unwrap();
        assert!(rep.all_passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        let cmp = compare_artin(&wd).unwrap();
        assert!(cmp.agree);
        assert_eq!(cmp.elements, 4);
        let art = artin_map(&wd).unwrap();
        let one = art.source().from_canonical(&[BigInt::from(1)]);
        let gen = art.target().reduce(&unit_vec(4, 1));
        assert_eq!(art.target().reduce(&art.apply(&one)), gen);
    }

    #[test]
    fn corrupted_class_fails_axiom3() {
        let cc = synthetic_formation(&FormationSpec::FiniteField { n: 4 }).unwrap();
        let opts = WeilOptions { beta_multiple: 2, ..Default::default() };
        let wd = build_weil_group_with(&cc, &opts).unwrap();
        let rep = verify_weil_axioms(&wd).unwrap();
        assert!(!rep.passed[2]);
        assert!(rep.failures().any(|r| r.axiom == 3 && r.location == "{0} normal in {0,1,2,3}"));
    }

    #[test]
    fn relation_module_v4_axioms() {
        let wd = build(FormationSpec::RelationModule { group: "V4".into() });
        let rep = verify_weil_axioms(&wd).unwrap();
        assert!(rep.all_passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(compare_artin(&wd).unwrap().agree);
    }

    #[test]
    fn isomorphism_between_representatives() {
        let cc = synthetic_formation(&FormationSpec::FiniteField { n: 3 }).unwrap();
        let w1 = build_weil_group(&cc).unwrap();
        let g = cc.group.clone();
        let c = BarCochain::from_fn(&g, 1, |t| vec![BigInt::from(if t[0] == 0 { 0 } else { 2 * t[0] as i64 + 1 })]);
        let opts = WeilOptions { perturbation: Some(c), ..Default::default() };
        let w2 = build_weil_group_with(&cc, &opts).unwrap();
        assert!(weil_isomorphism(&w1, &w1).is_some());
        assert!(weil_isomorphism(&w1, &w2).is_some());
        let w3 = build_weil_group_with(&cc, &WeilOptions { beta_multiple: 2, ..Default::default() }).unwrap();
        assert!(weil_isomorphism(&w1, &w3).is_none());
    }

    #[test]
    fn padded_matches_relation_module() {
        let w1 = build(FormationSpec::RelationModule { group: "C2".into() });
        let w2 = build(FormationSpec::PaddedTwoTerm { group: "C2".into() });
        assert!(weil_isomorphism(&w1, &w2).is_some());
    }
}
