//! Maps on cohomology: coefficient maps, restriction, inflation and the
//! degree-two edge map.

use super::cochains::{CohClass, TateComplex, TateGroup};
use super::comparison::{bar_to_class, class_to_bar, pull_total, ChainLift};
use super::resolution::{CompleteResolution, FreeResolution};
use crate::error::{Error, Result};
use crate::groupmod::{GComplex, GHom, GModule, QuotientGroup, Subgroup};
use crate::intlin::{zero_vec, AbHom, BigInt, FgAbGroup};
use std::collections::BTreeMap;
use std::sync::Arc;

impl TateComplex {
    /// Same kind and window, coefficients restricted to a subgroup.
    pub fn restricted(&self, h: &Subgroup) -> Result<Arc<TateComplex>> {
        let coeff = self.coefficients().restrict(h);
        let w = self.window();
        let x = CompleteResolution::from_resolution(FreeResolution::cached(coeff.group(), w), w);
        TateComplex::new(x, &coeff, self.is_ordinary())
    }

    /// Same resolution and kind, different coefficients over the same group.
    pub fn with_coefficients(&self, coeff: &GComplex) -> Result<Arc<TateComplex>> {
        TateComplex::new(self.resolution().clone(), coeff, self.is_ordinary())
    }
}

/// Cochain map induced by a map of coefficient complexes, given degreewise.
pub fn push_cochain(src: &TateComplex, tgt: &TateComplex, maps: &BTreeMap<i32, GHom>, q: i32, x: &[BigInt]) -> Vec<BigInt> {
    let mut out = zero_vec(tgt.dim(q));
    for b in tgt.blocks(q) {
        let (Some(f), Some(vals)) = (maps.get(&b.j), src.component(q, b.p, x)) else { continue };
        for (c, v) in vals.iter().enumerate() {
            out[b.offset + c * b.r..b.offset + (c + 1) * b.r].clone_from_slice(&f.hom.apply(v));
        }
    }
    out
}

/// Homomorphism on cohomology induced by a chain map of coefficients; both
/// groups must come from complexes over the same resolution.
pub fn chain_map_induced(src: &TateGroup, tgt: &TateGroup, maps: &BTreeMap<i32, GHom>) -> Result<AbHom> {
    let (sc, tc) = (src.complex().clone(), tgt.complex().clone());
    let q = src.degree();
    src.induced_map(tgt, |x| push_cochain(&sc, &tc, maps, q, x))
}

/// Map induced by a module map, for groups of modules placed in degree 0.
pub fn module_map_induced(src: &TateGroup, tgt: &TateGroup, f: &GHom) -> Result<AbHom> {
    chain_map_induced(src, tgt, &BTreeMap::from([(0, f.clone())]))
}

fn lift_for(tc: &TateComplex, small: &TateComplex, hom: Vec<usize>, q: i32) -> ChainLift {
    let len = small.blocks(q).iter().map(|b| b.p.max(0) as usize).max().unwrap_or(0);
    ChainLift::new(small.resolution().resolution().clone(), tc.resolution().resolution().clone(), hom, len)
}

/// Restriction to a subgroup, as a homomorphism into the group over the
/// subgroup; only resolution degrees `p ≥ 0` are supported.
pub fn restriction_map(src: &TateGroup, h: &Subgroup) -> Result<(TateGroup, AbHom)> {
    let tc = src.complex();
    let q = src.degree();
    let small = tc.restricted(h)?;
    let tgt = small.cohomology(q)?;
    if small.blocks(q).iter().any(|b| b.p < 0) || tc.blocks(q).iter().any(|b| b.p < 0) {
        return Err(Error::Unsupported("restriction in negative resolution degrees".into()));
    }
    let lift = lift_for(tc, &small, h.elements().to_vec(), q);
    let map = src.induced_map(&tgt, |x| pull_total(&lift, tc, &small, q, x).expect("nonnegative pieces"))?;
    Ok((tgt, map))
}

pub fn restrict_class(c: &CohClass, h: &Subgroup) -> Result<CohClass> {
    let tc = c.group.complex();
    let q = c.degree();
    let small = tc.restricted(h)?;
    let tgt = small.cohomology(q)?;
    let lift = lift_for(tc, &small, h.elements().to_vec(), q);
    tgt.class(pull_total(&lift, tc, &small, q, &c.cocycle)?)
}

/// Module over `G` on which `G` acts through `G/N`.
pub fn inflate_module(b: &GModule, quotient: &QuotientGroup) -> GModule {
    let g = quotient.normal.parent();
    let action = g.elements().map(|s| b.action(quotient.projection[s]).clone()).collect();
    GModule::new_unchecked(g, b.underlying().clone(), action)
}

/// Inflation of a class over `G/N` with coefficients `B` into
/// `H^q(G, A)` along `incl : Infl(B) → A`; `incl` being equivariant forces
/// its image to be fixed by `N`.
pub fn inflation(c: &CohClass, quotient: &QuotientGroup, incl: &GHom, target: &TateGroup) -> Result<CohClass> {
    if incl.check_equivariant().is_err() {
        return Err(Error::CoefficientsNotInvariant);
    }
    let g = quotient.normal.parent();
    let f = class_to_bar(c)?;
    let pulled = f.pullback(quotient.group.order(), g, &quotient.projection).map_values(&incl.hom);
    bar_to_class(&pulled, target)
}

pub fn inflation_map(src: &TateGroup, quotient: &QuotientGroup, incl: &GHom, target: &TateGroup) -> Result<AbHom> {
    let cols: Result<Vec<Vec<BigInt>>> =
        (0..src.moduli().len()).map(|i| Ok(inflation(&src.generator(i), quotient, incl, target)?.coords())).collect();
    let m = crate::intlin::IntMatrix::from_cols(&cols?, target.moduli().len());
    AbHom::new(src.canonical(), target.canonical(), m)
}

/// `H^2(G, C) → H^2(G, ℋ^0(C))` for `C` concentrated in degrees `≤ 0`:
/// the `(2, 0)` piece pushed into the top homology.
pub fn edge_h2(c: &CohClass) -> Result<CohClass> {
    let tc = c.group.complex();
    let coeff = tc.coefficients();
    if coeff.range().is_some_and(|(_, hi)| hi > 0) {
        return Err(Error::ComplexNotCoconnective);
    }
    if c.degree() != 2 {
        return Err(Error::DimensionMismatch("edge map is taken in degree 2".into()));
    }
    let top = coeff.top_projection(0);
    let tgt_complex = tc.with_coefficients(&GComplex::concentrated(&top.target, 0))?;
    let tgt = tgt_complex.cohomology(2)?;
    let x = push_cochain(tc, &tgt_complex, &BTreeMap::from([(0, top)]), 2, &c.cocycle);
    tgt.class(x)
}

/// Ordinary `H^n(G, C)` modulo the classes `N·x` for `x` in the top term
/// `C^n`; for `C` vanishing above `n` this is the Tate group in degree `n`.
pub fn norm_quotient(tc: &Arc<TateComplex>, n: i32) -> Result<FgAbGroup> {
    if !tc.is_ordinary() {
        return Err(Error::Unsupported("norm quotient of an ordinary complex only".into()));
    }
    let coeff = tc.coefficients();
    if coeff.range().is_some_and(|(_, hi)| hi > n) {
        return Err(Error::DimensionMismatch("complex has terms above the given degree".into()));
    }
    let hn = tc.cohomology(n)?;
    let top = coeff.term(n);
    let norm = top.norm_matrix();
    let rk0 = tc.resolution().rank(0);
    let mut cols = Vec::new();
    for i in 0..top.rank() {
        let mut vals = vec![zero_vec(top.rank()); rk0];
        vals[0] = norm.col(i);
        let x = tc.from_component(n, 0, &vals);
        cols.push(hn.class(x)?.coords());
    }
    let canon = hn.canonical();
    let mut rels = canon.relation_cols();
    rels.extend(cols);
    Ok(FgAbGroup::from_relation_cols(canon.ngens(), &rels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmod::FiniteGroup;
    use crate::tate::comparison::BarCochain;

    #[test]
    fn restriction_and_inflation_c4() {
        let g = FiniteGroup::cyclic(4);
        let z = GModule::trivial_z(&g);
        let h2 = TateComplex::tate_module(&z, 4).unwrap().cohomology(2).unwrap();
        let sub = Subgroup::generated_by(&g, &[2]);
        let (tgt, res) = restriction_map(&h2, &sub).unwrap();
        assert_eq!(tgt.to_string(), "Z/2");
        assert_eq!(res.apply(&[BigInt::from(1)]), vec![BigInt::from(1)]);

        let q = QuotientGroup::new(&sub).unwrap();
        let zq = GModule::trivial_z(&q.group);
        let src = TateComplex::tate_module(&zq, 4).unwrap().cohomology(2).unwrap();
        let incl = GHom::new(&inflate_module(&zq, &q), &z, crate::intlin::IntMatrix::identity(1)).unwrap();
        let inf = inflation_map(&src, &q, &incl, &h2).unwrap();
        assert_eq!(inf.apply(&[BigInt::from(1)]), vec![BigInt::from(2)]);
        assert!(inflation(&src.zero_class(), &q, &incl, &h2).unwrap().is_zero());
    }

    #[test]
    fn bar_restriction_agrees() {
        let g = FiniteGroup::symmetric3();
        let m = crate::groupmod::augmentation_ideal(&g);
        let h2 = TateComplex::tate_module(&m, 4).unwrap().cohomology(2).unwrap();
        for h in g.subgroups().unwrap() {
            let (tgt, map) = restriction_map(&h2, &h).unwrap();
            let (hg, emb) = h.as_group();
            for i in 0..h2.moduli().len() {
                let f = class_to_bar(&h2.generator(i)).unwrap();
                let r: BarCochain = f.pullback(g.order(), &hg, &emb);
                let via_bar = bar_to_class(&r, &tgt).unwrap();
                let mut e = vec![BigInt::from(0); h2.moduli().len()];
                e[i] = BigInt::from(1);
                assert_eq!(via_bar.coords(), map.apply(&e).iter().zip(tgt.moduli()).map(|(v, d)| if d == &BigInt::from(0) { v.clone() } else { num_integer::Integer::mod_floor(v, d) }).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn edge_on_module_is_identity() {
        let g = FiniteGroup::cyclic(3);
        let z = GModule::trivial_z(&g);
        let h2 = TateComplex::tate_module(&z, 4).unwrap().cohomology(2).unwrap();
        let e = edge_h2(&h2.generator(0)).unwrap();
        assert_eq!(e.coords(), vec![BigInt::from(1)]);
    }

    #[test]
    fn norm_quotient_matches_tate() {
        let g = FiniteGroup::klein4();
        let z = GModule::trivial_z(&g);
        let r = GModule::regular(&g);
        let f = GHom::new(&r, &z, crate::intlin::IntMatrix::from_rows(&[vec![1, 1, 1, 1]], 4)).unwrap();
        for c in [GComplex::concentrated(&z, 0), GComplex::two_term(&f, -1), GComplex::concentrated(&r, 0)] {
            let ord = TateComplex::ordinary(&c, 3).unwrap();
            let tate = TateComplex::tate(&c, 5).unwrap();
            let nq = norm_quotient(&ord, 0).unwrap();
            assert!(nq.isomorphic(&tate.cohomology(0).unwrap().canonical()));
            for q in 1..=3 {
                assert_eq!(ord.cohomology(q).unwrap().moduli(), tate.cohomology(q).unwrap().moduli());
            }
        }
    }
}
