//! Class complexes and the synthetic formations used to exercise them.

use crate::error::{Error, Result};
use crate::ext::{normalized, Cocycle2};
use crate::groupmod::{augmentation_sequence, FiniteGroup, GComplex, GHom, GModule};
use crate::intlin::{unit_vec, BigInt, FgAbGroup, IntMatrix, Lattice};
use crate::reciprocity::first_syzygy_cover;
use crate::tate::{
    bar_to_class, chain_map_induced, class_to_bar, connecting_map, restrict_class, BarCochain, CohClass, TateComplex,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest group accepted by the formation generators.
pub const MAX_FORMATION_ORDER: usize = 8;

/// A bounded complex in degrees `≤ 0` with a chosen class in ordinary `H^2`.
#[derive(Clone, Debug)]
pub struct ClassComplex {
    pub name: String,
    pub group: FiniteGroup,
    pub complex: GComplex,
    /// lives in `H^2` of `TateComplex::ordinary(complex, 2)`
    pub alpha: CohClass,
}

impl ClassComplex {
    /// Wrap a class given as a normalized bar cocycle, for a module in degree 0.
    pub fn from_module_cocycle(name: &str, f: &Cocycle2) -> Self {
        let complex = GComplex::concentrated(f.module(), 0);
        ClassComplex { name: name.into(), group: f.group().clone(), complex, alpha: f.class() }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClassRow {
    pub subgroup: String,
    pub order: usize,
    pub h1: String,
    pub h2: String,
    pub res_alpha_order: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassComplexReport {
    pub name: String,
    pub rows: Vec<ClassRow>,
    pub passed: bool,
}

/// Per subgroup: `H^1 = 0`, `H^2` cyclic of order `|H|` and generated by `Res α`.
pub fn verify_class_complex(cc: &ClassComplex) -> Result<ClassComplexReport> {
    if cc.complex.range().is_some_and(|(_, hi)| hi > 0) {
        return Err(Error::ComplexNotCoconnective);
    }
    let tc = cc.alpha.group.complex();
    let mut rows = Vec::new();
    for h in cc.group.subgroups()? {
        let small = tc.restricted(&h)?;
        let h1 = small.cohomology(1)?;
        let h2 = small.cohomology(2)?;
        let res = restrict_class(&cc.alpha, &h)?;
        let n = BigInt::from(h.order());
        let ro = res.order();
        let ok = h1.is_trivial() && h2.group().is_cyclic() && h2.group().order() == Some(n.clone()) && ro == Some(n);
        rows.push(ClassRow {
            subgroup: h.label(),
            order: h.order(),
            h1: h1.to_string(),
            h2: h2.to_string(),
            res_alpha_order: ro.map_or("infinite".into(), |o| o.to_string()),
            ok,
        });
    }
    let passed = rows.iter().all(|r| r.ok);
    Ok(ClassComplexReport { name: cc.name.clone(), rows, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormationSpec {
    FiniteField { n: usize },
    RelationModule { group: String },
    PresentedTwoTerm { group: String },
    PaddedTwoTerm { group: String },
}

impl FormationSpec {
    pub fn label(&self) -> String {
        match self {
            FormationSpec::FiniteField { n } => format!("finite_field({n})"),
            FormationSpec::RelationModule { group } => format!("relation_module({group})"),
            FormationSpec::PresentedTwoTerm { group } => format!("presented_two_term({group})"),
            FormationSpec::PaddedTwoTerm { group } => format!("padded_two_term({group})"),
        }
    }

    /// The formations every suite runs.
    pub fn builtins() -> Vec<FormationSpec> {
        let mut out: Vec<FormationSpec> = (2..=8).map(|n| FormationSpec::FiniteField { n }).collect();
        for g in ["C2", "C3", "C4", "C6", "V4", "S3", "C8", "C2xC4", "D4", "Q8"] {
            out.push(FormationSpec::RelationModule { group: g.into() });
        }
        out.push(FormationSpec::PresentedTwoTerm { group: "C3".into() });
        out.push(FormationSpec::PaddedTwoTerm { group: "C2".into() });
        out
    }
}

impl std::str::FromStr for FormationSpec {
    type Err = Error;

    /// Inverse of [`FormationSpec::label`].
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Unsupported(format!("formation {s:?}"));
        let (kind, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let arg = rest.strip_suffix(')').ok_or_else(bad)?.trim().to_string();
        match kind.trim() {
            "finite_field" => Ok(FormationSpec::FiniteField { n: arg.parse().map_err(|_| bad())? }),
            "relation_module" => Ok(FormationSpec::RelationModule { group: arg }),
            "presented_two_term" => Ok(FormationSpec::PresentedTwoTerm { group: arg }),
            "padded_two_term" => Ok(FormationSpec::PaddedTwoTerm { group: arg }),
            _ => Err(bad()),
        }
    }
}

fn named_group(name: &str) -> Result<FiniteGroup> {
    let g = FiniteGroup::named(name).ok_or_else(|| Error::Unsupported(format!("unknown group {name}")))?;
    if g.order() > MAX_FORMATION_ORDER {
        return Err(Error::GroupTooLarge { order: g.order(), bound: MAX_FORMATION_ORDER });
    }
    Ok(g)
}

pub fn synthetic_formation(spec: &FormationSpec) -> Result<ClassComplex> {
    let name = spec.label();
    match spec {
        FormationSpec::FiniteField { n } => {
            if *n > MAX_FORMATION_ORDER {
                return Err(Error::GroupTooLarge { order: *n, bound: MAX_FORMATION_ORDER });
            }
            if *n == 0 {
                return Err(Error::Unsupported("degree zero".into()));
            }
            Ok(ClassComplex::from_module_cocycle(&name, &Cocycle2::carry(*n)))
        }
        FormationSpec::RelationModule { group } => {
            let g = named_group(group)?;
            let f = relation_module_cocycle(&g)?;
            Ok(ClassComplex::from_module_cocycle(&name, &f))
        }
        FormationSpec::PresentedTwoTerm { group } => {
            let g = named_group(group)?;
            let f = relation_module_cocycle(&g)?;
            let d = f.module().clone();
            let cover = free_cover(&d)?;
            let rel = cover.kernel();
            let complex = GComplex::two_term(&rel, -1);
            let alpha = pull_class(&complex, &BTreeMap::from([(0, cover)]), &f)?;
            Ok(ClassComplex { name, group: g, complex, alpha })
        }
        FormationSpec::PaddedTwoTerm { group } => {
            let g = named_group(group)?;
            let f = relation_module_cocycle(&g)?;
            let d = f.module().clone();
            let terms = BTreeMap::from([(-1, GModule::regular(&g)), (0, d.clone())]);
            let complex = GComplex::new(&g, terms, BTreeMap::new())?;
            let id = GHom::new(&d, &d, IntMatrix::identity(d.rank()))?;
            let alpha = pull_class(&complex, &BTreeMap::from([(0, id)]), &f)?;
            Ok(ClassComplex { name, group: g, complex, alpha })
        }
    }
}

/// The kernel `D` of the bar cover `Z[G]^{|G|−1} → I_G`, with the image of
/// `1 ∈ Ĥ^0(G, Z)` under the two connecting maps `Ĥ^0(Z) → Ĥ^1(I) → Ĥ^2(D)`.
pub fn relation_module_cocycle(g: &FiniteGroup) -> Result<Cocycle2> {
    let z = GModule::trivial_z(g);
    let aug = augmentation_sequence(g);
    let cover = first_syzygy_cover(g);
    let kern = cover.kernel();
    let d = kern.source.clone();
    let w = 3;
    let t = |m: &GModule| TateComplex::tate_module(m, w);
    let h0 = t(&z)?.cohomology(0)?;
    let one = bar_to_class(&BarCochain { degree: 0, values: vec![vec![BigInt::from(1)]] }, &h0)?;
    let h1i = t(&aug.ideal)?.cohomology(1)?;
    let d1 = connecting_map(&aug.inclusion, &aug.augmentation, &h0, &t(&aug.inclusion.target)?, &h1i)?;
    let h2d = t(&d)?.cohomology(2)?;
    let d2 = connecting_map(&kern, &cover, &h1i, &t(&cover.source)?, &h2d)?;
    let c = h2d.class_of(&d2.apply(&d1.apply(&one.coords())));
    let bar = normalized(&d, class_to_bar(&c)?);
    Cocycle2::new(&d, bar)
}

/// Module generators of `D` picked greedily from its basis, and the
/// surjection from the free module on them.
fn free_cover(d: &GModule) -> Result<GHom> {
    let g = d.group();
    let r = d.rank();
    let full = Lattice::full(r);
    let mut span = Lattice::from_generators(d.underlying().relation_cols(), r);
    let mut gens = Vec::new();
    for i in 0..r {
        let e = unit_vec(r, i);
        if span.contains(&e) {
            continue;
        }
        let mut all = span.basis().to_vec();
        all.extend(g.elements().map(|s| d.act(s, &e)));
        span = Lattice::from_generators(all, r);
        gens.push(e);
        if span.contains_lattice(&full) {
            break;
        }
    }
    let f = GModule::induced(g, &FgAbGroup::free(gens.len()));
    let k = gens.len();
    let mut cols = vec![Vec::new(); g.order() * k];
    for s in g.elements() {
        for (i, e) in gens.iter().enumerate() {
            cols[s * k + i] = d.act(s, e);
        }
    }
    let map = GHom::new(&f, d, IntMatrix::from_cols(&cols, r))?;
    if !map.hom.is_surjective() {
        return Err(Error::NotAComplex("greedy generators do not span".into()));
    }
    Ok(map)
}

/// Class in `H^2(G, C)` mapping to the class of `f` along a chain map
/// `C → M[0]` that is an isomorphism on `H^2`.
fn pull_class(complex: &GComplex, maps: &BTreeMap<i32, GHom>, f: &Cocycle2) -> Result<CohClass> {
    let tc = TateComplex::ordinary(complex, 2)?;
    let td = tc.with_coefficients(&GComplex::concentrated(f.module(), 0))?;
    let (src, tgt) = (tc.cohomology(2)?, td.cohomology(2)?);
    let map = chain_map_induced(&src, &tgt, maps)?;
    if !map.is_iso() {
        return Err(Error::ClassComplexUnverified("comparison map is not an isomorphism on H^2".into()));
    }
    let b = bar_to_class(f.values(), &tgt)?;
    let pre = map.preimage(&b.coords()).expect("isomorphism");
    Ok(src.class_of(&pre))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse_back() {
        for spec in FormationSpec::builtins() {
            assert_eq!(spec.label().parse::<FormationSpec>().unwrap(), spec);
        }
        assert!("finite_field(x)".parse::<FormationSpec>().is_err());
        assert!("cyclotomic(3)".parse::<FormationSpec>().is_err());
    }

    #[test]
    fn finite_field_and_negative_control() {
        let cc = synthetic_formation(&FormationSpec::FiniteField { n: 3 }).unwrap();
        assert!(verify_class_complex(&cc).unwrap().passed);
        let v4 = FiniteGroup::klein4();
        let z = GModule::trivial_z(&v4);
        let h2 = crate::ext::module_h2(&z);
        let bad = ClassComplex { name: "V4/Z".into(), group: v4, complex: GComplex::concentrated(&z, 0), alpha: h2.generator(0) };
        let rep = verify_class_complex(&bad).unwrap();
        assert!(!rep.passed);
        let whole = rep.rows.iter().find(|r| r.order == 4).unwrap();
        assert_eq!(whole.h2, "Z/2 + Z/2");
    }

    #[test]
    fn relation_module_v4_rank_and_gate() {
        let cc = synthetic_formation(&FormationSpec::RelationModule { group: "V4".into() }).unwrap();
        assert_eq!(cc.complex.term(0).rank(), 9);
        assert!(verify_class_complex(&cc).unwrap().passed);
    }

    #[test]
    fn two_term_formations() {
        for spec in [FormationSpec::PresentedTwoTerm { group: "C3".into() }, FormationSpec::PaddedTwoTerm { group: "C2".into() }] {
            let cc = synthetic_formation(&spec).unwrap();
            assert_eq!(cc.complex.range(), Some((-1, 0)));
            assert!(verify_class_complex(&cc).unwrap().passed, "{}", spec.label());
        }
    }
}
