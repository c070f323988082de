//! Dimension shifting: modules up and down through induced modules, and
//! complexes collapsed to a single module by bottom-up pushouts.
//!
//! Everything is checked only on a finite window of degrees; certificates
//! say so.

use crate::error::{Error, Result};
use crate::groupmod::{induced_embedding, induced_surjection, GComplex, GHom, GModule, Subgroup};
use crate::intlin::{AbHom, IntMatrix};
use crate::tate::{connecting_map, TateComplex, TateGroup};
use serde::Serialize;
use std::collections::BTreeMap;

pub const DEFAULT_RANK_BUDGET: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub enum ShiftInput {
    Module(GModule),
    Complex(GComplex),
}

/// One pushout replacement: `before → after` is the identity outside
/// degrees `degree` and `degree + 1`.
#[derive(Clone, Debug)]
pub struct PushoutStep {
    pub degree: i32,
    pub before: GComplex,
    pub after: GComplex,
    pub maps: BTreeMap<i32, GHom>,
    /// per degree, whether the induced map on homology is an isomorphism
    pub homology_iso: Vec<(i32, bool)>,
    /// Presentation map from the new term in degree `degree + 1` back onto
    /// the old one; well defined modulo the image of the old differential.
    pub retraction: IntMatrix,
}

#[derive(Clone, Debug)]
pub enum ShiftStep {
    /// `0 → A' → B → A'' → 0`, exactness checked
    Sequence { inclusion: GHom, projection: GHom, exact: bool },
    Pushout(PushoutStep),
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TableRow {
    pub subgroup: String,
    pub q: i32,
    pub input: String,
    pub output: String,
    /// set when an explicit map between the two groups was checked
    pub iso: Option<bool>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct ShiftTable {
    pub rows: Vec<TableRow>,
}

impl ShiftTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(|r| !r.ok)
    }
}

/// `Ĥ^q(H, input) ≅ Ĥ^{q − degree}(H, output)` for every subgroup and every
/// `|q| < window`.
#[derive(Clone, Debug)]
pub struct ShiftCertificate {
    pub input: ShiftInput,
    pub output: GModule,
    pub degree: i32,
    pub window: usize,
    pub steps: Vec<ShiftStep>,
    pub table: ShiftTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub kind: String,
    pub degree: Option<i32>,
    pub ranks: Vec<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSummary {
    pub output: String,
    pub output_rank: usize,
    pub degree: i32,
    pub window: usize,
    pub steps: Vec<StepSummary>,
    pub table: ShiftTable,
    pub passed: bool,
    pub note: String,
}

impl ShiftCertificate {
    pub fn passed(&self) -> bool {
        self.table.passed()
            && self.steps.iter().all(|s| match s {
                ShiftStep::Sequence { exact, .. } => *exact,
                ShiftStep::Pushout(p) => p.homology_iso.iter().all(|x| x.1),
            })
    }

    pub fn summary(&self) -> CertificateSummary {
        let steps = self
            .steps
            .iter()
            .map(|s| match s {
                ShiftStep::Sequence { inclusion, projection, exact } => StepSummary {
                    kind: "sequence".into(),
                    degree: None,
                    ranks: vec![inclusion.source.rank(), inclusion.target.rank(), projection.target.rank()],
                    ok: *exact,
                },
                ShiftStep::Pushout(p) => StepSummary {
                    kind: "pushout".into(),
                    degree: Some(p.degree),
                    ranks: p.after.terms().values().map(|m| m.rank()).collect(),
                    ok: p.homology_iso.iter().all(|x| x.1),
                },
            })
            .collect();
        CertificateSummary {
            output: self.output.underlying().to_string(),
            output_rank: self.output.rank(),
            degree: self.degree,
            window: self.window,
            steps,
            table: self.table.clone(),
            passed: self.passed(),
            note: format!("checked for |q| <= {} only", self.window.saturating_sub(1)),
        }
    }
}

fn window_degrees(window: usize) -> Result<Vec<i32>> {
    if window == 0 {
        return Err(Error::WindowTooSmall { degree: 0, needed: 1, window });
    }
    let w = window as i32 - 1;
    Ok((-w..=w).collect())
}

/// Resolution length covering every block of `Ĥ^q(C)` for `q` in `qs`.
fn window_for(c: &GComplex, qs: &[i32]) -> usize {
    let (lo, hi) = c.range().unwrap_or((0, 0));
    qs.iter().flat_map(|&q| [(q - lo).unsigned_abs(), (q - hi).unsigned_abs()]).max().unwrap_or(0) as usize + 1
}

fn tate_groups(c: &GComplex, h: &Subgroup, qs: &[i32]) -> Result<Vec<TateGroup>> {
    let t = TateComplex::tate_over(h, c, window_for(c, qs))?;
    qs.iter().map(|&q| t.cohomology(q)).collect()
}

/// `0 → A' → B → A'' → 0` is exact.
pub fn is_short_exact(inc: &GHom, proj: &GHom) -> bool {
    if !proj.hom.after(&inc.hom).is_zero() || !inc.hom.is_injective() || !proj.hom.is_surjective() {
        return false;
    }
    let k = proj.hom.kio();
    k.kernel_incl.matrix().col_vecs().iter().all(|v| inc.hom.preimage(v).is_some())
}

/// Up: `A' = coker(A → Ind A)`. Down: `A' = ker(Ind A → A)`. The connecting
/// maps are checked to be isomorphisms over every subgroup for `|q| < window`.
pub fn shift_module(a: &GModule, direction: Direction, window: usize) -> Result<(GModule, ShiftCertificate)> {
    let qs = window_degrees(window)?;
    let (inc, proj, out) = match direction {
        Direction::Up => {
            let inc = induced_embedding(a);
            let proj = inc.cokernel();
            let out = proj.target.clone();
            (inc, proj, out)
        }
        Direction::Down => {
            let proj = induced_surjection(a);
            let inc = proj.kernel();
            let out = inc.source.clone();
            (inc, proj, out)
        }
    };
    let exact = is_short_exact(&inc, &proj);
    // Ĥ^q(input) ≅ Ĥ^{q − degree}(output)
    let degree = match direction {
        Direction::Up => 1,
        Direction::Down => -1,
    };
    let mut rows = Vec::new();
    for h in a.group().subgroups()? {
        let (ih, ph) = (inc.restrict(&h), proj.restrict(&h));
        let w = qs.iter().map(|q| q.unsigned_abs() as usize + 2).max().unwrap_or(1);
        let sub = TateComplex::tate_module(&ih.source, w)?;
        let mid = TateComplex::tate_module(&ih.target, w)?;
        let quo = TateComplex::tate_module(&ph.target, w)?;
        for &q in &qs {
            // δ : Ĥ^{q−1}(quotient) → Ĥ^q(sub)
            let src = quo.cohomology(q - 1)?;
            let tgt = sub.cohomology(q)?;
            let delta = connecting_map(&ih, &ph, &src, &mid, &tgt)?;
            let iso = delta.is_iso();
            let (input, output, qq) = match direction {
                Direction::Up => (tgt.to_string(), src.to_string(), q),
                Direction::Down => (src.to_string(), tgt.to_string(), q - 1),
            };
            rows.push(TableRow { subgroup: h.label(), q: qq, input, output, iso: Some(iso), ok: iso });
        }
    }
    let cert = ShiftCertificate {
        input: ShiftInput::Module(a.clone()),
        output: out.clone(),
        degree,
        window,
        steps: vec![ShiftStep::Sequence { inclusion: inc, projection: proj, exact }],
        table: ShiftTable { rows },
    };
    Ok((out, cert))
}

/// Map on `ℋ^q` induced by a degreewise chain map.
pub fn homology_map(before: &GComplex, after: &GComplex, maps: &BTreeMap<i32, GHom>, q: i32) -> Result<AbHom> {
    let hb = before.homology(q);
    let ha = after.homology(q);
    let k = hb.sub.group.canonical_rank();
    let cols: Result<Vec<_>> = (0..k)
        .map(|i| {
            let x = hb.sub.rep(i);
            let y = match maps.get(&q) {
                Some(f) => f.matrix().mul_vec(&x),
                None => crate::intlin::zero_vec(after.term(q).rank()),
            };
            ha.sub.reduce(&y).ok_or_else(|| Error::NotAComplex("chain map does not preserve cycles".into()))
        })
        .collect();
    AbHom::new(hb.sub.group.canonical_form(), ha.sub.group.canonical_form(), IntMatrix::from_cols(&cols?, ha.sub.group.canonical_rank()))
}

fn stack_rows(top: &IntMatrix, bottom: &IntMatrix) -> IntMatrix {
    top.vstack(bottom)
}

/// Replace the term in degree `k` by its induced module and the term in
/// degree `k + 1` by the pushout.
fn pushout_step(cur: &GComplex, k: i32, budget: usize) -> Result<PushoutStep> {
    let g = cur.group();
    let x = cur.term(k);
    let y = cur.term(k + 1);
    let (rx, ry) = (x.rank(), y.rank());
    let rt = g.order() * rx;
    if rt + ry > budget {
        return Err(Error::RankBudgetExceeded { rank: rt + ry, budget });
    }
    let iota = induced_embedding(&x);
    let t = iota.target.clone();
    let dxy = cur.diff(k);
    let mut rels: Vec<Vec<_>> = Vec::new();
    let pad = |v: Vec<_>, at: usize| {
        let mut w = vec![Default::default(); ry + rt];
        for (i, e) in v.into_iter().enumerate() {
            w[at + i] = e;
        }
        w
    };
    for r in y.underlying().relation_cols() {
        rels.push(pad(r, 0));
    }
    for r in t.underlying().relation_cols() {
        rels.push(pad(r, ry));
    }
    for i in 0..rx {
        let mut v = dxy.col(i);
        v.extend(iota.matrix().col(i).into_iter().map(|e| -e));
        rels.push(v);
    }
    let action = g.elements().map(|s| y.action(s).block_diag(t.action(s))).collect();
    let raw = GModule::new_unchecked(g, crate::intlin::FgAbGroup::from_relation_cols(ry + rt, &rels), action);
    let (p, to, from) = raw.canonical_presentation();
    let inc_y = stack_rows(&IntMatrix::identity(ry), &IntMatrix::zeros(rt, ry));
    let inc_t = stack_rows(&IntMatrix::zeros(ry, rt), &IntMatrix::identity(rt));
    let mut terms = cur.terms().clone();
    terms.insert(k, t.clone());
    terms.insert(k + 1, p.clone());
    let mut diffs = BTreeMap::new();
    for &q in cur.terms().keys() {
        diffs.insert(q, cur.diff(q));
    }
    diffs.insert(k - 1, iota.matrix().mul(&cur.diff(k - 1)));
    diffs.insert(k, to.matrix().mul(&inc_t));
    diffs.insert(k + 1, cur.diff(k + 1).hstack(&IntMatrix::zeros(cur.term(k + 2).rank(), rt)).mul(from.matrix()));
    let mut full_terms = terms.clone();
    for q in [k - 1, k + 2] {
        full_terms.entry(q).or_insert_with(|| cur.term(q));
    }
    let diffs = diffs
        .into_iter()
        .filter(|(q, m)| {
            let src = full_terms.get(q).map_or(0, |m| m.rank());
            let tgt = full_terms.get(&(q + 1)).map_or(0, |m| m.rank());
            m.cols() == src && m.rows() == tgt && src > 0 && tgt > 0
        })
        .collect();
    let after = GComplex::new(g, terms, diffs)?;
    let mut maps = BTreeMap::new();
    for (&q, m) in cur.terms().iter().filter(|(&q, _)| q != k && q != k + 1) {
        maps.insert(q, GHom::new(m, &after.term(q), IntMatrix::identity(m.rank()))?);
    }
    maps.insert(k, iota.clone());
    maps.insert(k + 1, GHom::new(&y, &p, to.matrix().mul(&inc_y))?);
    let (lo, hi) = cur.range().expect("nonzero complex");
    let homology_iso = (lo - 1..=hi + 1)
        .map(|q| Ok((q, homology_map(cur, &after, &maps, q)?.is_iso())))
        .collect::<Result<Vec<_>>>()?;
    let retraction = IntMatrix::identity(ry).hstack(&IntMatrix::zeros(ry, rt)).mul(from.matrix());
    Ok(PushoutStep { degree: k, before: cur.clone(), after, maps, homology_iso, retraction })
}

/// Collapse a bounded complex onto its top degree `n`: a module `A` with
/// `Ĥ^q(H, C) ≅ Ĥ^{q−n}(H, A)` for all subgroups, checked for `|q| < window`.
pub fn trivialize_complex(c: &GComplex, window: usize, budget: usize) -> Result<(GModule, i32, ShiftCertificate)> {
    let Some((lo, n)) = c.range() else {
        return Err(Error::DimensionMismatch("the zero complex has no top degree".into()));
    };
    window_degrees(window)?;
    let mut cur = c.clone();
    let mut steps = Vec::new();
    for k in lo..n {
        if cur.term(k).rank() == 0 {
            continue;
        }
        let step = pushout_step(&cur, k, budget)?;
        cur = step.after.clone();
        steps.push(ShiftStep::Pushout(step));
    }
    let a = cur.term(n);
    let table = verify_shift(c, &a, n, window)?;
    let cert = ShiftCertificate {
        input: ShiftInput::Complex(c.clone()),
        output: a.clone(),
        degree: n,
        window,
        steps,
        table,
    };
    Ok((a, n, cert))
}

/// Compare `Ĥ^q(H, C)` with `Ĥ^{q−n}(H, A)` for every subgroup and `|q| < window`.
pub fn verify_shift(c: &GComplex, a: &GModule, n: i32, window: usize) -> Result<ShiftTable> {
    let qs = window_degrees(window)?;
    let shifted: Vec<i32> = qs.iter().map(|q| q - n).collect();
    let ac = GComplex::concentrated(a, 0);
    let mut rows = Vec::new();
    for h in c.group().subgroups()? {
        let lhs = tate_groups(c, &h, &qs)?;
        let rhs = tate_groups(&ac, &h, &shifted)?;
        for ((q, l), r) in qs.iter().zip(&lhs).zip(&rhs) {
            let ok = l.moduli() == r.moduli();
            rows.push(TableRow { subgroup: h.label(), q: *q, input: l.to_string(), output: r.to_string(), iso: None, ok });
        }
    }
    Ok(ShiftTable { rows })
}

/// Terms below the top degree have vanishing Tate cohomology over every
/// subgroup for `|q| < window`.
pub fn lower_terms_vanish(cert: &ShiftCertificate) -> Result<bool> {
    let Some(ShiftStep::Pushout(last)) = cert.steps.last() else { return Ok(true) };
    let qs = window_degrees(cert.window)?;
    for (&q, m) in last.after.terms() {
        if q == cert.degree {
            continue;
        }
        for h in m.group().subgroups()? {
            if tate_groups(&GComplex::concentrated(m, 0), &h, &qs)?.iter().any(|t| !t.is_trivial()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmod::{augmentation_sequence, FiniteGroup};
    use crate::intlin::{FgAbGroup, Lattice};

    #[test]
    fn up_shift_of_z_over_c2() {
        let g = FiniteGroup::cyclic(2);
        let z = GModule::trivial_z(&g);
        let (a, cert) = shift_module(&z, Direction::Up, 3).unwrap();
        assert!(cert.passed());
        let t = TateComplex::tate_module(&a, 3).unwrap();
        assert_eq!(t.cohomology(0).unwrap().to_string(), "0");
        assert_eq!(t.cohomology(1).unwrap().to_string(), "Z/2");
    }

    #[test]
    fn down_shift_kernel_is_augmentation_ideal() {
        let g = FiniteGroup::symmetric3();
        let z = GModule::trivial_z(&g);
        let (a, cert) = shift_module(&z, Direction::Down, 2).unwrap();
        assert!(cert.passed());
        let ShiftStep::Sequence { inclusion, .. } = &cert.steps[0] else { panic!() };
        let aug = augmentation_sequence(&g);
        let l1 = Lattice::from_generators(inclusion.matrix().col_vecs(), g.order());
        let l2 = Lattice::from_generators(aug.inclusion.matrix().col_vecs(), g.order());
        assert!(l1.same_as(&l2));
        assert_eq!(a.rank(), g.order() - 1);
    }

    #[test]
    fn up_then_down() {
        let g = FiniteGroup::cyclic(3);
        let z = GModule::trivial_z(&g);
        let (a1, _) = shift_module(&z, Direction::Up, 3).unwrap();
        let (a2, c2) = shift_module(&a1, Direction::Down, 3).unwrap();
        assert!(c2.passed());
        let t = verify_shift(&GComplex::concentrated(&z, 0), &a2, 0, 3).unwrap();
        assert!(t.passed());
    }

    #[test]
    fn identity_case() {
        let g = FiniteGroup::cyclic(2);
        let m = GModule::trivial(&g, FgAbGroup::from_moduli(&[2]));
        let (a, n, cert) = trivialize_complex(&GComplex::concentrated(&m, 0), 3, DEFAULT_RANK_BUDGET).unwrap();
        assert_eq!(n, 0);
        assert!(cert.steps.is_empty());
        assert_eq!(a.underlying().to_string(), "Z/2");
        assert!(cert.passed());
    }

    #[test]
    fn two_term_complexes() {
        let g = FiniteGroup::cyclic(2);
        let z = GModule::trivial_z(&g);
        let two = GHom::new(&z, &z, IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let c = GComplex::two_term(&two, -1);
        let (_, n, cert) = trivialize_complex(&c, 4, DEFAULT_RANK_BUDGET).unwrap();
        assert_eq!(n, 0);
        assert!(cert.passed(), "{:?}", cert.table.failures().collect::<Vec<_>>());
        assert!(lower_terms_vanish(&cert).unwrap());
        let row = cert.table.rows.iter().find(|r| r.q == 0 && r.subgroup == g.whole().label()).unwrap();
        assert_eq!(row.input, "Z/2");

        let reg = GModule::regular(&g);
        let zero = GHom::new(&reg, &z, IntMatrix::zeros(1, 2)).unwrap();
        let c = GComplex::two_term(&zero, -1);
        let (a, _, cert) = trivialize_complex(&c, 4, DEFAULT_RANK_BUDGET).unwrap();
        assert!(cert.passed());
        assert!(verify_shift(&GComplex::concentrated(&z, 0), &a, 0, 4).unwrap().passed());
        assert!(!verify_shift(&c, &a, 1, 4).unwrap().passed());
    }

    #[test]
    fn rank_budget() {
        let g = FiniteGroup::symmetric3();
        let z = GModule::trivial_z(&g);
        let id = GHom::new(&z, &z, IntMatrix::identity(1)).unwrap();
        let c = GComplex::two_term(&id, -1);
        assert!(matches!(trivialize_complex(&c, 2, 4), Err(Error::RankBudgetExceeded { .. })));
    }
}
