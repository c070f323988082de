//! From a verified class complex to the Weil group: the module `A(L)`,
//! the hyper-fundamental class and the per-subgroup maps `f_E`.

use super::formation::{verify_class_complex, ClassComplex, ClassComplexReport};
use crate::error::{Error, Result};
use crate::ext::{normalized, Cocycle2, ExtElement, ExtensionGroup, TransferTarget};
use crate::groupmod::{GComplex, GHom, GModule, Subgroup};
use crate::intlin::{unit_vec, zero_vec, AbHom, BigInt, FgAbGroup, IntMatrix, Lattice};
use crate::shiftmod::{trivialize_complex, ShiftCertificate, ShiftStep, DEFAULT_RANK_BUDGET};
use crate::tate::{
    bar_to_class, chain_map_induced, class_to_bar, edge_h2, push_cochain, restrict_class, solve_bar_coboundary,
    BarCochain, CohClass, TateComplex,
};
use serde::Serialize;
use std::collections::BTreeMap;

/// Window used when certifying the trivialization.
const SHIFT_WINDOW: usize = 3;

#[derive(Clone, Debug)]
pub struct WeilOptions {
    /// `W` is built from this multiple of the hyper-fundamental cocycle
    pub beta_multiple: i64,
    /// coboundary of this 1-cochain is added to the cocycle of `W`
    pub perturbation: Option<BarCochain>,
    pub rank_budget: usize,
}

impl Default for WeilOptions {
    fn default() -> Self {
        WeilOptions { beta_multiple: 1, perturbation: None, rank_budget: DEFAULT_RANK_BUDGET }
    }
}

/// Data attached to one subgroup `H`, standing for an intermediate field `E`.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub subgroup: Subgroup,
    /// `A^H` and its inclusion into `A`
    pub invariants: FgAbGroup,
    pub inv_incl: AbHom,
    /// `(T^{-1})^H → A^H`, absent when there is no term below zero
    pub lower: Option<AbHom>,
    /// `C(E) = coker(lower)`, on the generators of `A^H`
    pub ce: FgAbGroup,
    pub u: ExtensionGroup,
    pub w: ExtensionGroup,
    /// `A^H → U(L/E)^{ab}`, inverse of the transfer
    pub e: Option<AbHom>,
    /// `C(E) → W(L/E)^{ab}`
    pub f: Option<AbHom>,
    pub checks: Vec<LocalCheck>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LocalCheck {
    pub subgroup: String,
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct WeilGroupData {
    pub formation: ClassComplex,
    pub report: ClassComplexReport,
    pub shift: ShiftCertificate,
    /// the trivialized complex, with `A` in degree 0
    pub top: GComplex,
    pub a: GModule,
    /// `T^{-1} → A`
    pub lower: Option<GHom>,
    pub cl: GModule,
    /// `A ↠ C(L)`
    pub to_cl: GHom,
    pub alpha_a: Cocycle2,
    /// hyper-fundamental class, in ordinary `H^2(G, C(L))`
    pub beta: CohClass,
    pub weil: ExtensionGroup,
    pub u: ExtensionGroup,
    pub local: Vec<LocalData>,
}

impl WeilGroupData {
    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.local.iter().position(|l| l.subgroup == *h)
    }

    pub fn whole(&self) -> &LocalData {
        let n = self.formation.group.order();
        self.local.iter().find(|l| l.subgroup.order() == n).expect("whole group is a subgroup")
    }

    pub fn local_checks(&self) -> impl Iterator<Item = &LocalCheck> {
        self.local.iter().flat_map(|l| l.checks.iter())
    }
}

pub fn build_weil_group(cc: &ClassComplex) -> Result<WeilGroupData> {
    build_weil_group_with(cc, &WeilOptions::default())
}

pub fn build_weil_group_with(cc: &ClassComplex, opts: &WeilOptions) -> Result<WeilGroupData> {
    let report = verify_class_complex(cc)?;
    if !report.passed {
        let bad: Vec<&str> = report.rows.iter().filter(|r| !r.ok).map(|r| r.subgroup.as_str()).collect();
        return Err(Error::ClassComplexUnverified(format!("fails over {}", bad.join(" "))));
    }
    let g = cc.group.clone();
    let c = &cc.complex;
    let (a, n, shift) = trivialize_complex(c, SHIFT_WINDOW, opts.rank_budget)?;
    if n != 0 {
        return Err(Error::Unsupported("class complexes must have a term in degree 0".into()));
    }
    let mut top = c.clone();
    let mut tc = cc.alpha.group.complex().clone();
    let mut x = cc.alpha.cocycle.clone();
    let mut retraction = None;
    for step in &shift.steps {
        let ShiftStep::Pushout(p) = step else { continue };
        let next = tc.with_coefficients(&p.after)?;
        x = push_cochain(&tc, &next, &p.maps, 2, &x);
        tc = next;
        top = p.after.clone();
        if p.degree == -1 {
            retraction = Some(p.retraction.clone());
        }
    }
    let lower = top.terms().contains_key(&-1).then(|| top.diff_hom(-1));

    // α on A: the inclusion A[0] → top is an isomorphism on H^2
    let h2_top = tc.cohomology(2)?;
    let alpha_top = h2_top.class(x)?;
    let ta = tc.with_coefficients(&GComplex::concentrated(&a, 0))?;
    let h2_a = ta.cohomology(2)?;
    let id_a = GHom::new(&a, &top.term(0), IntMatrix::identity(a.rank()))?;
    let incl = chain_map_induced(&h2_a, &h2_top, &BTreeMap::from([(0, id_a)]))?;
    if !incl.is_iso() {
        return Err(Error::RouteMismatch("A does not carry H^2 of the complex".into()));
    }
    let pre = incl.preimage(&alpha_top.coords()).expect("isomorphism");
    let alpha_a = Cocycle2::new(&a, normalized(&a, class_to_bar(&h2_a.class_of(&pre))?))?;

    let proj = c.top_projection(0);
    let cl = proj.target.clone();
    let to_cl_m = match &retraction {
        Some(r) => proj.matrix().mul(r),
        None => proj.matrix().clone(),
    };
    let to_cl = GHom::new(&a, &cl, to_cl_m)?;

    // hyper-fundamental class: edge map against pushforward from A
    let beta = edge_h2(&cc.alpha)?;
    let pushed = bar_to_class(&alpha_a.values().map_values(&to_cl.hom), &beta.group)?;
    if pushed.coords() != beta.coords() {
        return Err(Error::RouteMismatch("edge map and pushforward from A(L) give different classes".into()));
    }
    let beta_bar = normalized(&cl, class_to_bar(&beta)?).scale(opts.beta_multiple);
    let mut wc = Cocycle2::new(&cl, beta_bar)?;
    if let Some(p) = &opts.perturbation {
        wc = wc.perturb(p)?;
    }
    let weil = ExtensionGroup::new(wc);
    let u = ExtensionGroup::new(alpha_a.clone());

    let mut data = WeilGroupData {
        formation: cc.clone(),
        report,
        shift,
        top,
        a,
        lower,
        cl,
        to_cl,
        alpha_a,
        beta,
        weil,
        u,
        local: Vec::new(),
    };
    for h in g.subgroups()? {
        let l = local_data(&data, &h)?;
        data.local.push(l);
    }
    Ok(data)
}

/// `(T^{-1})^H → A^H` restricted from the lower differential.
pub(crate) fn invariant_map(d: &GHom, h: &Subgroup, tgt_incl: &AbHom, tgt: &FgAbGroup) -> Result<AbHom> {
    let (tinv, tincl) = d.source.invariants(h);
    let cols: Option<Vec<Vec<BigInt>>> =
        tincl.matrix().col_vecs().iter().map(|v| tgt_incl.preimage(&d.hom.apply(v))).collect();
    let cols = cols.ok_or_else(|| Error::NotEquivariant("invariants do not map to invariants".into()))?;
    AbHom::new(tinv, tgt.clone(), IntMatrix::from_cols(&cols, tgt.ngens()))
}

/// Cokernel presentation on the generators of the target.
pub(crate) fn cokernel_on(f: Option<&AbHom>, tgt: &FgAbGroup) -> FgAbGroup {
    match f {
        Some(f) => FgAbGroup::new(tgt.ngens(), f.matrix().hstack(tgt.relations())),
        None => tgt.clone(),
    }
}

/// Transfer `E^{ab} → A`, read in the coordinates of `A^H`.
pub(crate) fn transfer_to_invariants(e: &ExtensionGroup, inv: &FgAbGroup, incl: &AbHom) -> Result<AbHom> {
    let r = e.module().rank();
    let full = Lattice::full(r);
    let t = e.transfer(&TransferTarget::Lattice(full.clone()))?;
    let basis = full.basis_matrix();
    let cols: Option<Vec<Vec<BigInt>>> =
        t.matrix().col_vecs().iter().map(|v| incl.preimage(&basis.mul_vec(v))).collect();
    let cols = cols.ok_or_else(|| Error::RouteMismatch("transfer lands outside the invariants".into()))?;
    AbHom::new(e.abelianization().group.clone(), inv.clone(), IntMatrix::from_cols(&cols, inv.ngens()))
}

fn local_data(d: &WeilGroupData, h: &Subgroup) -> Result<LocalData> {
    let label = h.label();
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool, detail: String| {
        checks.push(LocalCheck { subgroup: label.clone(), check: name.into(), ok, detail });
    };
    let (inv, inv_incl) = d.a.invariants(h);
    let lower = d.lower.as_ref().map(|t| invariant_map(t, h, &inv_incl, &inv)).transpose()?;
    let ce = cokernel_on(lower.as_ref(), &inv);

    // C(E) against ordinary H^0 over H
    let direct = TateComplex::ordinary_over(h, &d.formation.complex, 0)?.cohomology(0)?;
    check("C(E) direct", direct.group().isomorphic(&ce), format!("{} vs {}", ce, direct));

    // norms of the lower image against the image of the lower invariants
    if let (Some(t), Some(lo)) = (&d.lower, &lower) {
        let r = d.a.rank();
        let mut l1: Vec<Vec<BigInt>> = (0..t.source.rank())
            .map(|i| {
                let y = t.hom.apply(&unit_vec(t.source.rank(), i));
                h.elements().iter().fold(zero_vec(r), |acc, &s| crate::intlin::vec_add(&acc, &d.a.act(s, &y)))
            })
            .collect();
        let mut l2: Vec<Vec<BigInt>> = lo.matrix().col_vecs().iter().map(|v| inv_incl.apply(v)).collect();
        l1.extend(d.a.underlying().relation_cols());
        l2.extend(d.a.underlying().relation_cols());
        let same = Lattice::from_generators(l1, r).same_as(&Lattice::from_generators(l2, r));
        check("norm image", same, String::new());
    }

    let (hg, _) = h.as_group();
    let u = d.u.subextension(h);
    let w = d.weil.subextension(h);

    // subgroup extension carries the restricted class
    let res = restrict_class(&d.weil.cocycle_class(), h)?;
    let via_bar = bar_to_class(&class_to_bar(&res)?, &w.cocycle_class().group)?;
    check("restricted class", via_bar.coords() == w.cocycle_class().coords(), String::new());

    let transfer = transfer_to_invariants(&u, &inv, &inv_incl)?;
    let e = transfer.inverse();
    check("transfer bijective", e.is_some(), transfer.target().to_string());

    let diff = u.cocycle().values().map_values(&d.to_cl.hom).add(&w.cocycle().values().scale(-1));
    let clh = d.cl.restrict(h);
    let c = solve_bar_coboundary(&clh, &diff);
    check("U maps to W", c.is_some(), String::new());

    let mut f = None;
    if let (Some(e), Some(c)) = (&e, &c) {
        let n = hg.order();
        let mut cols: Vec<Vec<BigInt>> = (0..d.a.rank())
            .map(|k| w.ab_project(&ExtElement { a: d.to_cl.hom.apply(&unit_vec(d.a.rank(), k)), sigma: hg.identity() }))
            .collect();
        cols.extend(hg.elements().map(|s| w.ab_project(&ExtElement { a: c.get(n, &[s]).to_vec(), sigma: s })));
        let wab = w.abelianization().group.clone();
        let psi = AbHom::new(u.abelianization().group.clone(), wab.clone(), IntMatrix::from_cols(&cols, wab.ngens()))?;
        match AbHom::new(ce.clone(), wab, psi.matrix().mul(e.matrix())) {
            Ok(fe) => {
                check("f_E bijective", fe.is_iso(), format!("{} -> {}", ce, fe.target()));
                if fe.is_iso() {
                    f = Some(fe);
                }
            }
            Err(err) => check("f_E defined", false, err.to_string()),
        }
    }
    Ok(LocalData { subgroup: h.clone(), invariants: inv, inv_incl, lower, ce, u, w, e, f, checks })
}
