//! Cup products with degree-two classes, the Nakayama map, and instance
//! checks of the Tate–Nakayama isomorphism criterion.

use crate::error::{Error, Result};
use crate::ext::Cocycle2;
use crate::groupmod::{aug_index, augmentation_ideal, augmentation_sequence, FiniteGroup, GHom, GModule, Subgroup};
use crate::intlin::{vec_add, vec_axpy, zero_vec, AbHom, BigInt, ColumnEchelon, FgAbGroup, IntMatrix};
use crate::tate::{bar_to_class, class_to_bar, connecting_map, module_map_induced, BarCochain, TateComplex, TateGroup};
use num_traits::{One, Zero};
use serde::Serialize;

/// Bilinear `A × B → C`, given on generators: `table[i·rank B + j] = a_i·b_j`.
#[derive(Clone, Debug)]
pub struct ModulePairing {
    pub a: GModule,
    pub b: GModule,
    pub c: GModule,
    table: Vec<Vec<BigInt>>,
}

impl ModulePairing {
    /// Checks that relations pair to zero and `σ(a·b) = σa·σb` on generators.
    pub fn new(a: &GModule, b: &GModule, c: &GModule, table: Vec<Vec<BigInt>>) -> Result<Self> {
        if a.group() != b.group() || a.group() != c.group() {
            return Err(Error::DimensionMismatch("pairing over different groups".into()));
        }
        if table.len() != a.rank() * b.rank() || table.iter().any(|v| v.len() != c.rank()) {
            return Err(Error::DimensionMismatch("pairing table has the wrong shape".into()));
        }
        let p = ModulePairing { a: a.clone(), b: b.clone(), c: c.clone(), table };
        let cz = c.underlying();
        let unit = |n: usize, i: usize| crate::intlin::unit_vec(n, i);
        for r in a.underlying().relation_cols() {
            for j in 0..b.rank() {
                if !cz.is_zero_elem(&p.apply(&r, &unit(b.rank(), j))) {
                    return Err(Error::NotEquivariant("pairing is not defined on A".into()));
                }
            }
        }
        for r in b.underlying().relation_cols() {
            for i in 0..a.rank() {
                if !cz.is_zero_elem(&p.apply(&unit(a.rank(), i), &r)) {
                    return Err(Error::NotEquivariant("pairing is not defined on B".into()));
                }
            }
        }
        for s in a.group().elements() {
            for i in 0..a.rank() {
                for j in 0..b.rank() {
                    let (x, y) = (unit(a.rank(), i), unit(b.rank(), j));
                    let lhs = c.act(s, &p.apply(&x, &y));
                    let rhs = p.apply(&a.act(s, &x), &b.act(s, &y));
                    if !cz.eq_elem(&lhs, &rhs) {
                        return Err(Error::NotEquivariant(format!("pairing fails at element {s}")));
                    }
                }
            }
        }
        Ok(p)
    }

    /// `A × Z → A`, `(a, n) ↦ n a`.
    pub fn scalar(a: &GModule) -> Self {
        let r = a.rank();
        let table = (0..r).map(|i| crate::intlin::unit_vec(r, i)).collect();
        ModulePairing { a: a.clone(), b: GModule::trivial_z(a.group()), c: a.clone(), table }
    }

    pub fn apply(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let rb = self.b.rank();
        let mut out = zero_vec(self.c.rank());
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                vec_axpy(&mut out, &(xi * yj), &self.table[i * rb + j]);
            }
        }
        out
    }

    pub fn restrict(&self, h: &Subgroup) -> Self {
        ModulePairing { a: self.a.restrict(h), b: self.b.restrict(h), c: self.c.restrict(h), table: self.table.clone() }
    }
}

/// Source of the Nakayama map: generators are the group elements, relations
/// `[σ] + [τ] − [στ]`.
pub fn abelianization_of(g: &FiniteGroup) -> FgAbGroup {
    let n = g.order();
    let mut rels = Vec::new();
    for s in g.elements() {
        for t in g.elements() {
            let mut v = zero_vec(n);
            v[s] += 1;
            v[t] += 1;
            v[g.mul(s, t)] -= 1;
            rels.push(v);
        }
    }
    FgAbGroup::from_relation_cols(n, &rels)
}

/// `Ĥ^0(G, A)`.
pub fn h0(a: &GModule) -> Result<TateGroup> {
    TateComplex::tate_module(a, 1)?.cohomology(0)
}

/// `σ ↦ Σ_τ f(τ, σ)` from `G^{ab}` to `Ĥ^0(G, A)`.
pub fn nakayama_map(f: &Cocycle2) -> Result<AbHom> {
    let g = f.group();
    let tgt = h0(f.module())?;
    let cols: Result<Vec<Vec<BigInt>>> = g
        .elements()
        .map(|s| {
            let v = g.elements().fold(zero_vec(f.module().rank()), |acc, t| vec_add(&acc, f.value(t, s)));
            let bar = BarCochain { degree: 0, values: vec![v] };
            Ok(bar_to_class(&bar, &tgt)?.coords())
        })
        .collect();
    AbHom::new(abelianization_of(g), tgt.canonical(), IntMatrix::from_cols(&cols?, tgt.moduli().len()))
}

/// Bar cup `(α ∪ x)(g_1, …, g_{q+2}) = α(g_1, g_2)·(g_1 g_2 x(g_3, …))`.
pub fn bar_cup(p: &ModulePairing, f: &BarCochain, x: &BarCochain) -> BarCochain {
    let g = p.a.group();
    let n = g.order();
    let q = x.degree;
    let tail = n.pow(q as u32);
    let values = (0..n * n * tail)
        .map(|i| {
            let (g1, g2, rest) = (i / (n * tail), (i / tail) % n, i % tail);
            let fa = &f.values[g1 * n + g2];
            if fa.iter().all(|v| v.is_zero()) {
                return zero_vec(p.c.rank());
            }
            p.apply(fa, &p.b.act(g.mul(g1, g2), &x.values[rest]))
        })
        .collect();
    BarCochain { degree: q + 2, values }
}

/// `M ⊗ B` with diagonal action, for `M` free over `Z`; generator
/// `m_i ⊗ b_j` has index `i·rank B + j`.
pub fn tensor(m: &GModule, b: &GModule) -> GModule {
    assert!(m.underlying().relations().is_zero(), "left factor must be free");
    let (rm, rb) = (m.rank(), b.rank());
    let rels: Vec<Vec<BigInt>> = (0..rm)
        .flat_map(|i| {
            b.underlying().relation_cols().into_iter().map(move |r| {
                let mut v = zero_vec(rm * rb);
                v[i * rb..(i + 1) * rb].clone_from_slice(&r);
                v
            })
        })
        .collect();
    let action = m.group().elements().map(|s| kron(m.action(s), b.action(s))).collect();
    GModule::new_unchecked(m.group(), FgAbGroup::from_relation_cols(rm * rb, &rels), action)
}

fn kron(x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::zeros(x.rows() * y.rows(), x.cols() * y.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let c = x.get(i, j);
            if !c.is_zero() {
                out.paste(i * y.rows(), j * y.cols(), &y.scale(c));
            }
        }
    }
    out
}

/// `f ⊗ id_B`.
pub fn tensor_map(f: &GHom, b: &GModule) -> GHom {
    let src = tensor(&f.source, b);
    let tgt = tensor(&f.target, b);
    GHom::new(&src, &tgt, kron(f.matrix(), &IntMatrix::identity(b.rank()))).expect("tensor of equivariant maps")
}

/// Data for the degree-raising route: the two short exact sequences
/// `0 → I⊗B → Z[G]⊗B → B → 0` and `0 → D⊗B → F⊗B → I⊗B → 0` (with `F` free
/// on the symbols `[g]`, `g ≠ 1`, and `D` the kernel onto `I`), and the map
/// `D⊗B → C` that the cocycle defines.
#[derive(Clone, Debug)]
pub struct ShiftRoute {
    pub inc1: GHom,
    pub proj1: GHom,
    pub inc2: GHom,
    pub proj2: GHom,
    pub push: GHom,
}

/// Free module on `[g]`, `g ≠ 1`, and its map onto the augmentation ideal.
pub fn first_syzygy_cover(g: &FiniteGroup) -> GHom {
    let n = g.order();
    let ideal = augmentation_ideal(g);
    let f1 = GModule::induced(g, &FgAbGroup::free(n - 1));
    let mut m = IntMatrix::zeros(n - 1, n * (n - 1));
    for t in g.elements() {
        for x in g.nonidentity() {
            let k = aug_index(g, x).expect("non-identity");
            let col = ideal.act(t, &crate::intlin::unit_vec(n - 1, k));
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, t * (n - 1) + k, v);
            }
        }
    }
    GHom::new(&f1, &ideal, m).expect("cover is equivariant")
}

impl ShiftRoute {
    pub fn new(pairing: &ModulePairing, f: &Cocycle2) -> Result<Self> {
        let g = pairing.a.group().clone();
        let n = g.order();
        let b = &pairing.b;
        let aug = augmentation_sequence(&g);
        let inc1 = tensor_map(&aug.inclusion, b);
        let mut pm = IntMatrix::zeros(b.rank(), n * b.rank());
        for s in g.elements() {
            pm.paste(0, s * b.rank(), &IntMatrix::identity(b.rank()));
        }
        let proj1 = GHom::new(&inc1.target, b, pm)?;
        let cover = first_syzygy_cover(&g);
        let kern = cover.kernel();
        // ∂(τ[g|h]) = τg[h] − τ[gh] + τ[g], degenerate symbols dropped
        let m1 = n - 1;
        let slot = |t: usize, x: usize| aug_index(&g, x).map(|k| t * m1 + k);
        let mut d2 = IntMatrix::zeros(n * m1, n * m1 * m1);
        let mut symbols = Vec::new();
        for t in g.elements() {
            for x in g.nonidentity() {
                for y in g.nonidentity() {
                    let col = symbols.len();
                    symbols.push((t, x, y));
                    for (pos, c) in [(slot(g.mul(t, x), y), 1i64), (slot(t, g.mul(x, y)), -1), (slot(t, x), 1)] {
                        if let Some(r) = pos {
                            d2.add_at(r, col, &BigInt::from(c));
                        }
                    }
                }
            }
        }
        let ech = ColumnEchelon::new(&d2, true);
        let a = &pairing.a;
        let phi_cols: Result<Vec<Vec<BigInt>>> = kern
            .matrix()
            .col_vecs()
            .iter()
            .map(|v| {
                let x = ech.solve(v).ok_or_else(|| Error::NotAComplex("syzygy is not a boundary".into()))?;
                let mut out = zero_vec(a.rank());
                for (c, &(t, gx, gy)) in x.iter().zip(&symbols) {
                    if !c.is_zero() {
                        vec_axpy(&mut out, c, &a.act(t, f.value(gx, gy)));
                    }
                }
                Ok(out)
            })
            .collect();
        let phi = IntMatrix::from_cols(&phi_cols?, a.rank());
        let inc2 = tensor_map(&kern, b);
        let proj2 = tensor_map(&cover, b);
        let rb = b.rank();
        let push_cols: Vec<Vec<BigInt>> = (0..kern.source.rank())
            .flat_map(|k| {
                let phik = phi.col(k);
                (0..rb).map(move |j| (phik.clone(), j))
            })
            .map(|(phik, j)| pairing.apply(&phik, &crate::intlin::unit_vec(rb, j)))
            .collect();
        let push = GHom::new(&inc2.source, &pairing.c, IntMatrix::from_cols(&push_cols, pairing.c.rank()))?;
        Ok(ShiftRoute { inc1, proj1, inc2, proj2, push })
    }

    /// `Ĥ^q(H, B) → Ĥ^{q+2}(H, C)` through the two connecting maps.
    pub fn cup(&self, h: &Subgroup, q: i32, window: usize) -> Result<AbHom> {
        let r = |f: &GHom| f.restrict(h);
        let (i1, p1, i2, p2, push) = (r(&self.inc1), r(&self.proj1), r(&self.inc2), r(&self.proj2), r(&self.push));
        let t = |m: &GModule| TateComplex::tate_module(m, window);
        let b = t(&p1.target)?.cohomology(q)?;
        let ib = t(&i1.source)?.cohomology(q + 1)?;
        let d1 = connecting_map(&i1, &p1, &b, &t(&i1.target)?, &ib)?;
        let db = t(&i2.source)?.cohomology(q + 2)?;
        let d2 = connecting_map(&i2, &p2, &ib, &t(&i2.target)?, &db)?;
        let c = t(&push.target)?.cohomology(q + 2)?;
        let pushed = module_map_induced(&db, &c, &push)?;
        Ok(pushed.after(&d2.after(&d1)).scale(SHIFT_ROUTE_SIGN))
    }
}

/// Orientation of the connecting-map route relative to the bar cup.
const SHIFT_ROUTE_SIGN: i64 = 1;

/// Cup with `Res_H α` from `Ĥ^q(H, B)` to `Ĥ^{q+2}(H, C)`: the bar formula
/// for `q ≥ 0`, the connecting-map route below.
pub fn cup_with_h2(p: &ModulePairing, f: &Cocycle2, q: i32, h: &Subgroup, window: usize) -> Result<AbHom> {
    if q < 0 {
        return ShiftRoute::new(p, f)?.cup(h, q, window);
    }
    bar_cup_map(p, f, q, h, window)
}

/// The bar route alone.
pub fn bar_cup_map(p: &ModulePairing, f: &Cocycle2, q: i32, h: &Subgroup, window: usize) -> Result<AbHom> {
    if q < 0 {
        return Err(Error::Unsupported("bar cup in negative degrees".into()));
    }
    let g = f.group();
    let (hg, emb) = h.as_group();
    let ph = p.restrict(h);
    let fh = f.values().pullback(g.order(), &hg, &emb);
    let src = TateComplex::tate_module(&ph.b, window)?.cohomology(q)?;
    let tgt = TateComplex::tate_module(&ph.c, window)?.cohomology(q + 2)?;
    let cols: Result<Vec<Vec<BigInt>>> = (0..src.moduli().len())
        .map(|i| {
            let x = class_to_bar(&src.generator(i))?;
            Ok(bar_to_class(&bar_cup(&ph, &fh, &x), &tgt)?.coords())
        })
        .collect();
    AbHom::new(src.canonical(), tgt.canonical(), IntMatrix::from_cols(&cols?, tgt.moduli().len()))
}

/// `G^{ab} → Ĥ^{-2}(G, Z)`: `σ` goes to the class whose connecting image in
/// `Ĥ^{-1}(G, I_G) = I_G/I_G^2` is `σ − 1`.
pub fn abelianization_to_h_minus2(g: &FiniteGroup, window: usize) -> Result<AbHom> {
    let aug = augmentation_sequence(g);
    let z = TateComplex::tate_module(&aug.augmentation.target, window)?.cohomology(-2)?;
    let ideal = TateComplex::tate_module(&aug.ideal, window)?.cohomology(-1)?;
    let mid = TateComplex::tate_module(&aug.inclusion.target, window)?;
    let delta = connecting_map(&aug.inclusion, &aug.augmentation, &z, &mid, &ideal)?;
    let inv = delta.inverse().ok_or_else(|| Error::RouteMismatch("connecting map is not invertible".into()))?;
    let n = g.order();
    let cols: Result<Vec<Vec<BigInt>>> = g
        .elements()
        .map(|s| {
            let mut x = zero_vec(n - 1);
            if let Some(k) = aug_index(g, s) {
                x[k] = BigInt::one();
            }
            let c = ideal.class(x)?;
            Ok(inv.apply(&c.coords()))
        })
        .collect();
    AbHom::new(abelianization_of(g), z.canonical(), IntMatrix::from_cols(&cols?, z.moduli().len()))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CupRow {
    pub subgroup: String,
    pub q: i32,
    pub source: String,
    pub target: String,
    /// what was required: "surjective", "bijective", "injective" or "iso"
    pub check: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TateNakayamaReport {
    pub q0: i32,
    pub hypothesis: Vec<CupRow>,
    pub hypothesis_ok: bool,
    /// empty when the hypothesis fails
    pub conclusion: Vec<CupRow>,
    pub conclusion_ok: bool,
    pub note: String,
}

impl TateNakayamaReport {
    pub fn passed(&self) -> bool {
        self.hypothesis_ok && self.conclusion_ok
    }
}

/// Sylow subgroups for every prime dividing the order.
pub fn sylow_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    let n = g.order();
    let subs = g.subgroups()?;
    let mut out = Vec::new();
    for p in crate::groupmod::prime_factors(n) {
        let mut pp = 1;
        while n.is_multiple_of(pp * p) {
            pp *= p;
        }
        out.extend(subs.iter().filter(|h| h.order() == pp).cloned());
    }
    Ok(out)
}

fn window_for(qs: &[i32]) -> usize {
    qs.iter().flat_map(|&q| [q, q + 1, q + 2]).map(|d| d.unsigned_abs() as usize + 1).max().unwrap_or(1)
}

fn cup_row(p: &ModulePairing, f: &Cocycle2, route: &Option<ShiftRoute>, h: &Subgroup, q: i32, check: &str) -> Result<CupRow> {
    let w = window_for(&[q]);
    let map = match route {
        Some(r) if q < 0 => r.cup(h, q, w)?,
        _ => cup_with_h2(p, f, q, h, w)?,
    };
    let ok = match check {
        "surjective" => map.is_surjective(),
        "injective" => map.is_injective(),
        _ => map.is_iso(),
    };
    Ok(CupRow {
        subgroup: h.label(),
        q,
        source: map.source().to_string(),
        target: map.target().to_string(),
        check: check.into(),
        ok,
    })
}

fn iso_rows(p: &ModulePairing, f: &Cocycle2, route: &Option<ShiftRoute>, qs: &[i32]) -> Result<Vec<CupRow>> {
    let mut rows = Vec::new();
    for h in f.group().subgroups()? {
        for &q in qs {
            rows.push(cup_row(p, f, route, &h, q, "iso")?);
        }
    }
    Ok(rows)
}

/// Cup with `Res_H α` checked bijective for every subgroup and every `q`.
pub fn cup_iso_table(p: &ModulePairing, f: &Cocycle2, qs: &[i32]) -> Result<Vec<CupRow>> {
    let route = if qs.iter().any(|&q| q < 0) { Some(ShiftRoute::new(p, f)?) } else { None };
    iso_rows(p, f, &route, qs)
}

/// Hypothesis on Sylow subgroups at `q0 − 1, q0, q0 + 1`, then cup with
/// `Res α` an isomorphism for every subgroup and every `q` in `qs`.
pub fn verify_tate_nakayama(p: &ModulePairing, f: &Cocycle2, q0: i32, qs: &[i32]) -> Result<TateNakayamaReport> {
    let g = f.group();
    let route = if qs.iter().chain(&[q0 - 1]).any(|&q| q < 0) { Some(ShiftRoute::new(p, f)?) } else { None };
    let mut hypothesis = Vec::new();
    for s in sylow_subgroups(g)? {
        for (q, check) in [(q0 - 1, "surjective"), (q0, "bijective"), (q0 + 1, "injective")] {
            hypothesis.push(cup_row(p, f, &route, &s, q, check)?);
        }
    }
    let hypothesis_ok = hypothesis.iter().all(|r| r.ok);
    let conclusion = if hypothesis_ok { iso_rows(p, f, &route, qs)? } else { Vec::new() };
    let conclusion_ok = hypothesis_ok && conclusion.iter().all(|r| r.ok);
    let note = match (qs.iter().min(), qs.iter().max()) {
        (Some(lo), Some(hi)) => format!("checked for {lo} <= q <= {hi} only"),
        _ => "no degrees checked".to_string(),
    };
    Ok(TateNakayamaReport { q0, hypothesis, hypothesis_ok, conclusion, conclusion_ok, note })
}
