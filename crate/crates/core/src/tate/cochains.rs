//! Cochains `Hom_G(X_p, C^j)` assembled into the total complex, and its
//! cohomology.

use super::resolution::{CompleteResolution, FreeResolution, Term};
use crate::error::{Error, Result};
use crate::groupmod::{GComplex, GHom, GModule, Subgroup};
use crate::intlin::{AbHom, BigInt, ColumnEchelon, FgAbGroup, IntMatrix, Lattice, Subquotient};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// Position of the `(p, j)` piece `Hom(X_p, C^j) ≅ (C^j)^{k}` inside a total
/// cochain vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub p: i32,
    pub j: i32,
    pub offset: usize,
    pub k: usize,
    pub r: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        self.k * self.r
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.len()
    }
}

/// Matrix of `φ ↦ (φ(∂ e_{j'}))_{j'}` on `M^{k}` for the given boundaries.
pub fn coboundary_matrix(m: &GModule, bnd: &[Vec<Term>], k_src: usize) -> IntMatrix {
    let r = m.rank();
    let mut out = IntMatrix::zeros(bnd.len() * r, k_src * r);
    for (jp, terms) in bnd.iter().enumerate() {
        for t in terms {
            let a = m.action(t.elem);
            let c = BigInt::from(t.coef);
            for x in 0..r {
                for y in 0..r {
                    let v = a.get(x, y);
                    if !v.is_zero() {
                        out.add_at(jp * r + x, t.gen * r + y, &(v * &c));
                    }
                }
            }
        }
    }
    out
}

/// Block diagonal with `k` copies of `m`.
pub fn repeat_diag(m: &IntMatrix, k: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(m.rows() * k, m.cols() * k);
    for i in 0..k {
        out.paste(i * m.rows(), i * m.cols(), m);
    }
    out
}

/// Total complex of `Hom_G(X, C)` with `D = δ + (−1)^p d_C`.
///
/// With `ordinary` set only the pieces with `p ≥ 0` are used, which is the
/// complex computing ordinary hypercohomology.
pub struct TateComplex {
    x: CompleteResolution,
    coeff: GComplex,
    ordinary: bool,
    cache: Mutex<BTreeMap<i32, Arc<Subquotient>>>,
}

impl std::fmt::Debug for TateComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TateComplex(window {}, ordinary {})", self.x.window(), self.ordinary)
    }
}

impl TateComplex {
    pub fn new(x: CompleteResolution, coeff: &GComplex, ordinary: bool) -> Result<Arc<Self>> {
        if x.group() != coeff.group() {
            return Err(Error::DimensionMismatch("resolution and coefficients over different groups".into()));
        }
        Ok(Arc::new(TateComplex { x, coeff: coeff.clone(), ordinary, cache: Mutex::new(BTreeMap::new()) }))
    }

    /// Tate complex over the whole group of the coefficients.
    pub fn tate(coeff: &GComplex, window: usize) -> Result<Arc<Self>> {
        Self::new(CompleteResolution::new(coeff.group(), window)?, coeff, false)
    }

    pub fn tate_module(m: &GModule, window: usize) -> Result<Arc<Self>> {
        Self::tate(&GComplex::concentrated(m, 0), window)
    }

    /// Over a subgroup, with coefficients restricted.
    pub fn tate_over(h: &Subgroup, coeff: &GComplex, window: usize) -> Result<Arc<Self>> {
        Self::tate(&coeff.restrict(h), window)
    }

    /// Ordinary hypercohomology complex long enough for degrees up to `top`.
    pub fn ordinary(coeff: &GComplex, top: i32) -> Result<Arc<Self>> {
        let low = coeff.range().map_or(0, |r| r.0);
        let len = (top - low + 1).max(1) as usize;
        let res = FreeResolution::cached(coeff.group(), len);
        Self::new(CompleteResolution::from_resolution(res, len), coeff, true)
    }

    pub fn ordinary_over(h: &Subgroup, coeff: &GComplex, top: i32) -> Result<Arc<Self>> {
        Self::ordinary(&coeff.restrict(h), top)
    }

    pub fn resolution(&self) -> &CompleteResolution {
        &self.x
    }

    pub fn coefficients(&self) -> &GComplex {
        &self.coeff
    }

    pub fn is_ordinary(&self) -> bool {
        self.ordinary
    }

    pub fn window(&self) -> usize {
        self.x.window()
    }

    fn p_ok(&self, p: i32) -> bool {
        p >= self.x.lowest() && p <= self.x.highest() && (!self.ordinary || p >= 0)
    }

    /// Pieces of total degree `q`, ordered by ascending coefficient degree.
    pub fn blocks(&self, q: i32) -> Vec<Block> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (&j, m) in self.coeff.terms() {
            let p = q - j;
            if !self.p_ok(p) {
                continue;
            }
            let b = Block { p, j, offset, k: self.x.rank(p), r: m.rank() };
            offset += b.len();
            out.push(b);
        }
        out
    }

    pub fn dim(&self, q: i32) -> usize {
        self.blocks(q).iter().map(|b| b.len()).sum()
    }

    pub fn block(&self, q: i32, p: i32) -> Option<Block> {
        self.blocks(q).into_iter().find(|b| b.p == p)
    }

    /// Degrees `q` whose cohomology is computable with this window.
    pub fn check_degree(&self, q: i32) -> Result<()> {
        let w = self.x.window();
        for &j in self.coeff.terms().keys() {
            let p = q - j;
            let needed = if self.ordinary {
                if p < 0 {
                    continue;
                }
                p as usize + 1
            } else {
                p.unsigned_abs() as usize + 1
            };
            if needed > w {
                return Err(Error::WindowTooSmall { degree: q, needed, window: w });
            }
        }
        Ok(())
    }

    /// The cochain group of total degree `q`.
    pub fn cochain_group(&self, q: i32) -> FgAbGroup {
        let blocks = self.blocks(q);
        let n = self.dim(q);
        let mut rels = Vec::new();
        for b in &blocks {
            let m = self.coeff.term(b.j);
            for c in 0..b.k {
                for rcol in m.underlying().relation_cols() {
                    let mut v = vec![BigInt::zero(); n];
                    v[b.offset + c * b.r..b.offset + (c + 1) * b.r].clone_from_slice(&rcol);
                    rels.push(v);
                }
            }
        }
        FgAbGroup::from_relation_cols(n, &rels)
    }

    /// `D : total^q → total^{q+1}`.
    pub fn differential(&self, q: i32) -> IntMatrix {
        let src = self.blocks(q);
        let tgt = self.blocks(q + 1);
        let mut d = IntMatrix::zeros(self.dim(q + 1), self.dim(q));
        for b in &src {
            let m = self.coeff.term(b.j);
            if let Some(t) = tgt.iter().find(|t| t.j == b.j) {
                let delta = coboundary_matrix(&m, &self.x.boundary(b.p + 1), b.k);
                d.paste(t.offset, b.offset, &delta);
            }
            if let Some(t) = tgt.iter().find(|t| t.j == b.j + 1) {
                let dc = self.coeff.diff(b.j);
                let sign = if b.p.rem_euclid(2) == 0 { 1 } else { -1 };
                d.paste(t.offset, b.offset, &repeat_diag(&dc.scale(&BigInt::from(sign)), b.k));
            }
        }
        d
    }

    /// Cohomology in total degree `q`.
    pub fn cohomology(self: &Arc<Self>, q: i32) -> Result<TateGroup> {
        self.check_degree(q)?;
        if let Some(s) = self.cache.lock().expect("cache lock").get(&q) {
            return Ok(TateGroup { complex: self.clone(), degree: q, sub: s.clone() });
        }
        let sub = Arc::new(self.compute(q));
        self.cache.lock().expect("cache lock").insert(q, sub.clone());
        Ok(TateGroup { complex: self.clone(), degree: q, sub })
    }

    fn compute(&self, q: i32) -> Subquotient {
        let n = self.dim(q);
        let here = self.cochain_group(q);
        let next = self.cochain_group(q + 1);
        let d = self.differential(q);
        let cycles = if n == 0 {
            Lattice::zero(0)
        } else {
            let stacked = d.hstack(next.relations());
            let e = ColumnEchelon::new(&stacked, true);
            let gens = e
                .kernel_basis()
                .into_iter()
                .map(|mut v| {
                    v.truncate(n);
                    v
                })
                .collect();
            Lattice::from_generators(gens, n)
        };
        let mut bounds = self.differential(q - 1).col_vecs();
        bounds.extend(here.relation_cols());
        Subquotient::new(cycles, &bounds)
    }

    /// Whether a total cochain is a cocycle.
    pub fn is_cocycle(&self, q: i32, x: &[BigInt]) -> bool {
        let y = self.differential(q).mul_vec(x);
        self.cochain_group(q + 1).is_zero_elem(&y)
    }

    /// The `(p, ·)` piece of a total cochain, split into its `k` values.
    pub fn component(&self, q: i32, p: i32, x: &[BigInt]) -> Option<Vec<Vec<BigInt>>> {
        let b = self.block(q, p)?;
        Some((0..b.k).map(|c| x[b.offset + c * b.r..b.offset + (c + 1) * b.r].to_vec()).collect())
    }

    /// Total cochain with a single nonzero piece.
    pub fn from_component(&self, q: i32, p: i32, values: &[Vec<BigInt>]) -> Vec<BigInt> {
        let b = self.block(q, p).expect("piece present in this degree");
        let mut x = vec![BigInt::zero(); self.dim(q)];
        for (c, v) in values.iter().enumerate() {
            x[b.offset + c * b.r..b.offset + (c + 1) * b.r].clone_from_slice(v);
        }
        x
    }
}

/// A cohomology group of a [`TateComplex`] with its reduction machinery.
#[derive(Clone, Debug)]
pub struct TateGroup {
    complex: Arc<TateComplex>,
    degree: i32,
    sub: Arc<Subquotient>,
}

impl TateGroup {
    pub fn complex(&self) -> &Arc<TateComplex> {
        &self.complex
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// The group, presented on cycle-basis coordinates.
    pub fn group(&self) -> &FgAbGroup {
        &self.sub.group
    }

    /// The group in canonical form; induced maps use these coordinates.
    pub fn canonical(&self) -> FgAbGroup {
        self.sub.group.canonical_form()
    }

    pub fn moduli(&self) -> &[BigInt] {
        self.sub.group.moduli()
    }

    /// Canonical coordinates of a cocycle; `None` if not a cocycle.
    pub fn reduce(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.sub.reduce(x)
    }

    /// Representative cocycle of canonical generator `i`.
    pub fn rep(&self, i: usize) -> Vec<BigInt> {
        self.sub.rep(i)
    }

    pub fn lift(&self, c: &[BigInt]) -> Vec<BigInt> {
        self.sub.lift(c)
    }

    pub fn class(&self, x: Vec<BigInt>) -> Result<CohClass> {
        if self.reduce(&x).is_none() {
            return Err(Error::CocycleInvalid("not a cocycle of the total complex".into()));
        }
        Ok(CohClass { group: self.clone(), cocycle: x })
    }

    pub fn class_of(&self, coords: &[BigInt]) -> CohClass {
        CohClass { group: self.clone(), cocycle: self.lift(coords) }
    }

    pub fn generator(&self, i: usize) -> CohClass {
        CohClass { group: self.clone(), cocycle: self.rep(i) }
    }

    pub fn zero_class(&self) -> CohClass {
        CohClass { group: self.clone(), cocycle: vec![BigInt::zero(); self.complex.dim(self.degree)] }
    }

    pub fn is_trivial(&self) -> bool {
        self.sub.group.is_trivial()
    }

    /// Homomorphism between canonical forms induced by a cochain map.
    pub fn induced_map(&self, tgt: &TateGroup, f: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Result<AbHom> {
        let cols: Result<Vec<Vec<BigInt>>> = (0..self.moduli().len())
            .map(|i| {
                tgt.reduce(&f(&self.rep(i)))
                    .ok_or_else(|| Error::NotAComplex("cochain map does not preserve cocycles".into()))
            })
            .collect();
        let m = IntMatrix::from_cols(&cols?, tgt.moduli().len());
        AbHom::new(self.canonical(), tgt.canonical(), m)
    }
}

impl std::fmt::Display for TateGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.sub.group)
    }
}

/// A cohomology class with an explicit representing cocycle.
#[derive(Clone, Debug)]
pub struct CohClass {
    pub group: TateGroup,
    pub cocycle: Vec<BigInt>,
}

impl CohClass {
    pub fn coords(&self) -> Vec<BigInt> {
        self.group.reduce(&self.cocycle).expect("stored cocycle is a cocycle")
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> i32 {
        self.group.degree()
    }

    /// Additive order of the class, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.group.canonical().elem_order(&self.coords())
    }

    pub fn scale(&self, k: i64) -> CohClass {
        let c = BigInt::from(k);
        CohClass { group: self.group.clone(), cocycle: self.cocycle.iter().map(|v| v * &c).collect() }
    }

    pub fn add(&self, o: &CohClass) -> CohClass {
        CohClass {
            group: self.group.clone(),
            cocycle: self.cocycle.iter().zip(&o.cocycle).map(|(a, b)| a + b).collect(),
        }
    }

    /// Values of the `(p, q−p)` piece.
    pub fn component(&self, p: i32) -> Option<Vec<Vec<BigInt>>> {
        self.group.complex().component(self.degree(), p, &self.cocycle)
    }
}

/// Apply a module map to every value of a module cochain (`k` values).
pub fn push_values(f: &GHom, x: &[BigInt]) -> Vec<BigInt> {
    let r = f.source.rank();
    let mut out = Vec::with_capacity(x.len() / r.max(1) * f.target.rank());
    if r == 0 {
        return out;
    }
    for chunk in x.chunks(r) {
        out.extend(f.hom.apply(chunk));
    }
    out
}

/// Preimage of each `k`-chunk under a module map; `None` if some chunk has none.
pub fn pull_values(f: &GHom, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let r = f.target.rank();
    if r == 0 {
        return Some(Vec::new());
    }
    let mut out = Vec::with_capacity(y.len() / r * f.source.rank());
    for chunk in y.chunks(r) {
        out.extend(f.hom.preimage(chunk)?);
    }
    Some(out)
}

/// Connecting homomorphism `Ĥ^q(A'') → Ĥ^{q+1}(A')` of `0 → A' → A → A'' → 0`
/// for modules in degree 0; `mid` is the complex of `A` over the same
/// resolution as `src` and `tgt`.
pub fn connecting_map(
    inc: &GHom,
    proj: &GHom,
    src: &TateGroup,
    mid: &Arc<TateComplex>,
    tgt: &TateGroup,
) -> Result<AbHom> {
    let q = src.degree();
    let step = |z: &[BigInt]| -> Vec<BigInt> {
        let y = pull_values(proj, z).expect("projection is surjective");
        let dy = mid.differential(q).mul_vec(&y);
        pull_values(inc, &dy).expect("coboundary lies in the submodule")
    };
    src.induced_map(tgt, step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmod::FiniteGroup;

    fn tate_z(n: usize, q: i32) -> String {
        let g = FiniteGroup::cyclic(n);
        let t = TateComplex::tate_module(&GModule::trivial_z(&g), 5).unwrap();
        t.cohomology(q).unwrap().to_string()
    }

    #[test]
    fn cyclic_z() {
        assert_eq!(tate_z(2, 0), "Z/2");
        assert_eq!(tate_z(2, 1), "0");
        assert_eq!(tate_z(2, -1), "0");
        assert_eq!(tate_z(3, -2), "Z/3");
        assert_eq!(tate_z(4, 2), "Z/4");
    }

    #[test]
    fn window_enforced() {
        let g = FiniteGroup::cyclic(2);
        let t = TateComplex::tate_module(&GModule::trivial_z(&g), 3).unwrap();
        assert!(t.cohomology(2).is_ok());
        assert!(matches!(t.cohomology(3), Err(Error::WindowTooSmall { .. })));
    }
}
