//! Extensions of a finite group by a module, from normalized 2-cocycles.
//! Elements are pairs `(a, σ)`; nothing is ever enumerated.

use crate::error::{Error, Result};
use crate::groupmod::{FiniteGroup, GComplex, GModule, QuotientGroup, Subgroup};
use crate::intlin::{vec_add, vec_is_zero, vec_sub, zero_vec, AbHom, BigInt, FgAbGroup, IntMatrix, Lattice};
use crate::tate::{
    bar_to_class, index_tuple, is_bar_cocycle, solve_bar_coboundary, BarCochain, CohClass, TateComplex, TateGroup,
};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

/// A normalized inhomogeneous 2-cocycle with values in a module.
#[derive(Clone, Debug)]
pub struct Cocycle2 {
    module: GModule,
    values: BarCochain,
}

impl Cocycle2 {
    pub fn new(module: &GModule, values: BarCochain) -> Result<Self> {
        let g = module.group();
        if values.degree != 2 || values.values.len() != g.order() * g.order() {
            return Err(Error::CocycleInvalid("expected one value per pair".into()));
        }
        if values.values.iter().any(|v| v.len() != module.rank()) {
            return Err(Error::CocycleInvalid("value of the wrong length".into()));
        }
        if !values.is_normalized(g) {
            return Err(Error::CocycleInvalid("not normalized".into()));
        }
        if !is_bar_cocycle(module, &values) {
            return Err(Error::CocycleInvalid("cocycle identity fails".into()));
        }
        Ok(Cocycle2 { module: module.clone(), values })
    }

    pub fn from_fn(module: &GModule, f: impl Fn(usize, usize) -> Vec<BigInt>) -> Result<Self> {
        Self::new(module, BarCochain::from_fn(module.group(), 2, |t| f(t[0], t[1])))
    }

    pub fn zero(module: &GModule) -> Self {
        Cocycle2 { module: module.clone(), values: BarCochain::zero(module.group(), module, 2) }
    }

    /// `f(g^i, g^j) = 1` if `i + j ≥ n`, on trivial `Z` over `C_n`.
    pub fn carry(n: usize) -> Self {
        let g = FiniteGroup::cyclic(n);
        let z = GModule::trivial_z(&g);
        Self::from_fn(&z, |i, j| vec![BigInt::from(i64::from(i + j >= n))]).expect("carry cocycle")
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        self.module.group()
    }

    pub fn values(&self) -> &BarCochain {
        &self.values
    }

    pub fn value(&self, s: usize, t: usize) -> &[BigInt] {
        &self.values.values[s * self.group().order() + t]
    }

    pub fn scale(&self, k: i64) -> Self {
        Cocycle2 { module: self.module.clone(), values: self.values.scale(k) }
    }

    /// `f + δc` for a normalized 1-cochain `c`.
    pub fn perturb(&self, c: &BarCochain) -> Result<Self> {
        Self::new(&self.module, self.values.add(&crate::tate::bar_coboundary(&self.module, c)))
    }

    /// Class in `H^2` of the module.
    pub fn class(&self) -> CohClass {
        let h2 = module_h2(&self.module);
        bar_to_class(&self.values, &h2).expect("valid cocycle")
    }

    pub fn to_json(&self) -> CocycleJson {
        let n = self.group().order();
        let pairs = (0..n * n)
            .filter(|&i| !vec_is_zero(&self.values.values[i]))
            .map(|i| {
                let t = index_tuple(n, 2, i);
                (t[0], t[1], self.values.values[i].iter().map(|v| v.to_string()).collect())
            })
            .collect();
        CocycleJson { pairs }
    }

    pub fn from_json(module: &GModule, j: &CocycleJson) -> Result<Self> {
        let n = module.group().order();
        let mut f = BarCochain::zero(module.group(), module, 2);
        for (s, t, v) in &j.pairs {
            if *s >= n || *t >= n || v.len() != module.rank() {
                return Err(Error::CocycleInvalid(format!("bad entry at ({s}, {t})")));
            }
            let vals: std::result::Result<Vec<BigInt>, _> = v.iter().map(|x| x.parse::<BigInt>()).collect();
            f.values[s * n + t] = vals.map_err(|e| Error::CocycleInvalid(e.to_string()))?;
        }
        Self::new(module, f)
    }
}

/// Subtract the coboundary of the constant cochain `f(1, 1)`. Entries with
/// an identity argument are then zero in the module and are stored as zero.
pub fn normalized(m: &GModule, f: BarCochain) -> BarCochain {
    let g = m.group();
    if f.is_normalized(g) {
        return f;
    }
    let e = g.identity();
    let a = f.get(g.order(), &[e; 2]).to_vec();
    let c = BarCochain::from_fn(g, 1, |_| a.clone());
    let mut out = f.add(&crate::tate::bar_coboundary(m, &c).scale(-1));
    let n = g.order();
    for (i, v) in out.values.iter_mut().enumerate() {
        if index_tuple(n, 2, i).contains(&e) {
            debug_assert!(m.underlying().is_zero_elem(v));
            *v = zero_vec(m.rank());
        }
    }
    out
}

/// Sparse cocycle table: `(σ, τ, f(σ,τ))` for nonzero values.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CocycleJson {
    pub pairs: Vec<(usize, usize, Vec<String>)>,
}

/// `H^2` of a module, through the ordinary complex.
pub fn module_h2(m: &GModule) -> TateGroup {
    TateComplex::ordinary(&GComplex::concentrated(m, 0), 2)
        .and_then(|t| t.cohomology(2))
        .expect("degree 2 fits the automatic window")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub a: Vec<BigInt>,
    pub sigma: usize,
}

/// Abelianized presentation: generators are those of `A`, then one symbol
/// `u_σ` per group element.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub group: FgAbGroup,
    rank: usize,
    identity: usize,
}

impl Abelianization {
    pub fn project(&self, x: &ExtElement) -> Vec<BigInt> {
        let mut v = x.a.clone();
        v.resize(self.rank, BigInt::zero());
        if x.sigma != self.identity {
            v[x.a.len() + x.sigma] += 1;
        }
        v
    }

    pub fn ngens(&self) -> usize {
        self.rank
    }
}

struct ExtInner {
    cocycle: Cocycle2,
    ab: OnceLock<Abelianization>,
}

/// `1 → A → E → G → 1` with `(a,σ)(b,τ) = (a + σb + f(σ,τ), στ)`.
#[derive(Clone)]
pub struct ExtensionGroup(Arc<ExtInner>);

impl std::fmt::Debug for ExtensionGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Extension(order {} by {})", self.group().order(), self.module().underlying())
    }
}

/// Subgroup of finite index for the transfer.
#[derive(Clone, Debug)]
pub enum TransferTarget {
    /// `g⁻¹(H)`
    Preimage(Subgroup),
    /// a `G`-stable subgroup of `ι(A)`, given by a lattice containing the
    /// relations of `A`
    Lattice(Lattice),
}

/// The factor extension of `G/N` by `g⁻¹(N)^{ab}` and its class.
#[derive(Clone, Debug)]
pub struct FactorExtension {
    pub quotient: QuotientGroup,
    pub kernel: ExtensionGroup,
    pub extension: ExtensionGroup,
    pub class: CohClass,
}

/// `(a, σ) ↦ (a + c(σ), σ)` between two extensions of the same data.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub shift: BarCochain,
}

impl Equivalence {
    pub fn apply(&self, x: &ExtElement) -> ExtElement {
        ExtElement { a: vec_add(&x.a, &self.shift.values[x.sigma]), sigma: x.sigma }
    }
}

impl ExtensionGroup {
    pub fn new(cocycle: Cocycle2) -> Self {
        ExtensionGroup(Arc::new(ExtInner { cocycle, ab: OnceLock::new() }))
    }

    pub fn from_cocycle(module: &GModule, f: BarCochain) -> Result<Self> {
        Ok(Self::new(Cocycle2::new(module, f)?))
    }

    pub fn cocycle(&self) -> &Cocycle2 {
        &self.0.cocycle
    }

    pub fn module(&self) -> &GModule {
        self.0.cocycle.module()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.0.cocycle.group()
    }

    pub fn identity(&self) -> ExtElement {
        ExtElement { a: zero_vec(self.module().rank()), sigma: self.group().identity() }
    }

    pub fn iota(&self, a: &[BigInt]) -> ExtElement {
        ExtElement { a: a.to_vec(), sigma: self.group().identity() }
    }

    /// `(0, σ)`
    pub fn section(&self, s: usize) -> ExtElement {
        ExtElement { a: zero_vec(self.module().rank()), sigma: s }
    }

    pub fn project(&self, x: &ExtElement) -> usize {
        x.sigma
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement) -> ExtElement {
        let m = self.module();
        let mut a = vec_add(&x.a, &m.act(x.sigma, &y.a));
        a = vec_add(&a, self.0.cocycle.value(x.sigma, y.sigma));
        ExtElement { a, sigma: self.group().mul(x.sigma, y.sigma) }
    }

    /// `(−σ⁻¹a − f(σ⁻¹, σ), σ⁻¹)`
    pub fn inv(&self, x: &ExtElement) -> ExtElement {
        let g = self.group();
        let si = g.inv(x.sigma);
        let a = vec_sub(&zero_vec(x.a.len()), &vec_add(&self.module().act(si, &x.a), self.0.cocycle.value(si, x.sigma)));
        ExtElement { a, sigma: si }
    }

    /// `w x w⁻¹`
    pub fn conj(&self, w: &ExtElement, x: &ExtElement) -> ExtElement {
        self.mul(&self.mul(w, x), &self.inv(w))
    }

    pub fn eq_elem(&self, x: &ExtElement, y: &ExtElement) -> bool {
        x.sigma == y.sigma && self.module().underlying().eq_elem(&x.a, &y.a)
    }

    pub fn abelianization(&self) -> &Abelianization {
        self.0.ab.get_or_init(|| {
            let m = self.module();
            let g = self.group();
            let (r, n) = (m.rank(), g.order());
            let dim = r + n;
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for col in m.underlying().relation_cols() {
                let mut v = col;
                v.resize(dim, BigInt::zero());
                rels.push(v);
            }
            for s in g.elements() {
                let a = m.action(s);
                for k in 0..r {
                    let mut v = a.col(k);
                    v[k] -= 1;
                    v.resize(dim, BigInt::zero());
                    if !vec_is_zero(&v) {
                        rels.push(v);
                    }
                }
            }
            for s in g.elements() {
                for t in g.elements() {
                    let mut v = vec_sub(&zero_vec(r), self.0.cocycle.value(s, t));
                    v.resize(dim, BigInt::zero());
                    v[r + s] += 1;
                    v[r + t] += 1;
                    v[r + g.mul(s, t)] -= 1;
                    if !vec_is_zero(&v) {
                        rels.push(v);
                    }
                }
            }
            Abelianization { group: FgAbGroup::from_relation_cols(dim, &rels), rank: dim, identity: g.identity() }
        })
    }

    /// Projection of an element to the abelianization (presentation coordinates).
    pub fn ab_project(&self, x: &ExtElement) -> Vec<BigInt> {
        self.abelianization().project(x)
    }

    /// Extension of a subgroup by the restricted module and cocycle; elements
    /// of the result use local indices of [`Subgroup::as_group`].
    pub fn subextension(&self, h: &Subgroup) -> ExtensionGroup {
        let (_, emb) = h.as_group();
        let m = self.module().restrict(h);
        let f = self.0.cocycle.values.pullback(self.group().order(), m.group(), &emb);
        ExtensionGroup::new(Cocycle2 { module: m, values: f })
    }

    /// Class in `H^2(G, A)`.
    pub fn cocycle_class(&self) -> CohClass {
        self.0.cocycle.class()
    }

    /// Equivalence `self → other` over the identity of `A` and `G`, if the
    /// cocycles are cohomologous; verified on generators.
    pub fn equivalence(&self, other: &ExtensionGroup) -> Option<Equivalence> {
        let (a, b) = (self.module().underlying(), other.module().underlying());
        if self.group() != other.group() || a.ngens() != b.ngens() || !a.relation_lattice().same_as(&b.relation_lattice()) {
            return None;
        }
        let diff = self.0.cocycle.values.add(&other.0.cocycle.values.scale(-1));
        let c = solve_bar_coboundary(self.module(), &diff)?;
        let eq = Equivalence { shift: c };
        self.check_equivalence(other, &eq).then_some(eq)
    }

    /// Homomorphism on all pairs of section elements and generator
    /// translates, compatible with `ι` and the projection.
    pub fn check_equivalence(&self, other: &ExtensionGroup, eq: &Equivalence) -> bool {
        let r = self.module().rank();
        let mut samples: Vec<ExtElement> = self.group().elements().map(|s| self.section(s)).collect();
        for k in 0..r {
            let mut a = zero_vec(r);
            a[k] = BigInt::one();
            samples.push(self.iota(&a));
        }
        for x in &samples {
            let fx = eq.apply(x);
            if fx.sigma != x.sigma {
                return false;
            }
            if x.sigma == self.group().identity() && !other.eq_elem(&fx, x) {
                return false;
            }
            for y in &samples {
                if !other.eq_elem(&eq.apply(&self.mul(x, y)), &other.mul(&fx, &eq.apply(y))) {
                    return false;
                }
            }
        }
        true
    }

    /// Transfer `E^{ab} → W^{ab}` through the minimal coset transversal,
    /// cross-checked against the maximal one.
    pub fn transfer(&self, target: &TransferTarget) -> Result<AbHom> {
        let a = self.transfer_with(target, false)?;
        let b = self.transfer_with(target, true)?;
        if !a.same_map(&b) {
            return Err(Error::RouteMismatch("transfer depends on the coset transversal".into()));
        }
        Ok(a)
    }

    /// Target group of the transfer, in the coordinates it uses.
    pub fn transfer_target_group(&self, target: &TransferTarget) -> Result<FgAbGroup> {
        match target {
            TransferTarget::Preimage(h) => Ok(self.subextension(h).abelianization().group.clone()),
            TransferTarget::Lattice(l) => Ok(crate::groupmod::sub_group(self.module().underlying(), l).0),
        }
    }

    pub fn transfer_with(&self, target: &TransferTarget, max_reps: bool) -> Result<AbHom> {
        let g = self.group();
        let m = self.module();
        let ab = self.abelianization();
        let src = ab.group.clone();
        let (reps, locate, into_w): (Vec<ExtElement>, Box<dyn Fn(&ExtElement) -> usize>, Box<dyn Fn(&ExtElement) -> Vec<BigInt>>) =
            match target {
                TransferTarget::Preimage(h) => {
                    let cos = if max_reps { h.left_coset_reps_max() } else { h.left_coset_reps() };
                    let reps: Vec<ExtElement> = cos.iter().map(|&s| self.section(s)).collect();
                    let hh = h.clone();
                    let g2 = g.clone();
                    let cos2 = cos.clone();
                    let locate = Box::new(move |x: &ExtElement| {
                        cos2.iter().position(|&s| hh.contains(g2.mul(g2.inv(s), x.sigma))).expect("cosets cover")
                    });
                    let sub = self.subextension(h);
                    let hh = h.clone();
                    let into_w = Box::new(move |w: &ExtElement| {
                        let local = hh.local_index(w.sigma).expect("element of the preimage");
                        sub.ab_project(&ExtElement { a: w.a.clone(), sigma: local })
                    });
                    (reps, locate, into_w)
                }
                TransferTarget::Lattice(l) => {
                    for s in g.elements() {
                        if l.basis().iter().any(|b| !l.contains(&m.act(s, b))) {
                            return Err(Error::NotASubgroup("lattice is not stable under the group".into()));
                        }
                    }
                    if l.rank() < m.rank() {
                        return Err(Error::IndexInfinite);
                    }
                    let quot = FgAbGroup::from_relation_cols(m.rank(), l.basis());
                    let mut classes = quot.enumerate(4096).ok_or(Error::IndexInfinite)?;
                    if max_reps {
                        classes.reverse();
                    }
                    let amod: Vec<Vec<BigInt>> = classes.iter().map(|c| quot.from_canonical(c)).collect();
                    let mut reps = Vec::new();
                    let mut keys = Vec::new();
                    for s in g.elements() {
                        for a in &amod {
                            reps.push(ExtElement { a: a.clone(), sigma: s });
                            keys.push((s, quot.reduce(a)));
                        }
                    }
                    let quot2 = quot.clone();
                    let locate = Box::new(move |x: &ExtElement| {
                        let key = (x.sigma, quot2.reduce(&x.a));
                        keys.iter().position(|k| *k == key).expect("cosets cover")
                    });
                    let l2 = l.clone();
                    let into_w = Box::new(move |w: &ExtElement| l2.coords(&w.a).expect("element of the lattice"));
                    (reps, locate, into_w)
                }
            };
        let tgt = self.transfer_target_group(target)?;
        let mut gens: Vec<ExtElement> = (0..m.rank())
            .map(|k| {
                let mut a = zero_vec(m.rank());
                a[k] = BigInt::one();
                self.iota(&a)
            })
            .collect();
        gens.extend(g.elements().map(|s| self.section(s)));
        let cols: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|x| {
                let mut acc = zero_vec(tgt.ngens());
                for r in &reps {
                    let xr = self.mul(x, r);
                    let j = locate(&xr);
                    let w = self.mul(&self.inv(&reps[j]), &xr);
                    acc = vec_add(&acc, &into_w(&w));
                }
                acc
            })
            .collect();
        AbHom::new(src, tgt, IntMatrix::from_cols(&cols, self.transfer_target_group(target)?.ngens()))
    }

    /// Factor extension for `N` normal in `G`: `1 → W'^{ab} → E/W'^c → G/N → 1`
    /// with `W' = g⁻¹(N)`, read off through the section `x ↦ (0, s(x))`.
    pub fn factor_extension(&self, n: &Subgroup) -> Result<FactorExtension> {
        self.factor_extension_with(n, false)
    }

    /// As [`ExtensionGroup::factor_extension`], with the maximal section when
    /// `max_section` is set.
    pub fn factor_extension_with(&self, n: &Subgroup, max_section: bool) -> Result<FactorExtension> {
        let quotient = QuotientGroup::new(n)?;
        let g = self.group();
        let q = &quotient.group;
        let sec = if max_section { quotient.section_max() } else { quotient.section.clone() };
        let kernel = self.subextension(n);
        let kab = kernel.abelianization().clone();
        let into_k = |w: &ExtElement| {
            let local = n.local_index(w.sigma).expect("element over the normal subgroup");
            kab.project(&ExtElement { a: w.a.clone(), sigma: local })
        };
        let (_, nemb) = n.as_group();
        let r = self.module().rank();
        let mut kgens: Vec<ExtElement> = (0..r)
            .map(|k| {
                let mut a = zero_vec(r);
                a[k] = BigInt::one();
                self.iota(&a)
            })
            .collect();
        kgens.extend(nemb.iter().map(|&s| self.section(s)));
        let action: Vec<IntMatrix> = q
            .elements()
            .map(|x| {
                let w = self.section(sec[x]);
                let cols: Vec<Vec<BigInt>> = kgens.iter().map(|y| into_k(&self.conj(&w, y))).collect();
                IntMatrix::from_cols(&cols, kab.ngens())
            })
            .collect();
        let module = GModule::new(q, kab.group.clone(), action)?;
        let f = BarCochain::from_fn(q, 2, |t| {
            let (x, y) = (t[0], t[1]);
            let xy = q.mul(x, y);
            let c = self.mul(&self.mul(&self.section(sec[x]), &self.section(sec[y])), &self.inv(&self.section(sec[xy])));
            debug_assert!(n.contains(g.mul(g.identity(), c.sigma)));
            into_k(&c)
        });
        let extension = ExtensionGroup::from_cocycle(&module, normalized(&module, f))?;
        let class = extension.cocycle_class();
        Ok(FactorExtension { quotient, kernel, extension, class })
    }

    /// Group laws on every triple drawn from the given samples.
    pub fn check_associative(&self, samples: &[ExtElement]) -> bool {
        samples.iter().all(|x| {
            samples.iter().all(|y| {
                samples.iter().all(|z| self.eq_elem(&self.mul(&self.mul(x, y), z), &self.mul(x, &self.mul(y, z))))
            })
        })
    }

    /// Sections and translates by generator combinations with coefficients in `[−k, k]`.
    pub fn samples(&self, k: i64) -> Vec<ExtElement> {
        let r = self.module().rank();
        let mut coeffs: Vec<Vec<BigInt>> = vec![Vec::new()];
        for _ in 0..r.min(2) {
            coeffs = coeffs
                .into_iter()
                .flat_map(|v| (-k..=k).map(move |c| {
                    let mut w = v.clone();
                    w.push(BigInt::from(c));
                    w
                }))
                .collect();
        }
        let mut out = Vec::new();
        for s in self.group().elements() {
            for c in &coeffs {
                let mut a = c.clone();
                a.resize(r, BigInt::zero());
                out.push(ExtElement { a, sigma: s });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::IntMatrix;

    fn sign_c2() -> GModule {
        let g = FiniteGroup::cyclic(2);
        GModule::new(&g, FgAbGroup::free(1), vec![IntMatrix::identity(1), IntMatrix::from_i64(1, 1, &[-1])]).unwrap()
    }

    #[test]
    fn abelianizations() {
        let e = ExtensionGroup::new(Cocycle2::carry(2));
        assert_eq!(e.abelianization().group.to_string(), "Z^1");
        let d = ExtensionGroup::new(Cocycle2::zero(&sign_c2()));
        assert_eq!(d.abelianization().group.to_string(), "Z/2 + Z/2");
        let g = FiniteGroup::cyclic(3);
        let p = ExtensionGroup::new(Cocycle2::zero(&GModule::trivial_z(&g)));
        assert_eq!(p.abelianization().group.to_string(), "Z^1 + Z/3");
        assert!(e.check_associative(&e.samples(2)));
        assert!(d.check_associative(&d.samples(2)));
    }

    #[test]
    fn transfers() {
        let e = ExtensionGroup::new(Cocycle2::carry(2));
        let g = e.group().clone();
        let t = e.transfer(&TransferTarget::Preimage(g.trivial_subgroup())).unwrap();
        // E^{ab} ≅ Z generated by u; its transfer is u^2 = ι(1)
        let u = e.ab_project(&e.section(1));
        assert_eq!(t.target().reduce(&t.apply(&u)), vec![BigInt::from(1)]);
        let whole = e.transfer(&TransferTarget::Preimage(g.whole())).unwrap();
        assert!(whole.is_iso());
        let d = ExtensionGroup::new(Cocycle2::zero(&sign_c2()));
        let t = d.transfer(&TransferTarget::Preimage(g.trivial_subgroup())).unwrap();
        assert!(t.is_zero());
        let l = Lattice::from_generators(vec![vec![BigInt::from(2)]], 1);
        let t = d.transfer(&TransferTarget::Lattice(l)).unwrap();
        assert_eq!(t.source().to_string(), "Z/2 + Z/2");
        let bad = Lattice::zero(1);
        assert!(matches!(d.transfer(&TransferTarget::Lattice(bad)), Err(Error::IndexInfinite)));
    }

    #[test]
    fn classes_and_equivalence() {
        let c3 = Cocycle2::carry(3);
        let e1 = ExtensionGroup::new(c3.clone());
        let e2 = ExtensionGroup::new(c3.scale(2));
        assert!(e1.equivalence(&e2).is_none());
        assert!(e1.equivalence(&e1).is_some());
        let g = c3.group().clone();
        let c = BarCochain::from_fn(&g, 1, |t| vec![BigInt::from(if t[0] == g.identity() { 0 } else { t[0] as i64 + 4 })]);
        let e3 = ExtensionGroup::new(c3.perturb(&c).unwrap());
        let eq = e1.equivalence(&e3).unwrap();
        assert!(e1.check_equivalence(&e3, &eq));
        assert_eq!(e1.cocycle_class().coords(), e3.cocycle_class().coords());
    }

    #[test]
    fn factor_and_sub_c4() {
        let e = ExtensionGroup::new(Cocycle2::carry(4));
        let g = e.group().clone();
        let c2 = Subgroup::generated_by(&g, &[2]);
        let sub = e.subextension(&c2);
        assert_eq!(sub.cocycle_class().order(), Some(BigInt::from(2)));
        let fx = e.factor_extension(&c2).unwrap();
        assert_eq!(fx.class.order(), Some(BigInt::from(2)));
        assert_eq!(fx.kernel.abelianization().group.to_string(), "Z^1");
        let fmax = e.factor_extension_with(&c2, true).unwrap();
        assert_eq!(fmax.class.coords(), fx.class.coords());
        let whole = e.factor_extension(&g.whole()).unwrap();
        assert!(whole.class.is_zero());
    }

    #[test]
    fn rejects_non_cocycles() {
        let g = FiniteGroup::cyclic(2);
        let z = GModule::trivial_z(&g);
        assert!(matches!(Cocycle2::from_fn(&z, |s, t| vec![BigInt::from(i64::from(s == 1 && t == 0))]), Err(Error::CocycleInvalid(_))));
    }
}
