//! Comparison maps between the reduced resolution, the normalized bar
//! resolution, and reduced resolutions of related groups.

use super::cochains::{CohClass, TateComplex, TateGroup};
use super::resolution::{BarCodec, FreeResolution, Term};
use crate::error::{Error, Result};
use crate::groupmod::{FiniteGroup, GModule};
use crate::intlin::{vec_add_assign, vec_axpy, vec_is_zero, zero_vec, AbHom, BigInt, FgAbGroup, IntMatrix};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Function `G^p → A`, stored on all `|G|^p` tuples (first entry most
/// significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarCochain {
    pub degree: usize,
    pub values: Vec<Vec<BigInt>>,
}

pub fn tuple_index(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &g| acc * n + g)
}

pub fn index_tuple(n: usize, p: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; p];
    for i in (0..p).rev() {
        t[i] = idx % n;
        idx /= n;
    }
    t
}

impl BarCochain {
    pub fn zero(group: &FiniteGroup, m: &GModule, p: usize) -> Self {
        BarCochain { degree: p, values: vec![zero_vec(m.rank()); group.order().pow(p as u32)] }
    }

    pub fn from_fn(group: &FiniteGroup, p: usize, f: impl Fn(&[usize]) -> Vec<BigInt>) -> Self {
        let n = group.order();
        let values = (0..n.pow(p as u32)).map(|i| f(&index_tuple(n, p, i))).collect();
        BarCochain { degree: p, values }
    }

    pub fn get(&self, n: usize, t: &[usize]) -> &[BigInt] {
        &self.values[tuple_index(n, t)]
    }

    /// Zero whenever an argument is the identity.
    pub fn is_normalized(&self, group: &FiniteGroup) -> bool {
        let n = group.order();
        let e = group.identity();
        (0..self.values.len()).all(|i| {
            !index_tuple(n, self.degree, i).contains(&e) || vec_is_zero(&self.values[i])
        })
    }

    pub fn add(&self, o: &BarCochain) -> BarCochain {
        let values = self.values.iter().zip(&o.values).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        BarCochain { degree: self.degree, values }
    }

    pub fn scale(&self, k: i64) -> BarCochain {
        let c = BigInt::from(k);
        BarCochain { degree: self.degree, values: self.values.iter().map(|v| v.iter().map(|x| x * &c).collect()).collect() }
    }

    /// Push the values through an abelian group map.
    pub fn map_values(&self, f: &AbHom) -> BarCochain {
        BarCochain { degree: self.degree, values: self.values.iter().map(|v| f.apply(v)).collect() }
    }

    /// Pull back along a group homomorphism `src → G` given as an index map.
    pub fn pullback(&self, n: usize, src: &FiniteGroup, hom: &[usize]) -> BarCochain {
        BarCochain::from_fn(src, self.degree, |t| {
            let img: Vec<usize> = t.iter().map(|&x| hom[x]).collect();
            self.get(n, &img).to_vec()
        })
    }

    /// Whether every value is zero in the module.
    pub fn is_zero_in(&self, m: &GModule) -> bool {
        self.values.iter().all(|v| m.underlying().is_zero_elem(v))
    }
}

/// Inhomogeneous coboundary `(δf)(g_1,…,g_{p+1})`.
pub fn bar_coboundary(m: &GModule, f: &BarCochain) -> BarCochain {
    let g = m.group();
    let n = g.order();
    let p = f.degree;
    BarCochain::from_fn(g, p + 1, |t| {
        let mut out = m.act(t[0], f.get(n, &t[1..]));
        for i in 1..=p {
            let mut u: Vec<usize> = t[..i - 1].to_vec();
            u.push(g.mul(t[i - 1], t[i]));
            u.extend_from_slice(&t[i + 1..]);
            let c = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            vec_axpy(&mut out, &c, f.get(n, &u));
        }
        let c = if (p + 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        vec_axpy(&mut out, &c, f.get(n, &t[..p]));
        out
    })
}

pub fn is_bar_cocycle(m: &GModule, f: &BarCochain) -> bool {
    bar_coboundary(m, f).is_zero_in(m)
}

/// Some normalized `(p−1)`-cochain `c` with `δc = f` in the module, if any.
pub fn solve_bar_coboundary(m: &GModule, f: &BarCochain) -> Option<BarCochain> {
    let g = m.group();
    let n = g.order();
    let r = m.rank();
    let p = f.degree;
    assert!(p >= 1, "coboundaries start in degree 1");
    // unknowns: c on non-degenerate (p−1)-tuples
    let codec = BarCodec { group: g.clone(), normalized: true };
    let count = (n - 1).pow((p - 1) as u32);
    let unknowns: Vec<Vec<usize>> = (0..count).map(|i| codec.tuple(p - 1, i)).collect();
    let src = FgAbGroup::from_relation_cols(
        count * r,
        &(0..count)
            .flat_map(|b| {
                m.underlying().relation_cols().into_iter().map(move |col| {
                    let mut v = zero_vec(count * r);
                    v[b * r..(b + 1) * r].clone_from_slice(&col);
                    v
                })
            })
            .collect::<Vec<_>>(),
    );
    let total = n.pow(p as u32);
    let tgt_rels: Vec<Vec<BigInt>> = (0..total)
        .flat_map(|b| {
            m.underlying().relation_cols().into_iter().map(move |col| {
                let mut v = zero_vec(total * r);
                v[b * r..(b + 1) * r].clone_from_slice(&col);
                v
            })
        })
        .collect();
    let tgt = FgAbGroup::from_relation_cols(total * r, &tgt_rels);
    let mut cols = Vec::with_capacity(count * r);
    for t in &unknowns {
        for y in 0..r {
            let mut unit = zero_vec(r);
            unit[y] = BigInt::one();
            let e = BarCochain::from_fn(g, p - 1, |u| if u == &t[..] { unit.clone() } else { zero_vec(r) });
            cols.push(bar_coboundary(m, &e).values.concat());
        }
    }
    let hom = AbHom::new(src, tgt, IntMatrix::from_cols(&cols, total * r)).ok()?;
    let x = hom.preimage(&f.values.concat())?;
    Some(BarCochain::from_fn(g, p - 1, |u| match codec.index(u) {
        Some(i) => x[i * r..(i + 1) * r].to_vec(),
        None => zero_vec(r),
    }))
}

/// Chain maps between the normalized bar resolution and a reduced one.
pub struct BarComparison {
    res: Arc<FreeResolution>,
    codec: BarCodec,
    /// reduced coordinates of the image of each normalized bar generator
    up: Vec<OnceLock<Vec<Vec<BigInt>>>>,
    /// normalized bar combination `(tuple index → coefficient)` for each
    /// reduced generator; every term sits at the identity
    down: Mutex<Vec<Vec<BTreeMap<usize, i64>>>>,
}

impl BarComparison {
    pub fn new(res: Arc<FreeResolution>) -> Self {
        let codec = BarCodec { group: res.group().clone(), normalized: true };
        let up = (0..=res.len()).map(|_| OnceLock::new()).collect();
        BarComparison { res, codec, up, down: Mutex::new(Vec::new()) }
    }

    /// Shared comparison for the cached reduced resolution of a group.
    pub fn for_group(group: &FiniteGroup, len: usize) -> Arc<Self> {
        type Key = (Vec<Vec<usize>>, usize);
        static CACHE: OnceLock<Mutex<BTreeMap<Key, Arc<BarComparison>>>> = OnceLock::new();
        let key = (group.table().to_vec(), group.identity());
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().expect("cache lock");
        if let Some(c) = guard.get(&key) {
            if c.res.len() >= len {
                return c.clone();
            }
        }
        let c = Arc::new(BarComparison::new(FreeResolution::cached(group, len)));
        guard.insert(key, c.clone());
        c
    }

    pub fn resolution(&self) -> &Arc<FreeResolution> {
        &self.res
    }

    fn group(&self) -> &FiniteGroup {
        self.res.group()
    }

    /// Images of the normalized bar generators of degree `p` in the reduced
    /// resolution.
    fn up(&self, p: usize) -> &Vec<Vec<BigInt>> {
        self.up[p].get_or_init(|| {
            let g = self.group();
            if p == 0 {
                let mut v = zero_vec(g.order());
                v[g.identity()] = BigInt::one();
                return vec![v];
            }
            let prev = self.up(p - 1);
            let count = (g.order() - 1).pow(p as u32);
            (0..count)
                .map(|i| {
                    let t = self.codec.tuple(p, i);
                    let mut y = zero_vec(g.order() * self.res.rank(p - 1));
                    for term in self.codec.boundary(&t) {
                        let moved = self.res.act(p - 1, term.elem, &prev[term.gen]);
                        vec_axpy(&mut y, &BigInt::from(term.coef), &moved);
                    }
                    self.res.solve(p, &y).expect("reduced resolution is exact")
                })
                .collect()
        })
    }

    fn down(&self, p: usize) -> Vec<BTreeMap<usize, i64>> {
        let mut guard = self.down.lock().expect("comparison lock");
        let g = self.group().clone();
        let n = g.order();
        let base = n - 1;
        while guard.len() <= p {
            let q = guard.len();
            let level: Vec<BTreeMap<usize, i64>> = if q == 0 {
                vec![BTreeMap::from([(0usize, 1i64)])]
            } else {
                let prev = &guard[q - 1];
                self.res
                    .boundary(q)
                    .iter()
                    .map(|terms| {
                        // s(h·x) for x = ψ(e_i) at the identity: [h | x]
                        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                        for t in terms {
                            let Some(d) = crate::groupmod::aug_index(&g, t.elem) else { continue };
                            for (&idx, &c) in &prev[t.gen] {
                                let key = d * base.pow((q - 1) as u32) + idx;
                                *acc.entry(key).or_default() += c * t.coef;
                            }
                        }
                        acc.retain(|_, c| *c != 0);
                        acc
                    })
                    .collect()
            };
            guard.push(level);
        }
        guard[p].clone()
    }

    /// Bar cocycle representing a degree-`p` class with coefficients in a
    /// module (a cochain of the `p` block).
    pub fn to_bar(&self, m: &GModule, p: usize, values: &[Vec<BigInt>]) -> BarCochain {
        let g = self.group();
        let n = g.order();
        let k = self.res.rank(p);
        let up = self.up(p);
        BarCochain::from_fn(g, p, |t| match self.codec.index(t) {
            None => zero_vec(m.rank()),
            Some(i) => {
                let x = &up[i];
                let mut out = zero_vec(m.rank());
                for s in 0..n {
                    let mut part = zero_vec(m.rank());
                    for (j, c) in x[s * k..(s + 1) * k].iter().enumerate() {
                        if !c.is_zero() {
                            vec_axpy(&mut part, c, &values[j]);
                        }
                    }
                    if !vec_is_zero(&part) {
                        vec_add_assign(&mut out, &m.act(s, &part));
                    }
                }
                out
            }
        })
    }

    /// Values on the reduced generators of degree `p` of the cochain
    /// corresponding to a normalized bar cochain.
    pub fn from_bar(&self, f: &BarCochain) -> Vec<Vec<BigInt>> {
        let g = self.group();
        let n = g.order();
        let p = f.degree;
        let r = f.values.first().map_or(0, |v| v.len());
        self.down(p)
            .iter()
            .map(|combo| {
                let mut out = zero_vec(r);
                for (&idx, &c) in combo {
                    let t = self.codec.tuple(p, idx);
                    vec_axpy(&mut out, &BigInt::from(c), f.get(n, &t));
                }
                out
            })
            .collect()
    }
}

/// Bar cocycle of a class with module coefficients (in degree 0 of the
/// coefficient complex) and nonnegative degree.
pub fn class_to_bar(c: &CohClass) -> Result<BarCochain> {
    let tc = c.group.complex();
    let q = c.degree();
    let coeff = tc.coefficients();
    if q < 0 || coeff.terms().keys().any(|&j| j != 0) {
        return Err(Error::Unsupported("bar cocycles for module coefficients in nonnegative degrees".into()));
    }
    let m = coeff.term(0);
    let cmp = BarComparison::for_group(coeff.group(), tc.resolution().resolution().len());
    let values = tc.component(q, q, &c.cocycle).unwrap_or_default();
    let values = if values.is_empty() { vec![zero_vec(m.rank()); tc.resolution().rank(q)] } else { values };
    Ok(cmp.to_bar(&m, q as usize, &values))
}

/// Class of a normalized bar cocycle in a group of module cohomology.
pub fn bar_to_class(f: &BarCochain, target: &TateGroup) -> Result<CohClass> {
    let tc = target.complex();
    let q = target.degree();
    if q < 0 || q as usize != f.degree {
        return Err(Error::DimensionMismatch("bar cochain degree differs from the target".into()));
    }
    let coeff = tc.coefficients();
    if coeff.terms().keys().any(|&j| j != 0) {
        return Err(Error::Unsupported("bar cocycles for module coefficients only".into()));
    }
    let m = coeff.term(0);
    if !f.is_normalized(coeff.group()) || !is_bar_cocycle(&m, f) {
        return Err(Error::CocycleInvalid("not a normalized bar cocycle".into()));
    }
    let cmp = BarComparison::for_group(coeff.group(), tc.resolution().resolution().len());
    let values = cmp.from_bar(f);
    if tc.dim(q) == 0 {
        return Ok(target.zero_class());
    }
    target.class(tc.from_component(q, q, &values))
}

/// Chain map `F → F'` between reduced resolutions over a homomorphism of
/// groups, built degree by degree by solving in the target.
pub struct ChainLift {
    src: Arc<FreeResolution>,
    tgt: Arc<FreeResolution>,
    hom: Vec<usize>,
    maps: Vec<Vec<Vec<BigInt>>>,
}

impl ChainLift {
    pub fn new(src: Arc<FreeResolution>, tgt: Arc<FreeResolution>, hom: Vec<usize>, len: usize) -> Self {
        assert!(src.len() >= len && tgt.len() >= len, "resolutions too short for the lift");
        let tg = tgt.group().clone();
        let mut e0 = zero_vec(tg.order());
        e0[tg.identity()] = BigInt::one();
        let mut maps = vec![vec![e0]];
        for p in 1..=len {
            let prev = &maps[p - 1];
            let level = src
                .boundary(p)
                .iter()
                .map(|terms: &Vec<Term>| {
                    let mut y = zero_vec(tg.order() * tgt.rank(p - 1));
                    for t in terms {
                        let moved = tgt.act(p - 1, hom[t.elem], &prev[t.gen]);
                        vec_axpy(&mut y, &BigInt::from(t.coef), &moved);
                    }
                    tgt.solve(p, &y).expect("target resolution is exact")
                })
                .collect();
            maps.push(level);
        }
        ChainLift { src, tgt, hom, maps }
    }

    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn source(&self) -> &Arc<FreeResolution> {
        &self.src
    }

    pub fn hom(&self) -> &[usize] {
        &self.hom
    }

    /// `(φ^* c)_j = c(φ(e_j))` for a cochain with values in a module over
    /// the target group, given by its action matrices.
    pub fn pullback(&self, p: usize, action: &[IntMatrix], values: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let k = self.tgt.rank(p);
        let r = values.first().map_or(0, |v| v.len());
        self.maps[p]
            .iter()
            .map(|x| {
                let mut out = zero_vec(r);
                for s in self.tgt.group().elements() {
                    let mut part = zero_vec(r);
                    for (i, c) in x[s * k..(s + 1) * k].iter().enumerate() {
                        if !c.is_zero() {
                            vec_axpy(&mut part, c, &values[i]);
                        }
                    }
                    if !vec_is_zero(&part) {
                        vec_add_assign(&mut out, &action[s].mul_vec(&part));
                    }
                }
                out
            })
            .collect()
    }
}

/// Pull a total cochain of `big` back to `small` along a chain lift whose
/// target resolution is the one underlying `big`; all pieces must sit in
/// nonnegative resolution degrees.
pub fn pull_total(lift: &ChainLift, big: &TateComplex, small: &TateComplex, q: i32, x: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut out = zero_vec(small.dim(q));
    for b in small.blocks(q) {
        if b.p < 0 {
            return Err(Error::Unsupported("maps through negative resolution degrees".into()));
        }
        let Some(vals) = big.component(q, b.p, x) else { continue };
        let m = big.coefficients().term(b.j);
        let pulled = lift.pullback(b.p as usize, m.actions(), &vals);
        for (c, v) in pulled.iter().enumerate() {
            out[b.offset + c * b.r..b.offset + (c + 1) * b.r].clone_from_slice(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupmod::GModule;

    fn carry(n: usize) -> BarCochain {
        let g = FiniteGroup::cyclic(n);
        BarCochain::from_fn(&g, 2, |t| vec![BigInt::from(i64::from(t[0] + t[1] >= n))])
    }

    #[test]
    fn carry_is_a_generator() {
        for n in [2, 3, 4] {
            let g = FiniteGroup::cyclic(n);
            let z = GModule::trivial_z(&g);
            assert!(is_bar_cocycle(&z, &carry(n)));
            let t = TateComplex::tate_module(&z, 4).unwrap();
            let h2 = t.cohomology(2).unwrap();
            let c = bar_to_class(&carry(n), &h2).unwrap();
            assert_eq!(c.order(), Some(BigInt::from(n)));
            let back = class_to_bar(&c).unwrap();
            let diff = back.add(&carry(n).scale(-1));
            assert!(solve_bar_coboundary(&z, &diff).is_some());
        }
    }

    #[test]
    fn round_trip_s3() {
        let g = FiniteGroup::symmetric3();
        let m = crate::groupmod::augmentation_ideal(&g);
        let t = TateComplex::tate_module(&m, 4).unwrap();
        for q in 1..=3 {
            let h = t.cohomology(q).unwrap();
            for i in 0..h.moduli().len() {
                let c = h.generator(i);
                let f = class_to_bar(&c).unwrap();
                assert!(is_bar_cocycle(&m, &f));
                let c2 = bar_to_class(&f, &h).unwrap();
                assert_eq!(c2.coords(), c.coords());
            }
        }
    }
}
