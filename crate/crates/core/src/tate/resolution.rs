//! Free resolutions of `Z` over a group ring and the complete resolution
//! spliced from one of them and its dual.

use crate::error::{Error, Result};
use crate::groupmod::{aug_index, FiniteGroup};
use crate::intlin::{BigInt, ColumnEchelon, IntMatrix, Lattice};
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// One summand `coef · elem · e_gen` of a group ring combination of basis
/// elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub coef: i64,
    pub elem: usize,
    pub gen: usize,
}

pub fn merge_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for t in terms {
        *acc.entry((t.gen, t.elem)).or_default() += t.coef;
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((gen, elem), coef)| Term { coef, elem, gen })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionModel {
    /// `Z[G]`, then the augmentation ideal cover, then greedy kernel generators
    Reduced,
    /// inhomogeneous bar resolution, rank `|G|^p`
    Bar,
    /// bar resolution with degenerate tuples removed, rank `(|G|−1)^p`
    NormalizedBar,
}

/// Free resolution `F_len → … → F_0 → Z`, `F_0 = Z[G]` with the augmentation.
///
/// The integer expansion of `F_p` has basis `(σ, j)` at index `σ·k_p + j`.
pub struct FreeResolution {
    group: FiniteGroup,
    model: ResolutionModel,
    ranks: Vec<usize>,
    /// `bnd[p][j] = ∂ e_j` for `p ≥ 1`
    bnd: Vec<Vec<Vec<Term>>>,
    solvers: Vec<OnceLock<ColumnEchelon>>,
}

impl std::fmt::Debug for FreeResolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FreeResolution({:?}, ranks {:?})", self.model, self.ranks)
    }
}

impl FreeResolution {
    fn assemble(group: &FiniteGroup, model: ResolutionModel, ranks: Vec<usize>, bnd: Vec<Vec<Vec<Term>>>) -> Self {
        let solvers = (0..ranks.len()).map(|_| OnceLock::new()).collect();
        FreeResolution { group: group.clone(), model, ranks, bnd, solvers }
    }

    /// Reduced resolution up to degree `len`.
    pub fn reduced(group: &FiniteGroup, len: usize) -> Self {
        let mut ranks = vec![1];
        let mut bnd: Vec<Vec<Vec<Term>>> = vec![Vec::new()];
        if len >= 1 {
            let e = group.identity();
            let d1: Vec<Vec<Term>> = group
                .nonidentity()
                .map(|g| merge_terms(vec![Term { coef: 1, elem: g, gen: 0 }, Term { coef: -1, elem: e, gen: 0 }]))
                .collect();
            ranks.push(group.order() - 1);
            bnd.push(d1);
        }
        let mut partial = Self::assemble(group, ResolutionModel::Reduced, ranks.clone(), bnd.clone());
        for p in 2..=len {
            let z = partial.z_matrix(p - 1);
            let kernel = ColumnEchelon::new(&z, true).kernel_basis();
            let dim = z.cols();
            let klat = Lattice::from_generators(kernel, dim);
            let gens = greedy_module_generators(group, ranks[p - 1], &klat);
            let k = ranks[p - 1];
            let dp: Vec<Vec<Term>> = gens
                .iter()
                .map(|v| {
                    let mut t = Vec::new();
                    for (idx, c) in v.iter().enumerate() {
                        if !c.is_zero() {
                            t.push(Term { coef: c.to_i64().expect("small kernel generator"), elem: idx / k, gen: idx % k });
                        }
                    }
                    merge_terms(t)
                })
                .collect();
            ranks.push(dp.len());
            bnd.push(dp);
            partial = Self::assemble(group, ResolutionModel::Reduced, ranks.clone(), bnd.clone());
        }
        partial
    }

    /// Bar resolution up to degree `len`, optionally normalized.
    pub fn bar(group: &FiniteGroup, len: usize, normalized: bool) -> Self {
        let model = if normalized { ResolutionModel::NormalizedBar } else { ResolutionModel::Bar };
        let base = if normalized { group.order() - 1 } else { group.order() };
        let mut ranks = vec![1];
        let mut bnd: Vec<Vec<Vec<Term>>> = vec![Vec::new()];
        let codec = BarCodec { group: group.clone(), normalized };
        for p in 1..=len {
            let count = base.pow(p as u32);
            let mut dp = Vec::with_capacity(count);
            for idx in 0..count {
                let t = codec.tuple(p, idx);
                dp.push(codec.boundary(&t));
            }
            ranks.push(count);
            bnd.push(dp);
        }
        Self::assemble(group, model, ranks, bnd)
    }

    /// Shared reduced resolution of at least the given length.
    pub fn cached(group: &FiniteGroup, len: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(Vec<Vec<usize>>, usize), Arc<FreeResolution>>>> = OnceLock::new();
        let key = (group.table().to_vec(), group.identity());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().expect("cache lock").get(&key) {
            if r.len() >= len {
                return r.clone();
            }
        }
        let r = Arc::new(Self::reduced(group, len));
        let mut guard = cache.lock().expect("cache lock");
        let entry = guard.entry(key).or_insert_with(|| r.clone());
        if entry.len() < len {
            *entry = r.clone();
        }
        entry.clone()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn model(&self) -> ResolutionModel {
        self.model
    }

    /// Highest degree present.
    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self, p: usize) -> usize {
        self.ranks[p]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂ e_j` for the generators of `F_p`, `p ≥ 1`.
    pub fn boundary(&self, p: usize) -> &[Vec<Term>] {
        &self.bnd[p]
    }

    /// Integer matrix of `∂_p : F_p → F_{p−1}`; for `p = 0` the augmentation.
    pub fn z_matrix(&self, p: usize) -> IntMatrix {
        let n = self.group.order();
        if p == 0 {
            return IntMatrix::from_rows(&[vec![1i64; n]], n);
        }
        expand(&self.group, self.boundary(p), self.ranks[p - 1])
    }

    /// Some `x ∈ F_p` (integer coordinates) with `∂_p x = y`.
    pub fn solve(&self, p: usize, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let e = self.solvers[p].get_or_init(|| ColumnEchelon::new(&self.z_matrix(p), true));
        e.solve(y)
    }

    /// Left multiplication by `h` on integer coordinates of `F_p`.
    pub fn act(&self, p: usize, h: usize, x: &[BigInt]) -> Vec<BigInt> {
        act_blocks(&self.group, self.ranks[p], h, x)
    }

    /// Integer coordinates of a group ring combination in `F_p`.
    pub fn to_vector(&self, p: usize, terms: &[Term]) -> Vec<BigInt> {
        let k = self.ranks[p];
        let mut v = vec![BigInt::zero(); self.group.order() * k];
        for t in terms {
            v[t.elem * k + t.gen] += t.coef;
        }
        v
    }

    /// `∂∂ = 0`, augmentation kills the image of `∂_1`, and exactness at
    /// every degree strictly below the top.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for p in 1..=self.len() {
            let prod = self.z_matrix(p - 1).mul(&self.z_matrix(p));
            if !prod.is_zero() {
                return Err(format!("boundary squared nonzero at degree {p}"));
            }
        }
        for p in 0..self.len() {
            let z = self.z_matrix(p);
            let ker = Lattice::from_generators(ColumnEchelon::new(&z, true).kernel_basis(), z.cols());
            let im = Lattice::from_generators(self.z_matrix(p + 1).col_vecs(), z.cols());
            if !im.same_as(&ker) {
                return Err(format!("not exact at degree {p}"));
            }
        }
        Ok(())
    }
}

/// Integer expansion of a list of boundaries whose targets have `k_prev`
/// generators.
pub fn expand(group: &FiniteGroup, bnd: &[Vec<Term>], k_prev: usize) -> IntMatrix {
    let n = group.order();
    let k = bnd.len();
    let mut m = IntMatrix::zeros(n * k_prev, n * k);
    for s in 0..n {
        for (j, terms) in bnd.iter().enumerate() {
            for t in terms {
                let row = group.mul(s, t.elem) * k_prev + t.gen;
                m.add_at(row, s * k + j, &BigInt::from(t.coef));
            }
        }
    }
    m
}

pub fn act_blocks(group: &FiniteGroup, k: usize, h: usize, x: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); x.len()];
    for s in group.elements() {
        let t = group.mul(h, s);
        out[t * k..(t + 1) * k].clone_from_slice(&x[s * k..(s + 1) * k]);
    }
    out
}

/// Choose `Z[G]`-module generators for a `G`-stable lattice, preferring the
/// candidate whose orbit adds the most rank.
pub fn greedy_module_generators(group: &FiniteGroup, k: usize, target: &Lattice) -> Vec<Vec<BigInt>> {
    let dim = target.dim();
    let mut span = Lattice::zero(dim);
    let mut chosen = Vec::new();
    let candidates: Vec<Vec<BigInt>> = target.basis().to_vec();
    let orbit = |v: &Vec<BigInt>| -> Vec<Vec<BigInt>> { group.elements().map(|h| act_blocks(group, k, h, v)).collect() };
    while !span.contains_lattice(target) {
        let mut best: Option<(usize, usize)> = None;
        let full_rank = span.rank() == target.rank();
        for (i, c) in candidates.iter().enumerate() {
            if span.contains(c) {
                continue;
            }
            if full_rank {
                best = Some((i, 0));
                break;
            }
            let mut g = span.basis().to_vec();
            g.extend(orbit(c));
            let gain = Lattice::from_generators(g, dim).rank() - span.rank();
            if best.is_none_or(|(_, b)| gain > b) {
                best = Some((i, gain));
            }
        }
        let (i, _) = best.expect("some candidate lies outside the span");
        let mut g = span.basis().to_vec();
        g.extend(orbit(&candidates[i]));
        span = Lattice::from_generators(g, dim);
        chosen.push(candidates[i].clone());
    }
    chosen
}

/// Encoding of bar basis tuples as indices, first entry most significant.
#[derive(Clone)]
pub struct BarCodec {
    pub group: FiniteGroup,
    pub normalized: bool,
}

impl BarCodec {
    fn base(&self) -> usize {
        if self.normalized {
            self.group.order() - 1
        } else {
            self.group.order()
        }
    }

    fn digit(&self, g: usize) -> Option<usize> {
        if self.normalized {
            aug_index(&self.group, g)
        } else {
            Some(g)
        }
    }

    fn undigit(&self, d: usize) -> usize {
        if self.normalized {
            let e = self.group.identity();
            if d < e {
                d
            } else {
                d + 1
            }
        } else {
            d
        }
    }

    /// Index of a tuple, `None` for a degenerate tuple in the normalized model.
    pub fn index(&self, t: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &g in t {
            idx = idx * self.base() + self.digit(g)?;
        }
        Some(idx)
    }

    pub fn tuple(&self, p: usize, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; p];
        for i in (0..p).rev() {
            t[i] = self.undigit(idx % self.base());
            idx /= self.base();
        }
        t
    }

    /// Bar boundary of the basis element `[g_1|…|g_p]`.
    pub fn boundary(&self, t: &[usize]) -> Vec<Term> {
        let g = &self.group;
        let p = t.len();
        let mut terms = Vec::new();
        let mut push = |coef: i64, elem: usize, tup: &[usize]| {
            if let Some(gen) = self.index(tup) {
                terms.push(Term { coef, elem, gen });
            }
        };
        push(1, t[0], &t[1..]);
        for i in 1..p {
            let mut u: Vec<usize> = t[..i - 1].to_vec();
            u.push(g.mul(t[i - 1], t[i]));
            u.extend_from_slice(&t[i + 1..]);
            push(if i % 2 == 0 { 1 } else { -1 }, g.identity(), &u);
        }
        push(if p.is_multiple_of(2) { 1 } else { -1 }, g.identity(), &t[..p - 1]);
        merge_terms(terms)
    }
}

/// The complete resolution `X`: `X_p = F_p` for `p ≥ 0`, `X_{−p−1} = F_p^*`,
/// spliced by the norm `e ↦ Σ_g g·e^*`.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    res: Arc<FreeResolution>,
    window: usize,
}

impl CompleteResolution {
    /// Reduced model over the window `[−Q, Q]`.
    pub fn new(group: &FiniteGroup, window: usize) -> Result<Self> {
        if window < 1 {
            return Err(Error::WindowTooSmall { degree: 0, needed: 1, window });
        }
        Ok(CompleteResolution { res: FreeResolution::cached(group, window), window })
    }

    /// Spliced from the unnormalized bar resolution.
    pub fn bar(group: &FiniteGroup, window: usize) -> Result<Self> {
        if window < 1 {
            return Err(Error::WindowTooSmall { degree: 0, needed: 1, window });
        }
        Ok(CompleteResolution { res: Arc::new(FreeResolution::bar(group, window, false)), window })
    }

    pub fn from_resolution(res: Arc<FreeResolution>, window: usize) -> Self {
        assert!(res.len() >= window, "resolution too short for the window");
        CompleteResolution { res, window }
    }

    pub fn resolution(&self) -> &Arc<FreeResolution> {
        &self.res
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn group(&self) -> &FiniteGroup {
        self.res.group()
    }

    /// Lowest degree carried, `−Q−1`.
    pub fn lowest(&self) -> i32 {
        -(self.window as i32) - 1
    }

    pub fn highest(&self) -> i32 {
        self.window as i32
    }

    pub fn rank(&self, p: i32) -> usize {
        if p >= 0 {
            self.res.rank(p as usize)
        } else {
            self.res.rank((-p - 1) as usize)
        }
    }

    /// Boundary `X_p → X_{p−1}` for `−Q ≤ p ≤ Q`.
    pub fn boundary(&self, p: i32) -> Vec<Vec<Term>> {
        assert!(p >= -(self.window as i32) && p <= self.window as i32, "degree {p} outside the window");
        let g = self.group();
        if p >= 1 {
            return self.res.boundary(p as usize).to_vec();
        }
        if p == 0 {
            return vec![g.elements().map(|h| Term { coef: 1, elem: h, gen: 0 }).collect()];
        }
        // dual of ∂_m : F_m → F_{m−1} with m = −p
        let m = (-p) as usize;
        let mut out: Vec<Vec<Term>> = vec![Vec::new(); self.res.rank(m - 1)];
        for (j, terms) in self.res.boundary(m).iter().enumerate() {
            for t in terms {
                out[t.gen].push(Term { coef: t.coef, elem: g.inv(t.elem), gen: j });
            }
        }
        out.into_iter().map(merge_terms).collect()
    }

    pub fn z_matrix(&self, p: i32) -> IntMatrix {
        expand(self.group(), &self.boundary(p), self.rank(p - 1))
    }

    /// `d∘d = 0` across the window and exactness at interior degrees.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let (lo, hi) = (-(self.window as i32), self.window as i32);
        for p in lo + 1..=hi {
            if !self.z_matrix(p - 1).mul(&self.z_matrix(p)).is_zero() {
                return Err(format!("d∘d nonzero at degree {p}"));
            }
        }
        for p in lo..hi {
            let z = self.z_matrix(p);
            let ker = Lattice::from_generators(ColumnEchelon::new(&z, true).kernel_basis(), z.cols());
            let im = Lattice::from_generators(self.z_matrix(p + 1).col_vecs(), z.cols());
            if !im.same_as(&ker) {
                return Err(format!("homology at degree {p}"));
            }
        }
        Ok(())
    }

    /// Tate groups of degree `q` need `|q| + 1 ≤ Q`.
    pub fn check_degree(&self, q: i32) -> Result<()> {
        let needed = q.unsigned_abs() as usize + 1;
        if needed > self.window {
            return Err(Error::WindowTooSmall { degree: q, needed, window: self.window });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_ranks_c2() {
        let x = CompleteResolution::bar(&FiniteGroup::cyclic(2), 3).unwrap();
        let ranks: Vec<usize> = (-4..=3).map(|p| x.rank(p)).collect();
        assert_eq!(ranks, vec![8, 4, 2, 1, 1, 2, 4, 8]);
        x.verify().unwrap();
    }

    #[test]
    fn reduced_is_exact() {
        for g in [FiniteGroup::cyclic(3), FiniteGroup::klein4(), FiniteGroup::symmetric3()] {
            let r = FreeResolution::reduced(&g, 4);
            r.verify().unwrap();
            let x = CompleteResolution::from_resolution(Arc::new(r), 4);
            x.verify().unwrap();
        }
    }

    #[test]
    fn normalized_bar_is_exact() {
        let r = FreeResolution::bar(&FiniteGroup::cyclic(3), 3, true);
        r.verify().unwrap();
    }

    #[test]
    fn splice_is_norm() {
        let g = FiniteGroup::cyclic(3);
        let x = CompleteResolution::new(&g, 2).unwrap();
        let m = x.z_matrix(0);
        assert_eq!(m.cols(), 3);
        assert!(m.col(0).iter().all(|v| *v == BigInt::from(1)));
    }
}
