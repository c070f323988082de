use super::group::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};
use crate::intlin::{AbHom, BigInt, FgAbGroup, IntMatrix, Lattice};
use num_traits::{ToPrimitive, Zero};
use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

struct ModInner {
    group: FiniteGroup,
    underlying: FgAbGroup,
    action: Vec<IntMatrix>,
}

/// A finite group acting on a finitely generated abelian group; one matrix
/// per group element, acting on presentation coordinates.
#[derive(Clone)]
pub struct GModule(Arc<ModInner>);

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule({} over group of order {})", self.underlying(), self.group().order())
    }
}

fn flat_i64(m: &IntMatrix) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for v in m.row(i) {
            out.push(v.to_i64()?);
        }
    }
    Some(out)
}

fn mul_i64(a: &[i64], b: &[i64], n: usize) -> Option<Vec<i64>> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let y = b[k * n + j];
                if y != 0 {
                    out[i * n + j] = out[i * n + j].checked_add(x.checked_mul(y)?)?;
                }
            }
        }
    }
    Some(out)
}

/// Whether `a·b` and `c` agree as maps on `group`.
fn product_matches(group: &FgAbGroup, a: &IntMatrix, b: &IntMatrix, c: &IntMatrix) -> bool {
    let n = group.ngens();
    if group.relations().cols() == 0 {
        if let (Some(fa), Some(fb), Some(fc)) = (flat_i64(a), flat_i64(b), flat_i64(c)) {
            if let Some(p) = mul_i64(&fa, &fb, n) {
                return p == fc;
            }
        }
    }
    let p = a.mul(b);
    (0..n).all(|j| group.eq_elem(&p.col(j), &c.col(j)))
}

impl GModule {
    /// Full validation: each matrix must be a well-defined automorphism and
    /// the assignment must be multiplicative on every pair.
    pub fn new(group: &FiniteGroup, underlying: FgAbGroup, action: Vec<IntMatrix>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, m) in action.iter().enumerate() {
            let h = AbHom::new(underlying.clone(), underlying.clone(), m.clone())?;
            if !h.is_iso() {
                return Err(Error::NotInvertible(g));
            }
        }
        for s in group.elements() {
            for t in group.elements() {
                if !product_matches(&underlying, &action[s], &action[t], &action[group.mul(s, t)]) {
                    return Err(Error::NotHomomorphic(s, t));
                }
            }
        }
        Ok(Self::new_unchecked(group, underlying, action))
    }

    /// Action given on some elements, completed by products. Fails if two
    /// words for the same element disagree or the elements do not generate.
    pub fn from_generators(group: &FiniteGroup, underlying: FgAbGroup, gens: &[(usize, IntMatrix)]) -> Result<Self> {
        let n = underlying.ngens();
        for (g, m) in gens {
            if *g >= group.order() || m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!("bad action matrix for element {g}")));
            }
            let h = AbHom::new(underlying.clone(), underlying.clone(), m.clone())?;
            if !h.is_iso() {
                return Err(Error::NotInvertible(*g));
            }
        }
        let mut action: Vec<Option<IntMatrix>> = vec![None; group.order()];
        action[group.identity()] = Some(IntMatrix::identity(n));
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(x) = queue.pop_front() {
            for (s, m) in gens {
                let y = group.mul(*s, x);
                let prod = m.mul(action[x].as_ref().expect("visited"));
                match &action[y] {
                    None => {
                        action[y] = Some(prod);
                        queue.push_back(y);
                    }
                    Some(existing) => {
                        if !(0..n).all(|j| underlying.eq_elem(&existing.col(j), &prod.col(j))) {
                            return Err(Error::NotHomomorphic(*s, x));
                        }
                    }
                }
            }
        }
        let action: Option<Vec<IntMatrix>> = action.into_iter().collect();
        let action = action.ok_or_else(|| Error::DimensionMismatch("given elements do not generate the group".into()))?;
        Self::new(group, underlying, action)
    }

    pub(crate) fn new_unchecked(group: &FiniteGroup, underlying: FgAbGroup, action: Vec<IntMatrix>) -> Self {
        GModule(Arc::new(ModInner { group: group.clone(), underlying, action }))
    }

    pub fn zero(group: &FiniteGroup) -> Self {
        Self::trivial(group, FgAbGroup::zero())
    }

    pub fn trivial(group: &FiniteGroup, underlying: FgAbGroup) -> Self {
        let n = underlying.ngens();
        Self::new_unchecked(group, underlying, vec![IntMatrix::identity(n); group.order()])
    }

    /// `Z` with trivial action.
    pub fn trivial_z(group: &FiniteGroup) -> Self {
        Self::trivial(group, FgAbGroup::free(1))
    }

    /// `Z[G] ⊗ B` with `G` permuting the first factor; generator `(σ, i)` has
    /// index `σ·ngens(B) + i`.
    pub fn induced(group: &FiniteGroup, b: &FgAbGroup) -> Self {
        let (n, k) = (group.order(), b.ngens());
        let mut rels = Vec::new();
        for s in 0..n {
            for r in b.relation_cols() {
                let mut v = vec![BigInt::zero(); n * k];
                v[s * k..(s + 1) * k].clone_from_slice(&r);
                rels.push(v);
            }
        }
        let underlying = FgAbGroup::from_relation_cols(n * k, &rels);
        let action = group
            .elements()
            .map(|g| {
                let mut m = IntMatrix::zeros(n * k, n * k);
                for s in 0..n {
                    let t = group.mul(g, s);
                    for i in 0..k {
                        m.set(t * k + i, s * k + i, BigInt::from(1));
                    }
                }
                m
            })
            .collect();
        Self::new_unchecked(group, underlying, action)
    }

    pub fn regular(group: &FiniteGroup) -> Self {
        Self::induced(group, &FgAbGroup::free(1))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.0.group
    }

    pub fn underlying(&self) -> &FgAbGroup {
        &self.0.underlying
    }

    pub fn rank(&self) -> usize {
        self.0.underlying.ngens()
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.0.action[g]
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.0.action
    }

    pub fn act(&self, g: usize, x: &[BigInt]) -> Vec<BigInt> {
        self.0.action[g].mul_vec(x)
    }

    pub fn is_trivial_action(&self) -> bool {
        let n = self.rank();
        let id = IntMatrix::identity(n);
        self.0.action.iter().all(|m| (0..n).all(|j| self.underlying().eq_elem(&m.col(j), &id.col(j))))
    }

    /// Restriction to a subgroup, as a module over [`Subgroup::as_group`].
    pub fn restrict(&self, h: &Subgroup) -> GModule {
        let (hg, emb) = h.as_group();
        let action = emb.iter().map(|&g| self.0.action[g].clone()).collect();
        Self::new_unchecked(&hg, self.underlying().clone(), action)
    }

    pub fn direct_sum(&self, o: &GModule) -> GModule {
        let underlying = self.underlying().direct_sum(o.underlying());
        let action = self.0.action.iter().zip(&o.0.action).map(|(a, b)| a.block_diag(b)).collect();
        Self::new_unchecked(self.group(), underlying, action)
    }

    /// Norm element `Σ_g g` acting on presentation coordinates.
    pub fn norm_matrix(&self) -> IntMatrix {
        let n = self.rank();
        self.0.action.iter().fold(IntMatrix::zeros(n, n), |acc, m| acc.add(m))
    }

    /// Lattice of presentation vectors fixed modulo relations by `elems`.
    pub fn invariant_lattice(&self, elems: &[usize]) -> Lattice {
        let n = self.rank();
        let mut stacked: Option<IntMatrix> = None;
        let mut rel_blocks = IntMatrix::zeros(0, 0);
        for &g in elems {
            let d = self.0.action[g].sub(&IntMatrix::identity(n));
            stacked = Some(match stacked {
                None => d,
                Some(s) => s.vstack(&d),
            });
            rel_blocks = rel_blocks.block_diag(self.underlying().relations());
        }
        let Some(stacked) = stacked else { return Lattice::full(n) };
        let big = stacked.hstack(&rel_blocks);
        let e = crate::intlin::ColumnEchelon::new(&big, true);
        let gens = e.kernel_basis().into_iter().map(|mut v| {
            v.truncate(n);
            v
        });
        let mut all: Vec<Vec<BigInt>> = gens.collect();
        all.extend(self.underlying().relation_cols());
        Lattice::from_generators(all, n)
    }

    /// The same module on the canonical generators of its underlying group,
    /// with the isomorphisms to and from it.
    pub fn canonical_presentation(&self) -> (GModule, GHom, GHom) {
        let a = self.underlying();
        let c = a.canonical_form();
        let k = c.ngens();
        let back = IntMatrix::from_cols(&(0..k).map(|i| a.canonical_gen(i)).collect::<Vec<_>>(), a.ngens());
        let fwd = IntMatrix::from_cols(&(0..a.ngens()).map(|j| a.reduce(&crate::intlin::unit_vec(a.ngens(), j))).collect::<Vec<_>>(), k);
        let action = self.0.action.iter().map(|m| fwd.mul(&m.mul(&back))).collect();
        let cm = GModule::new_unchecked(self.group(), c, action);
        let to = GHom::new_unchecked(self, &cm, fwd);
        let from = GHom::new_unchecked(&cm, self, back);
        (cm, to, from)
    }

    /// `A^H` as an abelian group with its inclusion into `A`.
    pub fn invariants(&self, h: &Subgroup) -> (FgAbGroup, AbHom) {
        let l = self.invariant_lattice(h.elements());
        sub_group(self.underlying(), &l)
    }
}

/// The subgroup of `a` given by a lattice containing the relations, with its
/// inclusion.
pub fn sub_group(a: &FgAbGroup, l: &Lattice) -> (FgAbGroup, AbHom) {
    let rels: Vec<Vec<BigInt>> = a
        .relation_cols()
        .iter()
        .map(|r| l.coords(r).expect("lattice contains relations"))
        .collect();
    let g = FgAbGroup::from_relation_cols(l.rank(), &rels);
    let incl = AbHom::new(g.clone(), a.clone(), l.basis_matrix()).expect("subgroup inclusion");
    (g, incl)
}

/// An equivariant homomorphism of modules over the same group.
#[derive(Clone, Debug)]
pub struct GHom {
    pub source: GModule,
    pub target: GModule,
    pub hom: AbHom,
}

impl GHom {
    pub fn new(source: &GModule, target: &GModule, matrix: IntMatrix) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::DimensionMismatch("modules over different groups".into()));
        }
        let hom = AbHom::new(source.underlying().clone(), target.underlying().clone(), matrix)?;
        let f = GHom { source: source.clone(), target: target.clone(), hom };
        f.check_equivariant()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: &GModule, target: &GModule, matrix: IntMatrix) -> Self {
        let hom = AbHom::new(source.underlying().clone(), target.underlying().clone(), matrix)
            .expect("internal map is well defined");
        GHom { source: source.clone(), target: target.clone(), hom }
    }

    pub fn check_equivariant(&self) -> Result<()> {
        let m = self.hom.matrix();
        for g in self.source.group().elements() {
            let lhs = m.mul(self.source.action(g));
            let rhs = self.target.action(g).mul(m);
            for j in 0..self.source.rank() {
                if !self.target.underlying().eq_elem(&lhs.col(j), &rhs.col(j)) {
                    return Err(Error::NotEquivariant(format!("element {g}, generator {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.hom.matrix()
    }

    pub fn after(&self, first: &GHom) -> GHom {
        GHom { source: first.source.clone(), target: self.target.clone(), hom: self.hom.after(&first.hom) }
    }

    pub fn restrict(&self, h: &Subgroup) -> GHom {
        GHom::new_unchecked(&self.source.restrict(h), &self.target.restrict(h), self.matrix().clone())
    }

    /// Kernel as a module, with its inclusion.
    pub fn kernel(&self) -> GHom {
        let k = self.hom.kio();
        let basis = k.kernel_incl.matrix().clone();
        let lat = Lattice::from_generators(basis.col_vecs(), self.source.rank());
        let action = self
            .source
            .actions()
            .iter()
            .map(|m| {
                let cols: Vec<Vec<BigInt>> = lat
                    .basis()
                    .iter()
                    .map(|b| lat.coords(&m.mul_vec(b)).expect("kernel is stable"))
                    .collect();
                IntMatrix::from_cols(&cols, lat.rank())
            })
            .collect();
        let (kg, incl) = sub_group(self.source.underlying(), &lat);
        let km = GModule::new_unchecked(self.source.group(), kg, action);
        GHom { source: km, target: self.source.clone(), hom: incl }
    }

    /// Cokernel as a module, with its projection.
    pub fn cokernel(&self) -> GHom {
        let k = self.hom.kio();
        let cm = GModule::new_unchecked(self.target.group(), k.cokernel.clone(), self.target.actions().to_vec());
        GHom { source: self.target.clone(), target: cm, hom: k.coker_proj }
    }
}

/// `a ↦ Σ_σ σ ⊗ σ⁻¹a`, the equivariant embedding of `A` into `Ind(A)`.
pub fn induced_embedding(a: &GModule) -> GHom {
    let g = a.group();
    let k = a.rank();
    let ind = GModule::induced(g, a.underlying());
    let mut m = IntMatrix::zeros(g.order() * k, k);
    for s in g.elements() {
        m.paste(s * k, 0, a.action(g.inv(s)));
    }
    GHom::new_unchecked(a, &ind, m)
}

/// `σ ⊗ a ↦ σa`, the equivariant surjection `Ind(A) → A`.
pub fn induced_surjection(a: &GModule) -> GHom {
    let g = a.group();
    let k = a.rank();
    let ind = GModule::induced(g, a.underlying());
    let mut m = IntMatrix::zeros(k, g.order() * k);
    for s in g.elements() {
        m.paste(0, s * k, a.action(s));
    }
    GHom::new_unchecked(&ind, a, m)
}

/// `0 → I_G → Z[G] → Z → 0`.
#[derive(Clone, Debug)]
pub struct AugmentationSequence {
    pub ideal: GModule,
    pub inclusion: GHom,
    pub augmentation: GHom,
}

/// Index of the basis vector `g − 1` of the augmentation ideal.
pub fn aug_index(g: &FiniteGroup, x: usize) -> Option<usize> {
    if x == g.identity() {
        None
    } else if x < g.identity() {
        Some(x)
    } else {
        Some(x - 1)
    }
}

/// Augmentation ideal with basis `g − 1`, `g ≠ 1` in index order.
pub fn augmentation_ideal(g: &FiniteGroup) -> GModule {
    let n = g.order();
    let action = g
        .elements()
        .map(|h| {
            let mut m = IntMatrix::zeros(n - 1, n - 1);
            for x in g.nonidentity() {
                let col = aug_index(g, x).expect("non-identity");
                // h(x − 1) = (hx − 1) − (h − 1)
                if let Some(r) = aug_index(g, g.mul(h, x)) {
                    m.add_at(r, col, &BigInt::from(1));
                }
                if let Some(r) = aug_index(g, h) {
                    m.add_at(r, col, &BigInt::from(-1));
                }
            }
            m
        })
        .collect();
    GModule::new_unchecked(g, FgAbGroup::free(n - 1), action)
}

pub fn augmentation_sequence(g: &FiniteGroup) -> AugmentationSequence {
    let n = g.order();
    let ideal = augmentation_ideal(g);
    let reg = GModule::regular(g);
    let z = GModule::trivial_z(g);
    let mut inc = IntMatrix::zeros(n, n - 1);
    for x in g.nonidentity() {
        let c = aug_index(g, x).expect("non-identity");
        inc.set(x, c, BigInt::from(1));
        inc.set(g.identity(), c, BigInt::from(-1));
    }
    let inclusion = GHom::new_unchecked(&ideal, &reg, inc);
    let augmentation = GHom::new_unchecked(&reg, &z, IntMatrix::from_rows(&[vec![1i64; n]], n));
    AugmentationSequence { ideal, inclusion, augmentation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::vec_from_i64;

    #[test]
    fn sign_and_doubling() {
        let c2 = FiniteGroup::cyclic(2);
        let z = FgAbGroup::free(1);
        assert!(GModule::from_generators(&c2, z.clone(), &[(1, IntMatrix::from_i64(1, 1, &[1]))]).is_ok());
        assert!(GModule::from_generators(&c2, z.clone(), &[(1, IntMatrix::from_i64(1, 1, &[-1]))]).is_ok());
        let r = GModule::from_generators(&c2, z, &[(1, IntMatrix::from_i64(1, 1, &[2]))]);
        assert_eq!(r.err(), Some(Error::NotInvertible(1)));
    }

    #[test]
    fn not_homomorphic() {
        let c3 = FiniteGroup::cyclic(3);
        let z = FgAbGroup::free(1);
        let bad = vec![IntMatrix::from_i64(1, 1, &[1]), IntMatrix::from_i64(1, 1, &[-1]), IntMatrix::from_i64(1, 1, &[-1])];
        assert!(matches!(GModule::new(&c3, z, bad), Err(Error::NotHomomorphic(..))));
    }

    #[test]
    fn internal_constructions_validate() {
        for g in [FiniteGroup::cyclic(3), FiniteGroup::symmetric3(), FiniteGroup::klein4()] {
            let ind = GModule::regular(&g);
            GModule::new(&g, ind.underlying().clone(), ind.actions().to_vec()).unwrap();
            let seq = augmentation_sequence(&g);
            GModule::new(&g, seq.ideal.underlying().clone(), seq.ideal.actions().to_vec()).unwrap();
            seq.inclusion.check_equivariant().unwrap();
            seq.augmentation.check_equivariant().unwrap();
            // exactness
            let k = seq.augmentation.hom.kio();
            assert!(seq.augmentation.after(&seq.inclusion).hom.is_zero());
            assert!(k.cokernel.is_trivial());
            assert!(seq.inclusion.hom.is_injective());
            assert_eq!(k.kernel.free_rank(), g.order() - 1);
        }
    }

    #[test]
    fn augmentation_ideal_of_c2_is_sign() {
        let c2 = FiniteGroup::cyclic(2);
        let i = augmentation_ideal(&c2);
        assert_eq!(i.rank(), 1);
        assert_eq!(i.action(1), &IntMatrix::from_i64(1, 1, &[-1]));
    }

    #[test]
    fn embedding_of_trivial_z() {
        let c2 = FiniteGroup::cyclic(2);
        let e = induced_embedding(&GModule::trivial_z(&c2));
        assert_eq!(e.hom.apply(&vec_from_i64(&[1])), vec_from_i64(&[1, 1]));
        e.check_equivariant().unwrap();
        let s = induced_surjection(&GModule::trivial_z(&c2));
        s.check_equivariant().unwrap();
    }
}
