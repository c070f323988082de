//! Finitely generated abelian groups `Z^g / im R` and homomorphisms between them.

use super::echelon::{ColumnEchelon, Lattice};
use super::matrix::{unit_vec, vec_axpy, zero_vec, IntMatrix};
use super::snf::smith;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

struct Inner {
    ngens: usize,
    relations: IntMatrix,
    /// modulus per canonical slot: `d > 1` for torsion, `0` for free
    moduli: Vec<BigInt>,
    /// coordinate functionals (rows of `U`) for the kept slots
    canon_rows: Vec<Vec<BigInt>>,
    /// generator of each kept slot in presentation coordinates (columns of `U^{-1}`)
    canon_cols: Vec<Vec<BigInt>>,
}

/// `Z^ngens` modulo the column span of `relations`, with its invariant-factor
/// decomposition computed once at construction.
#[derive(Clone)]
pub struct FgAbGroup(Arc<Inner>);

impl FgAbGroup {
    pub fn new(ngens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), ngens, "relation vectors must have one entry per generator");
        let s = smith(&relations, false);
        let mut slots: Vec<(BigInt, usize)> = Vec::new();
        for i in 0..ngens {
            let d = s.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if !d.is_one() {
                slots.push((d, i));
            }
        }
        // torsion slots already ascend by divisibility; free slots go last
        slots.sort_by_key(|(d, _)| d.is_zero());
        let moduli = slots.iter().map(|(d, _)| d.clone()).collect();
        let canon_rows = slots.iter().map(|&(_, i)| s.u.row(i).to_vec()).collect();
        let canon_cols = slots.iter().map(|&(_, i)| s.u_inv.col(i)).collect();
        FgAbGroup(Arc::new(Inner { ngens, relations, moduli, canon_rows, canon_cols }))
    }

    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zeros(n, 0))
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/d1 + Z/d2 + ...` (a `0` entry gives a free summand)
    pub fn from_moduli(ds: &[i64]) -> Self {
        let n = ds.len();
        let mut r = IntMatrix::zeros(n, n);
        for (i, &d) in ds.iter().enumerate() {
            r.set(i, i, BigInt::from(d));
        }
        Self::new(n, r)
    }

    /// The group with exactly these canonical moduli and identity coordinates;
    /// `moduli` must already be in canonical order (torsion by divisibility,
    /// then zeros for free summands).
    pub fn canonical(moduli: &[BigInt]) -> Self {
        let n = moduli.len();
        let mut r = IntMatrix::zeros(n, n);
        for (i, d) in moduli.iter().enumerate() {
            r.set(i, i, d.clone());
        }
        let canon_rows = (0..n).map(|i| unit_vec(n, i)).collect();
        let canon_cols = (0..n).map(|i| unit_vec(n, i)).collect();
        FgAbGroup(Arc::new(Inner { ngens: n, relations: r, moduli: moduli.to_vec(), canon_rows, canon_cols }))
    }

    /// The canonical form of this group.
    pub fn canonical_form(&self) -> FgAbGroup {
        Self::canonical(&self.0.moduli)
    }

    pub fn from_relation_cols(ngens: usize, cols: &[Vec<BigInt>]) -> Self {
        Self::new(ngens, IntMatrix::from_cols(cols, ngens))
    }

    pub fn ngens(&self) -> usize {
        self.0.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    pub fn relation_cols(&self) -> Vec<Vec<BigInt>> {
        self.0.relations.col_vecs()
    }

    /// Torsion invariant factors `d > 1` in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.0.moduli.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.0.moduli.iter().filter(|d| d.is_zero()).count()
    }

    /// Moduli of the canonical coordinates, `0` meaning free.
    pub fn moduli(&self) -> &[BigInt] {
        &self.0.moduli
    }

    pub fn canonical_rank(&self) -> usize {
        self.0.moduli.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.moduli.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.moduli.len() <= 1
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.0.moduli.iter().product())
    }

    /// Same invariant factors and free rank.
    pub fn isomorphic(&self, o: &FgAbGroup) -> bool {
        self.0.moduli == o.0.moduli
    }

    /// Canonical coordinates, each reduced into `[0, d)` on torsion slots.
    pub fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ngens(), "element has wrong length");
        self.0
            .canon_rows
            .iter()
            .zip(&self.0.moduli)
            .map(|(row, d)| {
                let mut s = BigInt::zero();
                for (a, b) in row.iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                if d.is_zero() {
                    s
                } else {
                    s.mod_floor(d)
                }
            })
            .collect()
    }

    pub fn is_zero_elem(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(|v| v.is_zero())
    }

    pub fn eq_elem(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.reduce(x) == self.reduce(y)
    }

    /// Presentation coordinates of the element with given canonical coordinates.
    pub fn from_canonical(&self, c: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(c.len(), self.canonical_rank());
        let mut x = zero_vec(self.ngens());
        for (k, col) in c.iter().zip(&self.0.canon_cols) {
            vec_axpy(&mut x, k, col);
        }
        x
    }

    /// Generator of canonical slot `i` in presentation coordinates.
    pub fn canonical_gen(&self, i: usize) -> Vec<BigInt> {
        self.0.canon_cols[i].clone()
    }

    /// Additive order of an element, `None` if infinite.
    pub fn elem_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let c = self.reduce(x);
        let mut o = BigInt::one();
        for (v, d) in c.iter().zip(&self.0.moduli) {
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            o = o.lcm(&(d / v.gcd(d)));
        }
        Some(o)
    }

    /// All elements in canonical coordinates; only for small finite groups.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Vec<BigInt>>> {
        let ord = self.order()?;
        if ord > BigInt::from(cap) {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.0.moduli {
            let d: i64 = d.try_into().ok()?;
            let mut next = Vec::new();
            for v in &out {
                for k in 0..d {
                    let mut w = v.clone();
                    w.push(BigInt::from(k));
                    next.push(w);
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Lattice of relations plus the given vectors.
    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(self.relation_cols(), self.ngens())
    }

    pub fn direct_sum(&self, o: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(self.ngens() + o.ngens(), self.relations().block_diag(o.relations()))
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let r = self.free_rank();
        if r > 0 {
            parts.push(format!("Z^{r}"));
        }
        for d in self.torsion() {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self}; {} gens)", self.ngens())
    }
}

/// Homomorphism given on presentation coordinates.
#[derive(Clone, Debug)]
pub struct AbHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every source relation maps to zero.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        for (j, r) in source.relation_cols().iter().enumerate() {
            if !target.is_zero_elem(&matrix.mul_vec(r)) {
                return Err(Error::NotWellDefined(format!("source relation {j} does not map to zero")));
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.ngens()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    /// `self` after `first`.
    pub fn after(&self, first: &AbHom) -> AbHom {
        assert_eq!(first.target.ngens(), self.source.ngens(), "composition mismatch");
        AbHom { source: first.source.clone(), target: self.target.clone(), matrix: self.matrix.mul(&first.matrix) }
    }

    pub fn scale(&self, k: i64) -> AbHom {
        AbHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(&BigInt::from(k)) }
    }

    pub fn add(&self, o: &AbHom) -> AbHom {
        AbHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.add(&o.matrix) }
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.ngens()).all(|j| self.target.is_zero_elem(&self.matrix.col(j)))
    }

    /// Equal as maps (agree on every generator modulo target relations).
    pub fn same_map(&self, o: &AbHom) -> bool {
        (0..self.source.ngens()).all(|j| self.target.eq_elem(&self.matrix.col(j), &o.matrix.col(j)))
    }

    /// Matrix between canonical coordinates: column `i` is the image of
    /// canonical generator `i`.
    pub fn canonical_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.source.canonical_rank())
            .map(|i| self.target.reduce(&self.apply(&self.source.canonical_gen(i))))
            .collect();
        IntMatrix::from_cols(&cols, self.target.canonical_rank())
    }

    pub fn kio(&self) -> Kio {
        hom_kio(self)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_lattice_in_source().iter().all(|v| self.source.is_zero_elem(v))
    }

    pub fn is_surjective(&self) -> bool {
        let stacked = self.matrix.hstack(self.target.relations());
        FgAbGroup::new(self.target.ngens(), stacked).is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Generators of `{x : f(x) = 0 in target}` in source coordinates.
    fn kernel_lattice_in_source(&self) -> Vec<Vec<BigInt>> {
        let g = self.source.ngens();
        let stacked = self.matrix.hstack(self.target.relations());
        let e = ColumnEchelon::new(&stacked, true);
        e.kernel_basis().into_iter().map(|mut v| {
            v.truncate(g);
            v
        }).collect()
    }

    /// Preimage of a target element, if it lies in the image.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let g = self.source.ngens();
        let stacked = self.matrix.hstack(self.target.relations());
        let mut x = ColumnEchelon::new(&stacked, true).solve(y)?;
        x.truncate(g);
        Some(x)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_iso() {
            return None;
        }
        let g = self.source.ngens();
        let stacked = self.matrix.hstack(self.target.relations());
        let e = ColumnEchelon::new(&stacked, true);
        let cols: Vec<Vec<BigInt>> = (0..self.target.ngens())
            .map(|i| {
                let mut x = e.solve(&unit_vec(self.target.ngens(), i)).expect("surjective");
                x.truncate(g);
                x
            })
            .collect();
        let m = IntMatrix::from_cols(&cols, g);
        Some(AbHom::new(self.target.clone(), self.source.clone(), m).expect("inverse of an isomorphism is well defined"))
    }
}

/// Kernel, image and cokernel of a homomorphism with their structure maps.
#[derive(Clone, Debug)]
pub struct Kio {
    pub kernel: FgAbGroup,
    /// kernel → source
    pub kernel_incl: AbHom,
    pub image: FgAbGroup,
    /// image → target
    pub image_incl: AbHom,
    /// source → image
    pub image_proj: AbHom,
    pub cokernel: FgAbGroup,
    /// target → cokernel
    pub coker_proj: AbHom,
}

pub fn hom_kio(f: &AbHom) -> Kio {
    let src = &f.source;
    let tgt = &f.target;
    let g = src.ngens();
    let pre = Lattice::from_generators(f.kernel_lattice_in_source(), g);
    let l = pre.rank();
    let rel_coords: Vec<Vec<BigInt>> = src
        .relation_cols()
        .iter()
        .map(|r| pre.coords(r).expect("relations lie in the kernel lattice"))
        .collect();
    let kernel = FgAbGroup::from_relation_cols(l, &rel_coords);
    let kernel_incl = AbHom::new(kernel.clone(), src.clone(), pre.basis_matrix()).expect("kernel inclusion");
    let image = FgAbGroup::from_relation_cols(g, pre.basis());
    let image_incl = AbHom::new(image.clone(), tgt.clone(), f.matrix.clone()).expect("image inclusion");
    let image_proj = AbHom::new(src.clone(), image.clone(), IntMatrix::identity(g)).expect("image projection");
    let cokernel = FgAbGroup::new(tgt.ngens(), f.matrix.hstack(tgt.relations()));
    let coker_proj =
        AbHom::new(tgt.clone(), cokernel.clone(), IntMatrix::identity(tgt.ngens())).expect("cokernel projection");
    Kio { kernel, kernel_incl, image, image_incl, image_proj, cokernel, coker_proj }
}

/// Whether `x` lies in the subgroup generated by `gens`; returns witness
/// coefficients `c` with `x = Σ c_i gens_i` modulo relations.
pub fn membership(group: &FgAbGroup, x: &[BigInt], gens: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let n = group.ngens();
    let s = IntMatrix::from_cols(gens, n);
    let stacked = s.hstack(group.relations());
    let mut y = ColumnEchelon::new(&stacked, true).solve(x)?;
    y.truncate(gens.len());
    Some(y)
}

/// Subquotient `Z / B` where `Z` is a lattice of cycles and `B ⊆ Z` is given
/// by generators; holds the coordinate machinery to reduce cycles.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub cycles: Lattice,
    pub group: FgAbGroup,
}

impl Subquotient {
    pub fn new(cycles: Lattice, boundaries: &[Vec<BigInt>]) -> Self {
        let z = cycles.rank();
        let rels: Vec<Vec<BigInt>> = boundaries
            .iter()
            .map(|b| cycles.coords(b).expect("boundary must be a cycle"))
            .collect();
        let group = FgAbGroup::from_relation_cols(z, &rels);
        Subquotient { cycles, group }
    }

    /// Canonical coordinates of a cycle, `None` if `x` is not a cycle.
    pub fn reduce(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.cycles.coords(x).map(|c| self.group.reduce(&c))
    }

    /// Ambient representative of canonical coordinates.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigInt> {
        let z = self.group.from_canonical(c);
        let mut x = zero_vec(self.cycles.dim());
        for (k, b) in z.iter().zip(self.cycles.basis()) {
            vec_axpy(&mut x, k, b);
        }
        x
    }

    /// Ambient representative of canonical generator `i`.
    pub fn rep(&self, i: usize) -> Vec<BigInt> {
        let mut c = zero_vec(self.group.canonical_rank());
        c[i] = BigInt::one();
        self.lift(&c)
    }
}

/// Sum of absolute values, a cheap size measure for tie-breaking.
pub fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::vec_from_i64;

    fn z() -> FgAbGroup {
        FgAbGroup::free(1)
    }

    #[test]
    fn display_forms() {
        assert_eq!(FgAbGroup::zero().to_string(), "0");
        assert_eq!(FgAbGroup::from_moduli(&[4, 0, 2]).to_string(), "Z^1 + Z/2 + Z/4");
        assert_eq!(FgAbGroup::from_moduli(&[1, 1]).to_string(), "0");
        assert_eq!(FgAbGroup::from_moduli(&[2, 3]).to_string(), "Z/6");
    }

    #[test]
    fn times_two_on_z() {
        let f = AbHom::new(z(), z(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        let k = f.kio();
        assert!(k.kernel.is_trivial());
        assert_eq!(k.image.to_string(), "Z^1");
        assert_eq!(k.cokernel.to_string(), "Z/2");
    }

    #[test]
    fn sum_map() {
        let f = AbHom::new(FgAbGroup::free(2), z(), IntMatrix::from_i64(1, 2, &[1, 1])).unwrap();
        let k = f.kio();
        assert_eq!(k.kernel.to_string(), "Z^1");
        assert!(k.cokernel.is_trivial());
        assert!(k.kernel_incl.after(&AbHom::identity(&k.kernel)).matrix().rows() == 2);
        assert!(f.after(&k.kernel_incl).is_zero());
    }

    #[test]
    fn reduction_mod_two() {
        let z4 = FgAbGroup::from_moduli(&[4]);
        let z2 = FgAbGroup::from_moduli(&[2]);
        let f = AbHom::new(z4.clone(), z2.clone(), IntMatrix::from_i64(1, 1, &[1])).unwrap();
        let k = f.kio();
        // oracle: enumerate Z/4 and count elements mapping to zero
        let zeros = (0..4).filter(|&a| a % 2 == 0).count();
        assert_eq!(k.kernel.order(), Some(BigInt::from(zeros)));
        assert_eq!(k.kernel.to_string(), "Z/2");
        assert!(k.cokernel.is_trivial());
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let z2 = FgAbGroup::from_moduli(&[2]);
        assert!(AbHom::new(z2, z(), IntMatrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn membership_examples() {
        let g = z();
        assert!(membership(&g, &vec_from_i64(&[0]), &[vec_from_i64(&[5])]).is_some());
        assert!(membership(&g, &vec_from_i64(&[1]), &[vec_from_i64(&[2])]).is_none());
        let w = membership(&g, &vec_from_i64(&[2]), &[vec_from_i64(&[6]), vec_from_i64(&[10])]).unwrap();
        assert_eq!(&w[0] * 6 + &w[1] * 10, BigInt::from(2));
    }

    #[test]
    fn inverse_of_iso() {
        let g = FgAbGroup::from_moduli(&[0, 3]);
        let f = AbHom::new(g.clone(), g.clone(), IntMatrix::from_i64(2, 2, &[1, 0, 1, 2])).unwrap();
        let inv = f.inverse().unwrap();
        assert!(inv.after(&f).same_map(&AbHom::identity(&g)));
        assert!(f.after(&inv).same_map(&AbHom::identity(&g)));
    }
}
