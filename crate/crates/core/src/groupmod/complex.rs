use super::group::{FiniteGroup, Subgroup};
use super::module::{GHom, GModule};
use crate::error::{Error, Result};
use crate::intlin::{BigInt, ColumnEchelon, IntMatrix, Lattice, Subquotient};
use std::collections::BTreeMap;

/// Bounded cochain complex of modules; `d^q : C^q → C^{q+1}`. Zero terms are
/// not stored.
#[derive(Clone, Debug)]
pub struct GComplex {
    group: FiniteGroup,
    terms: BTreeMap<i32, GModule>,
    diffs: BTreeMap<i32, IntMatrix>,
}

/// Cycles of `C^q` modulo boundaries, as a module, with the cycle lattice.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: GModule,
    pub sub: Subquotient,
}

impl GComplex {
    /// Validates equivariance of each differential and `d∘d = 0`.
    pub fn new(group: &FiniteGroup, terms: BTreeMap<i32, GModule>, diffs: BTreeMap<i32, IntMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(group, terms, diffs)?;
        for (&q, m) in &c.diffs {
            GHom::new(&c.term(q), &c.term(q + 1), m.clone())?;
        }
        for (&q, m) in &c.diffs {
            let Some(next) = c.diffs.get(&(q + 1)) else { continue };
            let tgt = c.term(q + 2);
            let p = next.mul(m);
            if !(0..p.cols()).all(|j| tgt.underlying().is_zero_elem(&p.col(j))) {
                return Err(Error::NotAComplex(format!("d^{} after d^{q} is not zero", q + 1)));
            }
        }
        Ok(c)
    }

    pub(crate) fn new_unchecked(
        group: &FiniteGroup,
        terms: BTreeMap<i32, GModule>,
        diffs: BTreeMap<i32, IntMatrix>,
    ) -> Result<Self> {
        let terms: BTreeMap<i32, GModule> = terms.into_iter().filter(|(_, m)| m.rank() > 0).collect();
        for m in terms.values() {
            if m.group() != group {
                return Err(Error::DimensionMismatch("term over a different group".into()));
            }
        }
        let rank = |q: i32| terms.get(&q).map_or(0, |m| m.rank());
        let mut kept = BTreeMap::new();
        for (q, m) in diffs {
            if m.rows() != rank(q + 1) || m.cols() != rank(q) {
                return Err(Error::DimensionMismatch(format!(
                    "d^{q} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    rank(q + 1),
                    rank(q)
                )));
            }
            if m.rows() > 0 && m.cols() > 0 {
                kept.insert(q, m);
            }
        }
        Ok(GComplex { group: group.clone(), terms, diffs: kept })
    }

    /// A single module in one degree.
    pub fn concentrated(m: &GModule, degree: i32) -> Self {
        Self::new_unchecked(m.group(), BTreeMap::from([(degree, m.clone())]), BTreeMap::new())
            .expect("single term")
    }

    /// `[source → target]` with the source in degree `low`.
    pub fn two_term(f: &GHom, low: i32) -> Self {
        let terms = BTreeMap::from([(low, f.source.clone()), (low + 1, f.target.clone())]);
        Self::new_unchecked(f.source.group(), terms, BTreeMap::from([(low, f.matrix().clone())]))
            .expect("two-term complex")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn term(&self, q: i32) -> GModule {
        self.terms.get(&q).cloned().unwrap_or_else(|| GModule::zero(&self.group))
    }

    pub fn terms(&self) -> &BTreeMap<i32, GModule> {
        &self.terms
    }

    pub fn diff(&self, q: i32) -> IntMatrix {
        self.diffs
            .get(&q)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.term(q + 1).rank(), self.term(q).rank()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest and highest degrees with a nonzero term.
    pub fn range(&self) -> Option<(i32, i32)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn total_rank(&self) -> usize {
        self.terms.values().map(|m| m.rank()).sum()
    }

    /// `ℋ^q = ker d^q / im d^{q−1}` with its induced action.
    pub fn homology(&self, q: i32) -> Homology {
        let c = self.term(q);
        let cyc = cycle_lattice(&c, &self.term(q + 1), &self.diff(q));
        let mut bounds = self.diff(q - 1).col_vecs();
        bounds.extend(c.underlying().relation_cols());
        let sub = Subquotient::new(cyc.clone(), &bounds);
        let action = c
            .actions()
            .iter()
            .map(|m| {
                let cols: Vec<Vec<BigInt>> = cyc
                    .basis()
                    .iter()
                    .map(|b| cyc.coords(&m.mul_vec(b)).expect("cycles are stable"))
                    .collect();
                IntMatrix::from_cols(&cols, cyc.rank())
            })
            .collect();
        let module = GModule::new_unchecked(&self.group, sub.group.clone(), action);
        Homology { module, sub }
    }

    /// Canonical truncation: degrees below `n` kept, degree `n` replaced by
    /// `ker d^n`, nothing above.
    pub fn truncate(&self, n: i32) -> GComplex {
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (&q, m) in &self.terms {
            if q < n {
                terms.insert(q, m.clone());
            }
        }
        for (&q, d) in &self.diffs {
            if q + 1 < n {
                diffs.insert(q, d.clone());
            }
        }
        let c = self.term(n);
        let cyc = cycle_lattice(&c, &self.term(n + 1), &self.diff(n));
        let (kg, _) = super::module::sub_group(c.underlying(), &cyc);
        let action = c
            .actions()
            .iter()
            .map(|m| {
                let cols: Vec<Vec<BigInt>> =
                    cyc.basis().iter().map(|b| cyc.coords(&m.mul_vec(b)).expect("stable")).collect();
                IntMatrix::from_cols(&cols, cyc.rank())
            })
            .collect();
        let km = GModule::new_unchecked(&self.group, kg, action);
        let prev = self.diff(n - 1);
        let cols: Vec<Vec<BigInt>> = prev
            .col_vecs()
            .iter()
            .map(|v| cyc.coords(v).expect("boundaries are cycles"))
            .collect();
        diffs.insert(n - 1, IntMatrix::from_cols(&cols, cyc.rank()));
        terms.insert(n, km);
        Self::new_unchecked(&self.group, terms, diffs).expect("truncation")
    }

    /// `C[k]`: degree `d` holds `C^{d+k}`, differential scaled by `(−1)^k`.
    pub fn shift(&self, k: i32) -> GComplex {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        let terms = self.terms.iter().map(|(&q, m)| (q - k, m.clone())).collect();
        let diffs = self.diffs.iter().map(|(&q, d)| (q - k, d.scale(&BigInt::from(sign)))).collect();
        Self::new_unchecked(&self.group, terms, diffs).expect("shift")
    }

    pub fn restrict(&self, h: &Subgroup) -> GComplex {
        let (hg, _) = h.as_group();
        let terms = self.terms.iter().map(|(&q, m)| (q, m.restrict(h))).collect();
        Self::new_unchecked(&hg, terms, self.diffs.clone()).expect("restriction")
    }

    /// Equivariant differential `d^q` as a module map.
    pub fn diff_hom(&self, q: i32) -> GHom {
        GHom::new_unchecked(&self.term(q), &self.term(q + 1), self.diff(q))
    }

    /// `C^q → coker d^{q−1}`, which is `ℋ^q` when `C^{q+1} = 0`.
    pub fn top_projection(&self, q: i32) -> GHom {
        self.diff_hom(q - 1).cokernel()
    }
}

/// `{x : d x = 0 in the target}`, a lattice containing the source relations.
pub fn cycle_lattice(src: &GModule, tgt: &GModule, d: &IntMatrix) -> Lattice {
    let n = src.rank();
    if n == 0 {
        return Lattice::zero(0);
    }
    let stacked = d.hstack(tgt.underlying().relations());
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::FgAbGroup;

    fn two(group: &FiniteGroup, a: usize, b: usize, m: IntMatrix) -> GComplex {
        let s = GModule::trivial(group, FgAbGroup::free(a));
        let t = GModule::trivial(group, FgAbGroup::free(b));
        GComplex::two_term(&GHom::new(&s, &t, m).unwrap(), -1)
    }

    #[test]
    fn homology_examples() {
        let g = FiniteGroup::cyclic(2);
        let c = two(&g, 1, 1, IntMatrix::from_i64(1, 1, &[2]));
        assert_eq!(c.homology(0).module.underlying().to_string(), "Z/2");
        assert!(c.homology(-1).module.underlying().is_trivial());
        let c = two(&g, 1, 1, IntMatrix::from_i64(1, 1, &[0]));
        assert_eq!(c.homology(0).module.underlying().to_string(), "Z^1");
        assert_eq!(c.homology(-1).module.underlying().to_string(), "Z^1");
        let c = two(&g, 2, 1, IntMatrix::from_i64(1, 2, &[1, 1]));
        assert_eq!(c.homology(-1).module.underlying().to_string(), "Z^1");
        assert!(c.homology(0).module.underlying().is_trivial());
    }

    #[test]
    fn truncation_and_shift() {
        let g = FiniteGroup::cyclic(2);
        let z = GComplex::concentrated(&GModule::trivial_z(&g), 0);
        let t = z.truncate(0);
        assert_eq!(t.range(), Some((0, 0)));
        let s = z.shift(1);
        assert_eq!(s.range(), Some((-1, -1)));
        let c = two(&g, 1, 1, IntMatrix::from_i64(1, 1, &[2]));
        assert!(c.truncate(-1).is_zero());
    }

    #[test]
    fn d_squared_checked() {
        let g = FiniteGroup::cyclic(2);
        let z = GModule::trivial_z(&g);
        let terms = BTreeMap::from([(0, z.clone()), (1, z.clone()), (2, z.clone())]);
        let diffs = BTreeMap::from([(0, IntMatrix::from_i64(1, 1, &[1])), (1, IntMatrix::from_i64(1, 1, &[1]))]);
        assert!(matches!(GComplex::new(&g, terms, diffs), Err(Error::NotAComplex(_))));
    }
}
