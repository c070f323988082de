//! Seeded random modules and complexes for the randomized suites.

use crate::groupmod::{FiniteGroup, GComplex, GHom, GModule, Subgroup};
use crate::intlin::{BigInt, ColumnEchelon, FgAbGroup, IntMatrix};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z[G/H]` on left cosets.
pub fn permutation_module(h: &Subgroup) -> GModule {
    let g = h.parent();
    let cosets = h.left_cosets();
    let k = cosets.len();
    let which = |x: usize| cosets.iter().position(|c| c.contains(&x)).expect("cosets cover");
    let action = g
        .elements()
        .map(|s| {
            let mut m = IntMatrix::zeros(k, k);
            for (i, c) in cosets.iter().enumerate() {
                m.set(which(g.mul(s, c[0])), i, BigInt::from(1));
            }
            m
        })
        .collect();
    GModule::new(g, FgAbGroup::free(k), action).expect("permutation action")
}

/// Kernel of the augmentation of `Z[G/H]`.
pub fn coset_ideal(h: &Subgroup) -> GModule {
    let p = permutation_module(h);
    let ones = IntMatrix::from_rows(&[vec![1i64; p.rank()]], p.rank());
    let aug = GHom::new(&p, &GModule::trivial_z(p.group()), ones).expect("augmentation");
    aug.kernel().source
}

/// Rank-one modules on which `G` acts by a character of order two.
pub fn sign_modules(g: &FiniteGroup) -> Vec<GModule> {
    let Ok(subs) = g.subgroups() else { return Vec::new() };
    subs.iter()
        .filter(|h| 2 * h.order() == g.order())
        .map(|h| {
            let action = g.elements().map(|s| IntMatrix::scalar(1, if h.contains(s) { 1 } else { -1 })).collect();
            GModule::new(g, FgAbGroup::free(1), action).expect("character")
        })
        .collect()
}

/// Building blocks of rank at most `max_rank`.
pub fn pieces(g: &FiniteGroup, max_rank: usize) -> Vec<GModule> {
    let mut out = vec![GModule::trivial_z(g)];
    for m in [2i64, 3] {
        out.push(GModule::trivial(g, FgAbGroup::from_moduli(&[m])));
    }
    for s in sign_modules(g) {
        out.push(GModule::new(g, FgAbGroup::from_moduli(&[4]), s.actions().to_vec()).expect("sign mod 4"));
        out.push(s);
    }
    if let Ok(subs) = g.subgroups() {
        for h in subs {
            let idx = g.order() / h.order();
            if idx > 1 && idx <= max_rank {
                out.push(permutation_module(&h));
            }
            if idx > 2 && idx - 1 <= max_rank {
                out.push(coset_ideal(&h));
            }
        }
    }
    out.retain(|m| m.rank() <= max_rank);
    out
}

/// Conjugate the presentation by a random unimodular matrix.
pub fn scramble(rng: &mut SampleRng, m: &GModule) -> GModule {
    let n = m.rank();
    if n < 2 {
        return m.clone();
    }
    let (mut p, mut pinv) = (IntMatrix::identity(n), IntMatrix::identity(n));
    for _ in 0..3 {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c: i64 = rng.gen_range(-2..=2);
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(c));
        let mut einv = IntMatrix::identity(n);
        einv.set(i, j, BigInt::from(-c));
        p = e.mul(&p);
        pinv = pinv.mul(&einv);
    }
    let rels = p.mul(m.underlying().relations());
    let action = m.actions().iter().map(|a| p.mul(&a.mul(&pinv))).collect();
    GModule::new(m.group(), FgAbGroup::new(n, rels), action).expect("conjugated action")
}

/// Direct sum of random pieces with total rank at most `max_rank`.
pub fn random_module(rng: &mut SampleRng, g: &FiniteGroup, max_rank: usize) -> GModule {
    let all = pieces(g, max_rank);
    let mut m = all.choose(rng).expect("trivial module is a piece").clone();
    while rng.gen_bool(0.4) {
        let room = max_rank - m.rank();
        let fit: Vec<&GModule> = all.iter().filter(|p| p.rank() <= room).collect();
        let Some(p) = fit.choose(rng) else { break };
        m = m.direct_sum(p);
    }
    scramble(rng, &m)
}

/// Basis of equivariant integer matrices `src → tgt`, ignoring relations.
pub fn equivariant_basis(src: &GModule, tgt: &GModule) -> Vec<IntMatrix> {
    let (a, b) = (src.rank(), tgt.rank());
    let g = src.group();
    let mut eqs: Option<IntMatrix> = None;
    for s in g.generators() {
        // ρ_t(s) X − X ρ_s(s), with X read column-major
        let mut m = IntMatrix::zeros(a * b, a * b);
        let (rt, rs) = (tgt.action(s), src.action(s));
        for col in 0..a {
            for row in 0..b {
                let out = col * b + row;
                for k in 0..b {
                    m.add_at(out, col * b + k, rt.get(row, k));
                }
                for k in 0..a {
                    m.add_at(out, k * b + row, &-rs.get(k, col));
                }
            }
        }
        eqs = Some(match eqs {
            None => m,
            Some(e) => e.vstack(&m),
        });
    }
    let Some(eqs) = eqs else {
        return (0..a * b).map(|i| IntMatrix::from_cols(&unit_cols(a, b, i), b)).collect();
    };
    ColumnEchelon::new(&eqs, true).kernel_basis().iter().map(|v| IntMatrix::from_cols(&split_cols(v, a, b), b)).collect()
}

fn unit_cols(a: usize, b: usize, i: usize) -> Vec<Vec<BigInt>> {
    split_cols(&crate::intlin::unit_vec(a * b, i), a, b)
}

fn split_cols(v: &[BigInt], a: usize, b: usize) -> Vec<Vec<BigInt>> {
    (0..a).map(|c| v[c * b..(c + 1) * b].to_vec()).collect()
}

/// A random equivariant map that respects relations, or zero.
pub fn random_map(rng: &mut SampleRng, src: &GModule, tgt: &GModule) -> IntMatrix {
    let basis = equivariant_basis(src, tgt);
    for _ in 0..8 {
        let mut m = IntMatrix::zeros(tgt.rank(), src.rank());
        for b in &basis {
            let c: i64 = rng.gen_range(-2..=2);
            m = m.add(&b.scale(&BigInt::from(c)));
        }
        if GHom::new(src, tgt, m.clone()).is_ok() {
            return m;
        }
    }
    IntMatrix::zeros(tgt.rank(), src.rank())
}

/// Bounded complex with at most `max_terms` terms of rank at most
/// `max_rank`, top degree 0 or 1.
pub fn random_complex(rng: &mut SampleRng, g: &FiniteGroup, max_terms: usize, max_rank: usize) -> GComplex {
    let k = rng.gen_range(1..=max_terms);
    let top: i32 = rng.gen_range(0..=1);
    let lo = top - k as i32 + 1;
    let terms: BTreeMap<i32, GModule> = (lo..=top).map(|q| (q, random_module(rng, g, max_rank))).collect();
    let mut diffs: BTreeMap<i32, IntMatrix> = BTreeMap::new();
    for q in lo..top {
        let (s, t) = (&terms[&q], &terms[&(q + 1)]);
        let mut d = random_map(rng, s, t);
        if let Some(prev) = diffs.get(&(q - 1)) {
            let comp = d.mul(prev);
            if !(0..comp.cols()).all(|j| t.underlying().is_zero_elem(&comp.col(j))) {
                d = IntMatrix::zeros(t.rank(), s.rank());
            }
        }
        diffs.insert(q, d);
    }
    GComplex::new(g, terms, diffs).expect("random complex")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_valid_and_reproducible() {
        for name in ["C2", "C3", "C4", "V4", "S3", "C6"] {
            let g = FiniteGroup::named(name).unwrap();
            let mut r = rng(7);
            for _ in 0..10 {
                let m = random_module(&mut r, &g, 3);
                assert!(m.rank() <= 3);
                GModule::new(&g, m.underlying().clone(), m.actions().to_vec()).unwrap();
                let c = random_complex(&mut r, &g, 3, 2);
                assert!(c.terms().values().all(|t| t.rank() <= 2));
            }
        }
        let g = FiniteGroup::symmetric3();
        let a = random_complex(&mut rng(3), &g, 3, 2);
        let b = random_complex(&mut rng(3), &g, 3, 2);
        assert_eq!(a.terms().keys().collect::<Vec<_>>(), b.terms().keys().collect::<Vec<_>>());
        for q in a.terms().keys() {
            assert_eq!(a.diff(*q), b.diff(*q));
        }
    }

    #[test]
    fn equivariant_maps_commute() {
        let g = FiniteGroup::symmetric3();
        let h = Subgroup::generated_by(&g, &[1]);
        let p = permutation_module(&h);
        let z = GModule::trivial_z(&g);
        for m in equivariant_basis(&p, &z) {
            GHom::new(&p, &z, m).unwrap();
        }
        assert_eq!(equivariant_basis(&p, &p).len(), 2);
    }
}
