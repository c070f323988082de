use hyperclass::intlin::{hom_kio, smith, smith_normal_form, AbHom, BigInt, FgAbGroup, IntMatrix};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(move |rows| IntMatrix::from_rows(&rows, c))
    })
}

/// Product of elementary matrices from `(i, j, c)` triples.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(c));
        p = e.mul(&p);
    }
    p
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_exact(m in matrix(6)) {
        let (u, d, v) = smith_normal_form(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        prop_assert!(u.det().abs().is_one());
        prop_assert!(v.det().abs().is_one());
        let diag: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| d.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn decomposition_ignores_presentation(m in matrix(5), p in ops(), q in ops()) {
        let a = FgAbGroup::new(m.rows(), m.clone());
        let changed = unimodular(m.rows(), &p).mul(&m).mul(&unimodular(m.cols(), &q));
        let b = FgAbGroup::new(m.rows(), changed);
        prop_assert_eq!(a.moduli(), b.moduli());
        prop_assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn kernel_image_cokernel(m in matrix(5), rel in matrix(5)) {
        let r = m.rows();
        let rels = IntMatrix::from_cols(&rel.col_vecs().into_iter().map(|mut c| { c.resize(r, BigInt::zero()); c }).collect::<Vec<_>>(), r);
        let tgt = FgAbGroup::new(r, rels.clone());
        let f = AbHom::new(FgAbGroup::free(m.cols()), tgt, m.clone()).unwrap();
        let k = hom_kio(&f);
        prop_assert_eq!(k.kernel.free_rank() + k.image.free_rank(), m.cols());
        let s = smith(&m.hstack(&rels), false);
        let mut torsion: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
        torsion.sort();
        let mut got = k.cokernel.torsion();
        got.sort();
        prop_assert_eq!(got, torsion);
        prop_assert_eq!(k.cokernel.free_rank(), r - s.rank());
    }
}
