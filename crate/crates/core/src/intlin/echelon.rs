//! Column echelon (Hermite) form by unimodular column operations.
//!
//! `M·V = [E | 0]` where the columns of `E` have strictly increasing pivot
//! rows, positive pivots, zeros above each pivot, and entries left of a pivot
//! reduced into `[0, pivot)`.

use super::matrix::IntMatrix;
use super::scalar::{convert_cols, lift, Overflow, Scalar};
use num_bigint::BigInt;

struct Raw<T> {
    cols: Vec<Vec<T>>,
    pivots: Vec<usize>,
    v: Option<Vec<Vec<T>>>,
}

fn col_sub<T: Scalar>(a: &mut [T], q: &T, b: &[T], from: usize) -> Result<(), Overflow> {
    for i in from..a.len() {
        if !b[i].is_zero() {
            a[i] = lift(a[i].sub_mul(q, &b[i]))?;
        }
    }
    Ok(())
}

fn echelon_raw<T: Scalar>(mut cols: Vec<Vec<T>>, m: usize, track: bool) -> Result<Raw<T>, Overflow> {
    let n = cols.len();
    let mut v: Option<Vec<Vec<T>>> = track.then(|| {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
            .collect()
    });
    let mut pivots = Vec::new();
    let mut c = 0;
    for r in 0..m {
        if c == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in c..n {
                if !cols[j][r].is_zero() && best.is_none_or(|b| cols[j][r].abs_lt(&cols[b][r])) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            cols.swap(c, b);
            if let Some(v) = v.as_mut() {
                v.swap(c, b);
            }
            let p = cols[c][r].clone();
            let mut clean = true;
            for j in c + 1..n {
                if cols[j][r].is_zero() {
                    continue;
                }
                let q = lift(cols[j][r].div_floor(&p))?;
                let (lo, hi) = cols.split_at_mut(j);
                col_sub(&mut hi[0], &q, &lo[c], r)?;
                if let Some(v) = v.as_mut() {
                    let (lo, hi) = v.split_at_mut(j);
                    col_sub(&mut hi[0], &q, &lo[c], 0)?;
                }
                if !cols[j][r].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if c < n && !cols[c][r].is_zero() {
            if cols[c][r].is_negative() {
                for x in cols[c].iter_mut().skip(r) {
                    *x = lift(x.neg())?;
                }
                if let Some(v) = v.as_mut() {
                    for x in v[c].iter_mut() {
                        *x = lift(x.neg())?;
                    }
                }
            }
            let p = cols[c][r].clone();
            for j in 0..c {
                let q = lift(cols[j][r].div_floor(&p))?;
                if q.is_zero() {
                    continue;
                }
                let (lo, hi) = cols.split_at_mut(c);
                col_sub(&mut lo[j], &q, &hi[0], r)?;
                if let Some(v) = v.as_mut() {
                    let (lo, hi) = v.split_at_mut(c);
                    col_sub(&mut lo[j], &q, &hi[0], 0)?;
                }
            }
            pivots.push(r);
            c += 1;
        }
    }
    Ok(Raw { cols, pivots, v })
}

fn to_big(cols: Vec<Vec<impl Scalar>>) -> Vec<Vec<BigInt>> {
    cols.into_iter().map(|c| c.into_iter().map(|x| x.to_big()).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    nrows: usize,
    ncols: usize,
    pivots: Vec<usize>,
    /// the nonzero echelon columns
    basis: Vec<Vec<BigInt>>,
    /// `V` stored column by column when requested
    transform: Option<Vec<Vec<BigInt>>>,
}

impl ColumnEchelon {
    pub fn new(m: &IntMatrix, track: bool) -> Self {
        Self::from_cols(m.col_vecs(), m.rows(), track)
    }

    pub fn from_cols(cols: Vec<Vec<BigInt>>, nrows: usize, track: bool) -> Self {
        let ncols = cols.len();
        let raw = match convert_cols::<i64>(&cols).map(|c| echelon_raw(c, nrows, track)) {
            Some(Ok(r)) => Raw { cols: to_big(r.cols), pivots: r.pivots, v: r.v.map(to_big) },
            _ => echelon_raw::<BigInt>(cols, nrows, track).expect("bigint arithmetic cannot overflow"),
        };
        let rank = raw.pivots.len();
        let mut basis = raw.cols;
        basis.truncate(rank);
        ColumnEchelon { nrows, ncols, pivots: raw.pivots, basis, transform: raw.v }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn transform(&self) -> Option<IntMatrix> {
        self.transform.as_ref().map(|v| IntMatrix::from_cols(v, self.ncols))
    }

    /// Basis of the integer kernel. Needs the transform.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let v = self.transform.as_ref().expect("kernel requires a tracked transform");
        v[self.rank()..].to_vec()
    }

    /// Coordinates `y` with `E·y = b`, if `b` lies in the column lattice.
    pub fn coords(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.nrows);
        let mut r = b.to_vec();
        let mut y = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            let col = &self.basis[k];
            if r[p].is_zero() {
                y.push(BigInt::from(0));
                continue;
            }
            let (q, rem) = num_integer::Integer::div_rem(&r[p], &col[p]);
            if rem != BigInt::from(0) {
                return None;
            }
            for i in p..self.nrows {
                if !col[i].is_zero() {
                    r[i] -= &q * &col[i];
                }
            }
            y.push(q);
        }
        r.iter().all(|x| x.sign() == num_bigint::Sign::NoSign).then_some(y)
    }

    /// Some `x` with `M·x = b`. Needs the transform.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.coords(b)?;
        let v = self.transform.as_ref().expect("solve requires a tracked transform");
        let mut x = vec![BigInt::from(0); self.ncols];
        for (k, yk) in y.iter().enumerate() {
            super::matrix::vec_axpy(&mut x, yk, &v[k]);
        }
        Some(x)
    }
}

/// A sublattice of `Z^dim` held in echelon form.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    ech: ColumnEchelon,
}

impl Lattice {
    pub fn from_generators(gens: Vec<Vec<BigInt>>, dim: usize) -> Self {
        Lattice { dim, ech: ColumnEchelon::from_cols(gens, dim, false) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(Vec::new(), dim)
    }

    pub fn full(dim: usize) -> Self {
        Self::from_generators((0..dim).map(|i| super::matrix::unit_vec(dim, i)).collect(), dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        self.ech.basis()
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_cols(self.ech.basis(), self.dim)
    }

    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        self.ech.coords(x)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_lattice(&self, o: &Lattice) -> bool {
        o.basis().iter().all(|b| self.contains(b))
    }

    pub fn same_as(&self, o: &Lattice) -> bool {
        self.ech.basis == o.ech.basis
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        let mut g = self.basis().to_vec();
        g.extend(o.basis().iter().cloned());
        Lattice::from_generators(g, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::vec_from_i64;

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let e = ColumnEchelon::new(&m, true);
        assert_eq!(e.rank(), 2);
        let k = e.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| *x == BigInt::from(0)));
        let b = vec_from_i64(&[6, 15]);
        let x = e.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        // (1,0) is not in the image: the column lattice has index 3
        assert!(e.solve(&vec_from_i64(&[1, 0])).is_none());
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::from_generators(vec![vec_from_i64(&[6]), vec_from_i64(&[10])], 1);
        assert!(l.contains(&vec_from_i64(&[2])));
        assert!(!l.contains(&vec_from_i64(&[1])));
        assert_eq!(l.basis(), &[vec_from_i64(&[2])]);
    }
}
