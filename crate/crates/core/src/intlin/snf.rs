//! Smith normal form with unimodular witnesses.
//!
//! Pivots are chosen as the nonzero entry of least absolute value, ties going
//! to the smallest (row, col), so the witnesses are reproducible.

use super::matrix::IntMatrix;
use super::scalar::{convert_cols, lift, Overflow, Scalar};
use num_bigint::BigInt;

struct Work<T> {
    a: Vec<Vec<T>>,
    u: Vec<Vec<T>>,
    /// stored transposed so that column ops on `U^{-1}` are row ops here
    u_inv_t: Vec<Vec<T>>,
    /// stored transposed for the same reason
    v_t: Option<Vec<Vec<T>>>,
}

fn ident<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// `rows[i] -= q * rows[t]`
fn row_sub<T: Scalar>(rows: &mut [Vec<T>], i: usize, t: usize, q: &T) -> Result<(), Overflow> {
    let (ri, rt) = if i < t {
        let (lo, hi) = rows.split_at_mut(t);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(i);
        (&mut hi[0], &lo[t])
    };
    for (x, y) in ri.iter_mut().zip(rt.iter()) {
        if !y.is_zero() {
            *x = lift(x.sub_mul(q, y))?;
        }
    }
    Ok(())
}

fn negate_row<T: Scalar>(row: &mut [T]) -> Result<(), Overflow> {
    for x in row.iter_mut() {
        *x = lift(x.neg())?;
    }
    Ok(())
}

impl<T: Scalar> Work<T> {
    fn m(&self) -> usize {
        self.a.len()
    }

    fn n(&self) -> usize {
        self.a.first().map_or(0, |r| r.len())
    }

    /// row_i -= q row_t
    fn row_op(&mut self, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
        row_sub(&mut self.a, i, t, q)?;
        row_sub(&mut self.u, i, t, q)?;
        // U^{-1} col_t += q col_i
        let mq = lift(q.neg())?;
        row_sub(&mut self.u_inv_t, t, i, &mq)
    }

    fn row_swap(&mut self, i: usize, t: usize) {
        self.a.swap(i, t);
        self.u.swap(i, t);
        self.u_inv_t.swap(i, t);
    }

    fn row_negate(&mut self, t: usize) -> Result<(), Overflow> {
        negate_row(&mut self.a[t])?;
        negate_row(&mut self.u[t])?;
        negate_row(&mut self.u_inv_t[t])
    }

    /// col_j -= q col_t
    fn col_op(&mut self, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
        for row in self.a.iter_mut() {
            if !row[t].is_zero() {
                row[j] = lift(row[j].sub_mul(q, &row[t]))?;
            }
        }
        if let Some(v) = self.v_t.as_mut() {
            row_sub(v, j, t, q)?;
        }
        Ok(())
    }

    fn col_swap(&mut self, j: usize, t: usize) {
        for row in self.a.iter_mut() {
            row.swap(j, t);
        }
        if let Some(v) = self.v_t.as_mut() {
            v.swap(j, t);
        }
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let (m, n) = (self.m(), self.n());
        for t in 0..m.min(n) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &self.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs_lt(&self.a[bi][bj])) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return Ok(()) };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                loop {
                    let p = self.a[t][t].clone();
                    for i in t + 1..m {
                        if !self.a[i][t].is_zero() {
                            let q = lift(self.a[i][t].div_floor(&p))?;
                            self.row_op(i, t, &q)?;
                        }
                    }
                    for j in t + 1..n {
                        if !self.a[t][j].is_zero() {
                            let q = lift(self.a[t][j].div_floor(&p))?;
                            self.col_op(j, t, &q)?;
                        }
                    }
                    // smallest leftover in the pivot row or column becomes the new pivot
                    let mut cand: Option<(usize, usize)> = None;
                    let better = |c: Option<(usize, usize)>, x: &T, a: &Vec<Vec<T>>| {
                        !x.is_zero() && c.is_none_or(|(ci, cj)| x.abs_lt(&a[ci][cj]))
                    };
                    for i in t + 1..m {
                        if better(cand, &self.a[i][t], &self.a) {
                            cand = Some((i, t));
                        }
                    }
                    for j in t + 1..n {
                        if better(cand, &self.a[t][j], &self.a) {
                            cand = Some((t, j));
                        }
                    }
                    match cand {
                        None => break,
                        Some((i, j)) => {
                            if i != t {
                                self.row_swap(t, i);
                            }
                            if j != t {
                                self.col_swap(t, j);
                            }
                        }
                    }
                }
                let p = self.a[t][t].clone();
                let mut bad = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !p.divides(&self.a[i][j]) {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    // row_t += row_i
                    Some(i) => self.row_op(t, i, &lift(T::one().neg())?)?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t)?;
            }
        }
        Ok(())
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: Option<IntMatrix>,
    /// diagonal of `D`, length `min(rows, cols)`, nonnegative
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| d.sign() != num_bigint::Sign::NoSign).count()
    }
}

fn finish<T: Scalar>(w: Work<T>, rows: usize, cols: usize) -> Snf {
    let big = |x: Vec<Vec<T>>| -> Vec<Vec<BigInt>> {
        x.into_iter().map(|r| r.into_iter().map(|v| v.to_big()).collect()).collect()
    };
    let diag = (0..rows.min(cols)).map(|i| w.a[i][i].to_big()).collect();
    let u_rows = big(w.u);
    let u = IntMatrix::from_rows(&u_rows, rows);
    let u_inv = IntMatrix::from_cols(&big(w.u_inv_t), rows);
    let v = w.v_t.map(|vt| IntMatrix::from_cols(&big(vt), cols));
    Snf { u, u_inv, v, diag, rows, cols }
}

fn attempt<T: Scalar>(m: &IntMatrix, track_v: bool) -> Option<Snf> {
    let rows = convert_cols::<T>(&m.row_vecs())?;
    let mut w = Work {
        a: rows,
        u: ident(m.rows()),
        u_inv_t: ident(m.rows()),
        v_t: track_v.then(|| ident(m.cols())),
    };
    w.run().ok()?;
    Some(finish(w, m.rows(), m.cols()))
}

/// Smith normal form; `V` is only accumulated when `track_v` is set.
pub fn smith(m: &IntMatrix, track_v: bool) -> Snf {
    attempt::<i64>(m, track_v)
        .or_else(|| attempt::<BigInt>(m, track_v))
        .expect("bigint arithmetic cannot overflow")
}

/// Full `(U, D, V)` triple.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m, true);
    let d = s.d_matrix();
    (s.u, d, s.v.expect("tracked"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith(m, true);
        let v = s.v.clone().unwrap();
        assert_eq!(s.u.mul(m).mul(&v), s.d_matrix());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        s
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]));
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_and_identity() {
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.d_matrix().is_zero());
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d_matrix(), IntMatrix::identity(3));
        assert_eq!(s.u, IntMatrix::identity(3));
        assert_eq!(s.v.unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn needs_divisibility_fix() {
        let s = check(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 3;
        let s = check(&IntMatrix::from_i64(2, 2, &[big, big - 1, big - 7, big + 5]));
        let det = IntMatrix::from_i64(2, 2, &[big, big - 1, big - 7, big + 5]).det();
        assert_eq!(&s.diag[0] * &s.diag[1], num_traits::Signed::abs(&det));
    }
}
