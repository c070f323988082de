use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, k: i64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(k);
        }
        m
    }

    /// Builds from explicit rows. `cols` is needed when there are no rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row {i}");
            for (j, v) in r.iter().enumerate() {
                m.data[i * cols + j] = v.clone().into();
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        IntMatrix { rows, cols, data: vals.iter().map(|&v| BigInt::from(v)).collect() }
    }

    /// Builds from columns, each of length `rows`.
    pub fn from_cols(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &IntMatrix) -> IntMatrix {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    /// `[self | o]`
    pub fn hstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// `[self ; o]`
    pub fn vstack(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        IntMatrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, o: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, o);
        out
    }

    /// Writes `block` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = idx.iter().map(|&j| self.col(j)).collect();
        Self::from_cols(&cols, self.rows)
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64()).collect())
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", r.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

pub fn vec_from_i64(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn zero_vec(n: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = zero_vec(n);
    v[i] = BigInt::one();
    v
}

pub fn vec_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * k).collect()
}

pub fn vec_add_assign(a: &mut [BigInt], b: &[BigInt]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// `a += k * b`
pub fn vec_axpy(a: &mut [BigInt], k: &BigInt, b: &[BigInt]) {
    if k.is_zero() {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x += k * y;
        }
    }
}

pub fn vec_is_zero(a: &[BigInt]) -> bool {
    a.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = IntMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(m.det(), BigInt::from(6));
        let s = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        assert_eq!(s.det(), BigInt::from(-8));
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::one());
    }

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let b = a.transpose();
        let p = a.mul(&b);
        assert_eq!(p, IntMatrix::from_i64(2, 2, &[14, 32, 32, 77]));
        assert_eq!(a.mul_vec(&vec_from_i64(&[1, 0, -1])), vec_from_i64(&[-2, -2]));
    }
}
