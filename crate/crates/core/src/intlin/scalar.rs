//! Integer arithmetic used inside the elimination kernels.
//!
//! Every elimination routine is written once over [`Scalar`] and run first
//! with checked `i64` arithmetic. If any intermediate value overflows the
//! routine is rerun with `BigInt`, so results are always exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;

pub(crate) trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Option<Self>;
    fn divides(&self, o: &Self) -> bool;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        if *o == -1 {
            return self.checked_neg();
        }
        Some(Integer::div_floor(self, o))
    }
    fn divides(&self, o: &Self) -> bool {
        if *self == 0 {
            return *o == 0;
        }
        o.checked_rem(*self).is_none_or(|r| r == 0)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn div_floor(&self, o: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, o))
    }
    fn divides(&self, o: &Self) -> bool {
        if Zero::is_zero(self) {
            return Zero::is_zero(o);
        }
        Zero::is_zero(&(o % self))
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Marker error: a checked `i64` operation overflowed.
#[derive(Debug)]
pub(crate) struct Overflow;

pub(crate) fn lift<T: Scalar>(v: Option<T>) -> Result<T, Overflow> {
    v.ok_or(Overflow)
}

/// Converts a column-major block of big integers to `T`, failing if any entry
/// does not fit.
pub(crate) fn convert_cols<T: Scalar>(cols: &[Vec<BigInt>]) -> Option<Vec<Vec<T>>> {
    cols.iter()
        .map(|c| c.iter().map(T::from_big).collect::<Option<Vec<T>>>())
        .collect()
}
