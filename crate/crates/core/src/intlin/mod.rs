//! Exact integer linear algebra.

mod abgroup;
mod echelon;
mod matrix;
mod scalar;
mod snf;

pub use abgroup::{hom_kio, l1, membership, AbHom, FgAbGroup, Kio, Subquotient};
pub use echelon::{ColumnEchelon, Lattice};
pub use matrix::{unit_vec, vec_add, vec_add_assign, vec_axpy, vec_from_i64, vec_is_zero, vec_scale, vec_sub, zero_vec, IntMatrix};
pub use snf::{smith, smith_normal_form, Snf};

pub use num_bigint::BigInt;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}
