//! Exact Tate hypercohomology of finite groups, group extensions, and Weil
//! groups built from class complexes.

pub mod error;
pub mod ext;
pub mod groupmod;
pub mod intlin;
pub mod io;
pub mod reciprocity;
pub mod sample;
pub mod shiftmod;
pub mod tate;
pub mod weil;

pub use error::{Error, Result};
