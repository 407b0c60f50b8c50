//! Reflection-factorization intervals below Coxeter elements of irreducible
//! euclidean Coxeter groups, computed in exact rational arithmetic.

pub mod coxeter;
pub mod crystal;
pub mod error;
pub mod horizontal;
pub mod interval;
pub mod isometry;
pub mod linalg;
pub mod modelposet;
pub mod ncp;

pub use error::{Error, Result};
