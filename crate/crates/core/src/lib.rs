//! Exact computer algebra for generalized Weyl algebras over polynomial and
//! Laurent polynomial rings.

pub mod error;
pub mod gwa;
pub mod laurent;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod plane;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod smc;

pub use error::{Error, Result};
