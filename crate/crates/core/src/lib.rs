//! Exact intersection-theoretic invariants of fibration degenerations.

pub mod algebra;
pub mod error;
pub mod intersection;
pub mod json;
pub mod functionals;
pub mod winv;
pub mod degenerations;
pub mod gallery;
pub mod cli;

pub use algebra::{Scalar, EPS, J};
pub use error::{Diagnostic, Error};
pub use intersection::{load_datum, Poly, TestConfigDatum};
