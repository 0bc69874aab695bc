pub mod parse;
pub mod poly;
pub mod ratfn;
pub mod scalar;

pub use parse::parse_poly;
pub use poly::{div_rem_in, gcd_in, poly_div_rem, Monomial, SparsePoly, EPS, J};
pub use ratfn::RationalFn;
pub use scalar::{approx_scalar, binomial, format_scalar, int, parse_scalar, ratio, Field, Scalar};
