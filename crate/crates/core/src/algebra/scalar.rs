use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// Coefficient field for the polynomial layer.
///
/// Anything exact, ordered and signed qualifies: `BigRational` is what the
/// rest of the crate runs on, `Rational64` is handy for small tests.
pub trait Field:
    Num + Signed + Clone + Ord + Debug + Display + FromPrimitive + Send + Sync + 'static
{
}

impl<T> Field for T where
    T: Num + Signed + Clone + Ord + Debug + Display + FromPrimitive + Send + Sync + 'static
{
}

/// The exact scalar every computation in the crate is carried out in.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(Scalar::new(p, q))
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_scalar<T: Field>(v: &T) -> String {
    v.to_string()
}

/// Decimal rendering for human-readable output only.
pub fn approx_scalar(v: &Scalar) -> String {
    let num = v.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = v.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let x = num / den;
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.6}")
    }
}

/// Binomial coefficient `C(a, b)`, zero outside `0 <= b <= a`.
pub fn binomial<T: Field>(a: u64, b: i64) -> T {
    if b < 0 || b as u64 > a {
        return T::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = T::one();
    for i in 0..b {
        let top = T::from_u64(a - i).expect("u64 fits the field");
        let bottom = T::from_u64(i + 1).expect("u64 fits the field");
        acc = acc * top / bottom;
    }
    acc
}

pub fn from_usize<T: Field>(v: usize) -> T {
    T::from_usize(v).expect("usize fits the field")
}

pub(crate) fn is_one<T: Field>(v: &T) -> bool {
    v.is_one()
}
