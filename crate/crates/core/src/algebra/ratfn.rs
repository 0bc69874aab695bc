use std::fmt;

use super::poly::{div_rem_in, gcd_in, make_monic, SparsePoly, J};
use super::scalar::Field;
use crate::error::Error;

/// `num(j) / den(j)` in lowest terms with a monic denominator.
///
/// The denominator lives in `Q[j]`; the numerator may carry parameters
/// (eps, t, ...) in its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn<T: Field> {
    num: SparsePoly<T>,
    den: SparsePoly<T>,
}

impl<T: Field> RationalFn<T> {
    pub fn new(num: SparsePoly<T>, den: SparsePoly<T>) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if den.variables().iter().any(|v| v != J) {
            return Err(Error::MixedVariableDivision);
        }
        if num.is_zero() {
            return Ok(RationalFn { num, den: SparsePoly::one() });
        }
        // gcd of den with every Q[j] slice of the numerator
        let mut g = den.clone();
        for (_, slice) in j_slices(&num) {
            g = gcd_in(&g, &slice, J)?;
            if g.degree_in(J) == Some(0) {
                break;
            }
        }
        let (num, den) = if g.degree_in(J).unwrap_or(0) > 0 {
            let (qn, rn) = div_rem_in(&num, &g, J)?;
            let (qd, rd) = div_rem_in(&den, &g, J)?;
            debug_assert!(rn.is_zero() && rd.is_zero());
            (qn, qd)
        } else {
            (num, den)
        };
        let d = den.degree_in(J).unwrap_or(0);
        let lead = den
            .coeff_of_power(J, d)
            .as_constant()
            .ok_or(Error::MixedVariableDivision)?;
        Ok(RationalFn { num: num.div_scalar(&lead)?, den: make_monic(&den, J)? })
    }

    pub fn from_poly(p: SparsePoly<T>) -> Self {
        RationalFn { num: p, den: SparsePoly::one() }
    }

    pub fn num(&self) -> &SparsePoly<T> {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly<T> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when `deg_j num < deg_j den`.
    pub fn is_proper(&self) -> bool {
        match self.num.degree_in(J) {
            None => true,
            Some(dn) => dn < self.den.degree_in(J).unwrap_or(0),
        }
    }
}

impl<T: Field> fmt::Display for RationalFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SparsePoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// Splits `p` as `sum_m mono_m * p_m(j)` with `mono_m` free of `j`.
fn j_slices<T: Field>(p: &SparsePoly<T>) -> Vec<(super::poly::Monomial, SparsePoly<T>)> {
    use std::collections::BTreeMap;
    let mut slices: BTreeMap<super::poly::Monomial, SparsePoly<T>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (e, rest) = m.strip(J);
        let piece = SparsePoly::term(super::poly::Monomial::var(J, e), c.clone());
        let entry = slices.entry(rest).or_default();
        *entry = &*entry + &piece;
    }
    slices.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, Scalar};
    type P = SparsePoly<Scalar>;

    fn jp(c: &[i64]) -> P {
        P::from_dense(J, &c.iter().map(|v| int(*v)).collect::<Vec<_>>())
    }

    #[test]
    fn cancels_common_factor_and_normalizes() {
        let f = RationalFn::new(&jp(&[1, 1]) * &jp(&[0, 3]), jp(&[1, 1]).scale(&int(-2))).unwrap();
        assert_eq!(f.den(), &P::one());
        assert_eq!(f.num(), &jp(&[0, -3]).scale(&Scalar::new(1.into(), 2.into())));
    }

    #[test]
    fn parameters_block_cancellation_only_when_they_should() {
        let t = P::var("t");
        // t*(j+1) + (j+1)  over (j+1)(j+2)  ->  (t+1) / (j+2)
        let num = &(&t * &jp(&[1, 1])) + &jp(&[1, 1]);
        let f = RationalFn::new(num, &jp(&[1, 1]) * &jp(&[2, 1])).unwrap();
        assert_eq!(f.den(), &jp(&[2, 1]));
        assert_eq!(f.num(), &(&t + &P::one()));
        // t*j + 1 over j: nothing shared
        let g = RationalFn::new(&(&t * &jp(&[0, 1])) + &P::one(), jp(&[0, 1])).unwrap();
        assert_eq!(g.den(), &jp(&[0, 1]));
    }

    #[test]
    fn zero_numerator_is_zero_over_one() {
        let f = RationalFn::new(P::zero(), jp(&[3, 5])).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.den(), &P::one());
        assert!(RationalFn::new(P::one(), P::zero()).is_err());
    }
}
