use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Map, Value};

use super::scalar::{is_one, Field};
use crate::error::Error;

/// Name of the twist variable. Reserved; datum files may not declare it.
pub const J: &str = "j";
/// Name of the degeneration parameter.
pub const EPS: &str = "eps";

/// Exponent vector keyed by variable name. Zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(name.to_string(), exp);
        }
        Monomial(m)
    }

    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, u32)>>(pairs: I) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn exp(&self, var: &str) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += v;
        }
        Monomial(out)
    }

    /// Removes `var` entirely and returns the exponent it had.
    pub fn strip(&self, var: &str) -> (u32, Monomial) {
        let mut out = self.0.clone();
        let e = out.remove(var).unwrap_or(0);
        (e, Monomial(out))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse multivariate polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly<T: Field> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Field> Default for SparsePoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Field> SparsePoly<T> {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(name: &str) -> Self {
        Self::term(Monomial::var(name, 1), T::one())
    }

    pub fn term(m: Monomial, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, T)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Univariate polynomial `sum coeffs[k] * var^k`.
    pub fn from_dense(var: &str, coeffs: &[T]) -> Self {
        Self::from_terms(
            coeffs.iter().enumerate().map(|(k, c)| (Monomial::var(var, k as u32), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        let drop = {
            let slot = self.terms.entry(m.clone()).or_insert_with(T::zero);
            *slot = slot.clone() + c;
            slot.is_zero()
        };
        if drop {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    /// The value if the polynomial has no variables at all.
    pub fn as_constant(&self) -> Option<T> {
        match self.terms.len() {
            0 => Some(T::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.to_string())).collect()
    }

    pub fn involves(&self, var: &str) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Highest exponent of `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Coefficient of `var^k`, as a polynomial free of `var`.
    pub fn coeff_of_power(&self, var: &str, k: u32) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (e, rest) = m.strip(var);
            (e == k).then(|| (rest, c.clone()))
        }))
    }

    /// Dense coefficient list in `var`; only meaningful when nothing else appears.
    pub fn to_dense(&self, var: &str) -> Vec<Self> {
        let deg = match self.degree_in(var) {
            Some(d) => d,
            None => return Vec::new(),
        };
        (0..=deg).map(|k| self.coeff_of_power(var, k)).collect()
    }

    /// Drops every term whose `var` exponent exceeds `order`.
    pub fn truncate_above(&self, var: &str, order: u32) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(var) <= order)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn div_scalar(&self, c: &T) -> Result<Self, Error> {
        if c.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(SparsePoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() / c.clone())).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces `var` by the polynomial `value` everywhere.
    pub fn substitute(&self, var: &str, value: &Self) -> Self {
        let mut cache: BTreeMap<u32, Self> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.strip(var);
            let p = cache.entry(e).or_insert_with(|| value.pow(e)).clone();
            out = out + &p * &Self::term(rest, c.clone());
        }
        out
    }

    pub fn substitute_value(&self, var: &str, value: &T) -> Self {
        self.substitute(var, &Self::constant(value.clone()))
    }

    /// Full evaluation; `None` if a variable is left unassigned.
    pub fn eval(&self, values: &BTreeMap<String, T>) -> Option<T> {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = values.get(v)?;
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Lowest power of `var` present, and the coefficient of that power.
    pub fn leading_in(&self, var: &str) -> Result<(u32, Self), Error> {
        let order = self
            .terms
            .keys()
            .map(|m| m.exp(var))
            .min()
            .ok_or(Error::ZeroPolynomial)?;
        Ok((order, self.coeff_of_power(var, order)))
    }

    pub fn leading_in_eps(&self) -> Result<(u32, Self), Error> {
        self.leading_in(EPS)
    }

    /// Renames variables; used for symbol-permutation checks.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let renamed = Monomial::from_pairs(
                m.iter().map(|(v, e)| (map.get(v).map(String::as_str).unwrap_or(v), e)),
            );
            (renamed, c.clone())
        }))
    }

    /// `[{ "exponents": {var: e}, "coeff": "p/q" }]`, sorted by monomial.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let exps: Map<String, Value> =
                        m.iter().map(|(v, e)| (v.to_string(), json!(e))).collect();
                    json!({ "exponents": exps, "coeff": c.to_string() })
                })
                .collect(),
        )
    }
}

impl<T: Field> fmt::Display for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Low degree first, so eps series read in increasing order.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if is_one(&abs) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'b, T: Field> Add<&'b SparsePoly<T>> for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn add(self, rhs: &'b SparsePoly<T>) -> SparsePoly<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'b, T: Field> Sub<&'b SparsePoly<T>> for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn sub(self, rhs: &'b SparsePoly<T>) -> SparsePoly<T> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'b, T: Field> Mul<&'b SparsePoly<T>> for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn mul(self, rhs: &'b SparsePoly<T>) -> SparsePoly<T> {
        let mut out = SparsePoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Field> Neg for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<T: Field> Neg for SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl<T: Field> $tr<SparsePoly<T>> for SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $f(self, rhs: SparsePoly<T>) -> SparsePoly<T> {
                (&self).$f(&rhs)
            }
        }
        impl<'b, T: Field> $tr<&'b SparsePoly<T>> for SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $f(self, rhs: &'b SparsePoly<T>) -> SparsePoly<T> {
                (&self).$f(rhs)
            }
        }
        impl<'a, T: Field> $tr<SparsePoly<T>> for &'a SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $f(self, rhs: SparsePoly<T>) -> SparsePoly<T> {
                self.$f(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<T: Field> std::iter::Sum for SparsePoly<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Long division in `j`: `num = q * den + r` with `deg_j r < deg_j den`.
///
/// `den` must be free of every variable other than `j`; `num` may carry
/// other variables in its coefficients.
pub fn poly_div_rem<T: Field>(
    num: &SparsePoly<T>,
    den: &SparsePoly<T>,
) -> Result<(SparsePoly<T>, SparsePoly<T>), Error> {
    div_rem_in(num, den, J)
}

pub fn div_rem_in<T: Field>(
    num: &SparsePoly<T>,
    den: &SparsePoly<T>,
    var: &str,
) -> Result<(SparsePoly<T>, SparsePoly<T>), Error> {
    if den.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if den.variables().iter().any(|v| v != var) {
        return Err(Error::MixedVariableDivision);
    }
    let dd = den.degree_in(var).unwrap_or(0);
    let lead = den.coeff(&Monomial::var(var, dd));
    let mut q = SparsePoly::zero();
    let mut r = num.clone();
    while let Some(rd) = r.degree_in(var) {
        if r.is_zero() || rd < dd {
            break;
        }
        let top = r.coeff_of_power(var, rd).div_scalar(&lead)?;
        let shift = &top * &SparsePoly::term(Monomial::var(var, rd - dd), T::one());
        r = &r - &(&shift * den);
        q = &q + &shift;
    }
    Ok((q, r))
}

/// Monic gcd of two polynomials in `var` alone.
pub fn gcd_in<T: Field>(a: &SparsePoly<T>, b: &SparsePoly<T>, var: &str) -> Result<SparsePoly<T>, Error> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = div_rem_in(&a, &b, var)?;
        a = b;
        b = r;
    }
    make_monic(&a, var)
}

pub(crate) fn make_monic<T: Field>(p: &SparsePoly<T>, var: &str) -> Result<SparsePoly<T>, Error> {
    match p.degree_in(var) {
        None => Ok(SparsePoly::zero()),
        Some(d) => {
            let lead = p.coeff_of_power(var, d);
            match lead.as_constant() {
                Some(c) => p.div_scalar(&c),
                None => Err(Error::MixedVariableDivision),
            }
        }
    }
}
