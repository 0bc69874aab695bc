use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Monomial, Scalar, SparsePoly};

pub type Poly = SparsePoly<Scalar>;

/// Name of a divisor class, e.g. `"H"`, `"E1"`, `"KB"`.
pub type ClassId = String;

/// A product of classes such as `H^2 * E`. Shares the exponent-vector type
/// with polynomial monomials.
pub type ClassMonomial = Monomial;

/// Formal linear combination of classes with polynomial coefficients,
/// so `H - eps*E` is a single value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    parts: BTreeMap<ClassId, Poly>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn class(name: &str) -> Self {
        Self::zero().plus(name, Poly::one())
    }

    pub fn from_parts<I: IntoIterator<Item = (ClassId, Poly)>>(parts: I) -> Self {
        parts.into_iter().fold(Self::zero(), |d, (c, p)| d.plus(&c, p))
    }

    /// `self + coeff * class`.
    pub fn plus(mut self, class: &str, coeff: Poly) -> Self {
        let slot = self.parts.entry(class.to_string()).or_default();
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.parts.remove(class);
        }
        self
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        other.parts.iter().fold(self.clone(), |d, (c, p)| d.plus(c, p.clone()))
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(&Poly::constant(Scalar::from_integer((-1).into()))))
    }

    pub fn scale(&self, k: &Poly) -> Divisor {
        Divisor::from_parts(self.parts.iter().map(|(c, p)| (c.clone(), p * k)))
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&ClassId, &Poly)> {
        self.parts.iter()
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassId> {
        self.parts.keys()
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Divisor {
        Divisor::from_parts(
            self.parts.iter().map(|(c, p)| (map.get(c).cloned().unwrap_or_else(|| c.clone()), p.clone())),
        )
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|(c, p)| if *p == Poly::one() { c.clone() } else { format!("({p})*{c}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Monomials the user declares to vanish without listing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroPattern {
    /// Every monomial not stored explicitly.
    All,
    /// Monomials with at least the given exponent in each listed class.
    AtLeast(BTreeMap<ClassId, u32>),
}

impl ZeroPattern {
    pub fn matches(&self, m: &ClassMonomial) -> bool {
        match self {
            ZeroPattern::All => true,
            ZeroPattern::AtLeast(req) => req.iter().all(|(c, e)| m.exp(c) >= *e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, EPS};

    #[test]
    fn divisor_combination_cancels() {
        let h = Divisor::class("H");
        let e = Divisor::class("E").scale(&Poly::var(EPS));
        let d = h.sub(&e);
        assert_eq!(d.parts().count(), 2);
        assert!(d.sub(&d).is_zero());
        assert_eq!(d.add(&e), h);
        assert_eq!(h.scale(&Poly::constant(int(0))), Divisor::zero());
    }

    #[test]
    fn zero_patterns() {
        let m = Monomial::from_pairs([("H", 2), ("E", 1)]);
        assert!(ZeroPattern::All.matches(&m));
        let p = ZeroPattern::AtLeast([("H".to_string(), 2)].into_iter().collect());
        assert!(p.matches(&m));
        let q = ZeroPattern::AtLeast([("E".to_string(), 2)].into_iter().collect());
        assert!(!q.matches(&m));
    }
}
