use std::collections::BTreeMap;

use crate::algebra::{Monomial, Scalar};
use crate::error::Error;

use super::class::{ClassId, ClassMonomial, Divisor, Poly, ZeroPattern};

/// Top intersection numbers over named classes.
///
/// A lookup returns the stored value, zero when a declared zero pattern
/// matches, and an error otherwise. Nothing vanishes implicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTable {
    classes: Vec<ClassId>,
    total_degree: u32,
    entries: BTreeMap<ClassMonomial, Poly>,
    zero_default: Vec<ZeroPattern>,
    // Hyperplane sections applied to every product (restriction to a cut).
    cuts: Vec<Divisor>,
}

impl IntersectionTable {
    pub fn new(classes: Vec<ClassId>, total_degree: u32) -> Self {
        IntersectionTable {
            classes,
            total_degree,
            entries: BTreeMap::new(),
            zero_default: Vec::new(),
            cuts: Vec::new(),
        }
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn has_class(&self, c: &str) -> bool {
        self.classes.iter().any(|k| k == c)
    }

    /// Degree of the products this table answers (after any cuts).
    pub fn degree(&self) -> u32 {
        self.total_degree - self.cuts.len() as u32
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ClassMonomial, &Poly)> {
        self.entries.iter()
    }

    pub fn zero_patterns(&self) -> &[ZeroPattern] {
        &self.zero_default
    }

    pub fn insert(&mut self, m: ClassMonomial, value: Poly) -> Result<(), Error> {
        for (c, _) in m.iter() {
            if !self.has_class(c) {
                return Err(Error::UnknownClass(c.to_string()));
            }
        }
        if m.degree() != self.total_degree {
            return Err(Error::DegreeMismatch {
                monomial: m.to_string(),
                got: m.degree(),
                expected: self.total_degree,
            });
        }
        self.entries.insert(m, value);
        Ok(())
    }

    pub fn with(mut self, pairs: &[(&str, u32)], value: Poly) -> Result<Self, Error> {
        self.insert(Monomial::from_pairs(pairs.iter().copied()), value)?;
        Ok(self)
    }

    pub fn add_zero_pattern(&mut self, p: ZeroPattern) {
        self.zero_default.push(p);
    }

    fn lookup(&self, m: &ClassMonomial) -> Result<Poly, Error> {
        if m.degree() != self.total_degree {
            return Err(Error::DegreeMismatch {
                monomial: m.to_string(),
                got: m.degree(),
                expected: self.total_degree,
            });
        }
        if let Some(v) = self.entries.get(m) {
            return Ok(v.clone());
        }
        if self.zero_default.iter().any(|p| p.matches(m)) {
            return Ok(Poly::zero());
        }
        Err(Error::MissingIntersectionNumber { monomial: m.to_string() })
    }

    /// Value of a single class monomial of degree [`Self::degree`].
    pub fn eval_product(&self, m: &ClassMonomial) -> Result<Poly, Error> {
        if self.cuts.is_empty() {
            return self.lookup(m);
        }
        if m.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                monomial: m.to_string(),
                got: m.degree(),
                expected: self.degree(),
            });
        }
        let mut factors: Vec<(Divisor, u32)> =
            m.iter().map(|(c, e)| (Divisor::class(c), e)).collect();
        factors.extend(self.cuts.iter().map(|d| (d.clone(), 1)));
        let mut acc = Poly::zero();
        for (mono, coeff) in expand(&factors) {
            acc = acc + coeff * self.lookup(&mono)?;
        }
        Ok(acc)
    }

    /// Intersection number of `D_1^{e_1} ... D_k^{e_k}`.
    pub fn intersect(&self, factors: &[(&Divisor, u32)]) -> Result<Poly, Error> {
        let total: u32 = factors.iter().map(|(_, e)| e).sum();
        if total != self.degree() {
            let shown: Vec<String> = factors.iter().map(|(d, e)| format!("({d})^{e}")).collect();
            return Err(Error::DegreeMismatch {
                monomial: shown.join("*"),
                got: total,
                expected: self.degree(),
            });
        }
        let owned: Vec<(Divisor, u32)> = factors.iter().map(|(d, e)| ((*d).clone(), *e)).collect();
        let mut acc = Poly::zero();
        for (mono, coeff) in expand(&owned) {
            acc = acc + coeff * self.eval_product(&mono)?;
        }
        Ok(acc)
    }

    /// Restriction to a general member of `|d|`.
    pub fn cut(&self, d: &Divisor) -> Self {
        let mut out = self.clone();
        out.cuts.push(d.clone());
        out
    }

    /// Table of `X x B` where `B` has dimension `n` and `class^n = volume`.
    ///
    /// Every monomial of `self` must be available (stored or zero-default);
    /// the product stores all entries explicitly.
    pub fn times_base(&self, class: &str, n: u32, volume: &Scalar) -> Result<Self, Error> {
        if !self.cuts.is_empty() {
            return Err(Error::DimensionMismatch("cannot take products of a cut table".into()));
        }
        let mut classes = self.classes.clone();
        classes.push(class.to_string());
        let total = self.total_degree + n;
        let mut out = IntersectionTable::new(classes.clone(), total);
        for m in monomials(&classes, total) {
            let (e, rest) = m.strip(class);
            let v = if e == n { self.lookup(&rest)?.scale(volume) } else { Poly::zero() };
            out.insert(m, v)?;
        }
        Ok(out)
    }

    /// Same table with classes renamed.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Self {
        let ren = |c: &String| map.get(c).cloned().unwrap_or_else(|| c.clone());
        let rename_mono = |m: &ClassMonomial| {
            let owned: Vec<(String, u32)> = m.iter().map(|(c, e)| (ren(&c.to_string()), e)).collect();
            Monomial::from_pairs(owned.iter().map(|(c, e)| (c.as_str(), *e)))
        };
        IntersectionTable {
            classes: self.classes.iter().map(ren).collect(),
            total_degree: self.total_degree,
            entries: self.entries.iter().map(|(m, v)| (rename_mono(m), v.clone())).collect(),
            zero_default: self
                .zero_default
                .iter()
                .map(|p| match p {
                    ZeroPattern::All => ZeroPattern::All,
                    ZeroPattern::AtLeast(req) => {
                        ZeroPattern::AtLeast(req.iter().map(|(c, e)| (ren(c), *e)).collect())
                    }
                })
                .collect(),
            cuts: self.cuts.iter().map(|d| d.rename(map)).collect(),
        }
    }
}

/// Multilinear expansion of `prod D_i^{e_i}` into class monomials.
pub fn expand(factors: &[(Divisor, u32)]) -> BTreeMap<ClassMonomial, Poly> {
    let mut cur: BTreeMap<ClassMonomial, Poly> = BTreeMap::new();
    cur.insert(Monomial::one(), Poly::one());
    for (d, e) in factors {
        for _ in 0..*e {
            let mut next: BTreeMap<ClassMonomial, Poly> = BTreeMap::new();
            for (m, c) in &cur {
                for (cls, k) in d.parts() {
                    let key = m.mul(&Monomial::var(cls, 1));
                    let slot = next.entry(key).or_default();
                    *slot = &*slot + &(c * k);
                }
            }
            next.retain(|_, v| !v.is_zero());
            cur = next;
        }
    }
    cur
}

/// All monomials of the given degree in the given classes.
pub fn monomials(classes: &[ClassId], degree: u32) -> Vec<ClassMonomial> {
    fn go(classes: &[ClassId], degree: u32, acc: Monomial, out: &mut Vec<Monomial>) {
        match classes.split_first() {
            None => {
                if degree == 0 {
                    out.push(acc);
                }
            }
            Some((c, rest)) => {
                for e in 0..=degree {
                    go(rest, degree - e, acc.mul(&Monomial::var(c, e)), out);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(classes, degree, Monomial::one(), &mut out);
    out
}
