//! The large-twist expansion `V(H+jL) M(H+jL) = W_{n+1}(j) + sum_i j^i W_{n-i}`
//! and the lexicographic sign rule on `W_0, ..., W_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::{binomial, int, parse_scalar, poly_div_rem, RationalFn, Scalar, EPS, J};
use crate::error::Error;
use crate::functionals::{e_na, h_na, i_na, j_na, m_na};
use crate::intersection::{expand_twisted_power, scalar_curvature, Poly, TestConfigDatum, Which};

pub type WFn = RationalFn<Scalar>;

/// `g(j) = (H + jL)^N` on `X`.
pub fn twisted_volume(d: &TestConfigDatum) -> Result<Poly, Error> {
    let f = &d.fibration;
    let big_n = d.dim() as u64;
    let mut terms = Vec::with_capacity(d.n + 1);
    for k in 0..=d.n {
        terms.push(binomial::<Scalar>(big_n, k as i64) * f.mixed(d.n - k)?);
    }
    Ok(Poly::from_dense(J, &terms))
}

/// `f(j) = -K . (H + jL)^{N-1}` on `X`.
pub fn twisted_canonical(d: &TestConfigDatum) -> Result<Poly, Error> {
    let big_n = d.dim();
    if big_n == 0 {
        return Ok(Poly::zero());
    }
    let mut terms = Vec::with_capacity(d.n + 1);
    for k in 0..=d.n.min(big_n - 1) {
        terms.push(-binomial::<Scalar>((big_n - 1) as u64, k as i64) * d.fibration.canon(k)?);
    }
    Ok(Poly::from_dense(J, &terms))
}

fn mabuchi_parts(d: &TestConfigDatum) -> Result<(Poly, Poly), Error> {
    let big_n = d.dim() as u32;
    let g = twisted_volume(d)?;
    if g.is_zero() {
        return Err(Error::DegenerateVolume("(H + jL)^N vanishes identically".into()));
    }
    let f = twisted_canonical(d)?;
    let a = expand_twisted_power(d, Some(d.klog()?), big_n)?;
    let b = expand_twisted_power(d, None, big_n + 1)?;
    let scale = int(big_n as i64) / int(big_n as i64 + 1);
    let num = &a * &g + (&f * &b).scale(&scale);
    Ok((num, g))
}

/// `V(H+jL) M(H+jL)` as a rational function of `j`.
pub fn mabuchi_rational_fn(d: &TestConfigDatum) -> Result<WFn, Error> {
    let (num, den) = mabuchi_parts(d)?;
    RationalFn::new(num, den)
}

/// Same with DF in place of M; adds `(X_0 - X_0,red) . (H+jL)^N`.
pub fn df_rational_fn(d: &TestConfigDatum) -> Result<WFn, Error> {
    let (num, den) = mabuchi_parts(d)?;
    let ex = d.excess_divisor();
    let extra = if ex.is_zero() {
        Poly::zero()
    } else {
        expand_twisted_power(d, Some(&ex), d.dim() as u32)? * &den
    };
    RationalFn::new(num + extra, den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WDecomposition {
    pub n: usize,
    /// `w[i] = W_i`, the coefficient of `j^{n-i}` in the polynomial part.
    pub w: Vec<Poly>,
    pub quotient: Poly,
    /// `W_{n+1}(j)`, vanishing as `j -> oo`.
    pub remainder: WFn,
}

impl WDecomposition {
    /// Checks `quotient + remainder == f` exactly.
    pub fn recomposes(&self, f: &WFn) -> bool {
        let rd = self.remainder.den();
        let lhs = (&self.quotient * rd + self.remainder.num()) * f.den();
        lhs == f.num() * rd && self.remainder.is_proper()
    }
}

pub fn w_decompose(f: &WFn, n: usize) -> Result<WDecomposition, Error> {
    let (q, r) = poly_div_rem(f.num(), f.den())?;
    let dq = q.degree_in(J).unwrap_or(0);
    if !q.is_zero() && dq as usize > n {
        return Err(Error::DegreeOverflow {
            num: f.num().degree_in(J).unwrap_or(0),
            den: f.den().degree_in(J).unwrap_or(0),
            n,
        });
    }
    let w = (0..=n).map(|i| q.coeff_of_power(J, (n - i) as u32)).collect();
    let remainder = RationalFn::new(r, f.den().clone())?;
    Ok(WDecomposition { n, w, quotient: q, remainder })
}

/// Decomposition of `V(H+jL) M(H+jL)` for a datum.
pub fn w_table(d: &TestConfigDatum) -> Result<WDecomposition, Error> {
    w_decompose(&mabuchi_rational_fn(d)?, d.n)
}

pub fn w_table_df(d: &TestConfigDatum) -> Result<WDecomposition, Error> {
    w_decompose(&df_rational_fn(d)?, d.n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(s: &Scalar) -> Sign {
        if s.is_zero() {
            Sign::Zero
        } else if s.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Positive,
    Negative,
    Equals(Scalar),
}

/// Declared facts about free parameters, e.g. `t>0`, `u=0`, `t=3/2`.
/// `eps` is always taken small and positive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assumptions {
    facts: BTreeMap<String, Constraint>,
}

impl Assumptions {
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, String> {
        let mut out = Assumptions::default();
        for item in items {
            let s: String = item.as_ref().chars().filter(|c| !c.is_whitespace()).collect();
            let (name, c) = if let Some((v, rhs)) = s.split_once('>') {
                if rhs != "0" {
                    return Err(format!("'{s}': only '>0' comparisons are supported"));
                }
                (v, Constraint::Positive)
            } else if let Some((v, rhs)) = s.split_once('<') {
                if rhs != "0" {
                    return Err(format!("'{s}': only '<0' comparisons are supported"));
                }
                (v, Constraint::Negative)
            } else if let Some((v, rhs)) = s.split_once('=') {
                let val = parse_scalar(rhs).ok_or_else(|| format!("'{s}': bad value '{rhs}'"))?;
                (v, Constraint::Equals(val))
            } else {
                return Err(format!("'{s}': expected NAME>0, NAME<0 or NAME=VALUE"));
            };
            if name.is_empty() || name == J || name == EPS {
                return Err(format!("'{s}': cannot constrain '{name}'"));
            }
            out.facts.insert(name.to_string(), c);
        }
        Ok(out)
    }

    pub fn with(mut self, name: &str, c: Constraint) -> Self {
        self.facts.insert(name.to_string(), c);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn merged(&self, other: &Assumptions) -> Assumptions {
        let mut facts = self.facts.clone();
        facts.extend(other.facts.iter().map(|(k, v)| (k.clone(), v.clone())));
        Assumptions { facts }
    }

    pub fn describe(&self) -> Vec<String> {
        self.facts
            .iter()
            .map(|(k, c)| match c {
                Constraint::Positive => format!("{k}>0"),
                Constraint::Negative => format!("{k}<0"),
                Constraint::Equals(v) => format!("{k}={v}"),
            })
            .collect()
    }

    /// Substitutes every declared value.
    pub fn apply(&self, p: &Poly) -> Poly {
        self.facts.iter().fold(p.clone(), |acc, (k, c)| match c {
            Constraint::Equals(v) => acc.substitute_value(k, v),
            _ => acc,
        })
    }

    /// Sign of a polynomial free of `eps`, when every term agrees.
    fn definite_sign(&self, p: &Poly) -> Option<Sign> {
        let mut seen: Option<Sign> = None;
        for (m, c) in p.terms() {
            let mut s = Sign::of(c);
            for (v, e) in m.iter() {
                let vs = match self.facts.get(v) {
                    Some(Constraint::Positive) => Sign::Positive,
                    Some(Constraint::Negative) => Sign::Negative,
                    _ => return None,
                };
                for _ in 0..e {
                    s = s.times(vs);
                }
            }
            match seen {
                None => seen = Some(s),
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Sign::Zero))
    }

    /// Sign for all sufficiently small `eps > 0`, read from the leading term.
    pub fn sign(&self, p: &Poly) -> SignAnalysis {
        let value = self.apply(p);
        if value.is_zero() {
            return SignAnalysis { value, sign: Some(Sign::Zero), eps_order: None, leading: Poly::zero() };
        }
        let (eps_order, leading) = if value.involves(EPS) {
            let (o, c) = value.leading_in_eps().expect("nonzero");
            (Some(o), c)
        } else {
            (None, value.clone())
        };
        let sign = self.definite_sign(&leading);
        SignAnalysis { value, sign, eps_order, leading }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAnalysis {
    /// Value after substituting declared parameter values.
    pub value: Poly,
    /// `None` when the sign depends on parameters without declared signs.
    pub sign: Option<Sign>,
    pub eps_order: Option<u32>,
    pub leading: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    /// `W_0 = ... = W_{k-1} = 0` and `W_k < 0`.
    ObstructionFound(usize),
    /// First nonzero level is positive.
    StrictlyPositiveAtLevel(usize),
    /// Every level vanishes on a degeneration not declared trivial.
    NotStable,
    /// Nothing negative was found and nothing is claimed beyond that.
    AllTestedNonnegative,
    /// Sign of `W_k` depends on undeclared parameter signs.
    Indeterminate(usize),
    NoObstructionClaimed,
}

impl VerdictKind {
    pub fn label(&self) -> String {
        match self {
            VerdictKind::ObstructionFound(k) => format!("f-unstable: obstruction at level {k}"),
            VerdictKind::StrictlyPositiveAtLevel(k) => {
                format!("all tested levels nonnegative; strictly positive at level {k}")
            }
            VerdictKind::NotStable => {
                "not f-stable: all levels vanish on a nontrivial degeneration (semistable-compatible)".into()
            }
            VerdictKind::AllTestedNonnegative => "all tested levels nonnegative".into(),
            VerdictKind::Indeterminate(k) => format!("indeterminate: sign of W_{k} depends on free parameters"),
            VerdictKind::NoObstructionClaimed => "no obstruction claimed from this datum".into(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            VerdictKind::ObstructionFound(_) => "ObstructionFound",
            VerdictKind::StrictlyPositiveAtLevel(_) => "StrictlyPositiveAtLevel",
            VerdictKind::NotStable => "NotStable",
            VerdictKind::AllTestedNonnegative => "AllTestedNonnegative",
            VerdictKind::Indeterminate(_) => "Indeterminate",
            VerdictKind::NoObstructionClaimed => "NoObstructionClaimed",
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            VerdictKind::ObstructionFound(k)
            | VerdictKind::StrictlyPositiveAtLevel(k)
            | VerdictKind::Indeterminate(k) => Some(*k),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    /// One entry per examined level, stopping at the first nonzero one.
    pub levels: Vec<SignAnalysis>,
    pub notes: Vec<String>,
}

impl StabilityVerdict {
    pub fn simple(kind: VerdictKind, note: impl Into<String>) -> Self {
        StabilityVerdict { kind, levels: Vec::new(), notes: vec![note.into()] }
    }

    /// First nonzero level with its sign, if any.
    pub fn witness(&self) -> Option<(usize, &SignAnalysis)> {
        self.levels.iter().enumerate().find(|(_, a)| a.sign != Some(Sign::Zero))
    }
}

/// Lexicographic rule on `W_0, ..., W_n`; the remainder is never read.
pub fn verdict(w: &WDecomposition, declared_trivial: bool, assume: &Assumptions) -> StabilityVerdict {
    let mut levels = Vec::new();
    for (k, wk) in w.w.iter().enumerate() {
        let a = assume.sign(wk);
        let s = a.sign;
        levels.push(a);
        let kind = match s {
            Some(Sign::Zero) => continue,
            Some(Sign::Negative) => VerdictKind::ObstructionFound(k),
            Some(Sign::Positive) => VerdictKind::StrictlyPositiveAtLevel(k),
            None => VerdictKind::Indeterminate(k),
        };
        return StabilityVerdict { kind, levels, notes: Vec::new() };
    }
    let kind = if declared_trivial { VerdictKind::AllTestedNonnegative } else { VerdictKind::NotStable };
    StabilityVerdict { kind, levels, notes: Vec::new() }
}

/// Comparison of `W_0` with `C(N, n) (H^m L^n) M(X_b, H_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCheck {
    pub holds: bool,
    pub w0: Poly,
    pub expected: Poly,
}

pub fn w0_fiber_check(d: &TestConfigDatum, fiber: &TestConfigDatum) -> Result<FiberCheck, Error> {
    if fiber.n != 0 || fiber.m != d.m {
        return Err(Error::DimensionMismatch(format!(
            "fiber datum must have n = 0 and m = {}, got n = {}, m = {}",
            d.m, fiber.n, fiber.m
        )));
    }
    let w0 = w_table(d)?.w[0].clone();
    let coef = binomial::<Scalar>(d.dim() as u64, d.n as i64) * d.fibration.mixed(0)?;
    let expected = m_na(fiber)?.scale(&coef);
    Ok(FiberCheck { holds: w0 == expected, w0, expected })
}

/// Closed form of `W_1` over a curve:
/// `V (M + (S_b - S)(E - E_b))`, where `E_b` is the energy of a general fiber.
pub fn w1_curve_formula(d: &TestConfigDatum) -> Result<Poly, Error> {
    if d.n != 1 {
        return Err(Error::DimensionMismatch(format!("base must be a curve, n = {}", d.n)));
    }
    let v = d.volume()?;
    let s = scalar_curvature(&d.fibration, Which::Whole)?;
    let s_b = scalar_curvature(&d.fibration, Which::Fiber)?;
    let l = d.twist()?;
    let m = d.m as u32;
    let top = d.table.intersect(&[(&d.roles.polarization, m + 1), (&l, 1)])?;
    let e_b = top.div_scalar(&(int(m as i64 + 1) * d.fibration.mixed(0)?))?;
    let e = e_na(d)?;
    Ok((m_na(d)? + (e - e_b).scale(&(s_b - s))).scale(&v))
}

/// Leading part of `W_i` computed on the `(n - i)`-fold cut:
/// `C(N, n-i) (Klog . H^{m+i} + S_b/(m+i+1) H^{m+i+1})`.
///
/// This is all of `W_i` when the `J` of every deeper cut vanishes, and all of
/// `W_0` unconditionally.
pub fn w_i_cut_formula(d: &TestConfigDatum, i: usize) -> Result<Poly, Error> {
    if i > d.n {
        return Err(Error::IndexOutOfRange(format!("level {i} > n = {}", d.n)));
    }
    let cut = d.cut_times(d.n - i)?;
    let s_b = scalar_curvature(&d.fibration, Which::Fiber)?;
    let e = (d.m + i) as u32;
    let pol = &cut.roles.polarization;
    let k = cut.table.intersect(&[(cut.klog()?, 1), (pol, e)])?;
    let h = cut.table.intersect(&[(pol, e + 1)])?;
    let inner = k + h.scale(&(s_b / int(e as i64 + 1)));
    Ok(inner.scale(&binomial::<Scalar>(d.dim() as u64, (d.n - i) as i64)))
}

/// `W_k` for `K ~ lambda H` modulo the base, from cut-level functionals:
/// `C(N, n-k) (H^{m+k} L^{n-k}) (H + lambda (I - (k+1) J))` on the cut.
///
/// Requires a normalized datum whose deeper cuts all have `J = 0`; those
/// vanishings are checked rather than assumed.
pub fn w_k_via_fano_identity(d: &TestConfigDatum, k: usize, lambda: &Scalar) -> Result<Poly, Error> {
    if k > d.n {
        return Err(Error::IndexOutOfRange(format!("level {k} > n = {}", d.n)));
    }
    if !d.flags.normalized {
        return Err(Error::PreconditionUnverifiable("datum is not declared normalized".into()));
    }
    for depth in (d.n - k + 1)..=d.n {
        let deeper = d.cut_times(depth).map_err(|e| {
            Error::PreconditionUnverifiable(format!("cannot form the {depth}-fold cut: {e}"))
        })?;
        let jv = j_na(&deeper).map_err(|e| {
            Error::PreconditionUnverifiable(format!("J of the {depth}-fold cut is not computable: {e}"))
        })?;
        if !jv.is_zero() {
            return Err(Error::PreconditionUnverifiable(format!(
                "J of the {depth}-fold cut is {jv}, not 0"
            )));
        }
    }
    let cut = d.cut_times(d.n - k)?;
    let inner = h_na(&cut)? + (i_na(&cut)? - j_na(&cut)?.scale(&int(k as i64 + 1))).scale(lambda);
    let coef = binomial::<Scalar>(d.dim() as u64, (d.n - k) as i64) * d.fibration.mixed(k)?;
    Ok(inner.scale(&coef))
}

/// `W_1` of `X` from `W_1` of a general member of `|L|`:
/// `C(N-1, n-2) W_1(X) = C(N, n-1) W_1(cut)`, for `n >= 2`.
pub fn w1_via_hyperplane_cut(d: &TestConfigDatum) -> Result<Poly, Error> {
    if d.n < 2 {
        return Err(Error::DimensionMismatch(format!("cutting needs n >= 2, got n = {}", d.n)));
    }
    let big_n = d.dim() as u64;
    let cut = d.hyperplane_cut()?;
    let w1 = w_table(&cut)?.w[1].clone();
    let ratio = binomial::<Scalar>(big_n, d.n as i64 - 1) / binomial::<Scalar>(big_n - 1, d.n as i64 - 2);
    Ok(w1.scale(&ratio))
}

pub fn all_levels_vanish(w: &WDecomposition) -> bool {
    w.w.iter().all(|p| p.is_zero())
}

/// Level-by-level difference of two decompositions (e.g. DF minus M).
pub fn level_difference(a: &WDecomposition, b: &WDecomposition) -> Vec<Poly> {
    a.w.iter().zip(&b.w).map(|(x, y)| x - y).collect()
}
