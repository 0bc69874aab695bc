//! Non-Archimedean functionals of a compactified test configuration,
//! evaluated as exact polynomials in eps and the declared parameters.

use num_traits::{Signed, Zero};

use crate::algebra::{int, Scalar};
use crate::error::Error;
use crate::intersection::{scalar_curvature, Divisor, Poly, TestConfigDatum, Which};

/// All functionals of one datum plus the identities that were checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalReport {
    pub e_na: Poly,
    pub i_na: Poly,
    pub j_na: Poly,
    pub h_na: Poly,
    pub jk_na: Poly,
    pub r_na: Poly,
    pub m_na: Poly,
    pub df: Poly,
    pub volume: Scalar,
    pub scalar_curvature: Scalar,
    pub identities_checked: Vec<(String, bool)>,
}

fn n_of(d: &TestConfigDatum) -> u32 {
    d.dim() as u32
}

fn pol_power(d: &TestConfigDatum, aux: &Divisor) -> Result<Poly, Error> {
    d.table.intersect(&[(&d.roles.polarization, n_of(d)), (aux, 1)])
}

fn over_v(d: &TestConfigDatum, p: Poly) -> Result<Poly, Error> {
    p.div_scalar(&d.volume()?)
}

/// `E = Lbar^{N+1} / ((N+1) V)`.
pub fn e_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    let top = d.table.intersect(&[(&d.roles.polarization, n_of(d) + 1)])?;
    over_v(d, top)?.div_scalar(&int(n_of(d) as i64 + 1))
}

/// `I = V^{-1} (Lbar . L^N - (Lbar - L) . Lbar^N)` with `L` the pullback.
pub fn i_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    let pol = &d.roles.polarization;
    let base = &d.roles.base_pullback;
    let a = d.table.intersect(&[(pol, 1), (base, n_of(d))])?;
    let b = pol_power(d, &pol.sub(base))?;
    over_v(d, a - b)
}

/// `J = V^{-1} Lbar . L^N - E`.
pub fn j_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    let a = d.table.intersect(&[(&d.roles.polarization, 1), (&d.roles.base_pullback, n_of(d))])?;
    Ok(over_v(d, a)? - e_na(d)?)
}

/// Entropy `sum_E A(v_E) (E . Lbar^N) / V`.
pub fn h_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    let mut acc = Poly::zero();
    for e in &d.exceptionals {
        if e.a.is_zero() {
            continue;
        }
        let v = pol_power(d, &Divisor::class(&e.class))?;
        acc = acc + v.scale(&e.a);
    }
    over_v(d, acc)
}

/// `S(X, Delta, H)` of the underlying pair.
pub fn total_scalar_curvature(d: &TestConfigDatum) -> Result<Scalar, Error> {
    scalar_curvature(&d.fibration, Which::Whole)
}

/// `M = V^{-1} Klog . Lbar^N + S E`.
pub fn m_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    let k = pol_power(d, d.klog()?)?;
    Ok(over_v(d, k)? + e_na(d)?.scale(&total_scalar_curvature(d)?))
}

/// `(J^aux)` for an auxiliary class with `aux_degree = aux . H^{N-1}` on `X`:
/// `V^{-1} aux . Lbar^N - N aux_degree E / V`.
pub fn j_aux_na(d: &TestConfigDatum, aux: &Divisor, aux_degree: &Scalar) -> Result<Poly, Error> {
    let a = over_v(d, pol_power(d, aux)?)?;
    let k = int(n_of(d) as i64) * aux_degree.clone() / d.volume()?;
    Ok(a - e_na(d)?.scale(&k))
}

/// `J^K`: direct when the pullback of `K` is given, else `M - H`.
pub fn jk_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    match &d.roles.kpull {
        Some(k) => j_aux_na(d, k, &d.fibration.canon(0)?),
        None => Ok(m_na(d)? - h_na(d)?),
    }
}

/// `R = J^K - S E`.
pub fn r_na(d: &TestConfigDatum) -> Result<Poly, Error> {
    Ok(jk_na(d)? - e_na(d)?.scale(&total_scalar_curvature(d)?))
}

/// `(X_0 - X_0,red) . Lbar^N`.
pub fn excess_term(d: &TestConfigDatum) -> Result<Poly, Error> {
    let ex = d.excess_divisor();
    if ex.is_zero() {
        return Ok(Poly::zero());
    }
    pol_power(d, &ex)
}

/// `DF = M + V^{-1} (X_0 - X_0,red) . Lbar^N`.
pub fn df_intersection(d: &TestConfigDatum) -> Result<Poly, Error> {
    Ok(m_na(d)? + over_v(d, excess_term(d)?)?)
}

/// `M - delta I`; uniform stability asks for this to be nonnegative.
pub fn uniform_slack(d: &TestConfigDatum, delta: &Scalar) -> Result<Poly, Error> {
    Ok(m_na(d)? - i_na(d)?.scale(delta))
}

/// Donaldson-Futaki invariant from the Hilbert and weight coefficients,
/// with the optional log correction `(bh0 a0 - ah0 b0) / a0^2`.
pub fn df_from_weights(
    a0: &Scalar,
    a1: &Scalar,
    b0: &Scalar,
    b1: &Scalar,
    log_terms: Option<(&Scalar, &Scalar)>,
) -> Result<Scalar, Error> {
    if !a0.is_positive() {
        return Err(Error::DegenerateVolume(format!("a0 = {a0} must be positive")));
    }
    let sq = a0.clone() * a0.clone();
    let mut df = int(2) * (b1.clone() * a0.clone() - a1.clone() * b0.clone()) / sq.clone();
    if let Some((ah0, bh0)) = log_terms {
        df += (bh0.clone() * a0.clone() - ah0.clone() * b0.clone()) / sq;
    }
    Ok(df)
}

/// Evaluates everything and checks the identities the datum claims.
///
/// A normalized datum whose `J` differs from `-E` is rejected.
pub fn report(d: &TestConfigDatum) -> Result<FunctionalReport, Error> {
    let volume = d.volume()?;
    let s = total_scalar_curvature(d)?;
    let e = e_na(d)?;
    let i = i_na(d)?;
    let j = j_na(d)?;
    let h = h_na(d)?;
    let m = m_na(d)?;
    let jk = jk_na(d)?;
    let r = &jk - &e.scale(&s);
    let df = df_intersection(d)?;

    let mut checks = Vec::new();
    if d.flags.normalized {
        let holds = j == -&e;
        if !holds {
            return Err(Error::NormalizationViolated { j: j.to_string(), neg_e: (-&e).to_string() });
        }
        checks.push(("normalized: J = -E".to_string(), holds));
    }
    if d.roles.kpull.is_some() {
        checks.push(("M = H + J^K".to_string(), m == &h + &jk));
    }
    checks.push(("M = H + R + S E".to_string(), m == &(&h + &r) + &e.scale(&s)));
    if d.excess_divisor().is_zero() {
        checks.push(("reduced central fiber: DF = M".to_string(), df == m));
    }
    if d.flags.trivial {
        let all_zero = [&e, &i, &j, &h, &m, &df].iter().all(|p| p.is_zero());
        checks.push(("trivial: all functionals vanish".to_string(), all_zero));
    }
    Ok(FunctionalReport {
        e_na: e,
        i_na: i,
        j_na: j,
        h_na: h,
        jk_na: jk,
        r_na: r,
        m_na: m,
        df,
        volume,
        scalar_curvature: s,
        identities_checked: checks,
    })
}
