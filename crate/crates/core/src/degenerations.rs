//! Deformations to the normal cone described by component data, the
//! eps-expansions read off from them, and the obstructions they witness.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::algebra::{binomial, int, Scalar, EPS};
use crate::error::{Diagnostic, Error};
use crate::intersection::{
    Divisor, Exceptional, FibrationDatum, Flags, IntersectionTable, Poly, Roles, TestConfigDatum, ZeroPattern,
};
use crate::json::{ptr, Reader};
use crate::winv::{Sign, SignAnalysis, StabilityVerdict, VerdictKind};

pub const DEFAULT_TRUNCATION: u32 = 4;

/// One irreducible component `E^(s)` of the exceptional divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Codimension of the center `Z` in `X`.
    pub codim: usize,
    /// Multiplicity `m_s` of the component in `E`.
    pub m: u32,
    /// `F . H^j`, the degree of the generic fiber over the center.
    pub deg: Scalar,
    /// `Z . H^{N-j}`.
    pub center: Scalar,
    /// Log discrepancy.
    pub a: Scalar,
    pub fiber_type: bool,
    /// Multiplicity in the central fiber; only the DF excess reads it.
    pub b: u32,
    /// Codimension in `B` of the image of the center, when known.
    pub image_codim: Option<usize>,
    /// Known higher coefficients `c_{codim+1}, c_{codim+2}, ...`; unknown
    /// ones become the symbols `tau_{s}_{k}`.
    pub tails: Option<Vec<Scalar>>,
}

impl Component {
    pub fn new(codim: usize, m: u32, deg: Scalar, center: Scalar, a: Scalar) -> Self {
        Component { codim, m, deg, center, a, fiber_type: false, b: 1, image_codim: None, tails: None }
    }

    pub fn with_tails(mut self, tails: Vec<Scalar>) -> Self {
        self.tails = Some(tails);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalConeDatum {
    /// `N = dim X`.
    pub big_n: usize,
    /// `n = dim B`.
    pub n: usize,
    pub volume: Scalar,
    /// Highest eps power of the `a`-series kept beyond the leading terms.
    pub truncation: Option<u32>,
    /// `H + f^* L_0 = -lambda K`; enables the canonical class in the builder.
    pub lambda: Option<Scalar>,
    /// `H^{m+i} L^{n-i}` for `i < n`; defaults to `V` each.
    pub mixed_volumes: Option<Vec<Scalar>>,
    pub components: Vec<Component>,
}

pub fn tail_symbol(s: usize, k: usize) -> String {
    format!("tau_{s}_{k}")
}

impl NormalConeDatum {
    pub fn new(big_n: usize, n: usize, volume: Scalar, components: Vec<Component>) -> Self {
        NormalConeDatum { big_n, n, volume, truncation: None, lambda: None, mixed_volumes: None, components }
    }

    pub fn order(&self) -> u32 {
        self.truncation.unwrap_or(DEFAULT_TRUNCATION)
    }

    /// Minimal codimension `r` of the centers.
    pub fn min_codim(&self) -> Option<usize> {
        self.components.iter().map(|c| c.codim).min()
    }

    /// Parameters the series may involve.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = [EPS.to_string()].into_iter().collect();
        for (s, c) in self.components.iter().enumerate() {
            for k in (c.codim + 1)..=self.big_n {
                if self.tail_is_symbolic(s, k) && self.keeps(k) {
                    out.insert(tail_symbol(s, k));
                }
            }
        }
        out
    }

    fn keeps(&self, k: usize) -> bool {
        k as u32 <= self.order()
    }

    fn tail_is_symbolic(&self, s: usize, k: usize) -> bool {
        let c = &self.components[s];
        match &c.tails {
            Some(t) => t.get(k - c.codim - 1).is_none(),
            None => true,
        }
    }

    /// `c_{s,k}` with `E_s . H_eps^i . H^{N-i} = sum_k C(i,k) eps^k c_{s,k}`.
    pub fn coefficient(&self, s: usize, k: usize) -> Poly {
        let c = &self.components[s];
        if k < c.codim || k > self.big_n {
            return Poly::zero();
        }
        if k == c.codim {
            return Poly::constant(c.deg.clone() * c.center.clone());
        }
        if !self.keeps(k) {
            return Poly::zero();
        }
        match c.tails.as_ref().and_then(|t| t.get(k - c.codim - 1)) {
            Some(v) => Poly::constant(v.clone()),
            None => Poly::var(&tail_symbol(s, k)),
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.n > self.big_n {
            return Err(Error::DimensionMismatch(format!("n = {} > N = {}", self.n, self.big_n)));
        }
        if !self.volume.is_positive() {
            return Err(Error::DegenerateVolume(format!("V = {}", self.volume)));
        }
        for (s, c) in self.components.iter().enumerate() {
            if c.codim > self.big_n {
                return Err(Error::IndexOutOfRange(format!("component {s}: codim {} > N", c.codim)));
            }
            if !(c.deg.clone() * c.center.clone()).is_positive() {
                return Err(Error::DegenerateVolume(format!("component {s}: deg * center must be positive")));
            }
        }
        Ok(())
    }
}

fn eps_pow(k: usize) -> Poly {
    Poly::var(EPS).pow(k as u32)
}

/// `a_i^(j) = sum_{s: codim = j} m_s sum_{k=j}^{i} C(i,k) eps^k c_{s,k}`.
pub fn a_series(d: &NormalConeDatum, i: usize, j: usize) -> Result<Poly, Error> {
    if i > d.big_n || j > d.big_n {
        return Err(Error::IndexOutOfRange(format!("a_{i}^({j}) with N = {}", d.big_n)));
    }
    let mut acc = Poly::zero();
    for (s, c) in d.components.iter().enumerate() {
        if c.codim != j {
            continue;
        }
        for k in j..=i {
            let term = d.coefficient(s, k) * eps_pow(k);
            acc = acc + term.scale(&(binomial::<Scalar>(i as u64, k as i64) * int(c.m as i64)));
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IJSeries {
    pub i_na: Poly,
    pub j_na: Poly,
}

/// `V I = eps sum_j a_N^(j)` and `V J = eps/(N+1) sum_j sum_i a_i^(j)`.
pub fn i_j_series(d: &NormalConeDatum) -> Result<IJSeries, Error> {
    d.validate()?;
    let big_n = d.big_n;
    let codims: BTreeSet<usize> = d.components.iter().map(|c| c.codim).collect();
    let mut vi = Poly::zero();
    let mut vj = Poly::zero();
    for &j in &codims {
        vi = vi + a_series(d, big_n, j)?;
        for i in j..=big_n {
            vj = vj + a_series(d, i, j)?;
        }
    }
    let e = Poly::var(EPS);
    let i_na = (e.clone() * vi).div_scalar(&d.volume)?;
    let j_na = (e * vj).div_scalar(&(d.volume.clone() * int(big_n as i64 + 1)))?;
    Ok(IJSeries { i_na, j_na })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoLeading {
    /// `r + 1`.
    pub order: u32,
    /// Coefficient of `eps^{r+1}` in `V (I - (n+1) J)`.
    pub coefficient: Scalar,
}

/// `sum_{codim = r} m deg center C(N, r) (1 - (n+1)/(r+1))`; `None` without components.
pub fn fano_leading(d: &NormalConeDatum, n: usize) -> Option<FanoLeading> {
    let r = d.min_codim()?;
    let factor = Scalar::one() - int(n as i64 + 1) / int(r as i64 + 1);
    let base = binomial::<Scalar>(d.big_n as u64, r as i64) * factor;
    let coefficient = d
        .components
        .iter()
        .filter(|c| c.codim == r)
        .map(|c| int(c.m as i64) * c.deg.clone() * c.center.clone() * base.clone())
        .fold(Scalar::zero(), |a, b| a + b);
    Some(FanoLeading { order: r as u32 + 1, coefficient })
}

/// `H = V^{-1} sum_s A_s m_s sum_k C(N,k) eps^k c_{s,k}`.
pub fn entropy_series(d: &NormalConeDatum) -> Result<Poly, Error> {
    d.validate()?;
    let mut acc = Poly::zero();
    for (s, c) in d.components.iter().enumerate() {
        if c.a.is_zero() {
            continue;
        }
        for k in c.codim..=d.big_n {
            let term = d.coefficient(s, k) * eps_pow(k);
            let w = binomial::<Scalar>(d.big_n as u64, k as i64) * int(c.m as i64) * c.a.clone();
            acc = acc + term.scale(&w);
        }
    }
    acc.div_scalar(&d.volume)
}

/// Guess for the first nontrivial cut level: `n - codim_B f(Z)`, minimized
/// over the minimal-codimension components with known image codimension.
pub fn heuristic_level(d: &NormalConeDatum) -> Option<usize> {
    let r = d.min_codim()?;
    d.components
        .iter()
        .filter(|c| c.codim == r)
        .filter_map(|c| c.image_codim.map(|ic| d.n.saturating_sub(ic)))
        .min()
}

fn witness(sign: Sign, order: u32, leading: Scalar) -> SignAnalysis {
    let leading = Poly::constant(leading);
    let value = &leading * &eps_pow(order as usize);
    SignAnalysis { value, sign: Some(sign), eps_order: Some(order), leading }
}

fn with_witness(kind: VerdictKind, k: usize, w: SignAnalysis, notes: Vec<String>) -> StabilityVerdict {
    let mut levels: Vec<SignAnalysis> = (0..k)
        .map(|_| SignAnalysis { value: Poly::zero(), sign: Some(Sign::Zero), eps_order: None, leading: Poly::zero() })
        .collect();
    levels.push(w);
    StabilityVerdict { kind, levels, notes }
}

/// Negative discrepancy at the minimal codimension `r` makes the entropy
/// `-T eps^r + O(eps^{r+1})` while the other terms start at `eps^{r+1}`,
/// so `W_k < 0` at the first nontrivial level `k`.
pub fn lc_obstruction(d: &NormalConeDatum, k: Option<usize>) -> Result<StabilityVerdict, Error> {
    let Some(k) = k else {
        return Err(Error::PreconditionUnverifiable(
            "the first nontrivial cut level k must be supplied".into(),
        ));
    };
    if k > d.n {
        return Err(Error::IndexOutOfRange(format!("level {k} > n = {}", d.n)));
    }
    let Some(r) = d.min_codim() else {
        return Ok(StabilityVerdict::simple(VerdictKind::AllTestedNonnegative, "no components: trivial degeneration"));
    };
    let h = entropy_series(d)?;
    if h.is_zero() {
        return Ok(StabilityVerdict::simple(VerdictKind::NoObstructionClaimed, "entropy vanishes to the tracked order"));
    }
    let (order, lead) = h.leading_in_eps()?;
    let lead = lead.as_constant();
    match lead {
        Some(c) if order as usize == r && c.is_negative() => {
            let notes = vec![format!(
                "entropy = ({c}) eps^{r} + O(eps^{}); R and E are O(eps^{})",
                r + 1,
                r + 1
            )];
            Ok(with_witness(VerdictKind::ObstructionFound(k), k, witness(Sign::Negative, order, c), notes))
        }
        _ => Ok(StabilityVerdict::simple(
            VerdictKind::NoObstructionClaimed,
            format!("entropy leading term at eps^{order} is not negative at the minimal codimension {r}"),
        )),
    }
}

/// Non-fiber-type lc centers of codimension `r > n` on a Fano fibration
/// give `W_n = -(1/lambda) V (I - (n+1) J) < 0` to leading order.
pub fn fano_fiber_type_obstruction(d: &NormalConeDatum, n: usize, lambda: &Scalar) -> Result<StabilityVerdict, Error> {
    if !lambda.is_positive() {
        return Err(Error::PreconditionUnverifiable(format!("lambda must be positive, got {lambda}")));
    }
    if let Some((s, _)) = d.components.iter().enumerate().find(|(_, c)| !c.a.is_zero()) {
        return Err(Error::PreconditionUnverifiable(format!(
            "component {s} has nonzero discrepancy; only lc centers (A = 0) apply"
        )));
    }
    let Some(lead) = fano_leading(d, n) else {
        return Ok(StabilityVerdict::simple(VerdictKind::AllTestedNonnegative, "no components: trivial degeneration"));
    };
    let r = lead.order as usize - 1;
    let minimal: Vec<&Component> = d.components.iter().filter(|c| c.codim == r).collect();
    if minimal.iter().any(|c| c.fiber_type) {
        return Ok(StabilityVerdict::simple(
            VerdictKind::NoObstructionClaimed,
            format!("a center of minimal codimension {r} is of fiber type"),
        ));
    }
    if r <= n {
        return Ok(StabilityVerdict::simple(
            VerdictKind::NoObstructionClaimed,
            format!("minimal codimension {r} does not exceed n = {n}"),
        ));
    }
    let w_lead = -lead.coefficient.clone() / lambda.clone();
    let notes = vec![format!(
        "V(I - {}J) = ({}) eps^{} + O(eps^{}); W_{n} leading coefficient {w_lead}",
        n + 1,
        lead.coefficient,
        r + 1,
        r + 2
    )];
    Ok(with_witness(VerdictKind::ObstructionFound(n), n, witness(Sign::Negative, lead.order, w_lead), notes))
}

/// Fiber data of one irreducible component of a deminormal total space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentScalarData {
    /// Scalar curvature of the normalized general fiber.
    pub s: Scalar,
    /// `(L|_{B_k})^n`.
    pub base_volume: Scalar,
    /// `(H|_{X_i,b})^m`.
    pub fiber_volume: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameScalar {
    pub equal: bool,
    /// Coefficient of `eps eta` in `C(N,n)^{-1} W_0`, when the curvatures differ.
    pub w0_leading: Option<Scalar>,
}

impl SameScalar {
    pub fn w0_leading_sign(&self) -> Option<Sign> {
        self.w0_leading.as_ref().map(|c| if c.is_negative() { Sign::Negative } else { Sign::Positive })
    }
}

/// Unequal fiber curvatures destabilize: blowing up the intersection with the
/// component of largest curvature gives
/// `W_0 ~ eps eta (H|)^m (sum_k (L|_{B_k})^n S_k - L^n S_max) < 0`.
pub fn same_scalar_check(components: &[ComponentScalarData]) -> Result<SameScalar, Error> {
    if components.len() < 2 {
        return Err(Error::InsufficientComponents(components.len()));
    }
    for (i, c) in components.iter().enumerate() {
        if !c.base_volume.is_positive() || !c.fiber_volume.is_positive() {
            return Err(Error::DegenerateVolume(format!("component {i} has a nonpositive volume")));
        }
    }
    let first = &components[0].s;
    if components.iter().all(|c| &c.s == first) {
        return Ok(SameScalar { equal: true, w0_leading: None });
    }
    let top = components.iter().fold(&components[0], |best, c| if c.s > best.s { c } else { best });
    let weighted = components.iter().fold(Scalar::zero(), |a, c| a + c.base_volume.clone() * c.s.clone());
    let total = components.iter().fold(Scalar::zero(), |a, c| a + c.base_volume.clone());
    let coef = top.fiber_volume.clone() * (weighted - total * top.s.clone());
    Ok(SameScalar { equal: false, w0_leading: Some(coef) })
}

/// Intersection table realizing the component data.
///
/// Classes `H` (pullback of the polarization), `G<s>` (`m_s E_s`) and `L`
/// when `n > 0`. Components are disjoint and miss a general member of
/// `|L|`; `G_s^{k+1} H^{N-k} = (-1)^k m_s c_{s,k}`.
pub fn build_test_config(d: &NormalConeDatum) -> Result<TestConfigDatum, Error> {
    d.validate()?;
    let big_n = d.big_n;
    let mut classes = vec!["H".to_string()];
    let g = |s: usize| format!("G{s}");
    classes.extend((0..d.components.len()).map(g));
    if d.n > 0 {
        classes.push("L".into());
    }
    let total = big_n as u32 + 1;
    let mut table = IntersectionTable::new(classes, total);
    table.insert(crate::algebra::Monomial::var("H", total), Poly::zero())?;
    for (s, c) in d.components.iter().enumerate() {
        for k in 0..=big_n {
            let v = d.coefficient(s, k).scale(&int(c.m as i64));
            let v = if k % 2 == 1 { -v } else { v };
            let mono = crate::algebra::Monomial::from_pairs([(g(s).as_str(), k as u32 + 1), ("H", (big_n - k) as u32)]);
            table.insert(mono, v)?;
        }
        for t in (s + 1)..d.components.len() {
            let req = [(g(s), 1), (g(t), 1)].into_iter().collect();
            table.add_zero_pattern(ZeroPattern::AtLeast(req));
        }
    }
    if d.n > 0 {
        table.add_zero_pattern(ZeroPattern::AtLeast([("L".to_string(), 1)].into_iter().collect()));
    }

    let eps = Poly::var(EPS);
    let mut polarization = Divisor::class("H");
    for s in 0..d.components.len() {
        polarization = polarization.plus(&g(s), -eps.clone());
    }
    // K = kappa H modulo the base, kappa = -1/lambda.
    let kappa = d.lambda.as_ref().map(|l| -Scalar::one() / l.clone());
    let (klog, kpull) = match &kappa {
        Some(k) => {
            let kp = Divisor::zero().plus("H", Poly::constant(k.clone()));
            let kl = d
                .components
                .iter()
                .enumerate()
                .fold(kp.clone(), |acc, (s, c)| acc.plus(&g(s), Poly::constant(c.a.clone())));
            (Some(kl), Some(kp))
        }
        None => (None, None),
    };
    let exceptionals = d
        .components
        .iter()
        .enumerate()
        .map(|(s, c)| Exceptional { class: g(s), b: c.b, a: c.a.clone() })
        .collect();

    let mixed: Vec<Scalar> = match &d.mixed_volumes {
        Some(v) => v.iter().cloned().chain(std::iter::once(d.volume.clone())).collect(),
        None => vec![d.volume.clone(); d.n + 1],
    };
    let canon_len = if big_n == 0 { 0 } else { d.n.min(big_n - 1) + 1 };
    let canonical_products = (0..canon_len)
        .map(|b| kappa.as_ref().map(|k| k.clone() * mixed[d.n - b].clone()))
        .collect();
    let fibration = FibrationDatum {
        n: d.n,
        m: big_n - d.n,
        mixed_volumes: mixed.into_iter().map(Some).collect(),
        canonical_products,
        components: Vec::new(),
    };
    Ok(TestConfigDatum {
        n: d.n,
        m: big_n - d.n,
        variables: d.variables(),
        table,
        roles: Roles {
            polarization,
            base_pullback: Divisor::class("H"),
            klog,
            twist: (d.n > 0).then(|| Divisor::class("L")),
            kpull,
            excess: None,
        },
        exceptionals,
        flags: Flags {
            normalized: d.components.iter().all(|c| c.codim > 0),
            trivial: d.components.is_empty(),
        },
        fibration,
    })
}

/// Parses a degeneration catalog.
pub fn load_catalog(bytes: &[u8]) -> Result<NormalConeDatum, Error> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| Error::schema("", format!("invalid JSON: {e}")))?;
    catalog_from_value(&v).map_err(Error::Schema)
}

pub fn validate_catalog(bytes: &[u8]) -> Vec<Diagnostic> {
    match load_catalog(bytes) {
        Ok(_) => Vec::new(),
        Err(Error::Schema(d)) => d,
        Err(e) => vec![Diagnostic { pointer: String::new(), message: e.to_string() }],
    }
}

pub fn catalog_from_value(v: &Value) -> Result<NormalConeDatum, Vec<Diagnostic>> {
    let mut r = Reader::default();
    let Some(root) = r.object(v, "") else { return Err(r.diags) };
    let big_n = r.field(root, "N", "").and_then(|x| r.uint(x, "/N")).map(|x| x as usize);
    let n = r.field(root, "n", "").and_then(|x| r.uint(x, "/n")).map(|x| x as usize);
    let volume = r.field(root, "V", "").and_then(|x| r.scalar(x, "/V"));
    if let Some(v) = &volume {
        if !v.is_positive() {
            r.fail("/V", format!("volume must be positive, got {v}"));
        }
    }
    if let (Some(bn), Some(n)) = (big_n, n) {
        if bn == 0 {
            r.fail("/N", "N must be at least 1");
        }
        if n > bn {
            r.fail("/n", format!("n = {n} exceeds N = {bn}"));
        }
    }
    let truncation = match root.get("truncation") {
        None => None,
        Some(x) => r.uint(x, "/truncation").map(|t| t as u32),
    };
    let lambda = match root.get("lambda") {
        None | Some(Value::Null) => None,
        Some(x) => {
            let l = r.scalar(x, "/lambda");
            if let Some(l) = &l {
                if !l.is_positive() {
                    r.fail("/lambda", format!("lambda must be positive (H = -lambda K), got {l}"));
                }
            }
            l
        }
    };
    let mixed_volumes = match root.get("mixed_volumes") {
        None => None,
        Some(x) => r.array(x, "/mixed_volumes").map(|arr| {
            if let Some(n) = n {
                if arr.len() != n {
                    r.fail("/mixed_volumes", format!("expected n = {n} entries H^(m+i) L^(n-i), i < n"));
                }
            }
            arr.iter()
                .enumerate()
                .filter_map(|(i, x)| {
                    let at = ptr("/mixed_volumes", i);
                    let s = r.scalar(x, &at)?;
                    if !s.is_positive() {
                        r.fail(&at, "volume must be positive");
                    }
                    Some(s)
                })
                .collect()
        }),
    };
    let mut components = Vec::new();
    if let Some(arr) = r.field(root, "components", "").and_then(|x| r.array(x, "/components")) {
        for (i, c) in arr.iter().enumerate() {
            let at = ptr("/components", i);
            let Some(o) = r.object(c, &at) else { continue };
            let codim = r.field(o, "codim", &at).and_then(|x| r.uint(x, &ptr(&at, "codim"))).map(|x| x as usize);
            let m = r.field(o, "m", &at).and_then(|x| r.uint(x, &ptr(&at, "m")));
            let deg = r.field(o, "deg", &at).and_then(|x| r.scalar(x, &ptr(&at, "deg")));
            let center = r.field(o, "center", &at).and_then(|x| r.scalar(x, &ptr(&at, "center")));
            let a = r.field(o, "A", &at).and_then(|x| r.scalar(x, &ptr(&at, "A")));
            let fiber_type = match o.get("fiber_type") {
                None => Some(false),
                Some(x) => r.boolean(x, &ptr(&at, "fiber_type")),
            };
            let b = match o.get("b") {
                None => Some(1),
                Some(x) => r.uint(x, &ptr(&at, "b")),
            };
            let image_codim = match o.get("image_codim") {
                None => Some(None),
                Some(x) => r.uint(x, &ptr(&at, "image_codim")).map(|v| Some(v as usize)),
            };
            if let (Some(Some(ic)), Some(n)) = (image_codim, n) {
                if ic > n {
                    r.fail(&ptr(&at, "image_codim"), format!("image codimension {ic} exceeds n = {n}"));
                }
            }
            let tails = match o.get("tails") {
                None => Some(None),
                Some(x) => r.array(x, &ptr(&at, "tails")).map(|arr| {
                    Some(arr.iter().enumerate().filter_map(|(k, t)| r.scalar(t, &ptr(&ptr(&at, "tails"), k))).collect())
                }),
            };
            if let (Some(codim), Some(bn)) = (codim, big_n) {
                if codim > bn {
                    r.fail(&ptr(&at, "codim"), format!("codim {codim} exceeds N = {bn}"));
                }
            }
            if m == Some(0) {
                r.fail(&ptr(&at, "m"), "multiplicity must be positive");
            }
            if b == Some(0) {
                r.fail(&ptr(&at, "b"), "multiplicity must be positive");
            }
            for (key, val) in [("deg", &deg), ("center", &center)] {
                if let Some(v) = val {
                    if !v.is_positive() {
                        r.fail(&ptr(&at, key), format!("must be positive, got {v}"));
                    }
                }
            }
            if let (Some(codim), Some(m), Some(deg), Some(center), Some(a), Some(ft), Some(b), Some(ic), Some(tails)) =
                (codim, m, deg, center, a, fiber_type, b, image_codim, tails)
            {
                components.push(Component {
                    codim,
                    m: m as u32,
                    deg,
                    center,
                    a,
                    fiber_type: ft,
                    b: b as u32,
                    image_codim: ic,
                    tails,
                });
            }
        }
    }
    match (big_n, n, volume) {
        (Some(big_n), Some(n), Some(volume)) if r.diags.is_empty() => Ok(NormalConeDatum {
            big_n,
            n,
            volume,
            truncation,
            lambda,
            mixed_volumes,
            components,
        }),
        _ => {
            if r.diags.is_empty() {
                r.fail("", "catalog incomplete");
            }
            Err(r.diags)
        }
    }
}
