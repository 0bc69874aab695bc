#![allow(dead_code)]

use std::collections::BTreeSet;

use fibrk::algebra::{int, ratio, Scalar, EPS};
use fibrk::degenerations::{Component, NormalConeDatum};
use fibrk::intersection::{
    monomials, Divisor, Exceptional, FibrationDatum, Flags, IntersectionTable, Poly, Roles, TestConfigDatum,
};
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> TestConfigDatum {
    let bytes = std::fs::read(fixture_path(&format!("{name}.json"))).unwrap();
    fibrk::intersection::load_datum(&bytes).unwrap()
}

pub fn small_rational(rng: &mut StdRng) -> Scalar {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

pub fn positive_rational(rng: &mut StdRng) -> Scalar {
    ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

pub fn eps() -> Poly {
    Poly::var(EPS)
}

/// Synthetic compactified test configuration over an `n`-dimensional base.
///
/// Classes `H` (pullback of the polarization of `X`), `E` (exceptional) and
/// `L` (pullback from the base). Products of `N + 1` pullbacks from `X`, and
/// powers of `L` above `n`, vanish; `E . H^N = 0` keeps the datum normalized.
/// With `flat_in_l`, every product involving `L` vanishes, so only `W_n` can
/// be nonzero.
pub fn random_datum(rng: &mut StdRng, n: usize, m: usize, flat_in_l: bool) -> TestConfigDatum {
    let big_n = (n + m) as u32;
    let classes: Vec<String> = ["H", "E", "L"].iter().map(|s| s.to_string()).collect();
    let mut table = IntersectionTable::new(classes.clone(), big_n + 1);
    for mono in monomials(&classes, big_n + 1) {
        let (e, l) = (mono.exp("E"), mono.exp("L"));
        let zero = e == 0 || l as usize > n || (e == 1 && mono.exp("H") == big_n) || (flat_in_l && l > 0);
        let v = if zero { Poly::zero() } else { Poly::constant(small_rational(rng)) };
        table.insert(mono, v).unwrap();
    }
    let mixed: Vec<Scalar> = (0..=n).map(|_| positive_rational(rng)).collect();
    let canon: Vec<Scalar> = (0..=n.min(n + m - 1)).map(|_| small_rational(rng)).collect();
    let c = |v: Scalar| Poly::constant(v);
    let klog = Divisor::zero()
        .plus("H", c(small_rational(rng)))
        .plus("E", c(small_rational(rng)))
        .plus("L", c(small_rational(rng)));
    let b = rng.gen_range(1..=3u32);
    TestConfigDatum {
        n,
        m,
        variables: [EPS.to_string()].into_iter().collect::<BTreeSet<_>>(),
        table,
        roles: Roles {
            polarization: Divisor::class("H").plus("E", -eps()),
            base_pullback: Divisor::class("H"),
            klog: Some(klog),
            twist: (n > 0).then(|| Divisor::class("L")),
            kpull: None,
            excess: None,
        },
        exceptionals: vec![Exceptional { class: "E".into(), b, a: small_rational(rng) }],
        flags: Flags { normalized: true, trivial: false },
        fibration: FibrationDatum::new(n, m, mixed, canon),
    }
}

/// Product of a fiber configuration (over a point) with an `n`-dimensional
/// base, polarized by `H_b + L` with `L^n = vol` and `K_B = kb L`.
pub fn product_datum(fiber: &TestConfigDatum, n: usize, vol: &Scalar, kb: &Scalar) -> TestConfigDatum {
    assert_eq!(fiber.n, 0);
    let m = fiber.m;
    let table = fiber.table.times_base("L", n as u32, vol).unwrap();
    let l = Divisor::class("L");
    let one = Poly::one();
    let vb = fiber.fibration.mixed(0).unwrap();
    let kfib = fiber.fibration.canon(0).unwrap();
    let binom = |a: usize, b: usize| fibrk::algebra::binomial::<Scalar>(a as u64, b as i64);
    let big_n = n + m;
    // (H_b + L)^{m+i} L^{n-i} = C(m+i, m) V_b vol
    let mixed = (0..=n).map(|i| binom(m + i, m) * vb.clone() * vol.clone()).collect();
    // K = K_b + kb L, so K . (H_b + L)^{N-1-b} L^b picks H_b^{m-1} L^n or H_b^m L^{n-1}.
    let canon = (0..=n.min(big_n - 1))
        .map(|b| {
            let rest = big_n - 1 - b;
            let fib = if m >= 1 { binom(rest, m - 1) * kfib.clone() * vol.clone() } else { int(0) };
            let base = if n >= 1 { binom(rest, m) * kb.clone() * vol.clone() * vb.clone() } else { int(0) };
            fib + base
        })
        .collect();
    let kl = Poly::constant(kb.clone());
    TestConfigDatum {
        n,
        m,
        variables: fiber.variables.clone(),
        table,
        roles: Roles {
            polarization: fiber.roles.polarization.clone().plus("L", one.clone()),
            base_pullback: fiber.roles.base_pullback.clone().plus("L", one),
            klog: fiber.roles.klog.clone().map(|k| k.plus("L", kl.clone())),
            twist: Some(l),
            kpull: fiber.roles.kpull.clone().map(|k| k.plus("L", kl)),
            excess: fiber.roles.excess.clone(),
        },
        exceptionals: fiber.exceptionals.clone(),
        flags: fiber.flags,
        fibration: FibrationDatum::new(n, m, mixed, canon),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tails {
    /// All higher coefficients vanish.
    Zero,
    /// Blow-up of a linear subspace: `c_{j+l} = (-1)^l C(j+l-1, l) c_j`.
    Linear,
    /// Random nonnegative values.
    Nonnegative,
    /// Left unknown.
    Symbolic,
}

pub fn random_component(rng: &mut StdRng, big_n: usize, codim: usize, tails: Tails) -> Component {
    let mut c = Component::new(codim, rng.gen_range(1..=3), positive_rational(rng), positive_rational(rng), small_rational(rng));
    c.b = rng.gen_range(1..=3);
    c.fiber_type = rng.gen_bool(0.5);
    let lead = c.deg.clone() * c.center.clone();
    let len = big_n - codim;
    c.tails = match tails {
        Tails::Zero => Some(vec![int(0); len]),
        Tails::Linear => Some(
            (1..=len)
                .map(|l| {
                    let sign = if l % 2 == 0 { int(1) } else { int(-1) };
                    sign * fibrk::algebra::binomial::<Scalar>((codim + l - 1) as u64, l as i64) * lead.clone()
                })
                .collect(),
        ),
        Tails::Nonnegative => Some((0..len).map(|_| ratio(rng.gen_range(0..=5), rng.gen_range(1..=3))).collect()),
        Tails::Symbolic => None,
    };
    c
}

/// Random catalog with `1..=max_components` components of codimension at least `r`,
/// at least one of them exactly `r`.
pub fn random_catalog(rng: &mut StdRng, big_n: usize, n: usize, r: usize, max_components: usize, tails: Tails) -> NormalConeDatum {
    let count = rng.gen_range(1..=max_components);
    let components = (0..count)
        .map(|i| {
            let codim = if i == 0 { r } else { rng.gen_range(r..=big_n) };
            random_component(rng, big_n, codim, tails)
        })
        .collect();
    let mut d = NormalConeDatum::new(big_n, n, positive_rational(rng), components);
    d.truncation = Some(big_n as u32);
    d
}
