mod common;

use std::collections::BTreeMap;

use common::*;
use fibrk::algebra::{binomial, int, poly_div_rem, ratio, Monomial, Scalar, J};
use fibrk::degenerations::{build_test_config, entropy_series, fano_leading, i_j_series, NormalConeDatum};
use fibrk::functionals::{df_intersection, e_na, h_na, i_na, j_na, m_na, report};
use fibrk::intersection::{
    expand_twisted_power, scalar_curvature, Divisor, FibrationDatum, IntersectionTable, Poly, Which,
};
use fibrk::winv::{
    mabuchi_rational_fn, verdict, w0_fiber_check, w1_curve_formula, w1_via_hyperplane_cut, w_decompose,
    w_i_cut_formula, w_k_via_fano_identity, w_table, w_table_df, Assumptions,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_poly(rng: &mut StdRng, vars: &[&str], terms: usize, max_exp: u32) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..terms {
        let m = Monomial::from_pairs(vars.iter().map(|v| (*v, rng.gen_range(0..=max_exp))));
        p = p + Poly::term(m, small_rational(rng));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars = ["eps", "t", "j"];
        let a = random_poly(&mut r, &vars, 4, 2);
        let b = random_poly(&mut r, &vars, 4, 2);
        let c = random_poly(&mut r, &vars, 4, 2);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn division_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dd = r.gen_range(1..=3);
        let mut dc: Vec<Scalar> = (0..dd).map(|_| small_rational(&mut r)).collect();
        dc.push(positive_rational(&mut r));
        let d = Poly::from_dense(J, &dc);
        let q = random_poly(&mut r, &["eps", "j"], 3, 3);
        let mut rem = Poly::zero();
        for k in 0..dd {
            rem = rem + random_poly(&mut r, &["eps"], 2, 2) * Poly::var(J).pow(k as u32);
        }
        let num = &q * &d + &rem;
        let (q2, r2) = poly_div_rem(&num, &d).unwrap();
        prop_assert_eq!(q2, q);
        prop_assert_eq!(r2, rem);
    }

    #[test]
    fn recomposition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(0..=3usize);
        let m = r.gen_range(1..=2);
        let d = random_datum(&mut r, n, m, false);
        let f = mabuchi_rational_fn(&d).unwrap();
        let w = w_decompose(&f, n).unwrap();
        prop_assert!(w.recomposes(&f));
        prop_assert!(w.remainder.is_proper());
    }

    #[test]
    fn twist_keeps_the_verdict(seed in any::<u64>(), num in 1i64..8, den in 1i64..4) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3usize);
        let (m, flat) = (r.gen_range(1..=2), r.gen_bool(0.3));
        let d = random_datum(&mut r, n, m, flat);
        let none = Assumptions::default();
        let before = verdict(&w_table(&d).unwrap(), false, &none);
        let t = d.twisted(&ratio(num, den)).unwrap();
        let after = verdict(&w_table(&t).unwrap(), false, &none);
        prop_assert_eq!(before.kind, after.kind);
    }

    #[test]
    fn functionals_survive_renaming(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (n, m) = (r.gen_range(0..=2), r.gen_range(1..=2));
        let d = random_datum(&mut r, n, m, false);
        let map: BTreeMap<String, String> =
            [("H", "A0"), ("E", "Exc"), ("L", "Base")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        let renamed = d.rename_classes(&map);
        let (a, b) = (report(&d).unwrap(), report(&renamed).unwrap());
        prop_assert_eq!(a, b);
        prop_assert_eq!(w_table(&d).unwrap(), w_table(&renamed).unwrap());
    }

    #[test]
    fn twisted_power_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(0..=2usize);
        let m = r.gen_range(1..=2usize);
        let d = random_datum(&mut r, n, m, false);
        let total = (n + m + 1) as u32;
        let got = expand_twisted_power(&d, None, total).unwrap();
        let want = brute_twisted_power(&d.table, &d.roles.polarization, &d.twist().unwrap(), total);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn scalar_curvature_is_scale_free(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(0..=3usize);
        let m = r.gen_range(1..=3usize);
        let mixed: Vec<Scalar> = (0..=n).map(|_| positive_rational(&mut r)).collect();
        let canon: Vec<Scalar> = (0..=n.min(n + m - 1)).map(|_| small_rational(&mut r)).collect();
        let k = positive_rational(&mut r);
        let f = FibrationDatum::new(n, m, mixed.clone(), canon.clone());
        let g = FibrationDatum::new(
            n,
            m,
            mixed.iter().map(|x| x.clone() * k.clone()).collect(),
            canon.iter().map(|x| x.clone() * k.clone()).collect(),
        );
        for which in [Which::Whole, Which::Fiber] {
            prop_assert_eq!(scalar_curvature(&f, which).unwrap(), scalar_curvature(&g, which).unwrap());
        }
    }

    #[test]
    fn hyperplane_cut_determines_w1(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3usize);
        let m = r.gen_range(1..=2);
        let d = random_datum(&mut r, n, m, false);
        prop_assert_eq!(w1_via_hyperplane_cut(&d).unwrap(), w_table(&d).unwrap().w[1].clone());
    }

    #[test]
    fn level_formulas(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=3usize);
        let curve = random_datum(&mut r, 1, m, false);
        prop_assert_eq!(w1_curve_formula(&curve).unwrap(), w_table(&curve).unwrap().w[1].clone());
        let n = r.gen_range(0..=3usize);
        let m = r.gen_range(1..=2);
        let d = random_datum(&mut r, n, m, false);
        prop_assert_eq!(w_i_cut_formula(&d, 0).unwrap(), w_table(&d).unwrap().w[0].clone());
    }

    #[test]
    fn only_the_deepest_level_sees_a_flat_table(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3usize);
        let m = r.gen_range(1..=2);
        let d = random_datum(&mut r, n, m, true);
        let w = w_table(&d).unwrap();
        for k in 0..n {
            prop_assert!(w.w[k].is_zero(), "W_{} = {}", k, w.w[k]);
        }
    }

    #[test]
    fn builder_reproduces_series(seed in any::<u64>()) {
        let mut r = rng(seed);
        let big_n = r.gen_range(1..=4usize);
        let n = r.gen_range(0..big_n);
        let rr = r.gen_range(1..=big_n);
        let tails = [Tails::Zero, Tails::Linear, Tails::Nonnegative, Tails::Symbolic][r.gen_range(0..4)];
        let mut d = random_catalog(&mut r, big_n, n, rr, 3, tails);
        d.truncation = Some(r.gen_range(rr as u32..=big_n as u32 + 1));
        let b = build_test_config(&d).unwrap();
        let s = i_j_series(&d).unwrap();
        prop_assert_eq!(i_na(&b).unwrap(), s.i_na);
        prop_assert_eq!(j_na(&b).unwrap(), s.j_na);
        prop_assert_eq!(h_na(&b).unwrap(), entropy_series(&d).unwrap());
        prop_assert_eq!(j_na(&b).unwrap(), -&e_na(&b).unwrap());
    }

    #[test]
    fn series_leading_terms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let big_n = r.gen_range(1..=6usize);
        let n = r.gen_range(0..big_n);
        let rr = r.gen_range(1..=big_n);
        let d = random_catalog(&mut r, big_n, n, rr, 3, Tails::Symbolic);
        let s = i_j_series(&d).unwrap();
        let v = d.volume.clone();
        let (order, lead) = s.j_na.leading_in_eps().unwrap();
        prop_assert_eq!(order as usize, rr + 1);
        // Hockey stick: sum_{i=r}^N C(i, r) = C(N+1, r+1).
        let want: Scalar = d
            .components
            .iter()
            .filter(|c| c.codim == rr)
            .map(|c| int(c.m as i64) * c.deg.clone() * c.center.clone())
            .fold(int(0), |a, b| a + b)
            * binomial::<Scalar>(big_n as u64 + 1, rr as i64 + 1)
            / (int(big_n as i64 + 1) * v);
        prop_assert_eq!(lead.as_constant(), Some(want.clone()));
        prop_assert!(want.is_positive());
        let f = fano_leading(&d, n).unwrap();
        prop_assert_eq!(f.coefficient.cmp(&int(0)), rr.cmp(&n));
    }

    #[test]
    fn entropy_order_is_min_codim(seed in any::<u64>()) {
        let mut r = rng(seed);
        let big_n = r.gen_range(1..=5usize);
        let rr = r.gen_range(1..=big_n);
        let mut d = random_catalog(&mut r, big_n, 0, rr, 3, Tails::Symbolic);
        if d.components[0].a.is_zero() {
            d.components[0].a = int(-1);
        }
        let h = entropy_series(&d).unwrap();
        let (order, lead) = h.leading_in_eps().unwrap();
        prop_assert_eq!(order as usize, rr);
        let want: Scalar = d
            .components
            .iter()
            .filter(|c| c.codim == rr)
            .map(|c| c.a.clone() * int(c.m as i64) * c.deg.clone() * c.center.clone())
            .fold(int(0), |a, b| a + b)
            * binomial::<Scalar>(big_n as u64, rr as i64)
            / d.volume.clone();
        if !want.is_zero() {
            prop_assert_eq!(lead.as_constant(), Some(want));
        }
    }

    #[test]
    fn fano_identity_on_builder_data(seed in any::<u64>()) {
        let mut r = rng(seed);
        let big_n = r.gen_range(2..=4usize);
        let n = r.gen_range(1..big_n);
        let rr = r.gen_range(1..=big_n);
        let mut d = random_catalog(&mut r, big_n, n, rr, 2, Tails::Symbolic);
        for c in d.components.iter_mut() {
            c.a = int(0);
        }
        let lambda = positive_rational(&mut r);
        d.lambda = Some(lambda.clone());
        let b = build_test_config(&d).unwrap();
        let w = w_table(&b).unwrap();
        for k in 0..n {
            prop_assert!(w.w[k].is_zero());
        }
        let kappa = -int(1) / lambda;
        prop_assert_eq!(w_k_via_fano_identity(&b, n, &kappa).unwrap(), w.w[n].clone());
        let s = i_j_series(&d).unwrap();
        let want = (s.i_na - s.j_na.scale(&int(n as i64 + 1))).scale(&(kappa * d.volume.clone()));
        prop_assert_eq!(w.w[n].clone(), want);
    }

    #[test]
    fn df_levels_exceed_m_levels(seed in any::<u64>()) {
        let mut r = rng(seed);
        let big_n = r.gen_range(2..=4usize);
        let n = r.gen_range(1..big_n);
        let rr = r.gen_range(1..=big_n);
        let mut d = random_catalog(&mut r, big_n, n, rr, 2, Tails::Nonnegative);
        d.lambda = Some(positive_rational(&mut r));
        let b = build_test_config(&d).unwrap();
        let (m, df) = (w_table(&b).unwrap(), w_table_df(&b).unwrap());
        for (x, y) in df.w.iter().zip(&m.w) {
            prop_assert!((x - y).terms().all(|(_, c)| !c.is_negative()));
        }
        let none = Assumptions::default();
        if d.components.iter().all(|c| c.b == 1) {
            prop_assert_eq!(df.w.clone(), m.w.clone());
            prop_assert_eq!(verdict(&df, false, &none).kind, verdict(&m, false, &none).kind);
        }
        prop_assert!(df_intersection(&b).unwrap() - m_na(&b).unwrap() == (df.w[n].clone() - m.w[n].clone()).div_scalar(&d.volume).unwrap());
    }

    #[test]
    fn product_fibers_give_w0(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.gen_range(1..=3usize);
        let rr = r.gen_range(1..=m);
        let mut fiber_cat = random_catalog(&mut r, m, 0, rr, 2, Tails::Symbolic);
        fiber_cat.lambda = Some(positive_rational(&mut r));
        let fiber = build_test_config(&fiber_cat).unwrap();
        let n = r.gen_range(1..=3usize);
        let p = product_datum(&fiber, n, &positive_rational(&mut r), &small_rational(&mut r));
        let chk = w0_fiber_check(&p, &fiber).unwrap();
        prop_assert!(chk.holds, "{} vs {}", chk.w0, chk.expected);
    }
}

#[test]
fn pascal_and_hockey_stick() {
    for a in 1..=64u64 {
        for b in 1..=a as i64 {
            let lhs = binomial::<Scalar>(a, b);
            assert_eq!(lhs, binomial::<Scalar>(a - 1, b - 1) + binomial::<Scalar>(a - 1, b));
        }
    }
    for big_n in 0..=32u64 {
        for r in 0..=big_n {
            let sum = (r..=big_n).fold(int(0), |acc, i| acc + binomial::<Scalar>(i, r as i64));
            assert_eq!(sum, binomial::<Scalar>(big_n + 1, r as i64 + 1));
        }
    }
}

#[test]
fn trivial_catalog_builds_trivial_datum() {
    let d = NormalConeDatum::new(3, 1, int(2), vec![]);
    let b = build_test_config(&d).unwrap();
    assert!(b.flags.trivial && b.flags.normalized);
    for p in [i_na(&b).unwrap(), j_na(&b).unwrap(), e_na(&b).unwrap(), h_na(&b).unwrap()] {
        assert!(p.is_zero());
    }
}

/// `sum_k C(total, k) j^k (pol^{total-k} . l^k)` by enumerating every choice of
/// class in every factor.
fn brute_twisted_power(t: &IntersectionTable, pol: &Divisor, l: &Divisor, total: u32) -> Poly {
    let mut acc = Poly::zero();
    for k in 0..=total {
        let mut factors: Vec<&Divisor> = vec![pol; (total - k) as usize];
        factors.extend(std::iter::repeat_n(l, k as usize));
        let v = enumerate(t, &factors, Monomial::one(), Poly::one());
        acc = acc + (v * Poly::var(J).pow(k)).scale(&binomial::<Scalar>(total as u64, k as i64));
    }
    acc
}

fn enumerate(t: &IntersectionTable, rest: &[&Divisor], mono: Monomial, coef: Poly) -> Poly {
    match rest.split_first() {
        None => coef * t.eval_product(&mono).unwrap(),
        Some((d, tail)) => {
            let mut acc = Poly::zero();
            for (c, x) in d.parts() {
                acc = acc + enumerate(t, tail, mono.mul(&Monomial::var(c, 1)), &coef * x);
            }
            acc
        }
    }
}
