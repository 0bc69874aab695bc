mod common;

use common::*;
use fibrk::algebra::{int, ratio, EPS, J};
use fibrk::degenerations::{build_test_config, fano_leading, lc_obstruction, Component, NormalConeDatum};
use fibrk::functionals::{m_na, uniform_slack};
use fibrk::intersection::{expand_twisted_power, Poly};
use fibrk::winv::{mabuchi_rational_fn, w_table, VerdictKind};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn twisted_mabuchi_agrees_with_direct_evaluation() {
    // V(H + cL) M(H + cL) computed on the twisted datum itself, for numeric c.
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(0..=3usize);
        let m = rng.gen_range(1..=2usize);
        let d = random_datum(&mut rng, n, m, false);
        let f = mabuchi_rational_fn(&d).unwrap();
        for c in [int(0), int(2), ratio(5, 3), ratio(7, 2)] {
            let t = d.twisted(&c).unwrap();
            let direct = m_na(&t).unwrap().scale(&t.volume().unwrap());
            let den = f.den().substitute_value(J, &c).as_constant().unwrap();
            let via = f.num().substitute_value(J, &c).div_scalar(&den).unwrap();
            assert_eq!(via, direct, "c = {c}");
        }
    }
}

#[test]
fn lcbase_top_power_expansion() {
    let d = fixture("lcbase");
    let g = expand_twisted_power(&d, None, 4).unwrap();
    let vars = ["eps", "t", "u"].iter().map(|v| v.to_string()).collect();
    let want = fibrk::algebra::parse_poly("-4*eps^3*t + eps^4*u", &vars).unwrap();
    assert_eq!(g.coeff_of_power(J, 0), want);
}

#[test]
fn uniform_slack_sign_scan() {
    // eps - eps^2 - eps^2/4 = eps (1 - 5 eps / 4), positive exactly below 4/5.
    let d = fixture("p1-point");
    let slack = uniform_slack(&d, &ratio(1, 4)).unwrap();
    for k in 1..100 {
        let e = ratio(k, 100);
        let v = slack.substitute_value(EPS, &e).as_constant().unwrap();
        assert_eq!(v.is_positive(), e < ratio(4, 5), "eps = {e}: {v}");
        assert_eq!(v, e.clone() - ratio(5, 4) * e.clone() * e);
    }
}

#[test]
fn builder_deepest_level_matches_fano_leading() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..40 {
        let big_n = rng.gen_range(2..=5usize);
        let n = rng.gen_range(1..big_n);
        let r = rng.gen_range(1..=big_n);
        let mut d = random_catalog(&mut rng, big_n, n, r, 3, Tails::Symbolic);
        for c in d.components.iter_mut() {
            c.a = int(0);
        }
        let lambda = positive_rational(&mut rng);
        d.lambda = Some(lambda.clone());
        let w = w_table(&build_test_config(&d).unwrap()).unwrap();
        let lead = fano_leading(&d, n).unwrap();
        let wn = &w.w[n];
        let want = -lead.coefficient.clone() / lambda;
        if want.is_zero() {
            assert!(wn.coeff_of_power(EPS, lead.order).is_zero());
        } else {
            let (order, c) = wn.leading_in_eps().unwrap();
            assert_eq!((order, c), (lead.order, Poly::constant(want)));
        }
    }
}

#[test]
fn negative_discrepancy_leads_the_entropy() {
    // Entropy -T eps^r + O(eps^{r+1}), T > 0, from one codim-2 component with A = -1.
    let d = NormalConeDatum::new(
        4,
        2,
        int(3),
        vec![Component::new(2, 2, ratio(3, 2), int(2), int(-1))],
    );
    let v = lc_obstruction(&d, Some(1)).unwrap();
    assert_eq!(v.kind, VerdictKind::ObstructionFound(1));
    let (level, w) = v.witness().unwrap();
    assert_eq!(level, 1);
    // A m deg center C(4, 2) / V = (-1)(2)(3/2)(2)(6)/3
    assert_eq!(w.leading, Poly::constant(int(-12)));
    assert_eq!(w.eps_order, Some(2));
}
