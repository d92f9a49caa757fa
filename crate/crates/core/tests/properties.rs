//! Property tests for the algebraic identities the library relies on, plus
//! finite-field soundness checks of certified component reports.

use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use jetfiber::components::{component_report, ReportOptions};
use jetfiber::poly::{hasse_schmidt, jet_ring, order_along_jet, JetOrder};
use jetfiber::strata::Scenario;
use jetfiber::{Monomial, Polynomial, Rational, Ring};

fn ambient() -> Arc<Ring> {
    Ring::rational(&["x", "y", "z"])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((rational(), prop::array::uniform3(0u32..=2)), 0..5).prop_map(|terms| {
        let ring = ambient();
        Polynomial::from_terms(&ring, terms.into_iter().map(|(c, e)| (Monomial::from_exponents(&e), c)))
    })
}

/// Coefficients `t^0..t^m` of `f(series)`, computed by plain substitution
/// into `ℚ[t]`.
fn direct_series(f: &Polynomial, series: &[Vec<Rational>], m: usize) -> Vec<Rational> {
    let tr = Ring::rational(&["t"]);
    let images: Vec<Polynomial> = series
        .iter()
        .map(|s| {
            Polynomial::from_terms(&tr, s.iter().enumerate().map(|(k, c)| (Monomial::from_exponents(&[k as u32]), c.clone())))
        })
        .collect();
    let g = f.compose(&tr, &images);
    (0..=m).map(|k| g.coefficient(&Monomial::from_exponents(&[k as u32]))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn leibniz_rule(f in poly(), g in poly(), m in 0usize..=3) {
        let fg = hasse_schmidt(&(&f * &g), m);
        let df = hasse_schmidt(&f, m);
        let dg = hasse_schmidt(&g, m);
        let jr = jet_ring(&ambient(), 0..=m);
        for k in 0..=m {
            let mut rhs = Polynomial::zero(&jr);
            for i in 0..=k {
                rhs = &rhs + &(&df[i] * &dg[k - i]);
            }
            prop_assert_eq!(&fg[k], &rhs, "k = {}", k);
        }
    }

    #[test]
    fn derivatives_are_linear(f in poly(), g in poly(), a in rational(), b in rational(), m in 0usize..=3) {
        let comb = &f.scale(&a) + &g.scale(&b);
        let lhs = hasse_schmidt(&comb, m);
        let (df, dg) = (hasse_schmidt(&f, m), hasse_schmidt(&g, m));
        for k in 0..=m {
            prop_assert_eq!(&lhs[k], &(&df[k].scale(&a) + &dg[k].scale(&b)));
        }
    }

    #[test]
    fn order_matches_direct_substitution(
        f in poly(),
        jet in prop::collection::vec(prop::collection::vec(rational(), 4), 3),
    ) {
        let m = 3;
        // jet ring layout is level-major: index k * N + i
        let mut point = vec![Rational::zero(); 3 * (m + 1)];
        for (i, s) in jet.iter().enumerate() {
            for (k, c) in s.iter().enumerate() {
                point[k * 3 + i] = c.clone();
            }
        }
        let expected = direct_series(&f, &jet, m)
            .iter()
            .position(|c| !c.is_zero())
            .map_or(JetOrder::Infinite, JetOrder::Finite);
        prop_assert_eq!(order_along_jet(&f, &point, m).unwrap(), expected);
    }
}

#[test]
fn constant_polynomial_has_order_zero_or_infinity() {
    let ring = ambient();
    let one = Polynomial::one(&ring);
    let point = vec![Rational::one(); 6];
    assert_eq!(order_along_jet(&one, &point, 1).unwrap(), JetOrder::Finite(0));
    assert_eq!(order_along_jet(&Polynomial::zero(&ring), &point, 1).unwrap(), JetOrder::Infinite);
}

/// Certified reports agree with exhaustive enumeration over 𝔽₅ and 𝔽₇:
/// the fiber points are the union of the closure points, and every closure
/// owns a point outside the others.
#[test]
fn certified_reports_are_sound_over_small_fields() {
    for (tag, m) in [("node", 2), ("node", 3), ("cA:1", 2), ("cA:2", 3), ("cA:3", 3)] {
        let sc = Scenario::parse(tag, 1).unwrap();
        for q in [5, 7] {
            let mut opts = ReportOptions::with_oracle(q);
            opts.budget.max_points = 1_000_000_000;
            let report = component_report(&sc, m, &opts).unwrap();
            assert!(report.certified, "{tag} m={m}");
            let oracle = report.oracle.as_ref().expect("oracle ran");
            assert_eq!(oracle.counts.uncovered, 0, "{tag} m={m} q={q}");
            assert_eq!(oracle.counts.closure_outside_fiber, 0, "{tag} m={m} q={q}");
            assert!(oracle.counts.private_points.iter().all(|&p| p > 0), "{tag} m={m} q={q}");
            assert!(oracle.agrees);
        }
    }
}
