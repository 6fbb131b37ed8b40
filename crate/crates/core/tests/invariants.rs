use proptest::prelude::*;

use pointwise_approx::hermite::{divided_difference, hermite_interpolant, hermite_residual};
use pointwise_approx::numcore::rho;
use pointwise_approx::smoothness::{finite_difference, omega_k};
use pointwise_approx::*;

fn horner(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..=max_len)
}

fn sorted_distinct(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len).prop_filter_map("nodes too close", |mut v| {
        v.sort_by(f64::total_cmp);
        v.windows(2).all(|w| w[1] - w[0] > 0.05).then_some(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn chebyshev_matches_monomial_evaluation(a in coeffs(12), x in -1.0f64..=1.0) {
        let p = ChebPoly::from_monomial(&a);
        let l1: f64 = a.iter().map(|c| c.abs()).sum();
        prop_assert!((p.eval(x) - horner(&a, x)).abs() <= 1e-13 * l1.max(1.0));
        let back = p.to_monomial();
        for (i, c) in a.iter().enumerate() {
            prop_assert!((back.get(i).copied().unwrap_or(0.0) - c).abs() <= 1e-12 * l1.max(1.0));
        }
    }

    #[test]
    fn product_rule(a in coeffs(8), b in coeffs(8), x in -1.0f64..=1.0) {
        let (p, q) = (ChebPoly::from_monomial(&a), ChebPoly::from_monomial(&b));
        let lhs = p.mul(&q).derivative().eval(x);
        let rhs = p.derivative().eval(x) * q.eval(x) + p.eval(x) * q.derivative().eval(x);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn rho_is_bracketed_and_shrinks_with_n(n in 1usize..500, x in -1.0f64..=1.0) {
        let nf = n as f64;
        let v = rho(n, x).unwrap();
        prop_assert!(v >= 1.0 / (nf * nf) && v <= 1.0 / nf + 1.0 / (nf * nf));
        prop_assert!(rho(n + 1, x).unwrap() < v);
    }

    #[test]
    fn divided_difference_of_polynomial_is_leading_coefficient(a in coeffs(6), extra in 0usize..2) {
        let d = a.len() - 1;
        let nodes: Vec<f64> = (0..=d + extra).map(|i| -0.9 + 1.8 * i as f64 / (d + extra + 1) as f64).collect();
        let f = FunctionModel::polynomial(&a);
        let want = if extra == 0 { a[d] } else { 0.0 };
        let scale: f64 = a.iter().map(|c| c.abs()).sum();
        prop_assert!((divided_difference(&f, &nodes).unwrap() - want).abs() <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn hermite_interpolant_reproduces_low_degree(z in sorted_distinct(3), m in prop::collection::vec(1usize..=2, 3)) {
        let y = NodeMultiset::new(z, m).unwrap();
        let a: Vec<f64> = (0..y.s()).map(|i| 0.3 * i as f64 - 0.5).collect();
        let f = FunctionModel::polynomial(&a);
        let p = hermite_interpolant(&f, &y).unwrap();
        prop_assert!(hermite_residual(&f, &y, &p).max_rel_err <= 1e-9);
        for x in [-1.0, -0.3, 0.4, 1.0] {
            prop_assert!((p.eval(x) - horner(&a, x)).abs() <= 1e-9);
        }
    }

    #[test]
    fn node_multiset_round_trips_through_text(z in sorted_distinct(4), m in prop::collection::vec(1usize..=4, 4)) {
        let y = NodeMultiset::new(z, m).unwrap();
        let back = NodeMultiset::parse(&y.to_string()).unwrap();
        prop_assert_eq!(back.flat(), y.flat());
    }

    #[test]
    fn kth_difference_annihilates_degree_below_k(a in coeffs(4), u in 0.001f64..0.2, x in -0.5f64..0.5) {
        let k = a.len();
        let f = FunctionModel::polynomial(&a);
        prop_assert!(finite_difference(&f, k, u, x, Interval::unit()).abs() <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modulus_is_monotone_in_t(k in 1usize..=3, freq in 0.5f64..3.0, t in 0.01f64..0.2, lambda in 1.0f64..3.0) {
        let f = FunctionModel::sin(freq);
        let grid = EvalGrid::lobatto(Interval::unit(), 400).unwrap();
        let w1 = omega_k(&f, 0, k, t, Interval::unit(), &grid).unwrap();
        let w2 = omega_k(&f, 0, k, lambda * t, Interval::unit(), &grid).unwrap();
        prop_assert!(w1 <= w2 * (1.0 + 1e-9));
        // omega_k(lambda t) <= ceil(lambda)^k omega_k(t)
        prop_assert!(w2 <= lambda.ceil().powi(k as i32) * w1 * (1.0 + 1e-6));
    }
}
