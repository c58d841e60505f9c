//! Property suites over randomly generated expressions, polynomials and
//! forms: normalization, parse/print round-trips, exterior-algebra
//! identities and rational snapping.

use proptest::prelude::*;

use cwindex::expr::ast::parse_expr;
use cwindex::expr::poly::{gcd, Poly};
use cwindex::expr::{crat_from_int, Chart, Expr};
use cwindex::forms::Form;
use cwindex::index::snap_to_rational;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Expr::coord),
        (-6i64..=6).prop_map(Expr::int),
        (-9i64..=9, 1i64..=9).prop_map(|(p, q)| Expr::rational(p, q)),
        Just(Expr::imaginary_unit()),
    ]
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            inner.clone().prop_map(|a| a.neg()),
            (inner, 0u32..=3).prop_map(|(a, e)| a.powi(e as i32).expect("nonnegative power")),
        ]
    })
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    // small dense-ish polynomials in two variables
    prop::collection::vec(((0u32..3, 0u32..3), -5i64..=5), 1..5).prop_map(|terms| {
        let x = Poly::var(0, 2);
        let y = Poly::var(1, 2);
        let mut acc = Poly::constant(crat_from_int(0), 2);
        for ((a, b), c) in terms {
            let t = x.pow(a).mul(&y.pow(b)).scale(&crat_from_int(c));
            acc = acc.add(&t);
        }
        acc
    })
}

fn chart3() -> std::sync::Arc<Chart> {
    Chart::new(vec!["x", "y", "z"]).expect("valid chart")
}

fn one_form_strategy() -> impl Strategy<Value = Form> {
    prop::collection::vec((0usize..3, expr_strategy()), 1..3).prop_map(|parts| {
        let chart = chart3();
        let mut acc = Form::zero(&chart);
        for (i, e) in parts {
            acc = acc.add(&Form::term(&chart, &[i], e));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(e in expr_strategy()) {
        let n = e.normalize();
        prop_assert_eq!(n.normalize(), n);
    }

    #[test]
    fn print_parse_round_trip_is_exact(e in expr_strategy()) {
        let printed = format!("{}", e);
        let back = parse_expr(&printed).expect("printed form parses");
        prop_assert_eq!(back, e, "printed: {}", printed);
    }

    #[test]
    fn addition_commutes_and_multiplication_distributes(
        a in expr_strategy(),
        b in expr_strategy(),
        c in expr_strategy(),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn exterior_derivative_squares_to_zero(w in one_form_strategy()) {
        prop_assert!(w.d().d().is_zero());
    }

    #[test]
    fn wedge_of_one_forms_anticommutes(a in one_form_strategy(), b in one_form_strategy()) {
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).neg());
        prop_assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn leibniz_rule_for_d(a in one_form_strategy(), b in one_form_strategy()) {
        // d(a∧b) = da∧b − a∧db for 1-forms a
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).sub(&a.wedge(&b.d()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_divides_both_arguments(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = gcd(&a, &b);
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
    }

    #[test]
    fn gcd_absorbs_common_factor(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let g = gcd(&a.mul(&c), &b.mul(&c));
        // the common factor divides the gcd of the products
        prop_assert!(g.div_exact(&c.monic()).is_some());
    }

    #[test]
    fn snapping_recovers_small_rationals(p in -400i64..=400, q in 1i64..=40) {
        let x = p as f64 / q as f64;
        let snapped = snap_to_rational(x, 1000);
        let expect = cwindex::expr::Rat::new(p.into(), q.into());
        prop_assert_eq!(snapped, expect);
    }
}
