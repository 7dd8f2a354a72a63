//! Field laws for exact scalars, checked on random rational functions in two parameters.

use bihom_core::scalar::{params_from, parse_scalar, rat, ratio, Params, Poly, Rational, Scalar};
use proptest::prelude::*;

fn params() -> Params {
    params_from(&["k1", "k2"])
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2), 0..4).prop_map(|terms| {
        let p = params();
        Poly::from_terms(&p, terms.into_iter().map(|(c, a, b)| (vec![a, b], rat(c))))
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Scalar::from(ratio(n, d))),
        poly().prop_map(Scalar::from_poly),
        (poly(), poly()).prop_filter_map("zero denominator", |(n, d)| Scalar::fraction(n, d).ok()),
    ]
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4).prop_map(|(n, d)| ratio(n, d)), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_commutative_and_associative(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x + &Scalar::zero(), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_associative_and_distributive(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &Scalar::one(), x.clone());
    }

    #[test]
    fn nonzero_scalars_are_invertible(x in scalar()) {
        if x.is_zero() {
            prop_assert!(x.recip().is_err());
        } else {
            prop_assert!((&x * &x.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn evaluation_is_a_ring_map(x in scalar(), y in scalar(), p in point()) {
        if let (Ok(a), Ok(b)) = (x.eval(&p), y.eval(&p)) {
            prop_assert_eq!((&x + &y).eval(&p).unwrap(), &a + &b);
            // a product can only lose denominator factors by cancellation
            if let Ok(c) = (&x * &y).eval(&p) {
                prop_assert_eq!(c, &a * &b);
            }
        }
    }

    #[test]
    fn equality_is_cross_multiplication(x in scalar(), y in scalar(), z in scalar()) {
        prop_assume!(!y.is_zero() && !z.is_zero());
        let q1 = x.checked_div(&y).unwrap();
        let q2 = (&x * &z).checked_div(&(&y * &z)).unwrap();
        prop_assert_eq!(q1, q2);
    }

    #[test]
    fn display_parses_back(x in scalar()) {
        let text = x.to_string();
        prop_assert_eq!(parse_scalar(&text, &params()).unwrap(), x);
    }
}

#[test]
fn rational_reduction() {
    let p = params();
    assert_eq!(parse_scalar("6/4", &p).unwrap(), Scalar::from(ratio(3, 2)));
    let x = parse_scalar("(k1^2 - k2^2)/(k1 - k2)", &p).unwrap();
    assert_eq!(x, parse_scalar("k1 + k2", &p).unwrap());
    assert!(matches!(x, Scalar::Frac(_)));
    assert!(parse_scalar("1/(k1 - k1)", &p).is_err());
}
