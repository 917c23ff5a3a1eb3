use elliptica::qseries::{ps_invert, PSeries, SubstituteRule};
use elliptica::ring::{GaussianRational, Poly, RationalFunctionQi};
use proptest::prelude::*;

const ORDER: usize = 10;

fn coeff() -> impl Strategy<Value = RationalFunctionQi> {
    (prop::collection::vec(-3i64..4, 1..4), prop::collection::vec(-2i64..3, 1..3)).prop_filter_map(
        "nonzero denominator",
        |(n, d)| RationalFunctionQi::new(Poly::from_ints(&n), Poly::from_ints(&d)).ok(),
    )
}

fn series() -> impl Strategy<Value = PSeries<RationalFunctionQi>> {
    prop::collection::vec(coeff(), ORDER + 1).prop_map(|c| PSeries::new(c, ORDER))
}

fn invertible() -> impl Strategy<Value = PSeries<GaussianRational>> {
    (1i64..6, prop::collection::vec(-5i64..6, ORDER)).prop_map(|(c0, rest)| {
        let mut c: Vec<GaussianRational> = vec![c0.into()];
        c.extend(rest.into_iter().map(GaussianRational::from));
        PSeries::new(c, ORDER)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_times_series_is_one(a in invertible()) {
        let inv = ps_invert(&a).unwrap();
        prop_assert_eq!(inv.mul(&a), PSeries::one(ORDER));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sign_flip_is_an_involution(a in series()) {
        let twice = a.substitute(SubstituteRule::NegS).unwrap().substitute(SubstituteRule::NegS).unwrap();
        prop_assert_eq!(twice, a);
    }

    #[test]
    fn inversion_of_s_is_an_involution(a in series()) {
        let twice = a.substitute(SubstituteRule::InvS).unwrap().substitute(SubstituteRule::InvS).unwrap();
        prop_assert_eq!(twice, a);
    }

    #[test]
    fn multiplication_commutes_and_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

#[test]
fn non_invertible_constant_term() {
    let a: PSeries<GaussianRational> = PSeries::monomial(1.into(), 1, 4);
    assert!(ps_invert(&a).is_err());
}
