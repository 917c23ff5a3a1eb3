use elliptica::ring::RationalFunctionQi;
use elliptica::witten::{witten_char_exact, WittenKind};
use proptest::prelude::*;

const ORDER: usize = 8;

fn exponents(max: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..4, 0..=max)
}

fn kind() -> impl Strategy<Value = WittenKind> {
    (1u8..=4).prop_map(|i| WittenKind::from_index(i).unwrap())
}

fn integer_coeffs(kind: WittenKind, n: usize) -> Vec<i64> {
    witten_char_exact(kind, &vec![0; n], ORDER)
        .unwrap()
        .coeffs()
        .iter()
        .map(|c| c.as_constant().unwrap().to_string().parse().unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplicative_in_the_space(k in kind(), a in exponents(2), b in exponents(2)) {
        let joint: Vec<i64> = a.iter().chain(&b).copied().collect();
        let lhs = witten_char_exact(k, &joint, ORDER).unwrap();
        let rhs = witten_char_exact(k, &a, ORDER).unwrap().mul(&witten_char_exact(k, &b, ORDER).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_under_permutation(k in kind(), mut a in exponents(4)) {
        let before = witten_char_exact(k, &a, ORDER).unwrap();
        a.reverse();
        prop_assert_eq!(witten_char_exact(k, &a, ORDER).unwrap(), before);
    }

    #[test]
    fn constant_term_is_one(k in kind(), a in exponents(4)) {
        let w = witten_char_exact(k, &a, ORDER).unwrap();
        prop_assert_eq!(w.coeff(0), &RationalFunctionQi::one());
    }
}

#[test]
fn dimension_series_of_a_line() {
    // C + V q^{1/2} + (V ⊕ Λ²V) q + (V ⊕ ⊗²V ⊕ Λ³V) q^{3/2}, dims 1, 1, 1, 2
    let c = integer_coeffs(WittenKind::W1, 1);
    assert_eq!([c[0], c[2], c[4], c[6]], [1, 1, 1, 2]);
    assert!(c.iter().skip(1).step_by(2).all(|&x| x == 0));
}

#[test]
fn dimension_series_is_a_power() {
    let one = witten_char_exact(WittenKind::W1, &[0], ORDER).unwrap();
    let two = witten_char_exact(WittenKind::W1, &[0, 0], ORDER).unwrap();
    assert_eq!(two, one.mul(&one));
    // (1 + x + x² + 2x³ + 3x⁴)² with x = q^{1/2}
    assert_eq!(integer_coeffs(WittenKind::W1, 2), vec![1, 0, 2, 0, 3, 0, 6, 0, 11]);
}
