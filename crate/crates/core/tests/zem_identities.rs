use std::f64::consts::PI;

use elliptica::elliptic::{phi_numeric, EllipticParams};
use elliptica::spinchar::{CyclicAction, RotationData};
use elliptica::zem::{
    em_fun, em_with_j, identity_check, z_fun, z_via_characters, LatticeElement, SuiteConfig, SUITES,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn params() -> EllipticParams {
    EllipticParams::new(c(0.17, 1.05)).unwrap()
}

#[test]
fn every_suite_passes() {
    let config = SuiteConfig {
        trials: 40,
        seed: 1,
        truncation_order: 16,
        ..SuiteConfig::default()
    };
    for suite in SUITES {
        let r = identity_check(suite, &config).unwrap();
        assert!(r.passed, "{suite}: {:?} {:?}", r.failures, r.exact);
        assert!(r.max_residual < 1e-10, "{suite}: {}", r.max_residual);
    }
}

#[test]
fn single_plane_is_phi1() {
    let p = params();
    let g = LatticeElement::torsion(1, 2, 5).unwrap();
    let r = c(0.8, -0.1);
    let z = z_fun(&g, &RotationData::numbers(&[-2], 1), &RotationData::angles(&[r], 1), &p).unwrap();
    let expect = phi_numeric(1, &p, -2.0 * g.value(p.tau) + r / (2.0 * PI)).unwrap();
    assert!(rel(z, expect) < 1e-14);
}

#[test]
fn adapted_choices_for_order_four() {
    let p = params();
    let g = LatticeElement::torsion(1, 3, 4).unwrap();
    let r = RotationData::angles(&[c(0.9, 0.05)], -1);
    let one = em_with_j(&g, &RotationData::numbers(&[1], -1), &r, &p).unwrap();
    let five = em_with_j(&g, &RotationData::numbers(&[5], -1), &r, &p).unwrap();
    assert!(rel(one, five) < 1e-12, "{one} vs {five}");
    let zeta = CyclicAction::new(4, vec![1]).unwrap();
    assert!(rel(em_fun(&g, &zeta, &r, &p).unwrap(), one) < 1e-12);
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(identity_check("nosuch", &SuiteConfig::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn em_ignores_lifts_of_residues(
        k in 3i64..7,
        res in prop::collection::vec(1i64..6, 1..4),
        lift in prop::collection::vec(-2i64..3, 4),
        phis in prop::collection::vec(0.2f64..2.8, 4),
        o in prop_oneof![Just(1), Just(-1)],
    ) {
        let res: Vec<i64> = res.into_iter().map(|r| 1 + (r - 1) % (k - 1)).collect();
        let lifted: Vec<i64> = res.iter().zip(&lift).map(|(r, l)| r + k * l).collect();
        let p = params();
        let g = LatticeElement::torsion(1, 1, k).unwrap();
        let angles: Vec<Complex64> = phis[..res.len()].iter().map(|&x| c(x, 0.03)).collect();
        let r = RotationData::angles(&angles, o);
        let a = em_fun(&g, &CyclicAction::new(k, res).unwrap(), &r, &p);
        let b = em_fun(&g, &CyclicAction::new(k, lifted).unwrap(), &r, &p);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(rel(a, b) < 1e-10);
        }
    }

    #[test]
    fn z_shift_property(
        a in prop::collection::vec(prop_oneof![-3i64..0, 1i64..4], 1..4),
        g in (-0.4f64..0.4, -0.2f64..0.2),
        y in (-0.1f64..0.1, -0.1f64..0.1),
        o in prop_oneof![Just(1), Just(-1)],
    ) {
        let p = params();
        let (g, y) = (c(g.0, g.1), c(y.0, y.1));
        let j = RotationData::numbers(&a, o);
        let r = RotationData::angles(&vec![c(0.7, 0.0); a.len()], o);
        let lhs = z_fun(&LatticeElement::Free(g), &j, &j.flow(y).plus(&r).unwrap(), &p);
        let rhs = z_fun(&LatticeElement::Free(g + y), &j, &r, &p);
        if let (Ok(l), Ok(rv)) = (lhs, rhs) {
            prop_assert!(rel(l, rv) < 1e-9);
            let v = z_via_characters(&LatticeElement::Free(g + y), &j, &r, &p).unwrap();
            prop_assert!(rel(rv, v) < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn reports_depend_only_on_seed(seed in any::<u64>()) {
        let config = SuiteConfig { trials: 6, seed, exact: false, ..SuiteConfig::default() };
        for suite in ["elliptic-transfer", "EM-welldef", "jeul"] {
            let a = serde_json::to_string(&identity_check(suite, &config).unwrap()).unwrap();
            let b = serde_json::to_string(&identity_check(suite, &config).unwrap()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
