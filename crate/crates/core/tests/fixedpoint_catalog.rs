use elliptica::elliptic::EllipticParams;
use elliptica::fixedpoint::{
    catalog, catalog_manifold, consistency_check, equivariant_index, rigidity_check, simplify_character,
    special_orders, twist_split_check, Backend, Character, IndexValue, SpinCircleManifold, TwistSpec,
};
use elliptica::zem::LatticeElement;
use elliptica::Error;
use num_complex::Complex64;

fn character(m: &SpinCircleManifold, twist: &TwistSpec) -> Character {
    match equivariant_index(m, twist, &EllipticParams::default(), Backend::Exact).unwrap() {
        IndexValue::Character(f) => simplify_character(&f),
        other => panic!("{other:?}"),
    }
}

fn all() -> Vec<SpinCircleManifold> {
    catalog().iter().map(|(n, _)| catalog_manifold(n).unwrap()).collect()
}

#[test]
fn untwisted_indices_are_zero() {
    for m in all() {
        assert_eq!(character(&m, &TwistSpec::None).to_string(), "0", "{}", m.name);
    }
}

#[test]
fn bundle_twists_are_integral_characters() {
    for m in all() {
        let mut names: Vec<String> = m.twists.keys().cloned().collect();
        names.extend(["T", "L2T", "L3T", "S2T"].map(String::from));
        for name in names {
            let ch = character(&m, &m.twist(&name).unwrap());
            assert!(ch.laurent().is_some(), "{} twisted by {name}: {ch}", m.name);
        }
    }
}

#[test]
fn catalog_is_rigid_through_q_squared() {
    for m in all() {
        let r = rigidity_check(&m, 8).unwrap();
        assert!(r.rigid, "{}: {:?}", m.name, r.non_constant_orders);
    }
}

#[test]
fn flipped_weight_breaks_rigidity() {
    let m = catalog_manifold("cp3").unwrap().with_flipped_weight(1, 2).unwrap();
    let r = rigidity_check(&m, 4).unwrap();
    assert!(!r.rigid);
    assert!(r.non_constant_orders.iter().any(|&e| e <= 4));
}

#[test]
fn split_twists_of_a_generic_circle_on_cp3() {
    let s = twist_split_check(&catalog_manifold("cp3-0137").unwrap()).unwrap();
    assert!(!s.s2_constant && !s.l3_constant && s.sum_constant, "{s:?}");
    assert_eq!(s.s2, "s^-17-s^-11-s^-7+s^-1-s+s^7+s^11-s^17");
    assert_eq!(s.l3, "-s^-17+s^-11+s^-7-s^-1+s-s^7-s^11+s^17");
    assert_eq!(s.sum, "0");
}

#[test]
fn cp3_regression_values() {
    let cp3 = catalog_manifold("cp3").unwrap();
    let r = rigidity_check(&cp3, 8).unwrap();
    assert!(r.constants.iter().all(|c| c.as_deref() == Some("0")));
    // S²T and Λ³T cancel separately for the circle (0,1,2,3)
    let s = twist_split_check(&cp3).unwrap();
    assert_eq!((s.s2.as_str(), s.l3.as_str()), ("0", "0"));
    let o3 = character(&cp3, &cp3.twist("O(3)").unwrap());
    assert_eq!(o3.to_string(), "-s^-12-s^-10-s^-8-s^-6");
}

#[test]
fn exact_and_numeric_indices_agree() {
    let params = EllipticParams::new(Complex64::new(-0.2, 1.5)).unwrap().with_truncation_order(24);
    for m in all() {
        let z = Complex64::new(0.071, 0.033);
        let s = (Complex64::new(0.0, std::f64::consts::PI) * z).exp();
        let IndexValue::Series(ser) = equivariant_index(&m, &TwistSpec::TangentWitten, &params, Backend::Exact).unwrap()
        else {
            panic!()
        };
        let IndexValue::Number(n) =
            equivariant_index(&m, &TwistSpec::TangentWitten, &params, Backend::Numeric(z)).unwrap()
        else {
            panic!()
        };
        let e = ser.eval(s, params.nome().p).unwrap();
        assert!((e - n).norm() < 1e-9 * n.norm().max(1.0), "{}: {e} vs {n}", m.name);
    }
}

#[test]
fn special_orders_of_catalog() {
    let orders = |n: &str| special_orders(&catalog_manifold(n).unwrap()).orders;
    assert_eq!(orders("cp3"), vec![1, 2, 3]);
    assert_eq!(orders("s2"), vec![1]);
    assert_eq!(orders("cp3-0137"), vec![1, 2, 3, 4, 6, 7]);
    let reps = special_orders(&catalog_manifold("cp3").unwrap()).representatives;
    assert_eq!(reps.iter().filter(|r| r.k == 3).count(), 8);
}

#[test]
fn consistency_away_from_special_points() {
    let params = EllipticParams::default();
    let s2 = catalog_manifold("s2").unwrap();
    let r = consistency_check(&s2, &LatticeElement::torsion(1, 1, 2).unwrap(), &params, 20, 4, 1e-9).unwrap();
    assert!(r.passed, "{r:?}");
    let cp3 = catalog_manifold("cp3").unwrap();
    let r = consistency_check(&cp3, &LatticeElement::torsion(1, 2, 5).unwrap(), &params, 20, 4, 1e-9).unwrap();
    assert!(r.passed, "{r:?}");
    let e = consistency_check(&cp3, &LatticeElement::torsion(0, 1, 2).unwrap(), &params, 1, 0, 1e-9).unwrap_err();
    assert!(matches!(e, Error::SpecialPoint { k: 2, .. }));
    assert!(e.to_string().contains("transfer suites"));
}

#[test]
fn manifold_validation_messages() {
    let src = r#"{"name":"b","half_dim":2,"points":[{"weights":[1,2]},{"weights":[3,0]}]}"#;
    assert_eq!(
        SpinCircleManifold::from_json(src).unwrap_err().to_string(),
        "points[1].weights[1]: zero weight"
    );
    assert!(SpinCircleManifold::from_json("not json").is_err());
}
