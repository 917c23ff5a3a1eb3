//! Fixed-point formulas for twisted Dirac indices and the Witten series.

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{SpinCircleManifold, TwistSpec};
use crate::elliptic::{phi_numeric, EllipticParams, ThetaProduct, POLE_GUARD};
use crate::error::{Error, Result};
use crate::qseries::PSeries;
use crate::ring::{GaussianRational, LaurentPoly, Poly, RationalFunctionQi};
use crate::spinchar::RotationData;
use crate::zem::{z_fun, LatticeElement};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    /// Rational functions of `s = e^{iπz}`; Witten series to the truncation
    /// order of the parameters.
    Exact,
    /// Evaluation at a point `z`.
    Numeric(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum IndexValue {
    Character(RationalFunctionQi),
    Series(PSeries<RationalFunctionQi>),
    Number(Complex64),
}

/// Outcome of reducing an index to a Laurent polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum Character {
    Laurent(LaurentPoly),
    /// A Laurent polynomial with a non-integer coefficient.
    NonIntegral(LaurentPoly),
    /// The reduced denominator is not a monomial.
    NotLaurent { denominator: Poly },
}

impl Character {
    pub fn laurent(&self) -> Option<&LaurentPoly> {
        match self {
            Self::Laurent(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.laurent()
            .is_some_and(|l| l.is_zero() || (l.low() == Some(0) && l.high() == Some(0)))
    }
}

impl std::fmt::Display for Character {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Laurent(l) => write!(f, "{l}"),
            Self::NonIntegral(l) => write!(f, "non-integral: {l}"),
            Self::NotLaurent { denominator } => write!(f, "not a Laurent polynomial, denominator {denominator}"),
        }
    }
}

pub fn simplify_character(theta: &RationalFunctionQi) -> Character {
    match LaurentPoly::from_rational(theta) {
        Some(l) if l.is_integral() => Character::Laurent(l),
        Some(l) => Character::NonIntegral(l),
        None => Character::NotLaurent {
            denominator: theta.denominator().clone(),
        },
    }
}

fn mono(k: i64) -> RationalFunctionQi {
    RationalFunctionQi::monomial(GaussianRational::one(), k)
}

/// `∏_j 1/(s^{-a_j} - s^{a_j})`.
fn spinor_factor(weights: &[i64]) -> Result<RationalFunctionQi> {
    let mut acc = RationalFunctionQi::one();
    for &a in weights {
        acc = acc.div(&mono(-a).sub(&mono(a)))?;
    }
    Ok(acc)
}

/// `Σ_w s^{2w}`.
fn bundle_character(weights: &[i64]) -> RationalFunctionQi {
    LaurentPoly::from_terms(weights.iter().map(|&w| (2 * w, GaussianRational::one()))).to_rational()
}

/// `∏_j Φ₁(a_j z)` as a theta product in `s = e^{iπz}`.
fn witten_point(weights: &[i64]) -> Result<ThetaProduct> {
    let phi1 = ThetaProduct::phi(1)?;
    let mut acc = ThetaProduct::one();
    for &a in weights {
        acc = acc.mul(&phi1.substitute(&GaussianRational::one(), 0, a)?);
    }
    Ok(acc)
}

fn numeric_point(weights: &[i64], z: Complex64) -> Result<Complex64> {
    let i_pi_z = Complex64::new(0.0, std::f64::consts::PI) * z;
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in weights {
        let d = (-i_pi_z * a as f64).exp() - (i_pi_z * a as f64).exp();
        if d.norm() < POLE_GUARD {
            return Err(Error::Pole {
                what: format!("spinor factor of weight {a}"),
                magnitude: d.norm(),
            });
        }
        acc /= d;
    }
    Ok(acc)
}

pub fn equivariant_index(
    m: &SpinCircleManifold,
    twist: &TwistSpec,
    params: &EllipticParams,
    backend: Backend,
) -> Result<IndexValue> {
    if let TwistSpec::Bundle(w) = twist {
        if w.len() != m.points.len() {
            return Err(Error::Invalid(format!(
                "twist has {} weight lists for {} fixed points",
                w.len(),
                m.points.len()
            )));
        }
    }
    let bundle = |i: usize| match twist {
        TwistSpec::Bundle(w) => Some(&w[i]),
        _ => None,
    };
    let n = m.points.len();
    match (twist, backend) {
        (TwistSpec::TangentWitten, Backend::Exact) => {
            let order = params.truncation_order;
            let parts = (0..n)
                .into_par_iter()
                .map(|i| witten_point(&m.points[i].weights)?.expand(order))
                .collect::<Result<Vec<_>>>()?;
            let sum = parts.iter().fold(PSeries::zero(order), |acc, s| acc.add(s));
            Ok(IndexValue::Series(sum))
        }
        (TwistSpec::TangentWitten, Backend::Numeric(z)) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in &m.points {
                let mut t = Complex64::new(1.0, 0.0);
                for &a in &p.weights {
                    t *= phi_numeric(1, params, a as f64 * z)?;
                }
                acc += t;
            }
            Ok(IndexValue::Number(acc))
        }
        (_, Backend::Exact) => {
            let mut acc = RationalFunctionQi::zero();
            for (i, p) in m.points.iter().enumerate() {
                let mut t = spinor_factor(&p.weights)?;
                if let Some(w) = bundle(i) {
                    t = t.mul(&bundle_character(w));
                }
                acc = acc.add(&t);
            }
            Ok(IndexValue::Character(acc))
        }
        (_, Backend::Numeric(z)) => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, p) in m.points.iter().enumerate() {
                let mut t = numeric_point(&p.weights, z)?;
                if let Some(w) = bundle(i) {
                    let two_pi_i_z = Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z;
                    t *= w.iter().map(|&x| (two_pi_i_z * x as f64).exp()).sum::<Complex64>();
                }
                acc += t;
            }
            Ok(IndexValue::Number(acc))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionRepresentative {
    pub alpha: i64,
    pub beta: i64,
    pub k: i64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialOrders {
    pub orders: Vec<i64>,
    pub representatives: Vec<TorsionRepresentative>,
}

fn torsion_label(alpha: i64, beta: i64, k: i64) -> String {
    let num = match (alpha, beta) {
        (0, 0) => return "0".into(),
        (a, 0) => a.to_string(),
        (0, 1) => "τ".into(),
        (0, b) => format!("{b}τ"),
        (a, 1) => format!("({a}+τ)"),
        (a, b) => format!("({a}+{b}τ)"),
    };
    if k == 1 {
        num.trim_start_matches('(').trim_end_matches(')').to_string()
    } else {
        format!("{num}/{k}")
    }
}

/// Absolute values of all weights, and the points `(α+βτ)/k` of exact
/// order `k` in `E_τ` for each of them.
pub fn special_orders(m: &SpinCircleManifold) -> SpecialOrders {
    let mut orders: Vec<i64> = m
        .points
        .iter()
        .flat_map(|p| p.weights.iter().map(|a| a.abs()))
        .collect();
    orders.sort_unstable();
    orders.dedup();
    let mut representatives = Vec::new();
    for &k in &orders {
        for alpha in 0..k {
            for beta in 0..k {
                if alpha.gcd(&beta).gcd(&k) == 1 {
                    representatives.push(TorsionRepresentative {
                        alpha,
                        beta,
                        k,
                        label: torsion_label(alpha, beta, k),
                    });
                }
            }
        }
    }
    SpecialOrders {
        orders,
        representatives,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub manifold: String,
    /// Order in `p = q^{1/4}`.
    pub truncation_order: usize,
    pub rigid: bool,
    /// Constant value of each p-coefficient, or `null` where it depends on `z`.
    pub constants: Vec<Option<String>>,
    pub non_constant_orders: Vec<usize>,
}

/// Tests the Witten-twisted index coefficientwise for independence of `z`.
pub fn rigidity_check(m: &SpinCircleManifold, q_order: usize) -> Result<RigidityReport> {
    let params = EllipticParams::default().with_truncation_order(q_order);
    let IndexValue::Series(theta) = equivariant_index(m, &TwistSpec::TangentWitten, &params, Backend::Exact)? else {
        unreachable!("exact Witten index is a series")
    };
    let constants: Vec<Option<String>> = theta
        .coeffs()
        .iter()
        .map(|c| c.as_constant().map(|g| g.to_string()))
        .collect();
    let non_constant_orders: Vec<usize> = (0..constants.len()).filter(|&e| constants[e].is_none()).collect();
    Ok(RigidityReport {
        manifold: m.name.clone(),
        truncation_order: q_order,
        rigid: non_constant_orders.is_empty(),
        constants,
        non_constant_orders,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistSplitReport {
    pub manifold: String,
    pub s2: String,
    pub l3: String,
    pub sum: String,
    pub s2_constant: bool,
    pub l3_constant: bool,
    pub sum_constant: bool,
}

/// Indices twisted by `S²(TM⊗C)` and `Λ³(TM⊗C)`; only their sum enters the
/// Witten series, so only the sum must be constant.
pub fn twist_split_check(m: &SpinCircleManifold) -> Result<TwistSplitReport> {
    let params = EllipticParams::default();
    let index = |t: &TwistSpec| -> Result<RationalFunctionQi> {
        match equivariant_index(m, t, &params, Backend::Exact)? {
            IndexValue::Character(c) => Ok(c),
            _ => unreachable!("bundle index is a character"),
        }
    };
    let s2 = index(&TwistSpec::Bundle(m.symmetric_power(2)))?;
    let l3 = index(&TwistSpec::Bundle(m.exterior_power(3)))?;
    let (cs, cl, csum) = (
        simplify_character(&s2),
        simplify_character(&l3),
        simplify_character(&s2.add(&l3)),
    );
    Ok(TwistSplitReport {
        manifold: m.name.clone(),
        s2_constant: cs.is_constant(),
        l3_constant: cl.is_constant(),
        sum_constant: csum.is_constant(),
        s2: cs.to_string(),
        l3: cl.to_string(),
        sum: csum.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub manifold: String,
    pub gamma: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_residual: f64,
    pub passed: bool,
}

/// Compares, at random small `y, z`, the value of `Θ(q, γ+y+z)` from the
/// γ-local products `Z(γ, J_p)((y+z)J_p)` with the direct evaluation.
/// Special `γ` are rejected: there the local formula involves the transfer
/// identities rather than `Z(γ, J)`.
pub fn consistency_check(
    m: &SpinCircleManifold,
    gamma: &LatticeElement,
    params: &EllipticParams,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ConsistencyReport> {
    let (alpha, beta, k) = gamma.torsion_data()?;
    let order = k / alpha.gcd(&beta).gcd(&k);
    let special = special_orders(m);
    if special.orders.contains(&order) {
        return Err(Error::SpecialPoint {
            k: order,
            orders: special.orders,
        });
    }
    let g = gamma.value(params.tau);
    let residuals = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut small = || Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
            let (y, z) = (small(), small());
            let mut local = Complex64::new(0.0, 0.0);
            let mut direct = Complex64::new(0.0, 0.0);
            let mut scale = 0.0;
            for p in &m.points {
                let j = RotationData::numbers(&p.weights, 1);
                let term = z_fun(gamma, &j, &j.flow(y + z), params)?;
                local += term;
                scale += term.norm();
                let mut d = Complex64::new(1.0, 0.0);
                for &a in &p.weights {
                    d *= phi_numeric(1, params, a as f64 * (g + y + z))?;
                }
                direct += d;
            }
            Ok((local - direct).norm() / scale.max(f64::MIN_POSITIVE))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(ConsistencyReport {
        manifold: m.name.clone(),
        gamma: torsion_label(alpha, beta, k),
        trials,
        seed,
        tol,
        max_residual,
        passed: max_residual < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::catalog_manifold;

    fn exact_char(m: &SpinCircleManifold, t: &TwistSpec) -> RationalFunctionQi {
        match equivariant_index(m, t, &EllipticParams::default(), Backend::Exact).unwrap() {
            IndexValue::Character(c) => c,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(
            simplify_character(&RationalFunctionQi::zero()),
            Character::Laurent(LaurentPoly::zero())
        );
        let f = mono(4).sub(&mono(-4)).div(&mono(1).sub(&mono(-1))).unwrap();
        let expect = LaurentPoly::from_terms([(3, 1.into()), (1, 1.into()), (-1, 1.into()), (-3, 1.into())]);
        assert_eq!(simplify_character(&f), Character::Laurent(expect));
        let g = mono(0).div(&mono(0).sub(&mono(1))).unwrap();
        assert!(matches!(simplify_character(&g), Character::NotLaurent { .. }));
        let half = GaussianRational::from(2).inverse().unwrap();
        let h = RationalFunctionQi::constant(half);
        assert!(matches!(simplify_character(&h), Character::NonIntegral(_)));
    }

    #[test]
    fn untwisted_indices_vanish() {
        for name in ["s2", "s6", "cp3", "cp3-0137", "s2xs2xs2"] {
            let m = catalog_manifold(name).unwrap();
            assert!(exact_char(&m, &TwistSpec::None).is_zero(), "{name}");
        }
    }

    #[test]
    fn special_orders_examples() {
        let cp3 = special_orders(&catalog_manifold("cp3").unwrap());
        assert_eq!(cp3.orders, vec![1, 2, 3]);
        let labels: Vec<&str> = cp3
            .representatives
            .iter()
            .filter(|r| r.k == 2)
            .map(|r| r.label.as_str())
            .collect();
        assert_eq!(labels, vec!["τ/2", "1/2", "(1+τ)/2"]);
        assert_eq!(special_orders(&catalog_manifold("s2").unwrap()).orders, vec![1]);
    }

    #[test]
    fn s2_twisted_by_tangent_line() {
        let m = catalog_manifold("s2").unwrap();
        let t = m.twist("T").unwrap();
        let c = simplify_character(&exact_char(&m, &t));
        let expect = LaurentPoly::from_terms([(1, (-1).into()), (-1, (-1).into())]);
        assert_eq!(c, Character::Laurent(expect));
    }

    #[test]
    fn numeric_matches_exact() {
        let m = catalog_manifold("cp3").unwrap();
        let z = Complex64::new(0.13, 0.05);
        let s = (Complex64::new(0.0, std::f64::consts::PI) * z).exp();
        let params = EllipticParams::new(Complex64::new(0.1, 1.1)).unwrap().with_truncation_order(60);
        for name in ["O(3)", "S2T"] {
            let t = m.twist(name).unwrap();
            let exact = exact_char(&m, &t).eval(s).unwrap();
            let IndexValue::Number(n) = equivariant_index(&m, &t, &params, Backend::Numeric(z)).unwrap() else {
                panic!()
            };
            assert!((exact - n).norm() < 1e-9 * n.norm().max(1.0), "{name}");
        }
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
        assert!((e - n).norm() < 1e-9 * n.norm().max(1.0), "{e} vs {n}");
    }

    #[test]
    fn s2_is_rigid_with_zero_coefficients() {
        let r = rigidity_check(&catalog_manifold("s2").unwrap(), 8).unwrap();
        assert!(r.rigid);
        assert!(r.constants.iter().all(|c| c.as_deref() == Some("0")));
    }

    #[test]
    fn consistency_and_rejection() {
        let params = EllipticParams::default();
        let s2 = catalog_manifold("s2").unwrap();
        let g = LatticeElement::torsion(1, 1, 2).unwrap();
        let r = consistency_check(&s2, &g, &params, 10, 0, 1e-9).unwrap();
        assert!(r.passed, "{r:?}");
        let cp3 = catalog_manifold("cp3").unwrap();
        let g5 = LatticeElement::torsion(2, 1, 5).unwrap();
        assert!(consistency_check(&cp3, &g5, &params, 10, 0, 1e-9).unwrap().passed);
        let g2 = LatticeElement::torsion(1, 0, 2).unwrap();
        assert!(matches!(
            consistency_check(&cp3, &g2, &params, 10, 0, 1e-9),
            Err(Error::SpecialPoint { k: 2, .. })
        ));
    }
}
