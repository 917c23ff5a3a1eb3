//! The theta quotients Φ₁..Φ₄ and their lattice translations.
//!
//! With `s = e^{iπz}` and `p = q^{1/4} = e^{iπτ/2}`:
//!
//! ```text
//! Φ1 = s/(1-s²)      ∏ (1+p^{4n-2}s^{±2}) / (1-p^{4n}s^{±2})
//! Φ2 = s/(1+s²)      ∏ (1-p^{4n-2}s^{±2}) / (1+p^{4n}s^{±2})
//! Φ3 = (1+s²)/s      ∏ (1+p^{4n}s^{±2})   / (1-p^{4n-2}s^{±2})
//! Φ4 = -(1-s²)/s     ∏ (1-p^{4n}s^{±2})   / (1+p^{4n-2}s^{±2})
//! ```
//!
//! Translations act on `s` by `z+1: s ↦ -s`, `z+1/2: s ↦ i·s`,
//! `z+τ: s ↦ p²·s` and `z+τ/2: s ↦ p·s`. Since a truncated series cannot be
//! shifted by powers of `p` without losing track of its tail, exact products
//! are kept in factored form ([`ThetaProduct`]) until they are expanded.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qseries::{PSeries, SubstituteRule};
use crate::report::{ExactCheck, IdentityReport};
use crate::ring::{GaussianRational, LaurentPoly, Poly, RationalFunctionQi};
use crate::witten::{witten_char_numeric, WittenKind};

/// Numeric evaluations closer than this to a pole are rejected.
pub const POLE_GUARD: f64 = 1e-8;

/// Target size of the neglected tail of every numeric infinite product.
const TAIL_BOUND: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nome {
    /// `q = e^{2iπτ}`.
    pub q: Complex64,
    /// `p = q^{1/4} = e^{iπτ/2}`.
    pub p: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParams {
    pub tau: Complex64,
    /// Highest p-exponent kept by the exact backend.
    pub truncation_order: usize,
    /// Minimum number of factors of each numeric infinite product.
    pub product_cutoff: usize,
    constant_term: bool,
}

impl Default for EllipticParams {
    fn default() -> Self {
        Self::new(Complex64::new(0.0, 1.0)).expect("τ = i lies in the upper half-plane")
    }
}

impl EllipticParams {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::Invalid(format!("τ = {tau} is not in the upper half-plane")));
        }
        // |q|^N = e^{-2π N Im τ} < 1e-18
        let n = (18.0 * std::f64::consts::LN_10 / (2.0 * PI * tau.im)).ceil() as usize;
        Ok(Self {
            tau,
            truncation_order: 80,
            product_cutoff: n.max(1),
            constant_term: false,
        })
    }

    /// Parameters for the `q → 0` limit: every numeric product over `n >= 1`
    /// becomes 1 and `p = 0`.
    pub fn constant_term() -> Self {
        Self {
            constant_term: true,
            ..Self::default()
        }
    }

    pub fn is_constant_term(&self) -> bool {
        self.constant_term
    }

    pub fn with_truncation_order(mut self, order: usize) -> Self {
        self.truncation_order = order;
        self
    }

    pub fn with_product_cutoff(mut self, n: usize) -> Self {
        self.product_cutoff = n.max(1);
        self
    }

    pub fn nome(&self) -> Nome {
        if self.constant_term {
            return Nome {
                q: Complex64::new(0.0, 0.0),
                p: Complex64::new(0.0, 0.0),
            };
        }
        let i = Complex64::new(0.0, 1.0);
        Nome {
            q: (2.0 * PI * i * self.tau).exp(),
            p: (PI * i * self.tau / 2.0).exp(),
        }
    }

    /// Number of factors so that the tail of `∏ (1 ± q^{n-1/2} g)` over
    /// `count` eigenvalues of modulus at most `g_max` is below the bound;
    /// uses `|log(1+x)| <= 2|x|` for `|x| <= 1/2`.
    pub(crate) fn cutoff_for(&self, g_max: f64, count: usize) -> usize {
        let aq = self.nome().q.norm();
        let mut n = 1usize;
        loop {
            let x = g_max * aq.powf(n as f64 + 0.5);
            let tail = 2.0 * count as f64 * x / (1.0 - aq);
            if (x <= 0.5 && tail < TAIL_BOUND) || n >= 1_000_000 {
                return n.max(self.product_cutoff);
            }
            n += 1;
        }
    }
}

/// `(1 + c·p^e·s^d)^{±1}`.
#[derive(Clone, Debug, PartialEq)]
struct Factor {
    c: GaussianRational,
    e: i64,
    d: i64,
    inverse: bool,
}

/// `∏_{n >= 1} (1 + c·p^{e0 + e1·n}·s^d)^{±1}` with `e1 > 0`.
#[derive(Clone, Debug, PartialEq)]
struct Family {
    c: GaussianRational,
    e0: i64,
    e1: i64,
    d: i64,
    inverse: bool,
}

/// A product `scalar · p^E · s^D · ∏ finite binomials · ∏ infinite families`,
/// closed under the substitutions `s ↦ u·p^m·s^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaProduct {
    scalar: GaussianRational,
    p_exp: i64,
    s_exp: i64,
    factors: Vec<Factor>,
    families: Vec<Family>,
}

impl ThetaProduct {
    pub fn one() -> Self {
        Self::monomial(GaussianRational::one(), 0, 0)
    }

    /// `c·p^e·s^d`.
    pub fn monomial(c: GaussianRational, p_exp: i64, s_exp: i64) -> Self {
        Self {
            scalar: c,
            p_exp,
            s_exp,
            factors: Vec::new(),
            families: Vec::new(),
        }
    }

    /// `(1 + c·p^e·s^d)`, or its inverse.
    pub fn binomial(c: GaussianRational, e: i64, d: i64, inverse: bool) -> Self {
        let mut out = Self::one();
        out.factors.push(Factor { c, e, d, inverse });
        out
    }

    /// `∏_{n>=1} (1 + c·p^{e0+e1·n}·s^d)`, or its inverse.
    pub fn family(c: GaussianRational, e0: i64, e1: i64, d: i64, inverse: bool) -> Self {
        assert!(e1 > 0, "family exponents must increase");
        let mut out = Self::one();
        out.families.push(Family { c, e0, e1, d, inverse });
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.scalar = &out.scalar * &other.scalar;
        out.p_exp += other.p_exp;
        out.s_exp += other.s_exp;
        out.factors.extend(other.factors.iter().cloned());
        out.families.extend(other.families.iter().cloned());
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = self.clone();
        out.scalar = &out.scalar * c;
        out
    }

    /// Multiplies by `p^k`.
    pub fn shift_p(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.p_exp += k;
        out
    }

    /// Product of the characters `Tr(g, W_i)` for eigenvalues `s^{e}`.
    pub fn witten(kind: WittenKind, exponents: &[i64]) -> Self {
        let (num, den) = kind.sides();
        let mut out = Self::one();
        for &d in exponents {
            out.families.push(Family {
                c: num.sign.into(),
                e0: num.e0(),
                e1: 4,
                d,
                inverse: false,
            });
            out.families.push(Family {
                c: den.sign.into(),
                e0: den.e0(),
                e1: 4,
                d,
                inverse: true,
            });
        }
        out
    }

    /// Φ_i as a function of the formal variable `s`.
    pub fn phi(i: u8) -> Result<Self> {
        let kind = WittenKind::from_index(i)?;
        let one = GaussianRational::one();
        let pre = match i {
            1 => Self::monomial(one, 0, 1).mul(&Self::binomial((-1).into(), 0, 2, true)),
            2 => Self::monomial(one, 0, 1).mul(&Self::binomial(1.into(), 0, 2, true)),
            3 => Self::monomial(one, 0, -1).mul(&Self::binomial(1.into(), 0, 2, false)),
            _ => Self::monomial((-1).into(), 0, -1).mul(&Self::binomial((-1).into(), 0, 2, false)),
        };
        Ok(pre.mul(&Self::witten(kind, &[2, -2])))
    }

    /// The substitution `s ↦ u·p^m·s^b` with `u` invertible.
    pub fn substitute(&self, u: &GaussianRational, m: i64, b: i64) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::DivisionByZero("in substitution s -> 0"));
        }
        let map = |c: &GaussianRational, d: i64| c * &u.pow(d);
        Ok(Self {
            scalar: map(&self.scalar, self.s_exp),
            p_exp: self.p_exp + m * self.s_exp,
            s_exp: b * self.s_exp,
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    c: map(&f.c, f.d),
                    e: f.e + m * f.d,
                    d: b * f.d,
                    inverse: f.inverse,
                })
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| Family {
                    c: map(&f.c, f.d),
                    e0: f.e0 + m * f.d,
                    e1: f.e1,
                    d: b * f.d,
                    inverse: f.inverse,
                })
                .collect(),
        })
    }

    /// Applies a lattice translation of the argument.
    pub fn translate(&self, t: Translation) -> Result<Self> {
        let (u, m) = t.action();
        self.substitute(&u, m, 1)
    }

    /// Moves every family member and factor with a non-positive p-exponent
    /// into finite form, and pulls monomials out of factors with negative
    /// p-exponent. Returns `None` if the product vanishes identically.
    fn normalized(&self) -> Result<Option<Normal>> {
        let mut scalar = self.scalar.clone();
        let mut p_exp = self.p_exp;
        let mut s_exp = self.s_exp;
        let mut finite = self.factors.clone();
        let mut families = Vec::with_capacity(self.families.len());
        for f in &self.families {
            let mut e0 = f.e0;
            while e0 + f.e1 <= 0 {
                finite.push(Factor {
                    c: f.c.clone(),
                    e: e0 + f.e1,
                    d: f.d,
                    inverse: f.inverse,
                });
                e0 += f.e1;
            }
            families.push(Family { e0, ..f.clone() });
        }
        let mut factors = Vec::with_capacity(finite.len());
        let mut rational = RationalFunctionQi::one();
        for f in finite {
            let sign = if f.inverse { -1 } else { 1 };
            if f.e < 0 {
                let c = if f.inverse {
                    f.c.inverse().ok_or(Error::DivisionByZero("in theta product"))?
                } else {
                    f.c.clone()
                };
                scalar = &scalar * &c;
                p_exp += sign * f.e;
                s_exp += sign * f.d;
                let c_inv = f.c.inverse().expect("nonzero coefficient");
                factors.push(Factor {
                    c: c_inv,
                    e: -f.e,
                    d: -f.d,
                    inverse: f.inverse,
                });
            } else if f.e == 0 && f.d == 0 {
                let v = &GaussianRational::one() + &f.c;
                if f.inverse {
                    scalar = &scalar * &v.inverse().ok_or(Error::DivisionByZero("in theta product"))?;
                } else if v.is_zero() {
                    return Ok(None);
                } else {
                    scalar = &scalar * &v;
                }
            } else if f.e == 0 {
                let b = LaurentPoly::from_terms([(0, GaussianRational::one()), (f.d, f.c.clone())]).to_rational();
                rational = if f.inverse { rational.div(&b)? } else { rational.mul(&b) };
            } else {
                factors.push(f);
            }
        }
        if scalar.is_zero() {
            return Ok(None);
        }
        Ok(Some(Normal {
            scalar,
            p_exp,
            s_exp,
            factors,
            families,
            rational,
        }))
    }

    /// Exact expansion through `p^order`.
    pub fn expand(&self, order: usize) -> Result<PSeries<RationalFunctionQi>> {
        let Some(n) = self.normalized()? else {
            return Ok(PSeries::zero(order));
        };
        if n.p_exp < 0 {
            return Err(Error::NegativeValuation(n.p_exp));
        }
        let shift = n.p_exp as usize;
        if shift > order {
            return Ok(PSeries::zero(order));
        }
        let m = order - shift;
        let mut a = vec![LaurentPoly::zero(); m + 1];
        a[0] = LaurentPoly::monomial(n.scalar.clone(), n.s_exp);
        for f in &n.factors {
            apply_binomial(&mut a, &f.c, f.e as usize, f.d, f.inverse);
        }
        for f in &n.families {
            let mut e = f.e0 + f.e1;
            while e as usize <= m {
                apply_binomial(&mut a, &f.c, e as usize, f.d, f.inverse);
                e += f.e1;
            }
        }
        let mut coeffs = vec![RationalFunctionQi::zero(); shift];
        coeffs.extend(a.iter().map(|l| {
            if l.is_zero() {
                RationalFunctionQi::zero()
            } else {
                l.to_rational().mul(&n.rational)
            }
        }));
        Ok(PSeries::new(coeffs, order))
    }
}

struct Normal {
    scalar: GaussianRational,
    p_exp: i64,
    s_exp: i64,
    factors: Vec<Factor>,
    families: Vec<Family>,
    rational: RationalFunctionQi,
}

/// In-place multiplication of `Σ a_j p^j` by `(1 + c·s^d·p^e)^{±1}`, `e >= 1`.
fn apply_binomial(a: &mut [LaurentPoly], c: &GaussianRational, e: usize, d: i64, inverse: bool) {
    let m = a.len() - 1;
    if e > m {
        return;
    }
    if inverse {
        let neg = -c;
        for j in e..=m {
            let (lo, hi) = a.split_at_mut(j);
            hi[0].add_scaled_shifted(&neg, d, &lo[j - e]);
        }
    } else {
        for j in (e..=m).rev() {
            let (lo, hi) = a.split_at_mut(j);
            hi[0].add_scaled_shifted(c, d, &lo[j - e]);
        }
    }
}

/// Lattice translations of the argument of Φ₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Translation {
    One,
    Tau,
    Half,
    HalfTau,
    HalfPlusHalfTau,
}

impl Translation {
    pub const ALL: [Translation; 5] = [Self::One, Self::Tau, Self::Half, Self::HalfTau, Self::HalfPlusHalfTau];

    pub fn label(self) -> &'static str {
        match self {
            Self::One => "z+1",
            Self::Tau => "z+tau",
            Self::Half => "z+1/2",
            Self::HalfTau => "z+tau/2",
            Self::HalfPlusHalfTau => "z+1/2+tau/2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown translation `{s}`")))
    }

    /// `(u, m)` with `s ↦ u·p^m·s`.
    fn action(self) -> (GaussianRational, i64) {
        match self {
            Self::One => ((-1).into(), 0),
            Self::Tau => (1.into(), 2),
            Self::Half => (GaussianRational::i(), 0),
            Self::HalfTau => (1.into(), 1),
            Self::HalfPlusHalfTau => (GaussianRational::i(), 1),
        }
    }

    /// `(c, k, j)` such that the translate of Φ₁ is `c·p^k·Φ_j`.
    fn expected(self) -> (GaussianRational, i64, u8) {
        match self {
            Self::One | Self::Tau => ((-1).into(), 0, 1),
            Self::Half => (GaussianRational::i(), 0, 2),
            Self::HalfTau => (1.into(), 1, 3),
            Self::HalfPlusHalfTau => (GaussianRational::i(), 1, 4),
        }
    }
}

/// Evaluation point of [`phi`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Argument {
    /// `z` formal; the result is a series in `p` over Q(i)(s).
    Formal,
    Point(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhiValue {
    Series(PSeries<RationalFunctionQi>),
    Number(Complex64),
}

pub fn phi(i: u8, params: &EllipticParams, z: Argument) -> Result<PhiValue> {
    match z {
        Argument::Formal => phi_exact(i, params.truncation_order).map(PhiValue::Series),
        Argument::Point(z) => phi_numeric(i, params, z).map(PhiValue::Number),
    }
}

pub fn phi_exact(i: u8, order: usize) -> Result<PSeries<RationalFunctionQi>> {
    ThetaProduct::phi(i)?.expand(order)
}

/// Direct evaluation of the defining product of Φ_i at `z`.
pub fn phi_numeric(i: u8, params: &EllipticParams, z: Complex64) -> Result<Complex64> {
    let kind = WittenKind::from_index(i)?;
    let s = (Complex64::new(0.0, PI) * z).exp();
    let t = s * s;
    let one = Complex64::new(1.0, 0.0);
    let pre = match i {
        1 | 2 => {
            let d = if i == 1 { one - t } else { one + t };
            if d.norm() < POLE_GUARD {
                return Err(Error::Pole {
                    what: format!("Φ{i}"),
                    magnitude: d.norm(),
                });
            }
            s / d
        }
        3 => (one + t) / s,
        _ => -(one - t) / s,
    };
    let w = witten_char_numeric(kind, &[t, one / t], params).map_err(|e| match e {
        Error::VanishingFactor { n, .. } => Error::Pole {
            what: format!("Φ{i} (factor n = {n})"),
            magnitude: POLE_GUARD,
        },
        other => other,
    })?;
    Ok(pre * w)
}

/// Coefficient-wise comparison through the common truncation order.
pub fn compare_series(
    label: &str,
    lhs: &PSeries<RationalFunctionQi>,
    rhs: &PSeries<RationalFunctionQi>,
) -> ExactCheck {
    let first = lhs.first_difference(rhs);
    ExactCheck {
        label: label.to_string(),
        truncation_order: lhs.order().min(rhs.order()),
        passed: first.is_none(),
        first_failing_exponent: first,
    }
}

/// Exact check of the translate of Φ₁ against the corresponding Φ_j.
///
/// Translations by 1 and 1/2 are applied to the expanded series; those
/// involving τ are applied to the product before expansion.
pub fn phi_translate_check(which: Translation, params: &EllipticParams) -> Result<IdentityReport> {
    let order = params.truncation_order;
    let phi1 = ThetaProduct::phi(1)?;
    let lhs = match which {
        Translation::One => phi1.expand(order)?.substitute(SubstituteRule::NegS)?,
        Translation::Half => phi1.expand(order)?.substitute(SubstituteRule::TimesI)?,
        _ => phi1.translate(which)?.expand(order)?,
    };
    let (c, k, j) = which.expected();
    let rhs = ThetaProduct::phi(j)?.scale(&c).shift_p(k).expand(order)?;
    let mut report = IdentityReport::new(&format!("translation {}", which.label()), 0, 0, 0.0);
    report.push_exact(compare_series(which.label(), &lhs, &rhs));
    Ok(report)
}

/// `1/(s^{-1} - s) = s/(1 - s²)`, the leading coefficient of Φ₁.
pub fn inverse_sine() -> RationalFunctionQi {
    RationalFunctionQi::new(Poly::from_ints(&[0, 1]), Poly::from_ints(&[1, 0, -1])).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunctionQi {
        RationalFunctionQi::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn phi1_low_coefficients() {
        let s = phi_exact(1, 4).unwrap();
        let lead = rf(&[0, 1], &[1, 0, -1]);
        assert_eq!(s.coeff(0), &lead);
        assert!(s.coeff(1).is_zero());
        // (s² + s^{-2})·s/(1 - s²)
        let p2 = LaurentPoly::from_terms([(2, 1.into()), (-2, 1.into())]).to_rational().mul(&lead);
        assert_eq!(s.coeff(2), &p2);
        assert_eq!(s.coeff(0).to_string(), "s/(1-s^2)");
    }

    #[test]
    fn phi1_is_odd() {
        let s = phi_exact(1, 24).unwrap();
        assert_eq!(s.substitute(SubstituteRule::InvS).unwrap(), s.neg());
    }

    #[test]
    fn translations_hold() {
        let params = EllipticParams::default().with_truncation_order(24);
        for t in Translation::ALL {
            let r = phi_translate_check(t, &params).unwrap();
            assert!(r.passed, "{}: {:?}", t.label(), r.exact);
        }
    }

    #[test]
    fn wrong_shift_is_detected() {
        // s -> p^4 s is z -> z + 2τ, under which Φ₁ is invariant, not odd.
        let phi1 = ThetaProduct::phi(1).unwrap();
        let lhs = phi1.substitute(&1.into(), 4, 1).unwrap().expand(16).unwrap();
        let neg = phi1.expand(16).unwrap().neg();
        assert!(compare_series("z+2tau", &lhs, &neg).first_failing_exponent.is_some());
        assert_eq!(lhs, phi1.expand(16).unwrap());
    }

    #[test]
    fn numeric_leading_value() {
        // q^{1/2} corrections are about 4e-2, so compare only the leading term loosely.
        let params = EllipticParams::default();
        let v = phi_numeric(1, &params, Complex64::new(0.3, 0.0)).unwrap();
        let lead = Complex64::new(0.0, 1.0 / (2.0 * (0.3 * PI).sin()));
        assert!((lead.im - 0.618034).abs() < 1e-6);
        assert!((v - lead).norm() < 0.1 * lead.norm());
    }

    #[test]
    fn backends_agree() {
        let params = EllipticParams::default().with_truncation_order(80);
        let nome = params.nome();
        let z = Complex64::new(0.3, 0.0);
        let s0 = (Complex64::new(0.0, PI) * z).exp();
        for i in 1..=4 {
            let e = phi_exact(i, 80).unwrap().eval(s0, nome.p).unwrap();
            let n = phi_numeric(i, &params, z).unwrap();
            assert!((e - n).norm() < 1e-10 * n.norm(), "Φ{i}: {e} vs {n}");
        }
    }

    #[test]
    fn pole_guard() {
        let params = EllipticParams::default();
        assert!(matches!(
            phi_numeric(1, &params, Complex64::new(1e-10, 0.0)),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            phi_numeric(1, &params, params.tau),
            Err(Error::Pole { .. })
        ));
        assert!(phi_numeric(5, &params, Complex64::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn constant_term_mode() {
        let params = EllipticParams::constant_term();
        let z = Complex64::new(0.3, 0.1);
        let s0 = (Complex64::new(0.0, PI) * z).exp();
        let v = phi_numeric(1, &params, z).unwrap();
        let lead = inverse_sine().eval(s0).unwrap();
        assert!((v - lead).norm() < 1e-14);
    }

    #[test]
    fn product_zero_and_negative_valuation() {
        let zero = ThetaProduct::binomial((-1).into(), 0, 0, false);
        assert!(zero.expand(4).unwrap().is_zero());
        let neg = ThetaProduct::monomial(1.into(), -1, 0);
        assert_eq!(neg.expand(4), Err(Error::NegativeValuation(-1)));
    }
}
