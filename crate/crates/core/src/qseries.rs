//! Truncated power series in `p = q^{1/4}`.
//!
//! A [`PSeries`] of truncation order `M` holds the coefficients of
//! `p^0 … p^M`; everything from `p^{M+1}` on is unknown. Binary operations
//! truncate to the smaller of the two orders.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{GaussianRational, LaurentPoly, Poly, RationalFunctionQi, Ring};

#[derive(Clone, PartialEq, Debug)]
pub struct PSeries<T> {
    coeffs: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsOp {
    Add,
    Mul,
}

/// Variable substitutions acting on the coefficient variable `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstituteRule {
    /// `s ↦ -s`, the translation `z ↦ z + 1`.
    NegS,
    /// `s ↦ i·s`, the translation `z ↦ z + 1/2`.
    TimesI,
    /// `s ↦ 1/s`, the reflection `z ↦ -z`.
    InvS,
    /// `s ↦ p^m·s`, `m >= 1`; `m = 1` is `z ↦ z + τ/2`, `m = 2` is `z ↦ z + τ`.
    PShift(u32),
}

/// JSON rendering `{truncation_order, coeffs: [...]}` with exact coefficients
/// as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub truncation_order: usize,
    pub coeffs: Vec<String>,
}

pub fn ps_arith<T: Ring>(a: &PSeries<T>, b: &PSeries<T>, kind: PsOp) -> PSeries<T> {
    match kind {
        PsOp::Add => a.add(b),
        PsOp::Mul => a.mul(b),
    }
}

pub fn ps_invert<T: Ring>(a: &PSeries<T>) -> Result<PSeries<T>> {
    a.invert()
}

pub fn ps_substitute_t(
    a: &PSeries<RationalFunctionQi>,
    rule: SubstituteRule,
) -> Result<PSeries<RationalFunctionQi>> {
    a.substitute(rule)
}

impl<T: Ring> PSeries<T> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients remain.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c·p^k`, zero if `k` exceeds the order.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        Self {
            coeffs: (0..=m).map(|k| self.coeffs[k].add(&other.coeffs[k])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        Self {
            coeffs: (0..=m).map(|k| self.coeffs[k].sub(&other.coeffs[k])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.order().min(other.order());
        let mut out = vec![T::zero(); m + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(m + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(m + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Multiplies by `p^k`, keeping the truncation order.
    pub fn shift_p(&self, k: usize) -> Self {
        let m = self.order();
        let mut out = vec![T::zero(); m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k <= m {
                out[i + k] = c.clone();
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse to the same order.
    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].try_inverse().ok_or(Error::NotInvertible)?;
        let m = self.order();
        let mut out: Vec<T> = Vec::with_capacity(m + 1);
        out.push(inv0.clone());
        for n in 1..=m {
            let mut acc = T::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() && !out[n - k].is_zero() {
                    acc = acc.add(&a.mul(&out[n - k]));
                }
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Self { coeffs: out })
    }

    /// First exponent where `self` and `other` differ, up to the common order.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let m = self.order().min(other.order());
        (0..=m).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            truncation_order: self.order(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl PSeries<LaurentPoly> {
    pub fn to_rational(&self) -> PSeries<RationalFunctionQi> {
        PSeries {
            coeffs: self.coeffs.iter().map(LaurentPoly::to_rational).collect(),
        }
    }
}

impl PSeries<GaussianRational> {
    pub fn eval(&self, p: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * p + c.to_complex())
    }
}

impl PSeries<RationalFunctionQi> {
    /// Numeric value `Σ c_k(s) p^k` of the truncated series.
    pub fn eval(&self, s: Complex64, p: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let v = if c.is_zero() { Complex64::new(0.0, 0.0) } else { c.eval(s)? };
            acc = acc * p + v;
        }
        Ok(acc)
    }

    /// Coefficient-wise map, for substitutions that do not move p-exponents.
    pub fn map_coeffs(&self, f: impl Fn(&RationalFunctionQi) -> RationalFunctionQi) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Applies a substitution to the variable `s` and re-collects by p-exponent.
    ///
    /// `s ↦ p^m·s` is only accepted when every coefficient is regular at
    /// `s = 0`: a coefficient with a pole there would receive contributions
    /// from the discarded tail `p^{M+1}…`, so truncation could not be honoured.
    pub fn substitute(&self, rule: SubstituteRule) -> Result<Self> {
        match rule {
            SubstituteRule::NegS => Ok(self.map_coeffs(|c| c.scale_variable(&(-1).into()))),
            SubstituteRule::TimesI => Ok(self.map_coeffs(|c| c.scale_variable(&GaussianRational::i()))),
            SubstituteRule::InvS => Ok(self.map_coeffs(RationalFunctionQi::invert_variable)),
            SubstituteRule::PShift(m) => self.substitute_p_shift(m as usize),
        }
    }

    fn substitute_p_shift(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("s -> p^0 s is the identity; use m >= 1".into()));
        }
        let order = self.order();
        let mut out = Self::zero(order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.s_valuation() < 0 {
                return Err(Error::Unrepresentable {
                    exponent: j,
                    coefficient: c.to_string(),
                    reason: "pole at s = 0",
                });
            }
            let rest = order - j;
            let num = spread(c.numerator(), m, rest);
            let den = spread(c.denominator(), m, rest);
            let term = num.mul(&den.invert()?).shift_p(0);
            for (k, t) in term.coeffs.iter().enumerate() {
                if !t.is_zero() {
                    out.coeffs[j + k] = out.coeffs[j + k].add(t);
                }
            }
        }
        Ok(out)
    }
}

/// `P(p^m·s)` as a p-series with monomial coefficients, to order `order`.
fn spread(poly: &Poly, m: usize, order: usize) -> PSeries<RationalFunctionQi> {
    let mut out = PSeries::zero(order);
    for (k, c) in poly.coeffs().iter().enumerate() {
        if c.is_zero() || k * m > order {
            continue;
        }
        out.coeffs[k * m] = RationalFunctionQi::monomial(c.clone(), k as i64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gs(c: &[i64], order: usize) -> PSeries<GaussianRational> {
        PSeries::new(c.iter().map(|&x| x.into()).collect(), order)
    }

    #[test]
    fn arithmetic_examples() {
        let a = gs(&[1, 0, 1], 4);
        let b = gs(&[1, 0, -1], 4);
        assert_eq!(ps_arith(&a, &b, PsOp::Mul), gs(&[1, 0, 0, 0, -1], 4));
        assert_eq!(ps_arith(&a, &PSeries::zero(4), PsOp::Add), a);
        let c = gs(&[1, 1], 1);
        let sq = ps_arith(&c, &c, PsOp::Mul);
        assert_eq!(sq, gs(&[1, 2], 1));
        assert_eq!(sq.order(), 1);
    }

    #[test]
    fn common_truncation_order() {
        let a = gs(&[1, 1, 1], 5);
        let b = gs(&[1, 1], 2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!(a.add(&b).order(), 2);
    }

    #[test]
    fn inverse_examples() {
        // geometric series oracle: 1/(1-x) = Σ x^n with x = p^4
        let a = gs(&[1, 0, 0, 0, -1], 8);
        let expected = gs(&[1, 0, 0, 0, 1, 0, 0, 0, 1], 8);
        assert_eq!(ps_invert(&a).unwrap(), expected);
        assert_eq!(ps_invert(&gs(&[1], 3)).unwrap(), gs(&[1], 3));
        assert_eq!(
            ps_invert(&gs(&[2], 0)).unwrap(),
            PSeries::constant(GaussianRational::from_ratio(1, 2), 0)
        );
        assert_eq!(ps_invert(&gs(&[0, 1], 3)), Err(Error::NotInvertible));
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunctionQi {
        RationalFunctionQi::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let f = rf(&[0, 1], &[1, 0, -1]);
        let a = PSeries::constant(f.clone(), 3);
        let b = ps_substitute_t(&a, SubstituteRule::NegS).unwrap();
        assert_eq!(b, PSeries::constant(f.neg(), 3));

        let s = PSeries::constant(RationalFunctionQi::s(), 4);
        let t = ps_substitute_t(&s, SubstituteRule::PShift(4)).unwrap();
        assert_eq!(t, PSeries::monomial(RationalFunctionQi::s(), 4, 4));
    }

    #[test]
    fn p_shift_re_expands_denominators() {
        // 1/(1 - s) under s -> p s is Σ p^k s^k.
        let a = PSeries::constant(rf(&[1], &[1, -1]), 5);
        let b = ps_substitute_t(&a, SubstituteRule::PShift(1)).unwrap();
        for k in 0..=5 {
            assert_eq!(b.coeff(k), &RationalFunctionQi::monomial(GaussianRational::one(), k as i64));
        }
    }

    #[test]
    fn p_shift_rejects_pole_at_zero() {
        let mut c = vec![RationalFunctionQi::one(); 3];
        c[2] = RationalFunctionQi::monomial(GaussianRational::one(), -1);
        let a = PSeries::new(c, 4);
        match ps_substitute_t(&a, SubstituteRule::PShift(2)) {
            Err(Error::Unrepresentable { exponent, coefficient, .. }) => {
                assert_eq!(exponent, 2);
                assert_eq!(coefficient, "1/s");
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn json_shape() {
        let a = PSeries::new(vec![rf(&[0, 1], &[1, 0, -1]), RationalFunctionQi::zero()], 1);
        let j = serde_json::to_value(a.to_json()).unwrap();
        assert_eq!(j["truncation_order"], 1);
        assert_eq!(j["coeffs"][0], "s/(1-s^2)");
        assert_eq!(j["coeffs"][1], "0");
    }

    fn small_series(order: usize) -> impl Strategy<Value = PSeries<GaussianRational>> {
        proptest::collection::vec((-5i64..=5, -5i64..=5), order + 1).prop_map(move |v| {
            PSeries::new(v.into_iter().map(|(a, b)| GaussianRational::gaussian(a, b)).collect(), order)
        })
    }

    fn rf_series(order: usize) -> impl Strategy<Value = PSeries<RationalFunctionQi>> {
        proptest::collection::vec((proptest::collection::vec(-3i64..=3, 1..4), 1i64..=3), order + 1)
            .prop_map(move |v| {
                let coeffs = v
                    .into_iter()
                    .map(|(num, d)| rf(&num, &[1, 0, d]))
                    .collect();
                PSeries::new(coeffs, order)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn inverse_times_series_is_one(mut a in small_series(8), c0 in (1i64..=4, -3i64..=3)) {
            let mut coeffs = a.clone().into_coeffs();
            coeffs[0] = GaussianRational::gaussian(c0.0, c0.1);
            a = PSeries::new(coeffs, 8);
            let inv = ps_invert(&a).unwrap();
            prop_assert_eq!(a.mul(&inv), PSeries::one(8));
        }

        #[test]
        fn multiplication_commutes_and_associates(a in small_series(6), b in small_series(6), c in small_series(6)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn neg_s_is_an_involution(a in rf_series(3)) {
            let twice = a.substitute(SubstituteRule::NegS).unwrap()
                .substitute(SubstituteRule::NegS).unwrap();
            prop_assert_eq!(&twice, &a);
            let inv = a.substitute(SubstituteRule::InvS).unwrap()
                .substitute(SubstituteRule::InvS).unwrap();
            prop_assert_eq!(inv, a);
        }
    }
}
