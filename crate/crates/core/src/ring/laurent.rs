use std::fmt;

use num_complex::Complex64;

use super::{GaussianRational, Poly, RationalFunctionQi};

/// Laurent polynomial `Σ c_k s^k` over Q(i), stored densely from its lowest
/// exponent. Both ends are trimmed, so equal values have equal storage.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(GaussianRational::one(), 0)
    }

    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: k, coeffs: vec![c] }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> GaussianRational {
        let idx = k - self.low;
        if idx < 0 {
            return GaussianRational::zero();
        }
        self.coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, c))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(GaussianRational::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    /// Grows the storage so that exponents `lo..=hi` are addressable.
    fn reserve_range(&mut self, lo: i64, hi: i64) {
        if self.coeffs.is_empty() {
            self.low = lo;
            self.coeffs = vec![GaussianRational::zero(); (hi - lo + 1) as usize];
            return;
        }
        if lo < self.low {
            let extra = (self.low - lo) as usize;
            let mut v = vec![GaussianRational::zero(); extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = lo;
        }
        let top = self.low + self.coeffs.len() as i64 - 1;
        if hi > top {
            self.coeffs
                .resize((hi - self.low + 1) as usize, GaussianRational::zero());
        }
    }

    pub fn add_term(&mut self, k: i64, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        self.reserve_range(k, k);
        self.coeffs[(k - self.low) as usize].add_assign_ref(c);
        self.trim();
    }

    /// `self += c · s^shift · other`, the kernel of every product expansion.
    pub fn add_scaled_shifted(&mut self, c: &GaussianRational, shift: i64, other: &Self) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        let lo = other.low + shift;
        let hi = lo + other.coeffs.len() as i64 - 1;
        self.reserve_range(lo, hi);
        let base = (lo - self.low) as usize;
        for (i, x) in other.coeffs.iter().enumerate() {
            if !x.is_zero() {
                self.coeffs[base + i].add_mul_assign(c, x);
            }
        }
        self.trim();
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_shifted(&GaussianRational::one(), 0, other);
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_shifted(&GaussianRational::from_integer(-1), 0, other);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            out.add_scaled_shifted(c, k, other);
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        out.add_scaled_shifted(c, 0, self);
        out
    }

    /// Inverse, available only for monomials.
    pub fn try_inverse(&self) -> Option<Self> {
        if self.coeffs.len() != 1 {
            return None;
        }
        Some(Self::monomial(self.coeffs[0].inverse()?, -self.low))
    }

    /// `f(u·s^b)` for a nonzero unit-like constant `u` and integer `b != 0`.
    pub fn substitute(&self, u: &GaussianRational, b: i64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k * b, c * &u.pow(k))))
    }

    pub fn to_rational(&self) -> RationalFunctionQi {
        if self.is_zero() {
            return RationalFunctionQi::zero();
        }
        let poly = Poly::from_coeffs(self.coeffs.clone());
        let mono = RationalFunctionQi::monomial(GaussianRational::one(), self.low);
        RationalFunctionQi::from_poly(poly).mul(&mono)
    }

    /// Exact conversion of a rational function whose reduced denominator is
    /// `c·s^k`.
    pub fn from_rational(f: &RationalFunctionQi) -> Option<Self> {
        if f.is_zero() {
            return Some(Self::zero());
        }
        if !f.has_monomial_denominator() {
            return None;
        }
        let den = f.denominator();
        let k = den.valuation() as i64;
        let inv = den.trailing()?.inverse()?;
        Some(Self::from_terms(
            f.numerator()
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 - k, c * &inv)),
        ))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real() && c.is_gaussian_integer())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c.to_complex();
        }
        acc * s.powi(self.low as i32)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Poly::from_coeffs(self.coeffs.clone());
        f.write_str(&p.fmt_terms("s", self.low))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (k, c.into())))
    }

    #[test]
    fn arithmetic_and_trimming() {
        let a = lp(&[(-1, 1), (1, -1)]);
        let b = lp(&[(-1, 1), (1, 1)]);
        assert_eq!(a.mul(&b), lp(&[(-2, 1), (2, -1)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&b), lp(&[(-1, 2)]));
        assert_eq!(a.add(&b).low(), Some(-1));
    }

    #[test]
    fn monomial_inverse_only() {
        let m = lp(&[(3, 2)]);
        assert_eq!(m.try_inverse().unwrap().mul(&m), LaurentPoly::one());
        assert!(lp(&[(0, 1), (1, 1)]).try_inverse().is_none());
    }

    #[test]
    fn rational_roundtrip() {
        let a = lp(&[(-3, 1), (-1, 1), (1, 1), (3, 1)]);
        let f = a.to_rational();
        assert_eq!(LaurentPoly::from_rational(&f).unwrap(), a);
        assert_eq!(a.to_string(), "s^-3+s^-1+s+s^3");
    }

    #[test]
    fn substitution() {
        let a = lp(&[(-1, 1), (2, 3)]);
        let b = a.substitute(&(-1).into(), -2);
        assert_eq!(b, lp(&[(2, -1), (-4, 3)]));
    }
}
