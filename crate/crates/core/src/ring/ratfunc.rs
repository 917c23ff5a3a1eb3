use std::fmt;

use num_complex::Complex64;

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

/// A rational function `N(s)/D(s)` over Q(i), kept in canonical form:
/// `gcd(N, D) = 1` and `D` monic. Equality is coefficient comparison.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunctionQi {
    num: Poly,
    den: Poly,
}

/// Arithmetic selector for [`rf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Mul,
    Div,
}

/// Exact field arithmetic on rational functions.
pub fn rf_arith(a: &RationalFunctionQi, b: &RationalFunctionQi, kind: RfOp) -> Result<RationalFunctionQi> {
    match kind {
        RfOp::Add => Ok(a.add(b)),
        RfOp::Mul => Ok(a.mul(b)),
        RfOp::Div => a.div(b),
    }
}

/// Floating evaluation at `s0`.
pub fn rf_eval(f: &RationalFunctionQi, s0: Complex64) -> Result<Complex64> {
    f.eval(s0)
}

impl RationalFunctionQi {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("in rational function denominator"));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        Ok(Self::normalized(num, den))
    }

    /// Makes `den` monic; assumes coprimality already holds.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            Self { num, den }
        } else {
            let inv = lead.inverse().unwrap();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    /// `c·s^k` for any integer `k`.
    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self {
                num: Poly::constant(c),
                den: Poly::monomial(GaussianRational::one(), k.unsigned_abs() as usize),
            }
        }
    }

    /// The variable `s`.
    pub fn s() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value when the function has degree 0 in `s`.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.num.is_zero() {
            return Some(GaussianRational::zero());
        }
        if self.den.is_one() && self.num.degree() == Some(0) {
            return Some(self.num.coeff(0));
        }
        None
    }

    /// True when the reduced denominator is a power of `s`, i.e. the
    /// function is a Laurent polynomial.
    pub fn has_monomial_denominator(&self) -> bool {
        self.den.term_count() == 1
    }

    /// Exponent `k` with the function regular and nonzero-or-zero at `s = 0`
    /// after multiplying by `s^k`: negative when there is a pole at 0.
    pub fn s_valuation(&self) -> i64 {
        if self.num.is_zero() {
            return i64::MAX;
        }
        self.num.valuation() as i64 - self.den.valuation() as i64
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Self::from_poly(num);
            }
            return Self::new(num, self.den.clone()).expect("nonzero denominator");
        }
        let g = self.den.gcd(&other.den);
        let b1 = self.den.div_rem(&g).unwrap().0;
        let d1 = other.den.div_rem(&g).unwrap().0;
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Self::zero();
        }
        let den = self.den.mul(&d1);
        // Any common factor of num and den divides g.
        let h = num.gcd(&g);
        if h.is_one() {
            Self::normalized(num, den)
        } else {
            Self::normalized(num.div_rem(&h).unwrap().0, den.div_rem(&h).unwrap().0)
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let div = |p: &Poly, g: &Poly| if g.is_one() { p.clone() } else { p.div_rem(g).unwrap().0 };
        let num = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let den = div(&self.den, &g2).mul(&div(&other.den, &g1));
        Self::normalized(num, den)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("by the zero rational function"));
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// `f(c·s)` for a nonzero constant `c`.
    pub fn scale_variable(&self, c: &GaussianRational) -> Self {
        assert!(!c.is_zero(), "scaling the variable by zero");
        Self::normalized(self.num.scale_variable(c), self.den.scale_variable(c))
    }

    /// `f(1/s)`.
    pub fn invert_variable(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let shift = dd - dn;
        let (num, den) = if shift >= 0 {
            (self.num.reversed().shift(shift as usize), self.den.reversed())
        } else {
            (self.num.reversed(), self.den.reversed().shift((-shift) as usize))
        };
        Self::new(num, den).expect("nonzero denominator")
    }

    /// `f(s^b)` for a nonzero integer `b`.
    pub fn compose_power(&self, b: i64) -> Self {
        assert!(b != 0, "composition with s^0");
        let f = Self {
            num: self.num.compose_power(b.unsigned_abs() as usize),
            den: self.den.compose_power(b.unsigned_abs() as usize),
        };
        let f = Self::normalized(f.num, f.den);
        if b < 0 {
            f.invert_variable()
        } else {
            f
        }
    }

    pub fn eval(&self, s0: Complex64) -> Result<Complex64> {
        let d = self.den.eval(s0);
        let scale = self.den.eval_abs(s0).max(f64::MIN_POSITIVE);
        if d.norm() <= 1e-12 * scale {
            return Err(Error::Pole {
                what: format!("rational function {self}"),
                magnitude: d.norm(),
            });
        }
        Ok(self.num.eval(s0) / d)
    }
}

impl fmt::Display for RationalFunctionQi {
    /// Denominators are shown with their lowest nonzero coefficient equal to
    /// one, e.g. `s/(1-s^2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let t = self.den.trailing().unwrap().inverse().unwrap();
        let num = self.num.scale(&t);
        let den = self.den.scale(&t);
        let wrap = |p: &Poly| {
            let body = p.to_string();
            if p.term_count() > 1 {
                format!("({body})")
            } else {
                body
            }
        };
        write!(f, "{}/{}", wrap(&num), wrap(&den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunctionQi {
        RationalFunctionQi::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn additive_inverse_example() {
        // s/(1-s^2) + s/(s^2-1) = 0
        let a = rf(&[0, 1], &[1, 0, -1]);
        let b = rf(&[0, 1], &[-1, 0, 1]);
        assert!(rf_arith(&a, &b, RfOp::Add).unwrap().is_zero());
    }

    #[test]
    fn multiplicative_inverse_example() {
        let inv_s = RationalFunctionQi::monomial(GaussianRational::one(), -1);
        let prod = rf_arith(&inv_s, &RationalFunctionQi::s(), RfOp::Mul).unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn reduction_example() {
        // (1-s^4)/(1-s^2) -> 1+s^2, checked against explicit division.
        let f = rf(&[1, 0, 0, 0, -1], &[1, 0, -1]);
        let (q, r) = Poly::from_ints(&[1, 0, 0, 0, -1])
            .div_rem(&Poly::from_ints(&[1, 0, -1]))
            .unwrap();
        assert!(r.is_zero());
        assert_eq!(f, RationalFunctionQi::from_poly(q));
        assert_eq!(f.to_string(), "1+s^2");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let a = rf(&[1], &[1, 1]);
        assert!(matches!(
            rf_arith(&a, &RationalFunctionQi::zero(), RfOp::Div),
            Err(Error::DivisionByZero(_))
        ));
        assert!(RationalFunctionQi::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let f = rf(&[0, 1], &[1, 0, -1]);
        let v = rf_eval(&f, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v - Complex64::new(-2.0 / 3.0, 0.0)).norm() < 1e-15);
        let one = RationalFunctionQi::one();
        assert_eq!(rf_eval(&one, Complex64::new(0.3, 7.0)).unwrap(), Complex64::new(1.0, 0.0));
        // (1+s^2)/s at s = i
        let g = rf(&[1, 0, 1], &[0, 1]);
        assert!(rf_eval(&g, Complex64::new(0.0, 1.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported_with_magnitude() {
        let f = rf(&[1], &[1, 0, -1]);
        match rf_eval(&f, Complex64::new(1.0, 0.0)) {
            Err(Error::Pole { magnitude, .. }) => assert!(magnitude < 1e-12),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn display_normalizes_trailing_coefficient() {
        assert_eq!(rf(&[0, 1], &[1, 0, -1]).to_string(), "s/(1-s^2)");
        assert_eq!(rf(&[0, -1], &[-1, 0, 1]).to_string(), "s/(1-s^2)");
    }

    #[test]
    fn variable_substitutions() {
        let f = rf(&[0, 1], &[1, 0, -1]);
        // s -> 1/s: (1/s)/(1-1/s^2) = s/(s^2-1) = -f
        assert_eq!(f.invert_variable(), f.neg());
        assert_eq!(f.scale_variable(&(-1).into()), f.neg());
        assert_eq!(f.compose_power(-1), f.neg());
        let g = rf(&[0, 0, 1], &[1, 0, 0, 0, -1]);
        assert_eq!(f.compose_power(2), g);
    }
}
