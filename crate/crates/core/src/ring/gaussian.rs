use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element `re + im·i` of Q(i) with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `a + b·i` with integer parts.
    pub fn gaussian(a: i64, b: i64) -> Self {
        Self::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when both parts are integers.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Integer power; negative exponents invert. Panics on `0^(-n)`.
    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// `i^n` without any arithmetic.
    pub fn i_pow(n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => Self::gaussian(1, 0),
            1 => Self::gaussian(0, 1),
            2 => Self::gaussian(-1, 0),
            _ => Self::gaussian(0, -1),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub(crate) fn add_assign_ref(&mut self, rhs: &Self) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }

    pub(crate) fn sub_assign_ref(&mut self, rhs: &Self) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }

    /// `self += c·x`, with shortcuts for the units ±1, ±i that dominate
    /// theta-product expansions.
    pub(crate) fn add_mul_assign(&mut self, c: &Self, x: &Self) {
        match Unit::classify(c) {
            Some(Unit::One) => self.add_assign_ref(x),
            Some(Unit::MinusOne) => self.sub_assign_ref(x),
            Some(Unit::I) => {
                // i·(a+bi) = -b + ai
                self.re -= &x.im;
                self.im += &x.re;
            }
            Some(Unit::MinusI) => {
                self.re += &x.im;
                self.im -= &x.re;
            }
            None => {
                let p = c * x;
                self.add_assign_ref(&p);
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Unit {
    One,
    MinusOne,
    I,
    MinusI,
}

impl Unit {
    fn classify(c: &GaussianRational) -> Option<Self> {
        if c.im.is_zero() {
            if c.re.is_one() {
                return Some(Unit::One);
            }
            if (-&c.re).is_one() {
                return Some(Unit::MinusOne);
            }
        } else if c.re.is_zero() {
            if c.im.is_one() {
                return Some(Unit::I);
            }
            if (-&c.im).is_one() {
                return Some(Unit::MinusI);
            }
        }
        None
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::new(&self.re * &rhs.re, BigRational::zero());
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl From<i32> for GaussianRational {
    fn from(n: i32) -> Self {
        Self::from_integer(n as i64)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussianRational {
    /// Rendering used when the number multiplies a monomial: `None` for 1,
    /// `Some("-")` for -1, parenthesised for genuinely complex values.
    pub(crate) fn coefficient_prefix(&self) -> Option<String> {
        if self.is_one() {
            return None;
        }
        if self.is_real() && (-&self.re).is_one() {
            return Some("-".to_string());
        }
        let body = self.to_string();
        if !self.re.is_zero() && !self.im.is_zero() {
            Some(format!("({body})*"))
        } else {
            Some(format!("{body}*"))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |r: &BigRational| -> String {
            let a = r.abs();
            if a.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&a))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}", imag(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{}", fmt_rational(&self.re), imag(&self.im))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_gaussian() {
        let z = GaussianRational::gaussian(1, 2);
        let w = z.inverse().unwrap();
        assert_eq!(&z * &w, GaussianRational::one());
        assert_eq!(w, GaussianRational::new(
            BigRational::new(1.into(), 5.into()),
            BigRational::new((-2).into(), 5.into()),
        ));
        assert!(GaussianRational::zero().inverse().is_none());
    }

    #[test]
    fn powers_of_i() {
        for n in -8..8 {
            assert_eq!(GaussianRational::i().pow(n), GaussianRational::i_pow(n));
        }
    }

    #[test]
    fn display() {
        assert_eq!(GaussianRational::gaussian(3, 0).to_string(), "3");
        assert_eq!(GaussianRational::gaussian(0, -1).to_string(), "-i");
        assert_eq!(GaussianRational::gaussian(1, -2).to_string(), "1-2i");
        assert_eq!(GaussianRational::from_ratio(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn fused_unit_multiply_add() {
        let x = GaussianRational::gaussian(2, 5);
        for c in [
            GaussianRational::gaussian(1, 0),
            GaussianRational::gaussian(-1, 0),
            GaussianRational::gaussian(0, 1),
            GaussianRational::gaussian(0, -1),
            GaussianRational::gaussian(3, -7),
        ] {
            let mut acc = GaussianRational::gaussian(1, 1);
            acc.add_mul_assign(&c, &x);
            assert_eq!(acc, &GaussianRational::gaussian(1, 1) + &(&c * &x));
        }
    }
}
