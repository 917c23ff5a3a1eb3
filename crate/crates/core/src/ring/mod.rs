//! Exact coefficient arithmetic: Q(i), polynomials and rational functions in
//! one variable `s`, and Laurent polynomials.

mod gaussian;
mod laurent;
mod poly;
mod ratfunc;

pub use gaussian::GaussianRational;
pub use laurent::LaurentPoly;
pub use poly::Poly;
pub use ratfunc::{rf_arith, rf_eval, RationalFunctionQi, RfOp};

use std::fmt::{Debug, Display};

/// Commutative ring with unit, as needed by the series layer.
pub trait Ring: Clone + PartialEq + Debug + Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn try_inverse(&self) -> Option<Self>;
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inverse()
    }
}

impl Ring for RationalFunctionQi {
    fn zero() -> Self {
        RationalFunctionQi::zero()
    }
    fn one() -> Self {
        RationalFunctionQi::one()
    }
    fn is_zero(&self) -> bool {
        RationalFunctionQi::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunctionQi::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RationalFunctionQi::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunctionQi::mul(self, other)
    }
    fn neg(&self) -> Self {
        RationalFunctionQi::neg(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn try_inverse(&self) -> Option<Self> {
        LaurentPoly::try_inverse(self)
    }
}
