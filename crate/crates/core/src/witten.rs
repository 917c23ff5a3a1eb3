//! Characters of the Witten series `W_{1,q} … W_{4,q}`.
//!
//! For an endomorphism `g` of a complex vector space `V` with eigenvalues
//! `g_1 … g_r`,
//!
//! ```text
//! Tr(g, W1) = ∏_n ∏_j (1 + q^{n-1/2} g_j) / (1 - q^n g_j)
//! Tr(g, W2) = ∏_n ∏_j (1 - q^{n-1/2} g_j) / (1 + q^n g_j)
//! Tr(g, W3) = ∏_n ∏_j (1 + q^n g_j) / (1 - q^{n-1/2} g_j)
//! Tr(g, W4) = ∏_n ∏_j (1 - q^n g_j) / (1 + q^{n-1/2} g_j)
//! ```
//!
//! The exact backend takes eigenvalues `s^{e_j}` and returns a p-series with
//! coefficients in Q(i)(s); the numeric backend takes complex eigenvalues.

use num_complex::Complex64;

use crate::elliptic::{EllipticParams, ThetaProduct, POLE_GUARD};
use crate::error::{Error, Result};
use crate::qseries::PSeries;
use crate::ring::RationalFunctionQi;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WittenKind {
    W1,
    W2,
    W3,
    W4,
}

/// One side of the defining quotient: `1 + sign·q^{n - half/2}·g`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Side {
    pub sign: i64,
    pub half: bool,
}

impl Side {
    /// p-exponent `4n - 2` or `4n` written as `e0 + 4n`.
    pub(crate) fn e0(self) -> i64 {
        if self.half {
            -2
        } else {
            0
        }
    }
}

impl WittenKind {
    pub const ALL: [WittenKind; 4] = [Self::W1, Self::W2, Self::W3, Self::W4];

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::W1),
            2 => Ok(Self::W2),
            3 => Ok(Self::W3),
            4 => Ok(Self::W4),
            _ => Err(Error::Invalid(format!("series index must be 1..=4, got {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::W1 => 1,
            Self::W2 => 2,
            Self::W3 => 3,
            Self::W4 => 4,
        }
    }

    pub(crate) fn sides(self) -> (Side, Side) {
        let (ns, nh, ds, dh) = match self {
            Self::W1 => (1, true, -1, false),
            Self::W2 => (-1, true, 1, false),
            Self::W3 => (1, false, -1, true),
            Self::W4 => (-1, false, 1, true),
        };
        (Side { sign: ns, half: nh }, Side { sign: ds, half: dh })
    }
}

/// Eigenvalue data for [`witten_char`].
#[derive(Clone, Debug)]
pub enum Eigenvalues<'a> {
    /// Eigenvalues `s^{e}` for the listed integer exponents.
    Exact(&'a [i64]),
    Numeric(&'a [Complex64]),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CharValue {
    Series(PSeries<RationalFunctionQi>),
    Number(Complex64),
}

pub fn witten_char(kind: WittenKind, eigenvalues: Eigenvalues<'_>, params: &EllipticParams) -> Result<CharValue> {
    match eigenvalues {
        Eigenvalues::Exact(e) => witten_char_exact(kind, e, params.truncation_order).map(CharValue::Series),
        Eigenvalues::Numeric(g) => witten_char_numeric(kind, g, params).map(CharValue::Number),
    }
}

pub fn witten_char_exact(kind: WittenKind, exponents: &[i64], order: usize) -> Result<PSeries<RationalFunctionQi>> {
    ThetaProduct::witten(kind, exponents).expand(order)
}

pub fn witten_char_numeric(kind: WittenKind, eigenvalues: &[Complex64], params: &EllipticParams) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if eigenvalues.is_empty() || params.is_constant_term() {
        return Ok(one);
    }
    let nome = params.nome();
    let q = nome.q;
    let qh = nome.p * nome.p;
    let g_max = eigenvalues.iter().map(|g| g.norm()).fold(1.0, f64::max);
    let cutoff = params.cutoff_for(g_max, eigenvalues.len());
    let (num, den) = kind.sides();
    let (mut xh, mut xi) = (qh, q);
    let mut acc = one;
    for n in 1..=cutoff {
        let xn = if num.half { xh } else { xi };
        let xd = if den.half { xh } else { xi };
        for g in eigenvalues {
            let d = one + xd * g * den.sign as f64;
            if d.norm() < POLE_GUARD {
                return Err(Error::VanishingFactor {
                    what: format!("W{} character", kind.index()),
                    n,
                });
            }
            acc *= (one + xn * g * num.sign as f64) / d;
        }
        xh *= q;
        xi *= q;
    }
    Ok(acc)
}
