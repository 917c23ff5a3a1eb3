//! The invariant functions `Z(γ, J)`, `EM_ε(γ)` and `EM(γ, ζ)` attached to
//! a point `γ` of the elliptic curve `E_τ = C/(Z + Zτ)`, and the identity
//! suites relating them.
//!
//! For integer rotation data `J` with orientation sign `ν` and a commuting
//! `R` with angles `φ_a`,
//!
//! ```text
//! Z(γ, J)(R) = ν ∏_a Φ₁(aγ + φ_a/2π)
//!            = Tr(e^{γJ}e^R, W₁(N⊗C)) / Str(e^{γJ}e^R, S_N)
//! ```
//!
//! When `γ = (α + βτ)/k` has exact order `k` and `ζ = exp(J/k)`, the
//! combination `Os(J/k)^{α+β}·Z(γ, J)` depends only on `ζ`; this is `EM`.

mod suites;

pub use suites::{identity_check, run_suites, SuiteConfig, SUITES};

use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::PI;

use crate::elliptic::{phi_numeric, EllipticParams, ThetaProduct};
use crate::error::{Error, Result};
use crate::ring::GaussianRational;
use crate::spinchar::{chi, os_sign_fraction, parity_sign, spinor_trace, CyclicAction, RotationData, TraceKind};
use crate::witten::{witten_char_numeric, WittenKind};

/// A point of `C` representing an element of `E_τ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LatticeElement {
    Free(Complex64),
    /// `γ = (α + βτ)/k`.
    Torsion { alpha: i64, beta: i64, k: i64 },
}

impl LatticeElement {
    /// A torsion point of exact order `k`.
    pub fn torsion(alpha: i64, beta: i64, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid(format!("order k = {k} must be positive")));
        }
        let g = alpha.gcd(&beta).gcd(&k);
        if g != 1 {
            return Err(Error::Invalid(format!(
                "({alpha}+{beta}τ)/{k} is not reduced: gcd(α, β, k) = {g}"
            )));
        }
        Ok(Self::Torsion { alpha, beta, k })
    }

    pub fn value(&self, tau: Complex64) -> Complex64 {
        match *self {
            Self::Free(g) => g,
            Self::Torsion { alpha, beta, k } => (alpha as f64 + beta as f64 * tau) / k as f64,
        }
    }

    pub fn order(&self) -> Option<i64> {
        match *self {
            Self::Free(_) => None,
            Self::Torsion { k, .. } => Some(k),
        }
    }

    pub fn torsion_data(&self) -> Result<(i64, i64, i64)> {
        match *self {
            Self::Torsion { alpha, beta, k } => Ok((alpha, beta, k)),
            Self::Free(_) => Err(Error::Invalid("a torsion point (α+βτ)/k is required".into())),
        }
    }

    /// `γ + 1`; a torsion point keeps its order and becomes `(α+k, β)`.
    pub fn shift_one(&self) -> Self {
        match *self {
            Self::Free(g) => Self::Free(g + 1.0),
            Self::Torsion { alpha, beta, k } => Self::Torsion {
                alpha: alpha + k,
                beta,
                k,
            },
        }
    }

    /// `γ + τ`.
    pub fn shift_tau(&self, tau: Complex64) -> Self {
        match *self {
            Self::Free(g) => Self::Free(g + tau),
            Self::Torsion { alpha, beta, k } => Self::Torsion {
                alpha,
                beta: beta + k,
                k,
            },
        }
    }

    /// Whether `a·γ` lies in `Z + Zτ`.
    pub fn multiple_in_lattice(&self, a: i64, tau: Complex64) -> bool {
        match *self {
            Self::Torsion { alpha, beta, k } => (a * alpha) % k == 0 && (a * beta) % k == 0,
            Self::Free(g) => lattice_distance(a as f64 * g, tau) < 1e-12,
        }
    }
}

/// Distance from `w` to the nearest point of `Z + Zτ`.
pub fn lattice_distance(w: Complex64, tau: Complex64) -> f64 {
    let y = w.im / tau.im;
    let x = w.re - y * tau.re;
    let (dx, dy) = (x - x.round(), y - y.round());
    let mut best = f64::INFINITY;
    for i in -1..=1 {
        for j in -1..=1 {
            let d = Complex64::new(dx + i as f64, 0.0) + (dy + j as f64) * tau;
            best = best.min(d.norm());
        }
    }
    best
}

/// `s^n` for `n` odd or even as a ±1 sign: `sign^n`.
pub(crate) fn sign_pow(sign: i32, n: i64) -> i32 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        sign
    }
}

fn numbers(j: &RotationData) -> Result<Vec<i64>> {
    j.rotation_numbers()
        .ok_or_else(|| Error::Invalid("J must have integer rotation numbers".into()))
}

fn check_planes(j: &RotationData, r: &RotationData) -> Result<()> {
    if j.planes() != r.planes() {
        return Err(Error::Invalid(format!(
            "J has {} planes but R has {}",
            j.planes(),
            r.planes()
        )));
    }
    Ok(())
}

/// `Z(γ, J)(R)` by the product formula over Φ₁.
pub fn z_fun(gamma: &LatticeElement, j: &RotationData, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    for a in numbers(j)? {
        if gamma.multiple_in_lattice(a, params.tau) {
            return Err(Error::LatticeCollision { a });
        }
    }
    z_product(gamma, j, r, params)
}

/// The product formula without the analyticity check on `aγ`; finite
/// whenever every `aγ + φ_a/2π` avoids the lattice.
pub(crate) fn z_product(gamma: &LatticeElement, j: &RotationData, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    check_planes(j, r)?;
    let g = gamma.value(params.tau);
    let mut acc = Complex64::new(j.orientation_sign() as f64, 0.0);
    for (idx, a) in numbers(j)?.into_iter().enumerate() {
        let w = a as f64 * g + r.angle(idx) / (2.0 * PI);
        acc *= phi_numeric(1, params, w)?;
    }
    Ok(acc)
}

/// `Z(τ, N, o_N)(X) = χ(X)·Tr(e^X, W₁(N⊗C))`.
pub fn z_tau(x: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    let c1 = witten_char_numeric(WittenKind::W1, &complex_eigenvalues(x), params)?;
    Ok(chi(None, x)? * c1)
}

/// `Z(γ, J)(R)` from its definition `Z(τ, N, o_N)(γJ + R)`.
pub fn z_via_characters(
    gamma: &LatticeElement,
    j: &RotationData,
    r: &RotationData,
    params: &EllipticParams,
) -> Result<Complex64> {
    check_planes(j, r)?;
    let x = j.flow(gamma.value(params.tau)).plus(r)?.with_orientation(j.orientation_sign());
    z_tau(&x, params)
}

/// Eigenvalues `e^{±iφ}` of `e^X` on `N ⊗ C`.
pub(crate) fn complex_eigenvalues(x: &RotationData) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    x.angle_list()
        .into_iter()
        .flat_map(|phi| [(i * phi).exp(), (-i * phi).exp()])
        .collect()
}

/// The four half-period cases of `Z(γ, J)` when `exp(J/k) = −1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityCase {
    BothEven,
    AlphaOdd,
    BetaOdd,
    BothOdd,
}

impl ParityCase {
    pub fn of(alpha: i64, beta: i64) -> Self {
        match (alpha.rem_euclid(2), beta.rem_euclid(2)) {
            (0, 0) => Self::BothEven,
            (1, 0) => Self::AlphaOdd,
            (0, _) => Self::BetaOdd,
            _ => Self::BothOdd,
        }
    }

    fn kind(self) -> WittenKind {
        match self {
            Self::BothEven => WittenKind::W1,
            Self::AlphaOdd => WittenKind::W2,
            Self::BetaOdd => WittenKind::W3,
            Self::BothOdd => WittenKind::W4,
        }
    }

    /// `c(γ) = unit·p^{e}` for `d` planes.
    pub fn constant(self, alpha: i64, beta: i64, d: i64) -> (GaussianRational, i64) {
        let n = alpha + beta;
        match self {
            Self::BothEven => (parity_sign(n / 2 * d).into(), 0),
            Self::AlphaOdd => (
                &GaussianRational::i_pow(d) * &GaussianRational::from(parity_sign((n - 1) / 2 * d) as i64),
                0,
            ),
            Self::BetaOdd => (parity_sign((n - 1) / 2 * d).into(), d),
            Self::BothOdd => (
                &GaussianRational::i_pow(d) * &GaussianRational::from(parity_sign(n / 2 * d) as i64),
                d,
            ),
        }
    }
}

/// Right-hand side of the half-period formulas without the `Os` factor:
/// `c·(1/Str)·C₁`, `c·(1/Tr)·C₂`, `c·Tr·C₃` or `c·Str·C₄`.
pub fn half_period_value(alpha: i64, beta: i64, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    let case = ParityCase::of(alpha, beta);
    let d = r.planes() as i64;
    let (unit, pe) = case.constant(alpha, beta, d);
    let c = unit.to_complex() * params.nome().p.powi(pe as i32);
    let w = witten_char_numeric(case.kind(), &complex_eigenvalues(r), params)?;
    let spinor = match case {
        ParityCase::BothEven => chi(None, r)?,
        ParityCase::AlphaOdd => {
            let t = spinor_trace(TraceKind::Tr, r, None);
            if t.norm() < crate::elliptic::POLE_GUARD {
                return Err(Error::Pole {
                    what: "1/Tr(e^R, S_N)".into(),
                    magnitude: t.norm(),
                });
            }
            1.0 / t
        }
        ParityCase::BetaOdd => spinor_trace(TraceKind::Tr, r, None),
        ParityCase::BothOdd => spinor_trace(TraceKind::Str, r, None),
    };
    Ok(c * spinor * w)
}

/// `EM_ε(γ; τ, N, o_N)(R)` for `γ` of exact even order `k`.
pub fn em_eps(gamma: &LatticeElement, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    let (alpha, beta, k) = gamma.torsion_data()?;
    if k % 2 != 0 {
        return Err(Error::Invalid(format!("EM_ε needs an even order, got k = {k}")));
    }
    if ParityCase::of(alpha, beta) == ParityCase::BothEven {
        return Err(Error::BothEven { alpha, beta, k });
    }
    half_period_value(alpha, beta, r, params)
}

/// The canonical `K` adapted to `ζ`: rotation numbers in `1..k−1`.
pub fn adapted_k(zeta: &CyclicAction) -> Result<RotationData> {
    zeta.check_no_eigenvalue_one()?;
    if let Some(plane) = zeta.eigenvalue_minus_one() {
        return Err(Error::BadEigenvalue {
            plane,
            residue: zeta.residues()[plane],
            k: zeta.k(),
            eigenvalue: -1,
        });
    }
    let a: Vec<i64> = zeta.residues().iter().map(|r| r.rem_euclid(zeta.k())).collect();
    Ok(RotationData::numbers(&a, 1))
}

/// `Os(J/k)^{α+β}·Z(γ, J)(R)` for any integer `J` with `exp(J/k) = ζ`.
pub fn em_with_j(gamma: &LatticeElement, j: &RotationData, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    let (alpha, beta, k) = gamma.torsion_data()?;
    let os = os_sign_fraction(j, k)?;
    Ok(z_fun(gamma, j, r, params)? * sign_pow(os, alpha + beta) as f64)
}

/// `EM(γ, ζ; τ, N, o_N)(R)`, splitting `N = N_B ⊕ N_G` along the `−1`
/// eigenspace of `ζ`. The orientation of `R` is `o_N`; `N_B` is oriented by
/// its listed planes and `N_G` carries the remaining sign.
pub fn em_fun(gamma: &LatticeElement, zeta: &CyclicAction, r: &RotationData, params: &EllipticParams) -> Result<Complex64> {
    zeta.check_no_eigenvalue_one()?;
    let (_, _, k) = gamma.torsion_data()?;
    if k != zeta.k() {
        return Err(Error::Invalid(format!(
            "γ has order {k} but ζ has order {}",
            zeta.k()
        )));
    }
    if r.planes() != zeta.residues().len() {
        return Err(Error::Invalid("ζ and R must share their planes".into()));
    }
    let half = (k % 2 == 0).then_some(k / 2);
    let mut bad = Vec::new();
    let mut good = Vec::new();
    let mut good_res = Vec::new();
    for (idx, res) in zeta.residues().iter().enumerate() {
        if Some(res.rem_euclid(k)) == half {
            bad.push(r.entries()[idx]);
        } else {
            good.push(r.entries()[idx]);
            good_res.push(*res);
        }
    }
    let mut value = Complex64::new(1.0, 0.0);
    if !bad.is_empty() {
        let sigma_b = if good.is_empty() { r.orientation_sign() } else { 1 };
        value *= em_eps(gamma, &RotationData::new(bad, sigma_b), params)?;
    }
    if !good.is_empty() {
        let kk = adapted_k(&CyclicAction::new(k, good_res)?)?.with_orientation(r.orientation_sign());
        let rg = RotationData::new(good, r.orientation_sign());
        value *= em_with_j(gamma, &kk, &rg, params)?;
    }
    Ok(value)
}

/// `ν ∏ Φ₁(a·γ)` in the variable `s = e^{iπγ}`, for `γ` formal.
pub fn z_formal_gamma(j: &RotationData) -> Result<ThetaProduct> {
    let phi1 = ThetaProduct::phi(1)?;
    let mut acc = ThetaProduct::monomial(j.orientation_sign().into(), 0, 0);
    for a in numbers(j)? {
        if a == 0 {
            return Err(Error::LatticeCollision { a });
        }
        acc = acc.mul(&phi1.substitute(&GaussianRational::one(), 0, a)?);
    }
    Ok(acc)
}

/// `e^{iπ·a·γ}` for `γ = (α+βτ)/k` as `(unit, p-exponent)`, when it lies in
/// `Q(i)·p^Z`.
fn torsion_multiplier(a: i64, alpha: i64, beta: i64, k: i64) -> Result<(GaussianRational, i64)> {
    // e^{iπ aα/k} = i^{2aα/k},  e^{iπ aβτ/k} = p^{2aβ/k}
    if (2 * a * alpha) % k != 0 || (2 * a * beta) % k != 0 {
        return Err(Error::Invalid(format!(
            "a·γ = {a}·({alpha}+{beta}τ)/{k} is not a half-period; exact evaluation unavailable"
        )));
    }
    Ok((GaussianRational::i_pow(2 * a * alpha / k), 2 * a * beta / k))
}

/// `ν ∏ Φ₁(aγ + b·z)` in the variable `s = e^{iπz}`, for torsion `γ` whose
/// multiples `aγ` are half-periods. Planes with `b ≠ 0` may have `aγ` in
/// the lattice.
pub fn z_torsion_exact(gamma: &LatticeElement, j: &RotationData, b: &[i64]) -> Result<ThetaProduct> {
    let (alpha, beta, k) = gamma.torsion_data()?;
    let a = numbers(j)?;
    if a.len() != b.len() {
        return Err(Error::Invalid("J and R must share their planes".into()));
    }
    let phi1 = ThetaProduct::phi(1)?;
    let mut acc = ThetaProduct::monomial(j.orientation_sign().into(), 0, 0);
    for (&a, &b) in a.iter().zip(b) {
        if b == 0 && gamma.multiple_in_lattice(a, Complex64::new(0.0, 1.0)) {
            return Err(Error::LatticeCollision { a });
        }
        let (u, m) = torsion_multiplier(a, alpha, beta, k)?;
        acc = acc.mul(&phi1.substitute(&u, m, b)?);
    }
    Ok(acc)
}

/// Exact half-period right-hand side at `R = z·B`, without the `Os` factor.
pub fn half_period_exact(alpha: i64, beta: i64, b: &[i64], orientation_sign: i32) -> Result<ThetaProduct> {
    let case = ParityCase::of(alpha, beta);
    let (unit, pe) = case.constant(alpha, beta, b.len() as i64);
    let mut acc = ThetaProduct::monomial(unit, pe, 0);
    let mut eig = Vec::with_capacity(2 * b.len());
    for &b in b {
        let plane = match case {
            ParityCase::BothEven => {
                ThetaProduct::monomial(1.into(), 0, b).mul(&ThetaProduct::binomial((-1).into(), 0, 2 * b, true))
            }
            ParityCase::AlphaOdd => {
                ThetaProduct::monomial(1.into(), 0, b).mul(&ThetaProduct::binomial(1.into(), 0, 2 * b, true))
            }
            ParityCase::BetaOdd => {
                ThetaProduct::monomial(1.into(), 0, -b).mul(&ThetaProduct::binomial(1.into(), 0, 2 * b, false))
            }
            ParityCase::BothOdd => {
                ThetaProduct::monomial(1.into(), 0, -b).mul(&ThetaProduct::binomial((-1).into(), 0, 2 * b, false))
            }
        };
        acc = acc.mul(&plane);
        eig.extend([2 * b, -2 * b]);
    }
    if matches!(case, ParityCase::BothEven | ParityCase::BothOdd) && orientation_sign < 0 {
        acc = acc.scale(&(-1).into());
    }
    Ok(acc.mul(&ThetaProduct::witten(case.kind(), &eig)))
}
