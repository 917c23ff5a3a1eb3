//! Rotation data on an oriented even-dimensional space `N`, spinor
//! traces and supertraces, the χ functions, and the sign conventions
//! ν, ε, Os and v.
//!
//! A torus element of `so(N)` is recorded plane by plane. An entry is either
//! an integer rotation number `a` (the element acts on the plane by the angle
//! `2πa`) or a free complex angle `φ`. Angles are always SO-level: the spinor
//! lift of a rotation by `φ` is `cos(φ/2) + sin(φ/2)·e₁e₂`, so a plane
//! contributes `e^{-iφ/2} ∓ e^{iφ/2}` to `Str` and `Tr`.
//!
//! The orientation of `N` is a sign relative to the orientation given by the
//! listed planes. Negating one entry and the sign describes the same
//! oriented element; every function here is invariant under that re-coding.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::elliptic::POLE_GUARD;
use crate::error::{Error, Result};
use crate::ring::{GaussianRational, LaurentPoly, RationalFunctionQi};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Entry {
    Number(i64),
    Angle(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotationData {
    entries: Vec<Entry>,
    orientation_sign: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Str,
    Tr,
}

/// A finite-order element `ζ` acting on plane `u` by `e^{2iπ a_u/k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAction {
    k: i64,
    residues: Vec<i64>,
}

fn sign_of(sign: i32) -> i32 {
    if sign < 0 {
        -1
    } else {
        1
    }
}

impl RotationData {
    /// The zero space always carries orientation `+1`.
    pub fn new(entries: Vec<Entry>, orientation_sign: i32) -> Self {
        let orientation_sign = if entries.is_empty() { 1 } else { sign_of(orientation_sign) };
        Self {
            entries,
            orientation_sign,
        }
    }

    pub fn numbers(a: &[i64], orientation_sign: i32) -> Self {
        Self::new(a.iter().map(|&a| Entry::Number(a)).collect(), orientation_sign)
    }

    pub fn angles(phi: &[Complex64], orientation_sign: i32) -> Self {
        Self::new(phi.iter().map(|&p| Entry::Angle(p)).collect(), orientation_sign)
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), 1)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn orientation_sign(&self) -> i32 {
        self.orientation_sign
    }

    pub fn planes(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.entries.len()
    }

    /// SO-level angle of plane `j`.
    pub fn angle(&self, j: usize) -> Complex64 {
        match self.entries[j] {
            Entry::Number(a) => Complex64::new(2.0 * PI * a as f64, 0.0),
            Entry::Angle(phi) => phi,
        }
    }

    pub fn angle_list(&self) -> Vec<Complex64> {
        (0..self.planes()).map(|j| self.angle(j)).collect()
    }

    /// Integer rotation numbers, if every entry is one.
    pub fn rotation_numbers(&self) -> Option<Vec<i64>> {
        self.entries
            .iter()
            .map(|e| match e {
                Entry::Number(a) => Some(*a),
                Entry::Angle(_) => None,
            })
            .collect()
    }

    fn require_numbers(&self) -> Result<Vec<i64>> {
        self.rotation_numbers()
            .ok_or_else(|| Error::Invalid("integer rotation numbers required".into()))
    }

    /// `t·X` as angle data.
    pub fn flow(&self, t: Complex64) -> Self {
        Self {
            entries: (0..self.planes()).map(|j| Entry::Angle(self.angle(j) * t)).collect(),
            orientation_sign: self.orientation_sign,
        }
    }

    /// Planewise sum of two commuting elements on the same planes; the
    /// orientation is taken from `self`.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.planes() != other.planes() {
            return Err(Error::Invalid(format!(
                "plane count mismatch: {} vs {}",
                self.planes(),
                other.planes()
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| match (a, b) {
                (Entry::Number(x), Entry::Number(y)) => Entry::Number(x + y),
                _ => {
                    let x = entry_angle(a);
                    let y = entry_angle(b);
                    Entry::Angle(x + y)
                }
            })
            .collect();
        Ok(Self {
            entries,
            orientation_sign: self.orientation_sign,
        })
    }

    /// Direct sum `N₁ ⊕ N₂` with the product orientation.
    pub fn concat(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().copied());
        Self::new(entries, self.orientation_sign * other.orientation_sign)
    }

    /// Negates entry `j` and the orientation sign.
    pub fn recode(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.entries[j] = match out.entries[j] {
            Entry::Number(a) => Entry::Number(-a),
            Entry::Angle(phi) => Entry::Angle(-phi),
        };
        out.orientation_sign = -out.orientation_sign;
        out
    }

    pub fn with_orientation(&self, sign: i32) -> Self {
        Self::new(self.entries.clone(), sign)
    }
}

fn entry_angle(e: &Entry) -> Complex64 {
    match *e {
        Entry::Number(a) => Complex64::new(2.0 * PI * a as f64, 0.0),
        Entry::Angle(phi) => phi,
    }
}

impl CyclicAction {
    pub fn new(k: i64, residues: Vec<i64>) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid(format!("order k = {k} must be positive")));
        }
        Ok(Self { k, residues })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn residues(&self) -> &[i64] {
        &self.residues
    }

    /// First plane with eigenvalue 1, if any.
    pub fn eigenvalue_one(&self) -> Option<usize> {
        self.residues.iter().position(|r| r.rem_euclid(self.k) == 0)
    }

    /// First plane with eigenvalue −1, if any.
    pub fn eigenvalue_minus_one(&self) -> Option<usize> {
        if self.k % 2 != 0 {
            return None;
        }
        self.residues.iter().position(|r| r.rem_euclid(self.k) == self.k / 2)
    }

    pub(crate) fn check_no_eigenvalue_one(&self) -> Result<()> {
        match self.eigenvalue_one() {
            Some(plane) => Err(Error::BadEigenvalue {
                plane,
                residue: self.residues[plane],
                k: self.k,
                eigenvalue: 1,
            }),
            None => Ok(()),
        }
    }
}

/// Supertrace or trace of the spinor lift of `exp(R + shift)`.
pub fn spinor_trace(kind: TraceKind, r: &RotationData, shift: Option<&[Complex64]>) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..r.planes() {
        let phi = r.angle(j) + shift.map_or(Complex64::new(0.0, 0.0), |s| s[j]);
        let (a, b) = ((-i * phi / 2.0).exp(), (i * phi / 2.0).exp());
        acc *= match kind {
            TraceKind::Str => a - b,
            TraceKind::Tr => a + b,
        };
    }
    match kind {
        TraceKind::Str => acc * r.orientation_sign as f64,
        TraceKind::Tr => acc,
    }
}

/// Exact trace at `exp(zJ)` for integer rotation numbers, in `s = e^{iπz}`:
/// each plane contributes `s^{-a} ∓ s^{a}`.
pub fn spinor_trace_exact(kind: TraceKind, j: &RotationData) -> Result<RationalFunctionQi> {
    let sign: i64 = if kind == TraceKind::Str { -1 } else { 1 };
    let mut acc = LaurentPoly::one();
    for a in j.require_numbers()? {
        let plane = LaurentPoly::from_terms([(-a, GaussianRational::one()), (a, sign.into())]);
        acc = acc.mul(&plane);
    }
    if kind == TraceKind::Str && j.orientation_sign < 0 {
        acc = acc.neg();
    }
    Ok(acc.to_rational())
}

/// `χ(g; N, o_N)(R) = 1 / Str(g·e^R)`; `g` shares the planes of `R`.
pub fn chi(g: Option<&RotationData>, r: &RotationData) -> Result<Complex64> {
    let combined = match g {
        Some(g) => r.plus(&g.with_orientation(r.orientation_sign))?,
        None => r.clone(),
    };
    let st = spinor_trace(TraceKind::Str, &combined, None);
    if st.norm() < POLE_GUARD {
        return Err(Error::Pole {
            what: "χ".into(),
            magnitude: st.norm(),
        });
    }
    Ok(1.0 / st)
}

/// Exact `χ(N, o_N)(zJ)` as a rational function of `s`.
pub fn chi_exact(j: &RotationData) -> Result<RationalFunctionQi> {
    spinor_trace_exact(TraceKind::Str, j)?.inv()
}

/// `j^{-1/2}(R) = ∏ φ/(2 sin(φ/2))`, equal to 1 on planes with `φ = 0`.
pub fn j_factor(r: &RotationData) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (plane, phi) in r.angle_list().into_iter().enumerate() {
        if phi.norm() < 1e-300 {
            continue;
        }
        let sn = (phi / 2.0).sin();
        if sn.norm() < POLE_GUARD * phi.norm().max(1.0) {
            return Err(Error::BranchPoint { plane });
        }
        acc *= phi / (2.0 * sn);
    }
    Ok(acc)
}

/// `det^{1/2}(R) = ν·∏ φ_j`.
pub fn pfaffian(r: &RotationData) -> Complex64 {
    let prod: Complex64 = r.angle_list().into_iter().product();
    prod * r.orientation_sign as f64
}

/// `ε(J, N) = (−1)^{Σ a}` over the listed rotation numbers.
pub fn epsilon_j(j: &RotationData) -> Result<i32> {
    let a = j.require_numbers()?;
    if let Some(plane) = a.iter().position(|&x| x == 0) {
        return Err(Error::ZeroRotation { plane });
    }
    Ok(parity_sign(a.iter().sum()))
}

/// `(−1)^n`.
pub fn parity_sign(n: i64) -> i32 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Orientation of `exp(Y)` relative to `o_N`: `ν·∏ sign(sin(φ/2))` on real angles.
pub fn os_sign(y: &RotationData) -> Result<i32> {
    let mut s = y.orientation_sign;
    for (plane, phi) in y.angle_list().into_iter().enumerate() {
        let v = (phi.re / 2.0).sin();
        if v.abs() < 1e-12 {
            return Err(Error::FixedPlane { plane });
        }
        if v < 0.0 {
            s = -s;
        }
    }
    Ok(s)
}

/// `Os(J/k, o_N)` for integer rotation numbers, decided exactly:
/// `sin(πa/k) > 0` iff `a mod 2k ∈ (0, k)`.
pub fn os_sign_fraction(j: &RotationData, k: i64) -> Result<i32> {
    let mut s = j.orientation_sign;
    for (plane, a) in j.require_numbers()?.into_iter().enumerate() {
        let r = a.rem_euclid(2 * k);
        if r == 0 || r == k {
            return Err(Error::FixedPlane { plane });
        }
        if r > k {
            s = -s;
        }
    }
    Ok(s)
}

/// `ε(J/k, N)` for `J` with `exp(J/k) = ±1` on every plane.
pub fn epsilon_fraction(j: &RotationData, k: i64) -> Result<i32> {
    let a = j.require_numbers()?;
    let mut total = 0;
    for (plane, &x) in a.iter().enumerate() {
        if x % k != 0 {
            return Err(Error::Invalid(format!(
                "plane {plane}: rotation number {x} is not divisible by {k}"
            )));
        }
        if x == 0 {
            return Err(Error::ZeroRotation { plane });
        }
        total += x / k;
    }
    Ok(parity_sign(total))
}

/// `v(ζ, k; N, o_N) = ζ̂^k` where the lift `ζ̂` matches `o_N`.
///
/// With residues normalized to `1..k−1`, `ζ̂^k = (−1)^{Σ a}` for the plane
/// orientation; a reversed orientation multiplies by `(−1)^k`.
pub fn v_sign(zeta: &CyclicAction, orientation_sign: i32) -> Result<i32> {
    zeta.check_no_eigenvalue_one()?;
    let sum: i64 = zeta.residues.iter().map(|r| r.rem_euclid(zeta.k)).sum();
    let flip = if sign_of(orientation_sign) < 0 && !zeta.residues.is_empty() {
        parity_sign(zeta.k)
    } else {
        1
    };
    Ok(parity_sign(sum) * flip)
}
