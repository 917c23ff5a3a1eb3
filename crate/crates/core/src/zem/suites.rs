//! Randomized and exact verification of the identities between Z, EM and
//! the spinor χ functions.
//!
//! Each numeric trial draws its data from a ChaCha8 stream selected by the
//! trial index, so results do not depend on scheduling. Draws that land
//! within `1e-3` of a pole or zero of either side are redrawn.

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::{
    em_fun, em_with_j, half_period_exact, half_period_value, lattice_distance, sign_pow, z_formal_gamma, z_fun,
    z_product, z_tau, z_torsion_exact, z_via_characters, LatticeElement,
};
use crate::elliptic::{compare_series, phi_translate_check, EllipticParams, Translation};
use crate::error::{Error, Result};
use crate::qseries::SubstituteRule;
use crate::report::{relative_residual, ExactCheck, IdentityReport};
use crate::ring::{GaussianRational, RationalFunctionQi};
use crate::spinchar::{
    chi, epsilon_fraction, epsilon_j, j_factor, os_sign_fraction, pfaffian, v_sign, CyclicAction, RotationData,
};

/// Every suite, in the order `all` runs them.
pub const SUITES: [&str; 13] = [
    "translations",
    "jchi",
    "jeul",
    "K-transfer",
    "Z-periodicity",
    "order-k-trivial",
    "allW",
    "EM-welldef",
    "EM-periodicity",
    "elliptic-transfer",
    "spin-transfer",
    "spin-periodicity",
    "degenerate-reduction",
];

const MAX_ATTEMPTS: usize = 64;
const EXCLUSION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    /// Largest `dim N` drawn.
    pub max_dim: usize,
    /// p-order of the exact sub-checks.
    pub truncation_order: usize,
    pub exact: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            tol: 1e-8,
            max_dim: 8,
            truncation_order: 80,
            exact: true,
        }
    }
}

/// Runs several suites; `"all"` expands to [`SUITES`].
pub fn run_suites(names: &[&str], config: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    let mut expanded = Vec::new();
    for &n in names {
        if n == "all" {
            expanded.extend(SUITES);
        } else {
            expanded.push(n);
        }
    }
    expanded.into_iter().map(|n| identity_check(n, config)).collect()
}

pub fn identity_check(suite: &str, config: &SuiteConfig) -> Result<IdentityReport> {
    type Trial = fn(&mut Draw, &SuiteConfig) -> Result<(String, f64)>;
    let trial: Option<Trial> = match suite {
        "translations" => None,
        "jchi" => Some(jchi),
        "jeul" => Some(jeul),
        "K-transfer" => Some(k_transfer),
        "Z-periodicity" => Some(z_periodicity),
        "order-k-trivial" => Some(order_k_trivial),
        "allW" => Some(all_w),
        "EM-welldef" => Some(em_welldef),
        "EM-periodicity" => Some(em_periodicity),
        "elliptic-transfer" => Some(elliptic_transfer),
        "spin-transfer" => Some(spin_transfer),
        "spin-periodicity" => Some(spin_periodicity),
        "degenerate-reduction" => Some(degenerate_reduction),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let mut report = IdentityReport::new(suite, config.trials, config.seed, config.tol);
    if let Some(trial) = trial {
        let outcomes = with_pool(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(trial, config, t))
                .collect::<Vec<_>>()
        });
        for (t, (descriptor, residual)) in outcomes.into_iter().enumerate() {
            report.push_trial(t, descriptor, residual);
        }
    } else {
        report.trials = 0;
    }
    if config.exact {
        for check in with_pool(|| exact_checks(suite, config))? {
            report.push_exact(check);
        }
    }
    Ok(report)
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("ELLIPTICA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::Pole { .. }
            | Error::LatticeCollision { .. }
            | Error::VanishingFactor { .. }
            | Error::FixedPlane { .. }
            | Error::BranchPoint { .. }
            | Error::DegenerateDraw(_)
    )
}

fn run_trial(
    trial: fn(&mut Draw, &SuiteConfig) -> Result<(String, f64)>,
    config: &SuiteConfig,
    index: usize,
) -> (String, std::result::Result<f64, String>) {
    let mut draw = Draw::new(config.seed, index);
    for _ in 0..MAX_ATTEMPTS {
        match trial(&mut draw, config) {
            Ok((d, r)) => return (d, Ok(r)),
            Err(e) if retryable(&e) => continue,
            Err(e) => return (format!("trial {index}"), Err(e.to_string())),
        }
    }
    (
        format!("trial {index}"),
        Err(Error::DegenerateDraw(MAX_ATTEMPTS).to_string()),
    )
}

/// Source of random parameters for one trial.
struct Draw {
    rng: ChaCha8Rng,
}

impl Draw {
    fn new(seed: u64, trial: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        Self { rng }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    fn sign(&mut self) -> i32 {
        if self.rng.gen::<bool>() {
            1
        } else {
            -1
        }
    }

    /// `±(x + iy)` with `x ∈ [0.1, 3]`, `y ∈ [−0.2, 0.2]`.
    fn angle(&mut self) -> Complex64 {
        let z = Complex64::new(self.uniform(0.1, 3.0), self.uniform(-0.2, 0.2));
        z * self.sign() as f64
    }

    fn angles(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.angle()).collect()
    }

    fn small(&mut self) -> Complex64 {
        Complex64::new(self.uniform(-0.1, 0.1), self.uniform(-0.1, 0.1))
    }

    fn params(&mut self) -> EllipticParams {
        let tau = Complex64::new(self.uniform(-0.5, 0.5), self.uniform(0.5, 2.0));
        EllipticParams::new(tau).expect("Im τ > 0")
    }

    fn planes(&mut self, lo: usize, config: &SuiteConfig) -> usize {
        let hi = (config.max_dim / 2).max(lo);
        self.rng.gen_range(lo..=hi)
    }

    /// `(α, β)` in `[0, k)²` with `gcd(α, β, k) = 1`.
    fn torsion(&mut self, k: i64) -> (i64, i64) {
        loop {
            let (a, b) = (self.int(0, k - 1), self.int(0, k - 1));
            if a.gcd(&b).gcd(&k) == 1 {
                return (a, b);
            }
        }
    }

    fn nonzero(&mut self, bound: i64) -> i64 {
        let v = self.int(1, bound);
        v * self.sign() as i64
    }
}

fn reject() -> Error {
    Error::DegenerateDraw(0)
}

/// Rejects arguments within the exclusion radius of the half-lattice, where
/// every Φ_i and every spinor factor has its zeros and poles.
fn guard(w: Complex64, tau: Complex64) -> Result<()> {
    if lattice_distance(2.0 * w, tau) < 2.0 * EXCLUSION {
        return Err(reject());
    }
    Ok(())
}

fn guard_all(x: &RotationData, tau: Complex64) -> Result<()> {
    for phi in x.angle_list() {
        guard(phi / (2.0 * PI), tau)?;
    }
    Ok(())
}

/// Guards every Φ₁ argument `aγ + φ_a/2π` of `Z(γ, J)(R)`.
fn guard_z(gamma: Complex64, j: &[i64], r: &RotationData, tau: Complex64) -> Result<()> {
    for (idx, &a) in j.iter().enumerate() {
        guard(a as f64 * gamma + r.angle(idx) / (2.0 * PI), tau)?;
    }
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn fmt_list(v: &[Complex64]) -> String {
    let items: Vec<String> = v.iter().map(|z| fmt_c(*z)).collect();
    format!("[{}]", items.join(", "))
}

/// The orientation of a zero space enters as a bare sign.
fn empty_sign(planes: usize, orientation: i32) -> i32 {
    if planes == 0 {
        orientation
    } else {
        1
    }
}

fn max_residual(pairs: &[(Complex64, Complex64)]) -> f64 {
    pairs
        .iter()
        .map(|&(a, b)| relative_residual(a, b))
        .fold(0.0, f64::max)
}

fn minus_i_pow(d: usize) -> Complex64 {
    Complex64::new(0.0, -1.0).powi(d as i32)
}

fn jchi(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let d = draw.planes(0, config);
    let sigma = draw.sign();
    let r = RotationData::angles(&draw.angles(d), sigma);
    let lhs = j_factor(&r)? / pfaffian(&r);
    let rhs = minus_i_pow(d) * chi(None, &r)?;
    Ok((format!("R={} ν={sigma}", fmt_list(&r.angle_list())), relative_residual(lhs, rhs)))
}

fn near_integer(w: Complex64) -> bool {
    (w.re - w.re.round()).abs() < EXCLUSION && w.im.abs() < EXCLUSION
}

fn jeul(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let d = draw.planes(0, config);
    let sigma = draw.sign();
    let y = RotationData::angles(&draw.angles(d), sigma);
    let r = RotationData::angles(&draw.angles(d), sigma);
    let yr = y.plus(&r)?;
    if yr.angle_list().iter().any(|phi| near_integer(phi / (2.0 * PI))) {
        return Err(reject());
    }
    let lhs = j_factor(&yr)? / pfaffian(&yr);
    let rhs = minus_i_pow(d) * chi(Some(&y), &r)?;
    Ok((
        format!("Y={} R={} ν={sigma}", fmt_list(&y.angle_list()), fmt_list(&r.angle_list())),
        relative_residual(lhs, rhs),
    ))
}

fn k_transfer(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let total = draw.planes(1, config);
    let d0 = draw.rng.gen_range(0..=total);
    let d1 = total - d0;
    let (s, s0, s1) = (draw.sign(), draw.sign(), draw.sign());
    let y0 = draw.angles(d0);
    let y1 = draw.angles(d1);
    let g1 = draw.angles(d1);
    let r = draw.angles(total);
    let n0_arg = RotationData::angles(&y0, s0).plus(&RotationData::angles(&r[..d0], s0))?;
    let n1_arg = RotationData::angles(&y1, s1).plus(&RotationData::angles(&r[d0..], s1))?;
    let g1_data = RotationData::angles(&g1, s1);
    let mut gy: Vec<Complex64> = y0.clone();
    gy.extend(g1.iter().zip(&y1).map(|(g, y)| g + y));
    let gy = RotationData::angles(&gy, s);
    let r_all = RotationData::angles(&r, s);
    guard_all(&n0_arg, Complex64::new(0.0, 1.0))?;
    guard_all(&n1_arg.plus(&g1_data)?, Complex64::new(0.0, 1.0))?;
    let lhs = chi(None, &n0_arg)? * chi(Some(&g1_data), &n1_arg)? * (empty_sign(d0, s0) * empty_sign(d1, s1)) as f64;
    let rhs = chi(Some(&gy), &r_all)? * (s * s0 * s1) as f64;
    Ok((
        format!(
            "Y0={} Y1={} g1={} R={} o=({s},{s0},{s1})",
            fmt_list(&y0),
            fmt_list(&y1),
            fmt_list(&g1),
            fmt_list(&r)
        ),
        relative_residual(lhs, rhs),
    ))
}

fn z_periodicity(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let tau = params.tau;
    let d = draw.planes(1, config);
    let sigma = draw.sign();
    let a: Vec<i64> = (0..d).map(|_| draw.nonzero(4)).collect();
    let j = RotationData::numbers(&a, sigma);
    let r = RotationData::angles(&draw.angles(d), sigma);
    let g = Complex64::new(draw.uniform(-0.5, 0.5), draw.uniform(-0.3, 0.3));
    let y = draw.small();
    let gamma = LatticeElement::Free(g);
    guard_z(g, &a, &r, tau)?;
    guard_z(g + y, &a, &r, tau)?;
    let eps = epsilon_j(&j)? as f64;
    let z = z_fun(&gamma, &j, &r, &params)?;
    let yj_r = j.flow(y).plus(&r)?;
    let shifted = z_fun(&gamma, &j, &yj_r, &params)?;
    let moved = z_fun(&LatticeElement::Free(g + y), &j, &r, &params)?;
    let plus_one = z_fun(&gamma.shift_one(), &j, &r, &params)?;
    let plus_tau = z_fun(&gamma.shift_tau(tau), &j, &r, &params)?;
    let by_definition = z_via_characters(&gamma, &j, &r, &params)?;
    let res = max_residual(&[
        (shifted, moved),
        (plus_one, eps * z),
        (plus_tau, eps * z),
        (z, by_definition),
    ]);
    Ok((
        format!("τ={} γ={} y={} J={a:?} ν={sigma} R={}", fmt_c(tau), fmt_c(g), fmt_c(y), fmt_list(&r.angle_list())),
        res,
    ))
}

fn order_k_trivial(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let k = draw.int(1, 6);
    let d = draw.planes(1, config);
    let sigma = draw.sign();
    let a: Vec<i64> = (0..d).map(|_| k * draw.nonzero(2)).collect();
    let j = RotationData::numbers(&a, sigma);
    let r = RotationData::angles(&draw.angles(d), sigma);
    let (alpha, beta) = (draw.int(-k, k), draw.int(-k, k));
    let gamma = LatticeElement::Torsion { alpha, beta, k };
    guard_z(gamma.value(params.tau), &a, &r, params.tau)?;
    let lhs = z_product(&gamma, &j, &r, &params)?;
    let rhs = sign_pow(epsilon_fraction(&j, k)?, alpha + beta) as f64 * z_tau(&r, &params)?;
    Ok((
        format!("τ={} γ=({alpha}+{beta}τ)/{k} J={a:?} ν={sigma}", fmt_c(params.tau)),
        relative_residual(lhs, rhs),
    ))
}

/// Parities cycle with the trial so that every case of the half-period
/// formulas is drawn equally often.
fn all_w(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let k = [2, 4, 6][draw.int(0, 2) as usize];
    let case = draw.int(0, 3);
    let (pa, pb) = (case % 2, case / 2);
    let alpha = 2 * draw.int(-k / 2, k / 2) + pa;
    let beta = 2 * draw.int(-k / 2, k / 2) + pb;
    let d = draw.planes(1, config);
    let sigma = draw.sign();
    let a: Vec<i64> = (0..d).map(|_| k / 2 + k * draw.int(-1, 1)).collect();
    let j = RotationData::numbers(&a, sigma);
    let r = RotationData::angles(&draw.angles(d), sigma);
    let gamma = LatticeElement::Torsion { alpha, beta, k };
    guard_z(gamma.value(params.tau), &a, &r, params.tau)?;
    guard_all(&r, params.tau)?;
    let lhs = z_product(&gamma, &j, &r, &params)?;
    let os = sign_pow(os_sign_fraction(&j, k)?, alpha + beta) as f64;
    let rhs = os * half_period_value(alpha, beta, &r, &params)?;
    Ok((
        format!("τ={} γ=({alpha}+{beta}τ)/{k} J={a:?} ν={sigma}", fmt_c(params.tau)),
        relative_residual(lhs, rhs),
    ))
}

/// Residues of `ζ` avoiding `0` and, unless `allow_half`, `k/2`.
fn draw_residues(draw: &mut Draw, k: i64, d: usize, allow_half: bool) -> Result<Vec<i64>> {
    let choices: Vec<i64> = (1..k).filter(|&r| allow_half || 2 * r != k).collect();
    if choices.is_empty() {
        return Err(reject());
    }
    Ok((0..d)
        .map(|_| choices[draw.rng.gen_range(0..choices.len())])
        .collect())
}

fn em_welldef(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let k = draw.int(3, 6);
    let (alpha, beta) = draw.torsion(k);
    let gamma = LatticeElement::torsion(alpha, beta, k)?;
    let d = draw.planes(1, config);
    let sigma = draw.sign();
    let res = draw_residues(draw, k, d, true)?;
    let r = RotationData::angles(&draw.angles(d), sigma);
    let zeta = CyclicAction::new(k, res.clone())?;
    let g = gamma.value(params.tau);

    // two adapted K on the part without eigenvalue −1
    let good: Vec<usize> = (0..d).filter(|&u| 2 * res[u] != k).collect();
    let k1: Vec<i64> = good.iter().map(|&u| res[u]).collect();
    let k2: Vec<i64> = k1.iter().map(|&x| x + k * draw.nonzero(1)).collect();
    let rg = RotationData::angles(&good.iter().map(|&u| r.angle(u)).collect::<Vec<_>>(), sigma);
    guard_z(g, &k1, &rg, params.tau)?;
    let em_k1 = em_with_j(&gamma, &RotationData::numbers(&k1, sigma), &rg, &params)?;
    let em_k2 = em_with_j(&gamma, &RotationData::numbers(&k2, sigma), &rg, &params)?;

    // two J over ζ on all of N, through the character definition of Z
    let j1: Vec<i64> = res.iter().map(|&x| x + k * draw.int(-1, 1)).collect();
    let j2: Vec<i64> = res.iter().map(|&x| x + k * draw.int(-1, 1)).collect();
    guard_z(g, &j1, &r, params.tau)?;
    guard_z(g, &j2, &r, params.tau)?;
    guard_all(&r, params.tau)?;
    let em = em_fun(&gamma, &zeta, &r, &params)?;
    let via = |j: &[i64]| -> Result<Complex64> {
        let jr = RotationData::numbers(j, sigma);
        let os = sign_pow(os_sign_fraction(&jr, k)?, alpha + beta) as f64;
        Ok(os * z_via_characters(&gamma, &jr, &r, &params)?)
    };
    let (v1, v2) = (via(&j1)?, via(&j2)?);
    Ok((
        format!(
            "τ={} γ=({alpha}+{beta}τ)/{k} ζ={res:?} K'={k2:?} J1={j1:?} J2={j2:?} ν={sigma}",
            fmt_c(params.tau)
        ),
        max_residual(&[(em_k1, em_k2), (v1, em), (v2, em)]),
    ))
}

fn em_periodicity(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let k = draw.int(2, 6);
    let (alpha, beta) = draw.torsion(k);
    let gamma = LatticeElement::torsion(alpha, beta, k)?;
    let d = draw.planes(1, config);
    let sigma = draw.sign();
    let res = draw_residues(draw, k, d, true)?;
    let r = RotationData::angles(&draw.angles(d), sigma);
    let zeta = CyclicAction::new(k, res.clone())?;
    guard_z(gamma.value(params.tau), &res, &r, params.tau)?;
    guard_all(&r, params.tau)?;
    let v = v_sign(&zeta, sigma)? as f64;
    let em = em_fun(&gamma, &zeta, &r, &params)?;
    let one = em_fun(&gamma.shift_one(), &zeta, &r, &params)?;
    let tau = em_fun(&gamma.shift_tau(params.tau), &zeta, &r, &params)?;
    Ok((
        format!("τ={} γ=({alpha}+{beta}τ)/{k} ζ={res:?} ν={sigma} v={v}", fmt_c(params.tau)),
        max_residual(&[(one, v * em), (tau, v * em)]),
    ))
}

/// Data of one transfer-formula draw: `N = N₀ ⊕ N₁` with `exp(J/k)` trivial
/// on `N₀` and without eigenvalue 1 on `N₁`.
struct TransferDraw {
    params: EllipticParams,
    k: i64,
    alpha: i64,
    beta: i64,
    j0: Vec<i64>,
    j1: Vec<i64>,
    r: Vec<Complex64>,
    y: Complex64,
}

impl TransferDraw {
    fn draw(draw: &mut Draw, config: &SuiteConfig, beta_zero: bool) -> Result<Self> {
        let params = draw.params();
        let k = draw.int(1, 6);
        let (alpha, beta) = if beta_zero {
            let alpha = loop {
                let a = draw.int(0, k - 1);
                if a.gcd(&k) == 1 {
                    break a;
                }
            };
            (alpha, 0)
        } else {
            draw.torsion(k)
        };
        let total = draw.planes(1, config);
        let d0 = if k == 1 { total } else { draw.rng.gen_range(0..=total) };
        let j0: Vec<i64> = (0..d0).map(|_| k * draw.nonzero(1)).collect();
        let res = draw_residues(draw, k, total - d0, true)?;
        let j1: Vec<i64> = res.iter().map(|&x| x + k * draw.int(-1, 0)).collect();
        let r = draw.angles(total);
        let y = draw.small();
        Ok(Self {
            params,
            k,
            alpha,
            beta,
            j0,
            j1,
            r,
            y,
        })
    }

    fn gamma(&self) -> LatticeElement {
        LatticeElement::Torsion {
            alpha: self.alpha,
            beta: self.beta,
            k: self.k,
        }
    }

    fn j(&self) -> Vec<i64> {
        let mut j = self.j0.clone();
        j.extend(&self.j1);
        j
    }

    fn d0(&self) -> usize {
        self.j0.len()
    }

    /// `yJ₀ + R₀` and `yJ₁ + R₁`, oriented by `s0` and `s1`.
    fn arguments(&self, s0: i32, s1: i32) -> Result<(RotationData, RotationData)> {
        let x0 = RotationData::numbers(&self.j0, s0)
            .flow(self.y)
            .plus(&RotationData::angles(&self.r[..self.d0()], s0))?;
        let x1 = RotationData::numbers(&self.j1, s1)
            .flow(self.y)
            .plus(&RotationData::angles(&self.r[self.d0()..], s1))?;
        Ok((x0, x1))
    }

    fn guard(&self) -> Result<()> {
        let tau = self.params.tau;
        let g = self.gamma().value(tau);
        let r = RotationData::angles(&self.r, 1);
        guard_z(g + self.y, &self.j(), &r, tau)?;
        let (x0, _) = self.arguments(1, 1)?;
        guard_all(&x0, tau)?;
        // EM on N₁ evaluates Φ₁(aγ + x/2π) and, on the −1 eigenspace, the
        // half-period functions at x/2π.
        let x1 = RotationData::numbers(&self.j1, 1)
            .flow(self.y)
            .plus(&RotationData::angles(&self.r[self.d0()..], 1))?;
        guard_all(&x1, tau)?;
        guard_z(g, &self.j1, &x1, tau)
    }

    /// `Z(τ, N₀)(yJ₀+R₀)·EM(γ, ζ₁; N₁)(yJ₁+R₁)`.
    fn lhs(&self, s0: i32, s1: i32, params: &EllipticParams) -> Result<Complex64> {
        let (x0, x1) = self.arguments(s0, s1)?;
        let zeta = CyclicAction::new(self.k, self.j1.clone())?;
        // EM of a zero space is Os^{α+β}·Z = o^{α+β+1}
        let n = self.alpha + self.beta;
        let empty = empty_sign(self.j0.len(), s0) * sign_pow(empty_sign(self.j1.len(), s1), n + 1);
        Ok(z_tau(&x0, params)? * em_fun(&self.gamma(), &zeta, &x1, params)? * empty as f64)
    }

    /// `Z(γ + y, J; N)(R)`.
    fn rhs(&self, sigma: i32) -> Result<Complex64> {
        let g = self.gamma().value(self.params.tau) + self.y;
        z_fun(
            &LatticeElement::Free(g),
            &RotationData::numbers(&self.j(), sigma),
            &RotationData::angles(&self.r, sigma),
            &self.params,
        )
    }

    fn describe(&self, orient: &str) -> String {
        format!(
            "τ={} γ=({}+{}τ)/{} J0={:?} J1={:?} y={} R={} {orient}",
            fmt_c(self.params.tau),
            self.alpha,
            self.beta,
            self.k,
            self.j0,
            self.j1,
            fmt_c(self.y),
            fmt_list(&self.r)
        )
    }

    fn os1(&self, s1: i32) -> Result<i32> {
        let os = os_sign_fraction(&RotationData::numbers(&self.j1, s1), self.k)?;
        Ok(os * empty_sign(self.j1.len(), s1))
    }

    fn eps0(&self) -> Result<i32> {
        epsilon_fraction(&RotationData::numbers(&self.j0, 1), self.k)
    }
}

fn elliptic_transfer(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let t = TransferDraw::draw(draw, config, false)?;
    let (s, s0, s1) = (draw.sign(), draw.sign(), draw.sign());
    t.guard()?;
    let n = t.alpha + t.beta;
    let eps = sign_pow(t.os1(s1)?, n) * sign_pow(t.eps0()?, n) * s * s0 * s1;
    let lhs = t.lhs(s0, s1, &t.params)?;
    let rhs = eps as f64 * t.rhs(s)?;
    Ok((t.describe(&format!("o=({s},{s0},{s1}) ε={eps}")), relative_residual(lhs, rhs)))
}

fn spin_transfer(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let t = TransferDraw::draw(draw, config, false)?;
    let j = t.j();
    if j.iter().sum::<i64>().rem_euclid(2) != 0 {
        return Err(reject());
    }
    t.guard()?;
    // o_N from J, o_{N₁} from the lift of ζ, o_{N₀} = o_N / o_{N₁}
    let s: i32 = j.iter().map(|&a| a.signum() as i32).product();
    let eps0 = t.eps0()?;
    let s1 = eps0 * t.os1(1)?;
    let s0 = s * s1;
    let sign_identity = t.os1(s1)? * eps0;
    let lhs = t.lhs(s0, s1, &t.params)?;
    let rhs = t.rhs(s)?;
    let descriptor = t.describe(&format!("o=({s},{s0},{s1})"));
    if sign_identity != 1 {
        return Ok((format!("{descriptor}: Os(J1/k)·ε(J0/k) = {sign_identity}"), f64::INFINITY));
    }
    Ok((descriptor, relative_residual(lhs, rhs)))
}

fn spin_periodicity(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let params = draw.params();
    let k = draw.int(2, 6);
    let (alpha, beta) = draw.torsion(k);
    let gamma = LatticeElement::torsion(alpha, beta, k)?;
    let d = draw.planes(1, config);
    let res = draw_residues(draw, k, d, true)?;
    if res.iter().sum::<i64>() % 2 != 0 {
        return Err(reject());
    }
    let r = RotationData::angles(&draw.angles(d), 1);
    let zeta = CyclicAction::new(k, res.clone())?;
    guard_z(gamma.value(params.tau), &res, &r, params.tau)?;
    guard_all(&r, params.tau)?;
    let v = v_sign(&zeta, 1)?;
    if v != 1 {
        return Ok((format!("ζ={res:?}: spin lift has v = {v}"), f64::INFINITY));
    }
    let em = em_fun(&gamma, &zeta, &r, &params)?;
    let one = em_fun(&gamma.shift_one(), &zeta, &r, &params)?;
    let tau = em_fun(&gamma.shift_tau(params.tau), &zeta, &r, &params)?;
    Ok((
        format!("τ={} γ=({alpha}+{beta}τ)/{k} ζ={res:?}", fmt_c(params.tau)),
        max_residual(&[(one, em), (tau, em)]),
    ))
}

/// At `q = 0` with `β = 0`, the elliptic transfer formula becomes the
/// spinor transfer formula with `g = exp(γJ₁)`.
fn degenerate_reduction(draw: &mut Draw, config: &SuiteConfig) -> Result<(String, f64)> {
    let t = TransferDraw::draw(draw, config, true)?;
    let (s, s0, s1) = (draw.sign(), draw.sign(), draw.sign());
    t.guard()?;
    let q0 = EllipticParams::constant_term();
    let lhs = t.lhs(s0, s1, &q0)?;
    let (x0, x1) = t.arguments(s0, s1)?;
    let g = t.gamma().value(t.params.tau);
    let g1 = RotationData::numbers(&t.j1, s1).flow(g);
    let os = sign_pow(t.os1(s1)?, t.alpha) as f64;
    let empty = empty_sign(t.j0.len(), s0) * empty_sign(t.j1.len(), s1);
    let k_lhs = chi(None, &x0)? * chi(Some(&g1), &x1)? * empty as f64;
    // χ(g·e^{yJ}; N)(R) with g trivial on N₀
    let mut gy = RotationData::numbers(&t.j0, s).flow(t.y).angle_list();
    gy.extend(RotationData::numbers(&t.j1, s).flow(g + t.y).angle_list());
    let k_rhs = chi(Some(&RotationData::angles(&gy, s)), &RotationData::angles(&t.r, s))? * (s * s0 * s1) as f64;
    Ok((
        t.describe(&format!("o=({s},{s0},{s1})")),
        max_residual(&[(lhs, os * k_lhs), (lhs, os * k_rhs)]),
    ))
}

fn par_checks<T: Sync>(
    cases: &[T],
    f: impl Fn(&T) -> Result<Vec<ExactCheck>> + Sync + Send,
) -> Result<Vec<ExactCheck>> {
    let parts = cases.par_iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn exact_checks(suite: &str, config: &SuiteConfig) -> Result<Vec<ExactCheck>> {
    let order = config.truncation_order;
    match suite {
        "translations" => {
            let params = EllipticParams::default().with_truncation_order(order);
            par_checks(&Translation::ALL, |&t| Ok(phi_translate_check(t, &params)?.exact))
        }
        "Z-periodicity" => {
            let cases = [(vec![1], 1), (vec![-2], 1), (vec![1, 2], -1), (vec![2, -1], 1)];
            par_checks(&cases, |(a, sigma)| {
                let j = RotationData::numbers(a, *sigma);
                let eps: GaussianRational = epsilon_j(&j)?.into();
                let z = z_formal_gamma(&j)?;
                let base = z.expand(order)?;
                let expected = base.scale(&RationalFunctionQi::constant(eps));
                let one = base.substitute(SubstituteRule::NegS)?;
                let tau = z.substitute(&GaussianRational::one(), 2, 1)?.expand(order)?;
                Ok(vec![
                    compare_series(&format!("Z(γ+1) J={a:?} ν={sigma}"), &one, &expected),
                    compare_series(&format!("Z(γ+τ) J={a:?} ν={sigma}"), &tau, &expected),
                ])
            })
        }
        "allW" => {
            let b = [1, 2];
            let j = RotationData::numbers(&[1, -1], 1);
            let os = os_sign_fraction(&j, 2)?;
            let mut out = par_checks(&[(0, 2), (1, 0), (0, 1), (1, 1)], |&(alpha, beta)| {
                let gamma = LatticeElement::Torsion { alpha, beta, k: 2 };
                let lhs = z_torsion_exact(&gamma, &j, &b)?.expand(order)?;
                let rhs = half_period_exact(alpha, beta, &b, 1)?
                    .scale(&sign_pow(os, alpha + beta).into())
                    .expand(order)?;
                let label = format!("k=2 (α,β)=({alpha},{beta}) J=[1,-1] B={b:?}");
                Ok(vec![compare_series(&label, &lhs, &rhs)])
            })?;
            out.extend(par_checks(&[1usize, 2], |&d| {
                let b: Vec<i64> = (1..=d as i64).collect();
                let s = half_period_exact(0, 1, &b, 1)?.expand(order)?;
                let divisible = s.valuation().map_or(true, |v| v >= d);
                Ok(vec![ExactCheck {
                    label: format!("β odd: divisible by p^{d} for dim N = {}", 2 * d),
                    truncation_order: order,
                    passed: divisible,
                    first_failing_exponent: if divisible { None } else { s.valuation() },
                }])
            })?);
            Ok(out)
        }
        "spin-periodicity" => {
            let j = RotationData::numbers(&[1, 1], 1);
            let os = os_sign_fraction(&j, 2)?;
            let em = |al: i64, be: i64, b: &[i64]| -> Result<_> {
                let g = LatticeElement::Torsion { alpha: al, beta: be, k: 2 };
                z_torsion_exact(&g, &j, b)?
                    .scale(&sign_pow(os, al + be).into())
                    .expand(order)
            };
            let cases = [(1, 0, [1, 2]), (0, 1, [1, -1]), (1, 1, [2, 1])];
            par_checks(&cases, |&(alpha, beta, b)| {
                let base = em(alpha, beta, &b)?;
                let label = format!("EM k=2 ζ=[1,1] (α,β)=({alpha},{beta}) B={b:?}");
                Ok(vec![
                    compare_series(&format!("{label} γ+1"), &em(alpha + 2, beta, &b)?, &base),
                    compare_series(&format!("{label} γ+τ"), &em(alpha, beta + 2, &b)?, &base),
                ])
            })
        }
        _ => Ok(Vec::new()),
    }
}
