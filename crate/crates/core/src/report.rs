//! Machine-readable outcomes of identity checks.

use serde::{Deserialize, Serialize};

/// Result of comparing two exact series coefficient by coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub label: String,
    pub truncation_order: usize,
    pub passed: bool,
    pub first_failing_exponent: Option<usize>,
}

/// A numeric trial whose residual exceeded the tolerance, or whose evaluation failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub descriptor: String,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_residual: f64,
    pub passed: bool,
    pub failures: Vec<TrialFailure>,
    pub exact: Vec<ExactCheck>,
}

impl IdentityReport {
    pub fn new(suite: &str, trials: usize, seed: u64, tol: f64) -> Self {
        Self {
            suite: suite.to_string(),
            trials,
            seed,
            tol,
            max_residual: 0.0,
            passed: true,
            failures: Vec::new(),
            exact: Vec::new(),
        }
    }

    pub fn push_exact(&mut self, check: ExactCheck) {
        self.passed &= check.passed;
        self.exact.push(check);
    }

    /// Records one numeric trial outcome, in trial order.
    pub fn push_trial(&mut self, trial: usize, descriptor: String, residual: Result<f64, String>) {
        match residual {
            Ok(r) => {
                if r > self.max_residual || r.is_nan() {
                    self.max_residual = if r.is_nan() { f64::INFINITY } else { r };
                }
                if !(r < self.tol) {
                    self.passed = false;
                    self.failures.push(TrialFailure {
                        trial,
                        descriptor,
                        residual: Some(r),
                    });
                }
            }
            Err(msg) => {
                self.passed = false;
                self.failures.push(TrialFailure {
                    trial,
                    descriptor: format!("{descriptor}: {msg}"),
                    residual: None,
                });
            }
        }
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_residual(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
