use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero {0}")]
    DivisionByZero(&'static str),

    #[error("evaluation at a pole of {what} (denominator magnitude {magnitude:e})")]
    Pole { what: String, magnitude: f64 },

    #[error("series constant term is not invertible")]
    NotInvertible,

    #[error("substitution not representable at p^{exponent}: coefficient {coefficient} ({reason})")]
    Unrepresentable {
        exponent: usize,
        coefficient: String,
        reason: &'static str,
    },

    #[error("theta product has a negative leading p-exponent {0}")]
    NegativeValuation(i64),

    #[error("zero rotation number in plane {plane}")]
    ZeroRotation { plane: usize },

    #[error("angle of plane {plane} lies in 2πZ, orientation of exp undefined")]
    FixedPlane { plane: usize },

    #[error("angle of plane {plane} is a branch point of j^(-1/2)")]
    BranchPoint { plane: usize },

    #[error("residue of plane {plane} is {residue} mod {k}: ζ has eigenvalue {eigenvalue}")]
    BadEigenvalue {
        plane: usize,
        residue: i64,
        k: i64,
        eigenvalue: i8,
    },

    #[error("a·γ lies in the lattice for rotation number {a}")]
    LatticeCollision { a: i64 },

    #[error("vanishing denominator factor at n = {n} in the {what}")]
    VanishingFactor { what: String, n: usize },

    #[error("α and β both even: γ = ({alpha}+{beta}τ)/{k} does not have exact even order {k}")]
    BothEven { alpha: i64, beta: i64, k: i64 },

    #[error("unknown identity suite `{0}`")]
    UnknownSuite(String),

    #[error("no admissible random draw after {0} attempts")]
    DegenerateDraw(usize),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("γ has order {k}, a special order of this manifold {orders:?}; use the transfer suites (verify --suite spin-transfer)")]
    SpecialPoint { k: i64, orders: Vec<i64> },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
