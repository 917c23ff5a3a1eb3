//! Exact and floating-point invariant functions for elliptic genera.
//!
//! The crate is layered bottom-up:
//!
//! * [`ring`]: exact arithmetic over Q(i) and Q(i)(s);
//! * [`qseries`]: truncated series in `p = q^{1/4}`;
//! * [`elliptic`]: the theta quotients Φ₁..Φ₄ and their lattice translations;
//! * [`spinchar`]: rotation data, spinor (super)traces and sign conventions;
//! * [`witten`]: characters of the Witten series W₁..W₄;
//! * [`zem`]: the functions Z, EM and the identity suites relating them;
//! * [`fixedpoint`]: equivariant indices and rigidity at isolated fixed points.

pub mod elliptic;
pub mod error;
pub mod fixedpoint;
pub mod qseries;
pub mod report;
pub mod ring;
pub mod spinchar;
pub mod witten;
pub mod zem;

pub use error::{Error, Result};
