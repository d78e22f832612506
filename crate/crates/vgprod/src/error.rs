//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside a function's documented domain. The message names the
    /// violated invariant, e.g. `"0 <= |beta| < alpha"`.
    Domain(String),
    /// Gamma-family pole: argument is a nonpositive integer (within 1e-14).
    GammaPole { z: f64 },
    /// The density has a non-removable singularity at the origin (m <= 0).
    OriginSingularity { m_min: f64 },
    /// Meijer G instance outside the supported evaluation classes.
    UnsupportedShape {
        m: usize,
        n: usize,
        p: usize,
        q: usize,
    },
    /// The contour cannot be placed between the two pole families.
    ContourPlacement { lo: f64, hi: f64 },
    /// Series, quadrature or continued fraction failed to reach the requested
    /// tolerance within its iteration budget.
    NonConvergence { achieved: f64, requested: f64 },
    /// Root bracketing for the quantile solver failed.
    BracketFailure { p: f64 },
    /// Subset enumeration is exponential in the factor count; hard cap.
    TooManyFactors { n: usize, max: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::GammaPole { z } => write!(f, "gamma pole at z = {z}"),
            Error::OriginSingularity { m_min } => write!(
                f,
                "density is singular at 0 for shape m = {m_min} <= 0; \
                 use the origin asymptotic instead"
            ),
            Error::UnsupportedShape { m, n, p, q } => {
                write!(f, "unsupported Meijer G shape G^{{{m},{n}}}_{{{p},{q}}}")
            }
            Error::ContourPlacement { lo, hi } => write!(
                f,
                "no contour abscissa separates the pole families ({lo}, {hi})"
            ),
            Error::NonConvergence {
                achieved,
                requested,
            } => write!(
                f,
                "did not converge: error estimate {achieved:.3e} > requested {requested:.3e}"
            ),
            Error::BracketFailure { p } => write!(f, "failed to bracket quantile at p = {p}"),
            Error::TooManyFactors { n, max } => {
                write!(f, "subset enumeration limited to {max} factors, got {n}")
            }
        }
    }
}

impl std::error::Error for Error {}
