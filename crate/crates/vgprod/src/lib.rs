//! Products of independent variance-gamma random variables.
//!
//! The variance-gamma (VG) law with shape `m > -1/2`, scale `alpha > 0` and
//! skew `|beta| < alpha` has density
//!
//! ```text
//! f(x) = gamma^(2m+1) / (sqrt(pi) (2 alpha)^m Gamma(m+1/2))
//!        * exp(beta x) |x|^m K_m(alpha |x|),       gamma^2 = alpha^2 - beta^2,
//! ```
//!
//! where `K_m` is the modified Bessel function of the second kind. This crate
//! evaluates, for the product `Z = X_1 ... X_N` of independent VG factors,
//!
//! * the exact density, via Mellin-Barnes contour quadrature of Meijer
//!   G-functions ([`ProductSpec::pdf`](product::ProductSpec::pdf)),
//! * the distribution function, both in closed form for symmetric factors and
//!   numerically for the general case,
//! * the characteristic function for symmetric and half-integer-shape factors,
//! * the sign probability `P(Z <= 0)`,
//! * asymptotic approximations near the origin, in the tails and for extreme
//!   quantiles,
//! * the Laplace, normal-Laplace and correlated-normal special cases
//!   ([`special_cases`]),
//! * and independent brute-force verifiers (numeric convolution, Monte Carlo
//!   sampling, Fourier integration) in [`oracle`] that share no G-function
//!   code with the formula paths.
//!
//! Scalar special functions (complex log-gamma, `K_nu`, digamma, `2F1`) live
//! in [`specfun`]; the G-function evaluation kernels live in [`meijer`].
//!
//! Grid evaluation helpers in [`grid`] are data-parallel via rayon when the
//! default `parallel` feature is enabled; output ordering is deterministic
//! either way.

pub mod error;
pub mod grid;
pub mod meijer;
pub mod oracle;
pub mod product;
pub mod quad;
pub mod rng;
pub mod special_cases;
pub mod specfun;
pub mod validation;
pub mod vg;

pub use error::{Error, Result};
pub use meijer::{EvalResult, EvalResultC, MeijerGSpec};
pub use product::ProductSpec;
pub use vg::VgParams;
