//! Scalar special functions underpinning every formula in the crate:
//! complex log-gamma, digamma/polygamma, the modified Bessel function of the
//! second kind, and the Gauss hypergeometric function.
//!
//! All functions are pure and safe for concurrent use.

mod bessel;
mod gamma;
mod hyp2f1;

pub use bessel::{bessel_k, bessel_k_scaled};
pub use gamma::{
    digamma, digamma_complex, gamma_fn, lgamma, lgamma_sign, log_gamma, polygamma, zeta_int,
};
pub use hyp2f1::gauss_2f1;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
