//! Numerical Meijer G-function evaluation for the argument classes the
//! product-distribution formulas require, together with the argument-shift
//! and inversion identities as testable transformations and the
//! large-argument limiting form.
//!
//! Three instance classes have dedicated evaluators:
//!
//! * [`eval_g_q0`] — `G^{q,0}_{0,q}(x | -; b)`, the density kernels;
//! * [`eval_g_cdf_class`] — `G^{q-1,1}_{1,q}(x | a1; b)` with `a1` in
//!   {1/2, 1}, the distribution-function kernels;
//! * [`eval_g_cf_class`] — `G^{q,1}_{1,q}(z | a1; b)` at complex arguments
//!   with |arg z| <= pi/2, the characteristic-function kernels.
//!
//! The primary path is Mellin-Barnes quadrature on a vertical line
//! ([`contour`]); the density class additionally has a residue-series path
//! ([`eval_g_q0_residue`]) used for tiny arguments and as an independent
//! cross-check, and hands off to [`g_asymptotic`] beyond the large-argument
//! crossover. All evaluation is pure; no shared mutable caches.

pub(crate) mod contour;
pub(crate) mod family;
mod residue;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use family::Gq0Family;

/// Default absolute tolerance for G evaluations; interpreted relative once
/// |value| exceeds 1.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Large-argument crossover: above x^(1/sigma) = 40 the limiting form is
/// used (the exponential factor is below relative tolerance of anything
/// downstream).
const ASYMPTOTIC_CROSSOVER: f64 = 40.0;

/// Below this argument the residue series replaces quadrature, which would
/// otherwise lose relative accuracy against the origin blow-up.
const RESIDUE_CROSSOVER: f64 = 1e-3;

/// The (m, n, p, q, a, b) data of a Meijer G-function instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Real evaluation outcome with an a-posteriori absolute error estimate.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
}

/// Complex evaluation outcome.
#[derive(Debug, Clone, Copy)]
pub struct EvalResultC {
    pub value: Complex64,
    pub abs_err: f64,
    pub converged: bool,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, p: usize, q: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > q || n > p || a.len() != p || b.len() != q {
            return Err(Error::UnsupportedShape { m, n, p, q });
        }
        Ok(MeijerGSpec { m, n, p, q, a, b })
    }

    /// `G^{q,0}_{0,q}(x | -; b)`.
    pub fn q0(b: Vec<f64>) -> Self {
        let q = b.len();
        MeijerGSpec {
            m: q,
            n: 0,
            p: 0,
            q,
            a: vec![],
            b,
        }
    }

    /// `G^{q-1,1}_{1,q}` with upper parameters `b_upper` and trailing
    /// denominator parameter `b_last`.
    pub fn cdf_class(a1: f64, b_upper: Vec<f64>, b_last: f64) -> Self {
        let mut b = b_upper;
        let m = b.len();
        b.push(b_last);
        MeijerGSpec {
            m,
            n: 1,
            p: 1,
            q: m + 1,
            a: vec![a1],
            b,
        }
    }

    /// `G^{q,1}_{1,q}(z | a1; b)`.
    pub fn cf_class(a1: f64, b: Vec<f64>) -> Self {
        let q = b.len();
        MeijerGSpec {
            m: q,
            n: 1,
            p: 1,
            q,
            a: vec![a1],
            b,
        }
    }

    /// Argument-shift identity: `x^alpha G(x | a; b) = G(x | a+alpha; b+alpha)`.
    pub fn shift_argument(&self, alpha: f64) -> Self {
        MeijerGSpec {
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
            a: self.a.iter().map(|v| v + alpha).collect(),
            b: self.b.iter().map(|v| v + alpha).collect(),
        }
    }

    /// Inversion identity: `G^{m,n}_{p,q}(x | a; b) = G^{n,m}_{q,p}(1/x | 1-b; 1-a)`.
    pub fn invert_argument(&self) -> Self {
        MeijerGSpec {
            m: self.n,
            n: self.m,
            p: self.q,
            q: self.p,
            a: self.b.iter().map(|v| 1.0 - v).collect(),
            b: self.a.iter().map(|v| 1.0 - v).collect(),
        }
    }

    fn line_spec(&self, x: Complex64) -> contour::LineSpec {
        contour::LineSpec {
            top_b: self.b[..self.m].to_vec(),
            top_a: self.a[..self.n].to_vec(),
            bot_a: self.a[self.n..].to_vec(),
            bot_b: self.b[self.m..].to_vec(),
            ln_x: x.ln(),
        }
    }
}

fn relax_relative(mut r: EvalResult, tol: f64) -> EvalResult {
    // tolerance is absolute for |value| <= 1, relative beyond
    if !r.converged && r.abs_err <= tol * r.value.abs() {
        r.converged = true;
    }
    r
}

/// Density-class evaluator `G^{q,0}_{0,q}(x | -; b)`, x > 0.
pub fn eval_g_q0(spec: &MeijerGSpec, x: f64, tol: f64) -> Result<EvalResult> {
    if !(spec.p == 0 && spec.n == 0 && spec.m == spec.q && spec.q >= 1) {
        return Err(Error::UnsupportedShape {
            m: spec.m,
            n: spec.n,
            p: spec.p,
            q: spec.q,
        });
    }
    if spec.b.iter().any(|&b| b <= -1.0) {
        return Err(Error::Domain(format!(
            "q0 class requires all b_j > -1, got {:?}",
            spec.b
        )));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("q0 class requires x > 0, got {x}")));
    }
    let sigma = spec.q as f64;
    let xr = x.powf(1.0 / sigma);
    if xr > ASYMPTOTIC_CROSSOVER {
        let value = g_asymptotic(spec, x)?;
        let abs_err = value.abs() * 5.0 / xr;
        return Ok(EvalResult {
            value,
            abs_err,
            converged: abs_err <= tol.max(value.abs() * 0.2),
        });
    }
    if x < RESIDUE_CROSSOVER {
        return eval_g_q0_residue(spec, x, tol);
    }
    let r = eval_g_q0_contour(spec, x, tol)?;
    if r.converged {
        return Ok(relax_relative(r, tol));
    }
    // quadrature missed the target: try the residue series and keep the
    // better estimate
    let alt = eval_g_q0_residue(spec, x, tol)?;
    Ok(relax_relative(
        if alt.abs_err < r.abs_err { alt } else { r },
        tol,
    ))
}

/// Quadrature path of the density class, exposed for cross-validation.
pub fn eval_g_q0_contour(spec: &MeijerGSpec, x: f64, tol: f64) -> Result<EvalResult> {
    let line = spec.line_spec(Complex64::new(x, 0.0));
    let r = contour::integrate_line(&line, tol)?;
    Ok(EvalResult {
        value: r.value.re,
        abs_err: r.abs_err + r.value.im.abs(),
        converged: r.converged,
    })
}

/// Residue-series path of the density class, exposed for cross-validation.
pub fn eval_g_q0_residue(spec: &MeijerGSpec, x: f64, tol: f64) -> Result<EvalResult> {
    let r = residue::eval_q0_residue(&spec.b, x, tol)?;
    Ok(EvalResult {
        value: r.value,
        abs_err: r.abs_err,
        converged: r.converged,
    })
}

/// Distribution-function kernel `G^{q-1,1}_{1,q}(x | a1; b)` for x >= 0,
/// with the value at x = 0 equal to 0 by the contour-integral convention.
///
/// For a1 = 1 with unit upper parameters the two pole families touch at the
/// integers; the line is placed strictly between 0 (the largest left-going
/// pole) and the smallest positive right-going pole, which fixes the
/// otherwise ambiguous contour.
pub fn eval_g_cdf_class(spec: &MeijerGSpec, x: f64, tol: f64) -> Result<EvalResult> {
    if !(spec.p == 1 && spec.n == 1 && spec.q >= 2 && spec.m == spec.q - 1) {
        return Err(Error::UnsupportedShape {
            m: spec.m,
            n: spec.n,
            p: spec.p,
            q: spec.q,
        });
    }
    let a1 = spec.a[0];
    if (a1 - 0.5).abs() > 1e-12 && (a1 - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "cdf class requires a1 in {{1/2, 1}}, got {a1}"
        )));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "cdf class requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(EvalResult {
            value: 0.0,
            abs_err: 0.0,
            converged: true,
        });
    }
    let line = spec.line_spec(Complex64::new(x, 0.0));
    let r = contour::integrate_line(&line, tol)?;
    Ok(relax_relative(
        EvalResult {
            value: r.value.re,
            abs_err: r.abs_err + r.value.im.abs(),
            converged: r.converged,
        },
        tol,
    ))
}

/// Characteristic-function kernel `G^{q,1}_{1,q}(z | a1; b)` for nonzero
/// complex z with |arg z| <= pi/2.
pub fn eval_g_cf_class(spec: &MeijerGSpec, z: Complex64, tol: f64) -> Result<EvalResultC> {
    if !(spec.p == 1 && spec.n == 1 && spec.m == spec.q && spec.q >= 1) {
        return Err(Error::UnsupportedShape {
            m: spec.m,
            n: spec.n,
            p: spec.p,
            q: spec.q,
        });
    }
    if z.norm() == 0.0 {
        return Err(Error::Domain("cf class requires z != 0".into()));
    }
    if z.arg().abs() > std::f64::consts::FRAC_PI_2 + 1e-12 {
        return Err(Error::Domain(format!(
            "cf class restricted to |arg z| <= pi/2, got arg = {}",
            z.arg()
        )));
    }
    let line = spec.line_spec(z);
    let r = contour::integrate_line(&line, tol)?;
    let mut converged = r.converged;
    if !converged && r.abs_err <= tol * r.value.norm() {
        converged = true;
    }
    Ok(EvalResultC {
        value: r.value,
        abs_err: r.abs_err,
        converged,
    })
}

/// Generic vertical-line evaluation for any shape whose pole families are
/// separable and whose line integral converges (delta > 0). Used by the
/// identity suites to evaluate inverted/mirrored instances.
pub fn eval_g_line(spec: &MeijerGSpec, z: Complex64, tol: f64) -> Result<EvalResultC> {
    let line = spec.line_spec(z);
    let r = contour::integrate_line(&line, tol)?;
    Ok(EvalResultC {
        value: r.value,
        abs_err: r.abs_err,
        converged: r.converged,
    })
}

/// Large-argument limiting form of `G^{q,0}_{p,q}`:
/// `(2 pi)^{(sigma-1)/2} sigma^{-1/2} x^theta exp(-sigma x^{1/sigma})` with
/// `sigma = q - p` and `theta = ((1 - sigma)/2 + sum b - sum a) / sigma`.
pub fn g_asymptotic(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    if !(spec.n == 0 && spec.m == spec.q && spec.p < spec.q) {
        return Err(Error::UnsupportedShape {
            m: spec.m,
            n: spec.n,
            p: spec.p,
            q: spec.q,
        });
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "asymptotic form requires x > 0, got {x}"
        )));
    }
    let sigma = (spec.q - spec.p) as f64;
    let sum_b: f64 = spec.b.iter().sum();
    let sum_a: f64 = spec.a.iter().sum();
    let theta = ((1.0 - sigma) / 2.0 + sum_b - sum_a) / sigma;
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(two_pi.powf(0.5 * (sigma - 1.0)) / sigma.sqrt()
        * x.powf(theta)
        * (-sigma * x.powf(1.0 / sigma)).exp())
}
