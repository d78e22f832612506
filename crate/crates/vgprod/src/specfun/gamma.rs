//! Gamma-family functions: principal-branch complex log-gamma, real
//! log-gamma with sign, digamma (real and complex), polygamma of arbitrary
//! order and the integer-argument zeta values used by residue expansions.
//!
//! The workhorse is the Stirling series with Bernoulli coefficients after
//! recurrence shifting to |z| >= 10; arguments left of Re z = 1/2 go through
//! the reflection formula with a log-sin evaluated so that the result stays
//! on the principal branch (continuous from the upper half-plane).

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

// B_{2k} / (2k (2k-1)), k = 1..12 — Stirling series for log Gamma.
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
    854_513.0 / 63_756.0,
    -236_364_091.0 / 1_506_960.0,
];

// B_{2k} / (2k), k = 1..8 — asymptotic series for digamma.
const DIGAMMA_ASYMP: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

// B_{2j}, j = 1..6 — Euler-Maclaurin tail of the Hurwitz zeta sums.
const BERNOULLI_2J: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.5 && (x - x.round()).abs() <= 1e-14 && x.round() <= 0.0
}

/// sin(pi x) with the integer part of x reduced exactly.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn stirling_c(z: Complex64) -> Complex64 {
    let lz = z.ln();
    let mut sum = Complex64::new(LN_SQRT_2PI, 0.0) + (z - 0.5) * lz - z;
    let inv2 = 1.0 / (z * z);
    let mut zpow = 1.0 / z;
    for c in STIRLING {
        sum += c * zpow;
        zpow *= inv2;
    }
    sum
}

fn log_gamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm_sqr() < 100.0 {
        shift += z.ln();
        z += 1.0;
    }
    stirling_c(z) - shift
}

// log sin(pi z) continued from the upper half-plane, Im z >= 0.
// Uses sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}), where |e^{2 pi i z}| <= 1.
fn log_sin_pi_upper(z: Complex64) -> Complex64 {
    let w = (Complex64::new(0.0, 2.0 * PI) * z).exp();
    Complex64::new(0.0, -PI) * z
        + (Complex64::new(1.0, 0.0) - w).ln()
        + Complex64::new(-std::f64::consts::LN_2, 0.5 * PI)
}

/// Principal-branch log of Gamma(z).
///
/// Relative accuracy is ~1e-14 for |z| up to 1e6; poles at the nonpositive
/// integers are reported as [`Error::GammaPole`] (tolerance 1e-14).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::GammaPole { z: z.re });
    }
    if z.im < 0.0 {
        return Ok(log_gamma(z.conj())?.conj());
    }
    if z.re < 0.5 {
        let refl = log_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - log_sin_pi_upper(z) - refl);
    }
    Ok(log_gamma_right(z))
}

/// ln Gamma(x) for x > 0.
pub fn lgamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("lgamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_right(Complex64::new(x, 0.0)).re)
}

/// (ln |Gamma(x)|, sign of Gamma(x)) for any non-pole real x.
pub fn lgamma_sign(x: f64) -> Result<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole { z: x });
    }
    if x > 0.0 {
        return Ok((lgamma(x)?, 1.0));
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let s = sin_pi(x);
    let lg = PI.ln() - s.abs().ln() - lgamma(1.0 - x)?;
    Ok((lg, s.signum()))
}

/// Gamma(x) for non-pole real x.
pub fn gamma_fn(x: f64) -> Result<f64> {
    let (lg, sign) = lgamma_sign(x)?;
    Ok(sign * lg.exp())
}

fn digamma_asymp(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut sum = x.ln() - 0.5 * inv;
    let mut p = inv2;
    for c in DIGAMMA_ASYMP {
        sum -= c * p;
        p *= inv2;
    }
    sum
}

/// Digamma function psi(x) for real non-pole x.
pub fn digamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole { z: x });
    }
    if x < 0.5 {
        // psi(x) = psi(1-x) - pi cot(pi x)
        let cot = {
            let mut r = x % 1.0;
            if r > 0.5 {
                r -= 1.0;
            } else if r < -0.5 {
                r += 1.0;
            }
            (PI * r).cos() / (PI * r).sin()
        };
        return Ok(digamma(1.0 - x)? - PI * cot);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc += 1.0 / y;
        y += 1.0;
    }
    Ok(digamma_asymp(y) - acc)
}

/// Digamma for complex z in the right half-plane (no pole guard; the
/// contour code only ever evaluates it right of every pole).
pub fn digamma_complex(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm_sqr() < 100.0 {
        acc += 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut sum = z.ln() - 0.5 * inv;
    let mut p = inv2;
    for c in DIGAMMA_ASYMP {
        sum -= c * p;
        p *= inv2;
    }
    sum - acc
}

// Hurwitz zeta(s, a) for integer s >= 2, a > 0, via direct summation with an
// Euler-Maclaurin tail.
fn hurwitz_zeta_int(s: usize, a: f64) -> f64 {
    debug_assert!(s >= 2 && a > 0.0);
    let sf = s as f64;
    if sf >= 10.0 {
        // Terms decay like (1 + k/a)^{-s}; plain summation suffices.
        let mut sum = 0.0;
        for k in 0..100_000 {
            let t = (a + k as f64).powi(-(s as i32));
            sum += t;
            if t < sum * 1e-18 {
                break;
            }
        }
        return sum;
    }
    let big_k = 40usize;
    let mut sum = 0.0;
    for k in 0..big_k {
        sum += (a + k as f64).powi(-(s as i32));
    }
    let y = a + big_k as f64;
    sum += y.powf(1.0 - sf) / (sf - 1.0) + 0.5 * y.powf(-sf);
    // Bernoulli tail: sum_j B_{2j}/(2j)! * (s)_{2j-1} * y^{-s-2j+1}
    let mut poch = sf; // (s)_1
    let mut fact = 2.0; // (2j)!
    let mut ypow = y.powf(-sf - 1.0);
    for (j, b2j) in BERNOULLI_2J.iter().enumerate() {
        sum += b2j / fact * poch * ypow;
        // advance to next j
        let tj = 2.0 * (j as f64 + 1.0);
        poch *= (sf + tj - 1.0) * (sf + tj);
        fact *= (tj + 1.0) * (tj + 2.0);
        ypow /= y * y;
    }
    sum
}

/// Riemann zeta at integer arguments n >= 2 (cached).
pub fn zeta_int(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..64).map(|k| match k {
        0 | 1 => f64::NAN,
        _ => hurwitz_zeta_int(k, 1.0),
    }).collect());
    if n < table.len() {
        table[n]
    } else {
        1.0
    }
}

/// Polygamma function psi^(n)(x), n >= 0, for real non-pole x.
pub fn polygamma(n: usize, x: f64) -> Result<f64> {
    if n == 0 {
        return digamma(x);
    }
    if is_nonpositive_integer(x) {
        return Err(Error::GammaPole { z: x });
    }
    // Shift negative arguments into (0, inf):
    // psi^(n)(x) = psi^(n)(x + M) - (-1)^n n! sum_{i<M} (x+i)^{-(n+1)}
    let mut corr = 0.0;
    let mut y = x;
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut nfact = 1.0;
    for k in 1..=n {
        nfact *= k as f64;
    }
    while y <= 0.0 {
        corr -= sign_n * nfact * y.powi(-(n as i32 + 1));
        y += 1.0;
    }
    // psi^(n)(y) = (-1)^{n+1} n! zeta(n+1, y)
    Ok(-sign_n * nfact * hurwitz_zeta_int(n + 1, y) + corr)
}
