//! Gauss hypergeometric function 2F1(a, b; c; x) on the open unit interval.
//!
//! Plain power series, with the Euler transformation
//! 2F1(a,b;c;x) = (1-x)^{c-a-b} 2F1(c-a, c-b; c; x) applied for x > 0.75,
//! where the transformed series has absolutely convergent coefficients.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;

fn series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut stagnant = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum); // terminating (polynomial) case
        }
        if term.abs() <= sum.abs() * 1e-16 {
            stagnant += 1;
            if stagnant >= 2 {
                return Ok(sum);
            }
        } else {
            stagnant = 0;
        }
    }
    Err(Error::NonConvergence {
        achieved: f64::NAN,
        requested: 1e-16,
    })
}

/// 2F1(a, b; c; x) for |x| < 1 and c not a nonpositive integer.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if c <= 0.0 && (c - c.round()).abs() <= 1e-14 {
        return Err(Error::Domain(format!(
            "2F1 parameter c must not be a nonpositive integer, got {c}"
        )));
    }
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!("2F1 requires |x| < 1, got {x}")));
    }
    if x > 0.75 {
        let v = series(c - a, c - b, c, x)?;
        return Ok((1.0 - x).powf(c - a - b) * v);
    }
    series(a, b, c, x)
}
