//! Quantiles: the closed-form extreme-quantile approximation and a
//! bracketing numeric solver seeded by it.

use crate::error::{Error, Result};
use crate::product::ProductSpec;

/// Extreme-quantile approximation:
/// `Q(p) ~ (-ln(1-p))^N / (N^N omega_+)` as p -> 1 and
/// `Q(p) ~ -(-ln p)^N / (N^N omega_-)` as p -> 0.
///
/// The upper branch is used for p >= 1/2, the lower otherwise; accuracy is
/// only asymptotic (intended for p < 0.01 or p > 0.99, and the logarithmic
/// convergence is slow).
pub fn quantile_asymptotic(spec: &ProductSpec, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "quantile requires p in (0, 1), got {p}"
        )));
    }
    let n = spec.n() as f64;
    if p >= 0.5 {
        Ok((-(1.0 - p).ln()).powf(n) / (n.powf(n) * spec.omega_plus()))
    } else {
        Ok(-(-p.ln()).powf(n) / (n.powf(n) * spec.omega_minus()))
    }
}

/// Numeric quantile: root of `F(z) = p`, bracketed from the asymptotic seed
/// by geometric expansion and polished by bisection with secant steps.
/// Terminates when |F(z) - p| <= tol.
pub fn quantile_numeric(spec: &ProductSpec, p: f64, tol: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "quantile requires p in (0, 1), got {p}"
        )));
    }
    if spec.is_symmetric() && p == 0.5 {
        return Ok(0.0);
    }
    // Work on the tail mass of the nearer side so extreme quantiles stay
    // relative-accurate: for p >= 1/2 solve P(Z > z) = 1 - p, else mirror.
    if p < 0.5 {
        let mirrored = spec.mirrored();
        return Ok(-quantile_numeric(&mirrored, 1.0 - p, tol)?);
    }
    let target = 1.0 - p;
    let eval_tol = (tol.min(target * 0.05)).max(1e-14);
    let g = |z: f64| -> Result<f64> { Ok(spec.complementary_cdf_numeric(z, eval_tol)?.value) };

    // bracket: the upper mass is decreasing; find lo with mass > target >= mass(hi)
    let seed = quantile_asymptotic(spec, p)?.max(1e-6);
    let mut hi = seed;
    let mut hi_val = g(hi)?;
    let mut lo;
    let mut lo_val;
    if hi_val > target {
        // expand right
        lo = hi;
        lo_val = hi_val;
        let mut ok = false;
        for _ in 0..200 {
            hi *= 2.0;
            hi_val = g(hi)?;
            if hi_val <= target {
                ok = true;
                break;
            }
            lo = hi;
            lo_val = hi_val;
        }
        if !ok {
            return Err(Error::BracketFailure { p });
        }
    } else {
        // expand left, through zero if necessary
        lo = hi;
        lo_val = hi_val;
        let mut ok = false;
        for _ in 0..200 {
            lo = if lo > 1e-9 { lo * 0.5 } else { lo - seed.max(1.0) };
            lo_val = g(lo)?;
            if lo_val > target {
                ok = true;
                break;
            }
            hi = lo;
            hi_val = lo_val;
        }
        if !ok {
            return Err(Error::BracketFailure { p });
        }
    }

    // bisection with a secant candidate in log-mass space
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..120 {
        let use_secant = lo_val > 0.0 && hi_val > 0.0 && target > 0.0;
        mid = if use_secant {
            let (la, lb, lt) = (lo_val.ln(), hi_val.ln(), target.ln());
            let frac = ((lt - la) / (lb - la)).clamp(0.1, 0.9);
            lo + frac * (hi - lo)
        } else {
            0.5 * (lo + hi)
        };
        let val = g(mid)?;
        if (val - target).abs() <= tol || (hi - lo) <= 1e-13 * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if val > target {
            lo = mid;
            lo_val = val;
        } else {
            hi = mid;
            hi_val = val;
        }
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vg::VgParams;

    #[test]
    fn laplace_asymptotic_quantile() {
        // N = 1 Laplace(alpha): Q(p) ~ -ln(1-p)/alpha as p -> 1
        let spec = ProductSpec::new(vec![VgParams::new(0.5, 2.0, 0.0).unwrap()]).unwrap();
        let p = 1.0 - 1e-8;
        let q = quantile_asymptotic(&spec, p).unwrap();
        assert!(((q - (-(1.0 - p).ln()) / 2.0) / q).abs() < 1e-12);
        // lower branch is negative
        assert!(quantile_asymptotic(&spec, 1e-8).unwrap() < 0.0);
        assert!(quantile_asymptotic(&spec, 0.0).is_err());
        assert!(quantile_asymptotic(&spec, 1.0).is_err());
    }

    #[test]
    fn numeric_quantile_laplace_exact() {
        // Laplace(alpha): F^{-1}(p) = -ln(2(1-p))/alpha for p >= 1/2
        let spec = ProductSpec::new(vec![VgParams::new(0.5, 2.0, 0.0).unwrap()]).unwrap();
        for &p in &[0.6, 0.9, 0.999] {
            let q = quantile_numeric(&spec, p, 1e-10).unwrap();
            let exact = -(2.0 * (1.0 - p)).ln() / 2.0;
            assert!((q - exact).abs() < 1e-6, "p={p} q={q} exact={exact}");
        }
        // monotone in p and median at 0
        let q1 = quantile_numeric(&spec, 0.3, 1e-9).unwrap();
        let q2 = quantile_numeric(&spec, 0.5, 1e-9).unwrap();
        let q3 = quantile_numeric(&spec, 0.7, 1e-9).unwrap();
        assert!(q1 < q2 && q2 < q3);
        assert_eq!(q2, 0.0);
    }
}
