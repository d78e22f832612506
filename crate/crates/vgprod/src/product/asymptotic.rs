//! Asymptotic approximations: density near the origin, tail probabilities
//! and tail densities (with the symmetric and dominant-weight reductions).

use crate::error::{Error, Result};
use crate::product::ProductSpec;
use crate::specfun::gamma_fn;

/// Which tail an approximation refers to: `Upper` is P(Z > z) as z -> +inf,
/// `Lower` is P(Z <= z) as z -> -inf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Upper,
    Lower,
}

const SHAPE_TIE_TOL: f64 = 1e-12;

/// Leading-order density as z -> 0 for N >= 2 and 0 < |z| < 1.
///
/// With the factors sorted by shape, two regimes apply: when every shape is
/// nonnegative the density blows up like (-ln|z|)^{N+t-1} (t = number of
/// zero shapes); when the minimal shape m1 is negative with multiplicity t
/// it blows up like |z|^{2 m1} (-2 ln|z|)^{t-1}.
pub fn pdf_origin_asymptotic(spec: &ProductSpec, z: f64) -> Result<f64> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::Domain(
            "origin asymptotic applies to N >= 2 factors".into(),
        ));
    }
    if !(z.abs() > 0.0 && z.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "origin asymptotic applies for 0 < |z| < 1, got {z}"
        )));
    }
    // canonical order: sort by shape ascending
    let mut fac = spec.factors().to_vec();
    fac.sort_by(|a, b| a.m().partial_cmp(&b.m()).unwrap());
    let nf = n as f64;
    let pi = std::f64::consts::PI;
    let m1 = fac[0].m();
    let gamma_prod: f64 = fac.iter().map(|f| f.gamma().powf(2.0 * f.m() + 1.0)).product();

    if m1 < -SHAPE_TIE_TOL {
        // multiplicity of the minimum
        let t = fac.iter().filter(|f| (f.m() - m1).abs() <= SHAPE_TIE_TOL).count();
        let mut c = gamma_prod * gamma_fn(-m1)?.powi(n as i32) * spec.eta()
            / (2f64.powf(nf * (1.0 + 2.0 * m1)) * pi.powf(nf / 2.0));
        for f in fac.iter().skip(t) {
            c *= f.alpha().powf(2.0 * m1 - 2.0 * f.m());
            c *= gamma_fn(f.m() - m1)?;
        }
        c /= super::factorial(t - 1);
        Ok(c * (-2.0 * z.abs().ln()).powi(t as i32 - 1) * z.abs().powf(2.0 * m1))
    } else {
        // all shapes >= 0; t = number of zeros
        let t = fac.iter().filter(|f| f.m().abs() <= SHAPE_TIE_TOL).count();
        let mut c = 2f64.powi(t as i32 - 1) * gamma_prod * spec.eta()
            / (super::factorial(n + t - 1) * pi.powf(nf / 2.0));
        for f in fac.iter().skip(t) {
            c /= f.alpha().powf(2.0 * f.m());
            c *= gamma_fn(f.m())?;
        }
        Ok(c * (-z.abs().ln()).powi((n + t - 1) as i32))
    }
}

// shared prefactor of the tail formulas:
// (2 pi)^{(N-1)/2} eta / sqrt(N) prod gamma_i^{2m_i+1} / (2 alpha_i)^{m_i+1/2}
fn tail_prefactor(spec: &ProductSpec) -> f64 {
    let n = spec.n() as f64;
    let mut pref =
        (2.0 * std::f64::consts::PI).powf(0.5 * (n - 1.0)) * spec.eta() / n.sqrt();
    for f in spec.factors() {
        pref *= f.gamma().powf(2.0 * f.m() + 1.0) / (2.0 * f.alpha()).powf(f.m() + 0.5);
    }
    pref
}

fn tail_sum(spec: &ProductSpec, abs_z: f64, side: Tail, cdf: bool) -> f64 {
    let n = spec.n() as f64;
    let mu = spec.mu_n();
    let exp_shift = if cdf {
        -(n + 1.0) / (2.0 * n)
    } else {
        (1.0 - n) / (2.0 * n)
    };
    let mut sum = 0.0;
    for sw in spec.subset_weights() {
        if sw.subset.parity_even() != (side == Tail::Upper) {
            continue;
        }
        let mut w = 1.0;
        for (i, f) in spec.factors().iter().enumerate() {
            let lam = if sw.subset.contains(i) {
                f.lambda_plus()
            } else {
                f.lambda_minus()
            };
            w *= lam.powf(mu - f.m() + exp_shift);
        }
        sum += w * (-n * sw.omega.powf(1.0 / n) * abs_z.powf(1.0 / n)).exp();
    }
    sum
}

/// Symmetric-case tail probability reduction (single exponential in xi|z|).
pub(crate) fn symmetric_tail_cdf(spec: &ProductSpec, abs_z: f64) -> f64 {
    let n = spec.n() as f64;
    let mu = spec.mu_n();
    let pref = std::f64::consts::PI.powf(0.5 * (n - 1.0)) * spec.eta()
        / (2f64.powf(n * (mu - 1.0) + 1.5) * n.sqrt());
    pref * (spec.xi() * abs_z).powf(mu - 0.5 / n)
        * (-n * (spec.xi() * abs_z).powf(1.0 / n)).exp()
}

fn symmetric_tail_pdf(spec: &ProductSpec, abs_z: f64) -> f64 {
    let n = spec.n() as f64;
    let mu = spec.mu_n();
    let pref = std::f64::consts::PI.powf(0.5 * (n - 1.0)) * spec.xi() * spec.eta()
        / (2f64.powf(n * (mu - 1.0) + 1.5) * n.sqrt());
    pref * (spec.xi() * abs_z).powf(mu + 0.5 / n - 1.0)
        * (-n * (spec.xi() * abs_z).powf(1.0 / n)).exp()
}

/// Leading-order tail probability: P(Z > z) for the upper side (z > 0),
/// P(Z <= z) for the lower side (z < 0). Guidance: intended for
/// (omega^{1/N} |z|^{1/N}) > 10.
pub fn tail_asymptotic_cdf(spec: &ProductSpec, z: f64, side: Tail) -> Result<f64> {
    let abs_z = check_tail_arg(z, side)?;
    if spec.is_symmetric() {
        return Ok(symmetric_tail_cdf(spec, abs_z));
    }
    let n = spec.n() as f64;
    Ok(tail_prefactor(spec) * abs_z.powf(spec.mu_n() - 0.5 / n) * tail_sum(spec, abs_z, side, true))
}

/// Leading-order tail density.
pub fn tail_asymptotic_pdf(spec: &ProductSpec, z: f64, side: Tail) -> Result<f64> {
    let abs_z = check_tail_arg(z, side)?;
    if spec.is_symmetric() {
        return Ok(symmetric_tail_pdf(spec, abs_z));
    }
    let n = spec.n() as f64;
    Ok(tail_prefactor(spec)
        * abs_z.powf(spec.mu_n() + 0.5 / n - 1.0)
        * tail_sum(spec, abs_z, side, false))
}

/// Single-term tail reduction, valid only when the minimal subset weight on
/// the relevant side is attained by exactly one subset; ties are refused.
pub fn tail_asymptotic_cdf_dominant(spec: &ProductSpec, z: f64, side: Tail) -> Result<f64> {
    let abs_z = check_tail_arg(z, side)?;
    let relevant: Vec<_> = spec
        .subset_weights()
        .iter()
        .filter(|sw| sw.subset.parity_even() == (side == Tail::Upper))
        .collect();
    let min = relevant.iter().map(|sw| sw.omega).fold(f64::INFINITY, f64::min);
    let near: Vec<_> = relevant
        .iter()
        .filter(|sw| (sw.omega - min).abs() <= 1e-12 * min)
        .collect();
    if near.len() != 1 {
        return Err(Error::Domain(format!(
            "dominant-weight reduction refused: {} subsets tie at omega = {min}",
            near.len()
        )));
    }
    let sw = near[0];
    let n = spec.n() as f64;
    let mu = spec.mu_n();
    let mut w = 1.0;
    for (i, f) in spec.factors().iter().enumerate() {
        let lam = if sw.subset.contains(i) {
            f.lambda_plus()
        } else {
            f.lambda_minus()
        };
        w *= lam.powf(mu - f.m() - (n + 1.0) / (2.0 * n));
    }
    Ok(tail_prefactor(spec)
        * abs_z.powf(mu - 0.5 / n)
        * w
        * (-n * sw.omega.powf(1.0 / n) * abs_z.powf(1.0 / n)).exp())
}

fn check_tail_arg(z: f64, side: Tail) -> Result<f64> {
    match side {
        Tail::Upper if z > 0.0 => Ok(z),
        Tail::Lower if z < 0.0 => Ok(-z),
        _ => Err(Error::Domain(format!(
            "tail side {side:?} needs z of the matching sign, got {z}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vg::VgParams;

    fn laplace(alpha: f64) -> VgParams {
        VgParams::new(0.5, alpha, 0.0).unwrap()
    }

    #[test]
    fn laplace_tail_is_exact_for_one_factor() {
        // Laplace(alpha): P(X > z) = e^{-alpha z}/2 and f(z) = alpha e^{-alpha z}/2
        let spec = ProductSpec::new(vec![laplace(1.7)]).unwrap();
        for &z in &[0.5, 2.0, 11.0] {
            let t = tail_asymptotic_cdf(&spec, z, Tail::Upper).unwrap();
            let exact = 0.5 * (-1.7 * z).exp();
            assert!(((t - exact) / exact).abs() < 1e-12, "z={z} t={t}");
            let d = tail_asymptotic_pdf(&spec, z, Tail::Upper).unwrap();
            let exact_d = 0.5 * 1.7 * (-1.7 * z).exp();
            assert!(((d - exact_d) / exact_d).abs() < 1e-12);
        }
    }

    #[test]
    fn asymmetric_laplace_tail_exact() {
        // AL(alpha, beta): P(X > z) = lambda_+ e^{-lambda_- z} / (2 alpha)
        let p = VgParams::new(0.5, 2.0, 0.7).unwrap();
        let spec = ProductSpec::new(vec![p]).unwrap();
        let z = 3.0;
        let exact = p.lambda_plus() / (2.0 * p.alpha()) * (-p.lambda_minus() * z).exp();
        let got = tail_asymptotic_cdf(&spec, z, Tail::Upper).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-12);
        // lower side mirrors under beta -> -beta, z -> -z
        let lower = tail_asymptotic_cdf(&spec, -z, Tail::Lower).unwrap();
        let mirrored = ProductSpec::new(vec![p.mirrored()]).unwrap();
        let upper_m = tail_asymptotic_cdf(&mirrored, z, Tail::Upper).unwrap();
        assert!(((lower - upper_m) / upper_m).abs() < 1e-12);
    }

    #[test]
    fn symmetric_reduction_matches_general_sum() {
        let spec = ProductSpec::new(vec![laplace(1.0), laplace(2.0), laplace(0.5)]).unwrap();
        let z: f64 = 200.0;
        // force the general subset-sum path by bypassing the is_symmetric shortcut
        let n = spec.n() as f64;
        let general = tail_prefactor(&spec)
            * z.powf(spec.mu_n() - 0.5 / n)
            * tail_sum(&spec, z, Tail::Upper, true);
        let reduced = symmetric_tail_cdf(&spec, z);
        assert!(
            ((general - reduced) / reduced).abs() < 1e-10,
            "general={general} reduced={reduced}"
        );
    }

    #[test]
    fn dominant_term_agrees_when_minimum_is_strict() {
        let a = VgParams::new(0.5, 1.0, 0.3).unwrap();
        let b = VgParams::new(1.5, 2.0, -0.4).unwrap();
        let spec = ProductSpec::new(vec![a, b]).unwrap();
        let z = 1.0e4;
        let full = tail_asymptotic_cdf(&spec, z, Tail::Upper).unwrap();
        let dom = tail_asymptotic_cdf_dominant(&spec, z, Tail::Upper).unwrap();
        assert!(((full - dom) / full).abs() < 0.01, "full={full} dom={dom}");
    }

    #[test]
    fn dominant_term_refuses_ties() {
        // beta = 0 ties every subset weight
        let spec = ProductSpec::new(vec![laplace(1.0), laplace(1.0)]).unwrap();
        assert!(tail_asymptotic_cdf_dominant(&spec, 100.0, Tail::Upper).is_err());
    }

    #[test]
    fn origin_asymptotic_case_two_exponent() {
        // duplicated m1 = -0.25 (t = 2): |z|^{2 m1} (-2 ln|z|)^{t-1}
        let f = VgParams::new(-0.25, 1.0, 0.0).unwrap();
        let spec = ProductSpec::new(vec![f, f]).unwrap();
        let (z1, z2) = (1e-6f64, 1e-5f64);
        let got = pdf_origin_asymptotic(&spec, z1).unwrap()
            / pdf_origin_asymptotic(&spec, z2).unwrap();
        let expect = (z1 / z2).powf(-0.5) * (z1.ln() / z2.ln());
        assert!(
            ((got - expect) / expect).abs() < 1e-12,
            "got {got} expect {expect}"
        );
    }

    #[test]
    fn origin_asymptotic_rejects_bad_arguments() {
        let f = VgParams::new(0.5, 1.0, 0.0).unwrap();
        let spec2 = ProductSpec::new(vec![f, f]).unwrap();
        assert!(pdf_origin_asymptotic(&spec2, 1.5).is_err());
        assert!(pdf_origin_asymptotic(&spec2, 0.0).is_err());
        let spec1 = ProductSpec::new(vec![f]).unwrap();
        assert!(pdf_origin_asymptotic(&spec1, 0.5).is_err());
    }
}
