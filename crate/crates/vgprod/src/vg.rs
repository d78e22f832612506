//! The single-factor variance-gamma distribution (location fixed at zero):
//! density, numeric CDF, sign probability, Mellin transforms of the
//! positive/negative parts, and a reproducible sampler.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::quad::integrate_to_inf;
use crate::rng::seeded_rng;
use crate::specfun::{bessel_k_scaled, gauss_2f1, lgamma, log_gamma};

const MELLIN_TERM_CAP: usize = 500;

/// Parameters of one variance-gamma factor: shape `m > -1/2`, scale
/// `alpha > 0`, skew `|beta| < alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VgParams {
    m: f64,
    alpha: f64,
    beta: f64,
}

/// Reproducible Monte Carlo draws with seed provenance.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub n: usize,
    /// Canonical text form of the generating parameters.
    pub spec_digest: String,
}

impl VgParams {
    pub fn new(m: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(m > -0.5) || !m.is_finite() {
            return Err(Error::Domain(format!(
                "shape must satisfy m > -1/2, got {m}"
            )));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "scale must satisfy alpha > 0, got {alpha}"
            )));
        }
        if !(beta.abs() < alpha) {
            return Err(Error::Domain(format!(
                "skew must satisfy 0 <= |beta| < alpha, got beta = {beta}, alpha = {alpha}"
            )));
        }
        Ok(VgParams { m, alpha, beta })
    }

    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    /// gamma^2 = alpha^2 - beta^2 > 0.
    pub fn gamma2(&self) -> f64 {
        self.alpha * self.alpha - self.beta * self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma2().sqrt()
    }
    /// lambda_+ = alpha + beta.
    pub fn lambda_plus(&self) -> f64 {
        self.alpha + self.beta
    }
    /// lambda_- = alpha - beta.
    pub fn lambda_minus(&self) -> f64 {
        self.alpha - self.beta
    }
    pub fn is_symmetric(&self) -> bool {
        self.beta == 0.0
    }
    /// True when m - 1/2 is a nonnegative integer.
    pub fn is_half_integer_shape(&self) -> bool {
        let k = self.m - 0.5;
        k >= -1e-12 && (k - k.round()).abs() <= 1e-12
    }

    /// Mirror image in x: X -> -X flips the skew sign.
    pub fn mirrored(&self) -> VgParams {
        VgParams {
            m: self.m,
            alpha: self.alpha,
            beta: -self.beta,
        }
    }

    fn log_norm_const(&self) -> f64 {
        // gamma^{2m+1} / (sqrt(pi) (2 alpha)^m Gamma(m+1/2))
        (2.0 * self.m + 1.0) * self.gamma().ln()
            - 0.5 * std::f64::consts::PI.ln()
            - self.m * (2.0 * self.alpha).ln()
            - lgamma(self.m + 0.5).expect("m + 1/2 > 0")
    }

    /// Density at x. For m > 0 the finite limit is returned at x = 0; for
    /// m <= 0 the origin is a genuine singularity and an error is raised.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            if self.m <= 0.0 {
                return Err(Error::OriginSingularity { m_min: self.m });
            }
            // lim |x|^m K_m(alpha |x|) = Gamma(m) 2^{m-1} / alpha^m
            let lg = lgamma(self.m)?;
            return Ok((self.log_norm_const() + lg + (self.m - 1.0) * std::f64::consts::LN_2
                - self.m * self.alpha.ln())
            .exp());
        }
        let ax = self.alpha * x.abs();
        // scaled Bessel keeps the tail alive until beta x - alpha |x|
        // itself underflows
        let ln_val = self.log_norm_const()
            + self.beta * x
            + self.m * x.abs().ln()
            + bessel_k_scaled(self.m, ax)?.ln()
            - ax;
        Ok(ln_val.exp())
    }

    /// P(X <= 0) in closed form via the Gauss hypergeometric function.
    pub fn prob_nonpositive(&self) -> f64 {
        if self.beta == 0.0 {
            return 0.5;
        }
        let r = self.beta / self.alpha;
        let x = r * r;
        let f = gauss_2f1(1.0, self.m + 1.0, 1.5, x).expect("x = (beta/alpha)^2 < 1");
        let lg = (lgamma(self.m + 1.0).unwrap() - lgamma(self.m + 0.5).unwrap()).exp();
        0.5 - r * lg / std::f64::consts::PI.sqrt() * (1.0 - x).powf(self.m + 0.5) * f
    }

    /// Numeric CDF: quadrature of the density over the relevant half-line.
    /// Plumbing for a single skewed factor; the closed forms live at the
    /// product level.
    pub fn cdf(&self, x: f64, tol: f64) -> Result<f64> {
        if x > 0.0 {
            let upper = integrate_to_inf(&|t| self.pdf(t).unwrap_or(0.0), x, 0.5 * tol);
            Ok(1.0 - upper.value)
        } else if x < 0.0 {
            let mirrored = self.mirrored();
            let upper = integrate_to_inf(&|t| mirrored.pdf(t).unwrap_or(0.0), -x, 0.5 * tol);
            Ok(upper.value)
        } else {
            Ok(self.prob_nonpositive())
        }
    }

    /// Mellin transform of the positive part, `int_0^inf x^s f(x) dx`, via
    /// the skew series truncated adaptively (cap 500 terms).
    pub fn mellin_pos(&self, s: Complex64) -> Result<Complex64> {
        self.mellin_part(s, self.beta)
    }

    /// Mellin transform of the negative part, `int_0^inf x^s f(-x) dx`.
    pub fn mellin_neg(&self, s: Complex64) -> Result<Complex64> {
        self.mellin_part(s, -self.beta)
    }

    fn mellin_part(&self, s: Complex64, beta: f64) -> Result<Complex64> {
        if s.re <= (0.0f64).max(-2.0 * self.m) - 1.0 {
            return Err(Error::Domain(format!(
                "Mellin transform requires Re(s) > max(0, -2m) - 1, got {}",
                s.re
            )));
        }
        let ratio = self.gamma() / self.alpha;
        let pref = ratio.powf(2.0 * self.m + 1.0)
            / (2.0 * std::f64::consts::PI.sqrt() * lgamma(self.m + 0.5)?.exp());
        let two_over_alpha = Complex64::new(2.0 / self.alpha, 0.0).powc(s);
        let t = 2.0 * beta / self.alpha;
        // terms assembled in log space: the Gamma factors overflow long
        // before the t^j/j! coefficients stop mattering
        let ln_abs_t = t.abs().max(1e-300).ln();
        let mut ln_coef = 0.0f64;
        let mut sign = 1.0f64;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut converged = false;
        for j in 0..MELLIN_TERM_CAP {
            let jf = j as f64;
            let g1 = log_gamma(s * 0.5 + Complex64::new(0.5 * (jf + 1.0), 0.0))?;
            let g2 = log_gamma(s * 0.5 + Complex64::new(self.m + 0.5 * (jf + 1.0), 0.0))?;
            let term = sign * (g1 + g2 + ln_coef).exp();
            sum += term;
            if j > 2 && term.norm() <= sum.norm() * 1e-12 {
                converged = true;
                break;
            }
            ln_coef += ln_abs_t - (jf + 1.0).ln();
            if t < 0.0 {
                sign = -sign;
            }
            if t == 0.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence {
                achieved: f64::NAN,
                requested: 1e-12,
            });
        }
        Ok(sum * pref * two_over_alpha)
    }

    /// `n` reproducible draws via the normal variance-mean gamma mixture
    /// X = beta W + sqrt(W) Z, W ~ Gamma(shape m + 1/2, rate gamma^2/2).
    ///
    /// Generation is single-threaded per seed; concurrent batches must use
    /// distinct seeds.
    pub fn sample(&self, n: usize, seed: u64) -> SampleBatch {
        let mut rng = seeded_rng(seed);
        let values = self.sample_into(n, &mut rng);
        SampleBatch {
            values,
            seed,
            n,
            spec_digest: self.digest(),
        }
    }

    pub(crate) fn sample_into<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let shape = self.m + 0.5;
        let scale = 2.0 / self.gamma2();
        let gamma = Gamma::new(shape, scale).expect("valid gamma parameters");
        (0..n)
            .map(|_| {
                let w = gamma.sample(rng);
                let z: f64 = StandardNormal.sample(rng);
                self.beta * w + w.sqrt() * z
            })
            .collect()
    }

    /// Canonical text form, used as sample provenance.
    pub fn digest(&self) -> String {
        format!(
            "vg(m={:.17e},alpha={:.17e},beta={:.17e})",
            self.m, self.alpha, self.beta
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive;
    use crate::specfun::bessel_k;

    fn pdf_direct(p: &VgParams, x: f64) -> f64 {
        let ax = p.alpha * x.abs();
        p.log_norm_const().exp()
            * (p.beta * x).exp()
            * x.abs().powf(p.m)
            * bessel_k(p.m, ax).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(VgParams::new(0.5, 1.0, 0.0).is_ok());
        assert!(VgParams::new(-0.5, 1.0, 0.0).is_err());
        assert!(VgParams::new(0.5, 0.0, 0.0).is_err());
        assert!(VgParams::new(0.5, 1.0, 1.0).is_err());
        assert!(VgParams::new(0.5, 1.0, -1.2).is_err());
    }

    #[test]
    fn asymmetric_laplace_closed_form() {
        // m = 1/2: f(x) = (alpha^2 - beta^2) e^{beta x - alpha |x|} / (2 alpha)
        let p = VgParams::new(0.5, 3.0, 1.0).unwrap();
        let al = |x: f64| p.gamma2() * (p.beta * x - p.alpha * x.abs()).exp() / (2.0 * p.alpha);
        assert!((p.pdf(0.0).unwrap() - 4.0 / 3.0).abs() < 1e-13);
        for &x in &[-2.0, -0.3, 0.4, 5.0] {
            let got = p.pdf(x).unwrap();
            assert!(((got - al(x)) / al(x)).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn symmetric_density_is_even() {
        let p = VgParams::new(1.3, 2.0, 0.0).unwrap();
        for &x in &[0.1, 0.9, 3.7] {
            assert_eq!(p.pdf(x).unwrap(), p.pdf(-x).unwrap());
        }
    }

    #[test]
    fn density_normalizes() {
        for &(m, alpha, ratio) in &[
            (-0.25, 0.5, 0.0),
            (0.5, 1.0, 0.4),
            (2.0, 3.0, 0.9),
            (1.0, 2.0, 0.25),
        ] {
            let p = VgParams::new(m, alpha, ratio * alpha).unwrap();
            let lam = p.alpha - p.beta.abs();
            let reach = 60.0 / lam;
            let eps = 1e-12;
            let mut mass = adaptive(&|x| p.pdf(x).unwrap_or(0.0), -reach, -eps, 1e-9).value
                + adaptive(&|x| p.pdf(x).unwrap_or(0.0), eps, reach, 1e-9).value;
            if m < 0.0 {
                // integrable power sliver at the origin:
                // f ~ gamma^{2m+1} Gamma(-m) / (2^{2m+1} sqrt(pi) Gamma(m+1/2)) |x|^{2m}
                let c = p.gamma().powf(2.0 * m + 1.0) / 2f64.powf(2.0 * m + 1.0)
                    / std::f64::consts::PI.sqrt()
                    * (lgamma(-m).unwrap() - lgamma(m + 0.5).unwrap()).exp();
                mass += 2.0 * c * eps.powf(2.0 * m + 1.0) / (2.0 * m + 1.0);
            }
            assert!((mass - 1.0).abs() < 1e-6, "m={m} a={alpha} r={ratio}: {mass}");
        }
    }

    #[test]
    fn pdf_zero_rejected_for_nonpositive_shape() {
        let p = VgParams::new(-0.2, 1.0, 0.0).unwrap();
        assert!(matches!(p.pdf(0.0), Err(Error::OriginSingularity { .. })));
        let q = VgParams::new(0.0, 1.0, 0.0).unwrap();
        assert!(q.pdf(0.0).is_err());
    }

    #[test]
    fn pdf_matches_direct_bessel_form() {
        let p = VgParams::new(1.2, 2.0, -0.7).unwrap();
        for &x in &[-3.0, -0.5, 0.01, 1.0, 8.0] {
            let a = p.pdf(x).unwrap();
            let b = pdf_direct(&p, x);
            assert!(((a - b) / b).abs() < 1e-12);
        }
    }

    #[test]
    fn prob_nonpositive_matches_quadrature() {
        let p = VgParams::new(0.5, 2.0, 1.0).unwrap();
        let upper = integrate_to_inf(&|x| p.pdf(x).unwrap_or(0.0), 1e-14, 1e-10);
        let got = p.prob_nonpositive();
        assert!(
            (got - (1.0 - upper.value)).abs() < 1e-8,
            "got {got}, 1 - upper = {}",
            1.0 - upper.value
        );
        assert_eq!(VgParams::new(1.7, 1.0, 0.0).unwrap().prob_nonpositive(), 0.5);
    }

    #[test]
    fn prob_nonpositive_decreases_in_beta() {
        let mut last = 1.0;
        for &b in &[-0.8, -0.3, 0.0, 0.3, 0.8] {
            let p = VgParams::new(1.0, 1.0, b).unwrap().prob_nonpositive();
            assert!(p < last, "beta={b}");
            last = p;
        }
    }

    #[test]
    fn cdf_brackets_prob_nonpositive() {
        let p = VgParams::new(0.7, 1.5, 0.6).unwrap();
        let f0 = p.cdf(0.0, 1e-9).unwrap();
        assert!((f0 - p.prob_nonpositive()).abs() < 1e-12);
        let lo = p.cdf(-10.0, 1e-9).unwrap();
        let hi = p.cdf(10.0, 1e-9).unwrap();
        assert!(lo < 1e-3 && hi > 0.999);
    }

    #[test]
    fn mellin_total_mass() {
        let p = VgParams::new(0.8, 1.5, 0.0).unwrap();
        let s = Complex64::new(0.0, 0.0);
        let pos = p.mellin_pos(s).unwrap();
        assert!((pos.re - 0.5).abs() < 1e-12 && pos.im.abs() < 1e-14);
        let q = VgParams::new(0.5, 2.0, 0.7).unwrap();
        let total = q.mellin_pos(s).unwrap() + q.mellin_neg(s).unwrap();
        assert!((total.re - 1.0).abs() < 1e-11, "total = {total}");
    }

    #[test]
    fn mellin_matches_quadrature() {
        let p = VgParams::new(0.5, 2.0, 0.7).unwrap();
        let s = 1.3;
        let got = p.mellin_pos(Complex64::new(s, 0.0)).unwrap();
        let oracle =
            integrate_to_inf(&|x: f64| x.powf(s) * p.pdf(x).unwrap_or(0.0), 1e-14, 1e-11);
        assert!(
            (got.re - oracle.value).abs() < 1e-8,
            "{} vs {}",
            got.re,
            oracle.value
        );
    }

    #[test]
    fn mellin_domain_guard() {
        let p = VgParams::new(0.5, 2.0, 0.1).unwrap();
        assert!(p.mellin_pos(Complex64::new(-1.1, 0.0)).is_err());
    }

    #[test]
    fn sampler_reproducible_and_mean_correct() {
        let p = VgParams::new(1.0, 2.0, 0.5).unwrap();
        let a = p.sample(1000, 99);
        let b = p.sample(1000, 99);
        assert_eq!(a.values, b.values);
        assert_ne!(a.values, p.sample(1000, 100).values);

        let n = 1_000_000;
        let batch = p.sample(n, 12345);
        let mean: f64 = batch.values.iter().sum::<f64>() / n as f64;
        // E X = beta (2m + 1) / gamma^2 = 0.4; allow 4 sigma
        let var = batch
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n as f64;
        let stderr = (var / n as f64).sqrt();
        assert!((mean - 0.4).abs() < 4.0 * stderr, "mean={mean} stderr={stderr}");
    }

    #[test]
    fn sampler_symmetric_skewness() {
        let p = VgParams::new(0.5, 1.0, 0.0).unwrap();
        let n = 200_000;
        let batch = p.sample(n, 7);
        let mean: f64 = batch.values.iter().sum::<f64>() / n as f64;
        let m2: f64 = batch.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let m3: f64 = batch.values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n as f64;
        let skew = m3 / m2.powf(1.5);
        assert!(skew.abs() < 4.0 * (6.0 / n as f64).sqrt(), "skew={skew}");
    }
}
