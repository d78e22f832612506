//! The product distribution Z = X_1 ... X_N of independent variance-gamma
//! factors: exact density (general skew series, symmetric single-G and
//! half-integer finite-sum forms), distribution function, characteristic
//! function, sign probability, and the origin/tail/quantile asymptotics.

mod asymptotic;
mod quantile;
mod subsets;

pub use asymptotic::{
    pdf_origin_asymptotic, tail_asymptotic_cdf, tail_asymptotic_cdf_dominant,
    tail_asymptotic_pdf, Tail,
};
pub use quantile::{quantile_asymptotic, quantile_numeric};
pub use subsets::{
    subset_coefficient, subset_coefficient_enumerated, subset_weights, SignedSubset,
    SubsetWeight, MAX_FACTORS,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::meijer::{
    eval_g_cdf_class, eval_g_cf_class, eval_g_q0, eval_g_q0_residue, EvalResult, EvalResultC,
    Gq0Family, MeijerGSpec,
};
use crate::quad::{adaptive, integrate_to_inf, QuadResult};
use crate::specfun::lgamma;
use crate::vg::VgParams;

/// Beyond (xi |z|)^{1/N} = 40 the symmetric distribution function is
/// clamped to its limit; the remaining tail mass is ~exp(-40 N).
const CDF_CLAMP: f64 = 40.0;

/// Arguments below this go through the residue series inside the density
/// series evaluator.
const SERIES_RESIDUE_CROSSOVER: f64 = 1e-3;

/// |z| boundary between the log-substituted origin quadrature and plain
/// adaptive quadrature in the numeric CDF.
const ORIGIN_PATCH: f64 = 0.05;

const MAX_SHELLS: usize = 160;

/// An ordered list of factors with the cached aggregates the formulas use:
/// xi = prod alpha_i, eta = 1/prod Gamma(m_i + 1/2), mu_N = mean shape, and
/// the 2^N subset weights omega_sigma.
#[derive(Debug, Clone)]
pub struct ProductSpec {
    factors: Vec<VgParams>,
    xi: f64,
    eta: f64,
    mu_n: f64,
    weights: Vec<SubsetWeight>,
}

impl ProductSpec {
    pub fn new(factors: Vec<VgParams>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("a product needs at least one factor".into()));
        }
        let weights = subset_weights(&factors)?;
        let xi = factors.iter().map(|f| f.alpha()).product();
        let eta = (-factors
            .iter()
            .map(|f| lgamma(f.m() + 0.5).expect("m + 1/2 > 0"))
            .sum::<f64>())
        .exp();
        let mu_n = factors.iter().map(|f| f.m()).sum::<f64>() / factors.len() as f64;
        Ok(ProductSpec {
            factors,
            xi,
            eta,
            mu_n,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }
    pub fn factors(&self) -> &[VgParams] {
        &self.factors
    }
    /// xi = prod alpha_i.
    pub fn xi(&self) -> f64 {
        self.xi
    }
    /// eta = 1 / prod Gamma(m_i + 1/2).
    pub fn eta(&self) -> f64 {
        self.eta
    }
    /// mu_N = mean of the shape parameters.
    pub fn mu_n(&self) -> f64 {
        self.mu_n
    }
    pub fn subset_weights(&self) -> &[SubsetWeight] {
        &self.weights
    }
    pub fn is_symmetric(&self) -> bool {
        self.factors.iter().all(|f| f.is_symmetric())
    }
    pub fn is_half_integer(&self) -> bool {
        self.factors.iter().all(|f| f.is_half_integer_shape())
    }
    /// The law of -Z: exactly one factor changes sign, so exactly one skew
    /// flips. (Flipping every skew gives the law of (-1)^N Z instead.)
    pub fn mirrored(&self) -> ProductSpec {
        let mut factors = self.factors.clone();
        factors[0] = factors[0].mirrored();
        ProductSpec::new(factors).expect("mirror of a valid spec is valid")
    }

    /// min over even-parity subsets of omega_sigma.
    pub fn omega_plus(&self) -> f64 {
        self.weights
            .iter()
            .filter(|w| w.subset.parity_even())
            .map(|w| w.omega)
            .fold(f64::INFINITY, f64::min)
    }
    /// min over odd-parity subsets of omega_sigma.
    pub fn omega_minus(&self) -> f64 {
        self.weights
            .iter()
            .filter(|w| !w.subset.parity_even())
            .map(|w| w.omega)
            .fold(f64::INFINITY, f64::min)
    }

    fn m_values(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.m()).collect()
    }

    /// The G argument of the density/distribution kernels: xi^2 z^2 / 4^N.
    fn g_argument(&self, z: f64) -> f64 {
        let n = self.n() as f64;
        (self.xi * z).powi(2) / 4f64.powf(n)
    }

    // ----------------------------------------------------------------
    // density
    // ----------------------------------------------------------------

    /// Density of the product at z != 0, dispatching to the symmetric
    /// single-G form, the half-integer finite sum, or the general skew
    /// series. A single factor uses its closed Bessel form directly (the
    /// series collapse to it is verified in the tests).
    pub fn pdf(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if z == 0.0 {
            let m_min = self.factors.iter().map(|f| f.m()).fold(f64::INFINITY, f64::min);
            if self.n() >= 2 || m_min <= 0.0 {
                return Err(Error::OriginSingularity { m_min });
            }
        }
        if self.n() == 1 {
            let v = self.factors[0].pdf(z)?;
            return Ok(EvalResult {
                value: v,
                abs_err: v.abs() * 1e-13,
                converged: true,
            });
        }
        if self.is_symmetric() {
            self.pdf_symmetric(z, tol)
        } else if self.is_half_integer() {
            self.pdf_half_integer(z, tol)
        } else {
            self.pdf_general_series(z, tol)
        }
    }

    /// Symmetric case: a single G^{2N,0}_{0,2N} value.
    pub fn pdf_symmetric(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if !self.is_symmetric() {
            return Err(Error::Domain(
                "pdf_symmetric requires every skew beta = 0".into(),
            ));
        }
        if z == 0.0 && self.n() >= 2 {
            return Err(Error::OriginSingularity {
                m_min: self.factors.iter().map(|f| f.m()).fold(f64::INFINITY, f64::min),
            });
        }
        let n = self.n();
        let pref = self.xi * self.eta
            / (2f64.powi(n as i32) * std::f64::consts::PI.powf(n as f64 / 2.0));
        let mut b = vec![0.0; n];
        b.extend(self.m_values());
        let g = eval_g_q0(
            &MeijerGSpec::q0(b),
            self.g_argument(z),
            (tol / pref).max(1e-300),
        )?;
        Ok(EvalResult {
            value: pref * g.value,
            abs_err: pref * g.abs_err,
            converged: g.converged,
        })
    }

    /// Half-integer shapes: the finite N-fold sum over lower-order
    /// G^{N,0}_{0,N} values at the subset-weighted arguments omega_sigma |z|.
    pub fn pdf_half_integer(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if !self.is_half_integer() {
            return Err(Error::Domain(
                "pdf_half_integer requires every m_i - 1/2 to be a nonnegative integer".into(),
            ));
        }
        if z == 0.0 {
            return Err(Error::OriginSingularity { m_min: 0.5 });
        }
        let ks: Vec<usize> = self
            .factors
            .iter()
            .map(|f| (f.m() - 0.5).round() as usize)
            .collect();
        // prefactor prod gamma_i^{2 m_i + 1} / ((2 alpha_i)^{m_i + 1/2} k_i!)
        let mut pref = 1.0;
        for (f, &k) in self.factors.iter().zip(&ks) {
            pref *= f.gamma().powf(2.0 * f.m() + 1.0)
                / (2.0 * f.alpha()).powf(f.m() + 0.5)
                / factorial(k);
        }
        let sum = self.half_integer_sum(&ks, z, tol / pref, |spec, x, g_tol| {
            eval_g_q0(spec, x, g_tol).map(|r| EvalResultC {
                value: Complex64::new(r.value, 0.0),
                abs_err: r.abs_err,
                converged: r.converged,
            })
        })?;
        Ok(EvalResult {
            value: pref * sum.value.re,
            abs_err: pref * (sum.abs_err + sum.value.im.abs()),
            converged: sum.converged,
        })
    }

    // Shared iteration for the half-integer pdf: sum over the finite
    // multi-index j and the sign-selected subsets, with the per-(j, sigma)
    // weight  prod_{k in sigma} lam_k^{+(j+1/2-m)} / (2a)^j  *
    //         prod_{l in sigma^c} lam_l^{-(j+1/2-m)} / (2a)^j,
    // evaluating `kernel` at omega_sigma |z|.
    fn half_integer_sum<K>(
        &self,
        ks: &[usize],
        z: f64,
        tol: f64,
        kernel: K,
    ) -> Result<EvalResultC>
    where
        K: Fn(&MeijerGSpec, f64, f64) -> Result<EvalResultC>,
    {
        let n = self.n();
        let n_terms: usize = ks.iter().map(|&k| k + 1).product::<usize>() * (1 << (n - 1));
        let g_tol = (tol / n_terms as f64).max(1e-300);
        let mut value = Complex64::new(0.0, 0.0);
        let mut abs_err = 0.0;
        let mut converged = true;
        let mut j = vec![0usize; n];
        loop {
            let mut fac = 1.0;
            for i in 0..n {
                fac *= factorial(ks[i] + j[i]) / (factorial(ks[i] - j[i]) * factorial(j[i]));
            }
            let b: Vec<f64> = (0..n).map(|i| (ks[i] - j[i]) as f64).collect();
            let spec = MeijerGSpec::q0(b);
            for sw in &self.weights {
                if sw.subset.parity_even() != (z > 0.0) {
                    continue;
                }
                let mut w = 1.0;
                for i in 0..n {
                    let f = &self.factors[i];
                    let lam = if sw.subset.contains(i) {
                        f.lambda_plus()
                    } else {
                        f.lambda_minus()
                    };
                    w *= lam.powf(j[i] as f64 + 0.5 - f.m())
                        / (2.0 * f.alpha()).powi(j[i] as i32);
                }
                let g = kernel(&spec, sw.omega * z.abs(), g_tol)?;
                value += fac * w * g.value;
                abs_err += fac * w * g.abs_err;
                converged &= g.converged;
            }
            // advance the finite multi-index
            let mut carry = 0;
            while carry < n {
                j[carry] += 1;
                if j[carry] <= ks[carry] {
                    break;
                }
                j[carry] = 0;
                carry += 1;
            }
            if carry == n {
                break;
            }
        }
        Ok(EvalResultC {
            value,
            abs_err,
            converged,
        })
    }

    /// General skew series over shells of total degree; the parity
    /// coefficient prunes everything but all-even/all-odd multi-indices.
    pub fn pdf_general_series(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if z == 0.0 {
            return Err(Error::OriginSingularity {
                m_min: self.factors.iter().map(|f| f.m()).fold(f64::INFINITY, f64::min),
            });
        }
        let n = self.n();
        let x = self.g_argument(z);
        // prefactor eta / (2^{2N-1} pi^{N/2}) prod gamma^{2m+1}/alpha^{2m}
        let mut pref = self.eta
            / (2f64.powi(2 * n as i32 - 1) * std::f64::consts::PI.powf(n as f64 / 2.0));
        for f in &self.factors {
            pref *= f.gamma().powf(2.0 * f.m() + 1.0) / f.alpha().powf(2.0 * f.m());
        }
        let ratios: Vec<f64> = self
            .factors
            .iter()
            .map(|f| 2.0 * f.beta() / f.alpha())
            .collect();
        let tol_series = (tol / pref).max(1e-300);

        // The kernels grow like x^{J/(2N)} along the shells before the
        // factorial coefficient decay takes over, so the shell magnitudes
        // form a hump peaking near S_eff = sum |2 beta_i/alpha_i| x^{1/(2N)};
        // no stopping decision is valid before the hump has passed.
        let s_eff: f64 = ratios.iter().map(|r| r.abs()).sum::<f64>()
            * x.powf(1.0 / (2.0 * n as f64));
        let j_min_stop = s_eff.ceil() as usize + 2;
        let rho = self
            .factors
            .iter()
            .map(|f| f.beta().abs() / f.alpha())
            .fold(0.0f64, f64::max)
            .clamp(1e-6, 1.0 - 1e-9);
        let j_cap = (((tol_series * 1e-2).max(1e-280).ln() / rho.ln()).ceil() as usize + n + 12)
            .max(2 * s_eff.ceil() as usize + 30)
            .clamp(12, MAX_SHELLS);
        if j_min_stop + 4 > MAX_SHELLS {
            // the shell hump sits beyond any tractable truncation; a partial
            // sum would be arbitrarily wrong, not merely imprecise
            return Err(Error::NonConvergence {
                achieved: f64::INFINITY,
                requested: tol,
            });
        }

        let m_vals = self.m_values();
        let family = if x >= SERIES_RESIDUE_CROSSOVER {
            Some(Gq0Family::new(
                &m_vals,
                x,
                tol_series * 1e-2,
                j_cap,
                ratios.iter().map(|r| r.abs()).sum(),
            )?)
        } else {
            None
        };
        let eval_term = |j: &[usize]| -> Result<EvalResult> {
            if let Some(f) = &family {
                let all_even = j.iter().all(|v| v % 2 == 0);
                let k: Vec<usize> = j
                    .iter()
                    .map(|&v| if all_even { v / 2 } else { (v - 1) / 2 })
                    .collect();
                Ok(if all_even {
                    f.eval_even(&k)
                } else {
                    f.eval_odd(&k)
                })
            } else {
                let mut b: Vec<f64> = j.iter().map(|&v| v as f64 / 2.0).collect();
                b.extend(
                    j.iter()
                        .zip(&m_vals)
                        .map(|(&v, &m)| m + v as f64 / 2.0),
                );
                eval_g_q0_residue(&MeijerGSpec::q0(b), x, tol_series * 1e-2)
            }
        };

        let mut sum = 0.0;
        let mut abs_err = 0.0;
        let mut converged = true;
        let mut small_shells = 0usize;
        let mut truncated = true;
        let mut last_contrib = 0.0f64;
        let mut value_scale = 0.0f64;
        for shell in 0..=j_cap {
            let mut shell_contrib = 0.0f64;
            let mut evaluated = 0usize;
            let mut visit = |j: &Vec<usize>| -> Result<()> {
                let mut coef = 1.0;
                for (ji, ri) in j.iter().zip(&ratios) {
                    coef *= ri.powi(*ji as i32) / factorial(*ji);
                }
                if coef == 0.0 {
                    return Ok(());
                }
                let a = subset_coefficient(j, z > 0.0) as f64;
                let g = eval_term(j)?;
                let term = coef * a * g.value;
                shell_contrib += term.abs();
                evaluated += 1;
                sum += term;
                abs_err += coef.abs() * a.abs() * g.abs_err;
                converged &= g.converged;
                Ok(())
            };
            // all-even multi-indices with total degree `shell`
            if shell % 2 == 0 {
                for combo in compositions(shell / 2, n) {
                    let j: Vec<usize> = combo.iter().map(|&k| 2 * k).collect();
                    visit(&j)?;
                }
            }
            // all-odd multi-indices
            if shell >= n && (shell - n) % 2 == 0 {
                for combo in compositions((shell - n) / 2, n) {
                    let j: Vec<usize> = combo.iter().map(|&k| 2 * k + 1).collect();
                    visit(&j)?;
                }
            }
            // parity makes some shells empty; only populated shells past
            // the hump count toward the two-quiet-shells stopping rule
            if evaluated == 0 {
                continue;
            }
            last_contrib = shell_contrib;
            value_scale = value_scale.max(sum.abs());
            // never demand more than ~machine relative resolution
            let threshold = tol_series.max(value_scale * 5e-15);
            if shell >= j_min_stop && shell_contrib < threshold * 0.1 {
                small_shells += 1;
                if small_shells >= 2 {
                    abs_err += shell_contrib;
                    truncated = false;
                    break;
                }
            } else {
                small_shells = 0;
            }
        }
        if truncated {
            converged = false;
            abs_err += last_contrib.max(tol_series);
        }
        Ok(EvalResult {
            value: pref * sum,
            abs_err: pref * abs_err,
            converged: converged && !truncated,
        })
    }

    // ----------------------------------------------------------------
    // distribution function
    // ----------------------------------------------------------------

    /// Closed-form distribution function for symmetric factors; dispatches
    /// to the half-integer finite form when available.
    pub fn cdf_symmetric(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if !self.is_symmetric() {
            return Err(Error::Domain(
                "cdf_symmetric requires every skew beta = 0".into(),
            ));
        }
        if z == 0.0 {
            return Ok(EvalResult {
                value: 0.5,
                abs_err: 0.0,
                converged: true,
            });
        }
        let n = self.n();
        let nf = n as f64;
        if (self.xi * z.abs()).powf(1.0 / nf) > CDF_CLAMP {
            let bound = asymptotic::symmetric_tail_cdf(self, z.abs());
            return Ok(EvalResult {
                value: if z > 0.0 { 1.0 } else { 0.0 },
                abs_err: bound.max(1e-300),
                converged: true,
            });
        }
        if self.is_half_integer() {
            // finite form: 1/2 + sgn(z)/2 prod[2^{1/2-m}/k!] sum_j
            //   prod[(k+j)!/((k-j)! j! 2^j)] G^{N,1}_{1,N+1}(xi|z| | 1; m+1/2-j, 0)
            let ks: Vec<usize> = self
                .factors
                .iter()
                .map(|f| (f.m() - 0.5).round() as usize)
                .collect();
            let mut pref = 0.5;
            for (f, &k) in self.factors.iter().zip(&ks) {
                pref *= 2f64.powf(0.5 - f.m()) / factorial(k);
            }
            let n_terms: usize = ks.iter().map(|&k| k + 1).product();
            let g_tol = (tol / pref / n_terms as f64).max(1e-300);
            let mut sum = 0.0;
            let mut abs_err = 0.0;
            let mut converged = true;
            let mut j = vec![0usize; n];
            loop {
                let mut fac = 1.0;
                for i in 0..n {
                    fac *= factorial(ks[i] + j[i])
                        / (factorial(ks[i] - j[i]) * factorial(j[i]) * 2f64.powi(j[i] as i32));
                }
                let b_upper: Vec<f64> = (0..n)
                    .map(|i| self.factors[i].m() + 0.5 - j[i] as f64)
                    .collect();
                let spec = MeijerGSpec::cdf_class(1.0, b_upper, 0.0);
                let g = eval_g_cdf_class(&spec, self.xi * z.abs(), g_tol)?;
                sum += fac * g.value;
                abs_err += fac * g.abs_err;
                converged &= g.converged;
                let mut carry = 0;
                while carry < n {
                    j[carry] += 1;
                    if j[carry] <= ks[carry] {
                        break;
                    }
                    j[carry] = 0;
                    carry += 1;
                }
                if carry == n {
                    break;
                }
            }
            return Ok(EvalResult {
                value: 0.5 + z.signum() * pref * sum,
                abs_err: pref * abs_err,
                converged,
            });
        }
        // general symmetric form:
        // 1/2 + xi eta z / (2^{N+1} pi^{N/2}) G^{2N,1}_{1,2N+1}(arg | 1/2; 0..0, m.., -1/2)
        let pref =
            self.xi * self.eta * z / (2f64.powi(n as i32 + 1) * std::f64::consts::PI.powf(nf / 2.0));
        let mut b_upper = vec![0.0; n];
        b_upper.extend(self.m_values());
        let spec = MeijerGSpec::cdf_class(0.5, b_upper, -0.5);
        let g = eval_g_cdf_class(&spec, self.g_argument(z), (tol / pref.abs()).max(1e-300))?;
        Ok(EvalResult {
            value: 0.5 + pref * g.value,
            abs_err: pref.abs() * g.abs_err,
            converged: g.converged,
        })
    }

    /// Mass of the density on [a, b] (finite, may straddle the origin),
    /// with the integrable origin singularity handled by a logarithmic
    /// substitution.
    pub(crate) fn mass_interval(&self, a: f64, b: f64, tol: f64) -> QuadResult {
        debug_assert!(a <= b);
        // point evaluations must sit well below the quadrature target or
        // the error estimates plateau on evaluation noise
        let tol_point = (tol * 1e-3).max(1e-13);
        let mut value = 0.0;
        let mut abs_err = 0.0;
        let mut evals = 0;
        let mut converged = true;
        let mut add = |r: QuadResult| {
            value += r.value;
            abs_err += r.abs_err;
            evals += r.evals;
            converged &= r.converged;
        };
        // positive side [max(a,0), b]
        if b > 0.0 {
            let lo = a.max(0.0);
            let v_hi = b.min(ORIGIN_PATCH);
            if lo < v_hi {
                // z = e^{-v}
                let g =
                    |v: f64| (-v).exp() * self.pdf((-v).exp(), tol_point).map_or(0.0, |r| r.value);
                if lo == 0.0 {
                    add(integrate_to_inf(&g, -(v_hi.ln()), tol / 4.0));
                } else {
                    add(adaptive(&g, -(v_hi.ln()), -(lo.ln()), tol / 4.0));
                }
            }
            if b > ORIGIN_PATCH {
                let lo2 = lo.max(ORIGIN_PATCH);
                add(adaptive(
                    &|z: f64| self.pdf(z, tol_point).map_or(0.0, |r| r.value),
                    lo2,
                    b,
                    tol / 4.0,
                ));
            }
        }
        // negative side [a, min(b,0)] via the mirrored spec
        if a < 0.0 {
            let mirrored = self.mirrored();
            let r = mirrored.mass_interval((-b).max(0.0), -a, tol);
            add(r);
        }
        QuadResult {
            value,
            abs_err,
            converged,
            evals,
        }
    }

    /// Truncation point and residual bound for the given tail at level
    /// `eps`. The asymptotic tail expression (inflated 3x) locates a safe
    /// cut; since it often overshoots by orders of magnitude, the cut is
    /// then walked back against a direct density-based tail estimate
    /// `f(z) z^{1-1/N} / omega^{1/N}` (the local integral scale of
    /// exp(-N (omega z)^{1/N})).
    fn tail_cutoff(&self, side: Tail, eps: f64) -> (f64, f64) {
        let n = self.n() as f64;
        let omega = match side {
            Tail::Upper => self.omega_plus(),
            Tail::Lower => self.omega_minus(),
        };
        let sgn = if side == Tail::Upper { 1.0 } else { -1.0 };
        // start at the validity guidance (omega z)^{1/N} ~ 10
        let z_min = 10f64.powf(n) / omega;
        let mut z = z_min;
        let mut bound = 1.0;
        for _ in 0..200 {
            let t = match side {
                Tail::Upper => tail_asymptotic_cdf(self, z, Tail::Upper),
                Tail::Lower => tail_asymptotic_cdf(self, -z, Tail::Lower),
            }
            .unwrap_or(f64::INFINITY);
            if 3.0 * t < eps || z > 1e12 {
                bound = (3.0 * t).min(1.0);
                break;
            }
            z *= 1.5;
        }
        let tail_est = |z: f64| -> f64 {
            let f = self.pdf(sgn * z, (eps * 1e-2).max(1e-13)).map_or(f64::INFINITY, |r| r.value);
            f * z.powf(1.0 - 1.0 / n) / omega.powf(1.0 / n)
        };
        for _ in 0..24 {
            let cand = z / 1.6;
            if cand <= z_min || 4.0 * tail_est(cand) >= eps {
                break;
            }
            z = cand;
            bound = bound.min(4.0 * tail_est(z)).min(1.0);
        }
        (z, bound)
    }

    /// Numeric distribution function by adaptive quadrature of the density
    /// with origin splitting and asymptotic tail truncation. Works for any
    /// skew configuration.
    pub fn cdf_numeric(&self, z: f64, tol: f64) -> Result<EvalResult> {
        if self.is_symmetric() && z == 0.0 {
            return Ok(EvalResult {
                value: 0.5,
                abs_err: 0.0,
                converged: true,
            });
        }
        // work on the side that keeps the quadrature short
        if z > 0.0 {
            let upper = self.complementary_cdf_numeric(z, tol)?;
            return Ok(EvalResult {
                value: 1.0 - upper.value,
                abs_err: upper.abs_err,
                converged: upper.converged,
            });
        }
        let (cut, bound) = self.tail_cutoff(Tail::Lower, tol * 0.1);
        if z <= -cut {
            let est = tail_asymptotic_cdf(self, z, Tail::Lower).unwrap_or(0.0);
            return Ok(EvalResult {
                value: est,
                abs_err: est.max(bound),
                converged: true,
            });
        }
        let mass = self.mass_interval(-cut, z, tol * 0.5);
        Ok(EvalResult {
            value: mass.value + 0.5 * bound,
            abs_err: mass.abs_err + 0.5 * bound,
            converged: mass.converged,
        })
    }

    /// P(Z > z) with the same machinery, relative-accurate in the upper
    /// tail (used by the quantile solver).
    pub fn complementary_cdf_numeric(&self, z: f64, tol: f64) -> Result<EvalResult> {
        let (cut, bound) = self.tail_cutoff(Tail::Upper, tol * 0.1);
        if z >= cut {
            let est = tail_asymptotic_cdf(self, z, Tail::Upper).unwrap_or(0.0);
            return Ok(EvalResult {
                value: est,
                abs_err: est.max(bound),
                converged: true,
            });
        }
        let mass = self.mass_interval(z, cut, tol * 0.5);
        Ok(EvalResult {
            value: mass.value + 0.5 * bound,
            abs_err: mass.abs_err + 0.5 * bound,
            converged: mass.converged,
        })
    }

    // ----------------------------------------------------------------
    // sign probability
    // ----------------------------------------------------------------

    /// P(Z <= 0): the inclusion-exclusion expansion over factor sign
    /// probabilities.
    pub fn prob_nonpositive(&self) -> f64 {
        let p: Vec<f64> = self.factors.iter().map(|f| f.prob_nonpositive()).collect();
        let n = self.n();
        let mut total: f64 = p.iter().sum();
        for bits in 0u16..(1u16 << n) {
            let subset = SignedSubset::new(bits, n);
            let len = subset.len();
            if len < 2 {
                continue;
            }
            let prod: f64 = subset.members().map(|i| p[i]).product();
            let sign = if len % 2 == 0 { -1.0 } else { 1.0 };
            total += sign * 2f64.powi(len as i32 - 1) * prod;
        }
        total
    }

    /// Equal-parameter shortcut `1/2 - (1 - 2 P)^N / 2`; requires all
    /// factors identical.
    pub fn prob_nonpositive_equal(&self) -> Result<f64> {
        let first = self.factors[0];
        if self.factors.iter().any(|f| *f != first) {
            return Err(Error::Domain(
                "equal-parameter shortcut requires identical factors".into(),
            ));
        }
        let p = first.prob_nonpositive();
        Ok(0.5 - 0.5 * (1.0 - 2.0 * p).powi(self.n() as i32))
    }

    // ----------------------------------------------------------------
    // characteristic function
    // ----------------------------------------------------------------

    /// Characteristic function dispatcher: symmetric closed form, else the
    /// half-integer finite sum. General non-half-integer skewed products
    /// have no closed form here; use the Fourier oracle for those.
    pub fn cf(&self, t: f64, tol: f64) -> Result<EvalResultC> {
        if self.is_symmetric() {
            let r = self.cf_symmetric(t, tol)?;
            Ok(EvalResultC {
                value: Complex64::new(r.value, 0.0),
                abs_err: r.abs_err,
                converged: r.converged,
            })
        } else if self.is_half_integer() {
            self.cf_half_integer(t, tol)
        } else {
            Err(Error::Domain(
                "characteristic function in closed form needs all beta = 0 \
                 or all half-integer shapes"
                    .into(),
            ))
        }
    }

    /// Symmetric characteristic function: real, even in t.
    pub fn cf_symmetric(&self, t: f64, tol: f64) -> Result<EvalResult> {
        if !self.is_symmetric() {
            return Err(Error::Domain(
                "cf_symmetric requires every skew beta = 0".into(),
            ));
        }
        if t == 0.0 {
            return Ok(EvalResult {
                value: 1.0,
                abs_err: 0.0,
                converged: true,
            });
        }
        let n = self.n();
        let nf = n as f64;
        let pref = self.xi * self.eta
            / (2f64.powi(n as i32 - 1)
                * std::f64::consts::PI.powf((nf - 1.0) / 2.0)
                * t.abs());
        let mut b = vec![0.0; n - 1];
        b.extend(self.m_values());
        let x = (self.xi / t).powi(2) / 4f64.powi(n as i32 - 1);
        let spec = MeijerGSpec::cf_class(0.5, b);
        let g = eval_g_cf_class(&spec, Complex64::new(x, 0.0), (tol / pref).max(1e-300))?;
        Ok(EvalResult {
            value: pref * g.value.re,
            abs_err: pref * (g.abs_err + g.value.im.abs()),
            converged: g.converged,
        })
    }

    /// Half-integer characteristic function: the double finite sum over
    /// multi-indices and signed subsets of complex-argument G^{N,1}_{1,N}
    /// values, scaled by i/t.
    pub fn cf_half_integer(&self, t: f64, tol: f64) -> Result<EvalResultC> {
        if !self.is_half_integer() {
            return Err(Error::Domain(
                "cf_half_integer requires every m_i - 1/2 to be a nonnegative integer".into(),
            ));
        }
        if t == 0.0 {
            return Ok(EvalResultC {
                value: Complex64::new(1.0, 0.0),
                abs_err: 0.0,
                converged: true,
            });
        }
        let n = self.n();
        let ks: Vec<usize> = self
            .factors
            .iter()
            .map(|f| (f.m() - 0.5).round() as usize)
            .collect();
        let mut pref = 1.0;
        for (f, &k) in self.factors.iter().zip(&ks) {
            pref *= f.gamma().powf(2.0 * f.m() + 1.0)
                / (2.0 * f.alpha()).powf(f.m() + 0.5)
                / factorial(k);
        }
        let n_terms: usize = ks.iter().map(|&k| k + 1).product::<usize>() * (1 << n);
        let g_tol = (tol / pref / n_terms as f64).max(1e-300);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_err = 0.0;
        let mut converged = true;
        let mut j = vec![0usize; n];
        loop {
            let mut fac = 1.0;
            for i in 0..n {
                fac *= factorial(ks[i] + j[i]) / (factorial(ks[i] - j[i]) * factorial(j[i]));
            }
            let b: Vec<f64> = (0..n).map(|i| (ks[i] - j[i]) as f64).collect();
            let spec = MeijerGSpec::cf_class(0.0, b);
            for sw in &self.weights {
                let mut w = 1.0;
                for i in 0..n {
                    let f = &self.factors[i];
                    let lam = if sw.subset.contains(i) {
                        f.lambda_plus()
                    } else {
                        f.lambda_minus()
                    };
                    w *= lam.powf(j[i] as f64 + 0.5 - f.m())
                        / (2.0 * f.alpha()).powi(j[i] as i32);
                }
                let arg = Complex64::new(0.0, sw.omega / t);
                let (arg, sign) = if sw.subset.parity_even() {
                    (arg, 1.0)
                } else {
                    (-arg, -1.0)
                };
                let g = eval_g_cf_class(&spec, arg, g_tol)?;
                sum += sign * fac * w * g.value;
                abs_err += fac * w * g.abs_err;
                converged &= g.converged;
            }
            let mut carry = 0;
            while carry < n {
                j[carry] += 1;
                if j[carry] <= ks[carry] {
                    break;
                }
                j[carry] = 0;
                carry += 1;
            }
            if carry == n {
                break;
            }
        }
        let scale = Complex64::new(0.0, 1.0 / t) * pref;
        Ok(EvalResultC {
            value: scale * sum,
            abs_err: pref / t.abs() * abs_err,
            converged,
        })
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    let mut f = 1.0;
    for i in 2..=k {
        f *= i as f64;
    }
    f
}

/// All length-`parts` compositions (ordered, zeros allowed) of `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, head: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            let mut c = head.clone();
            c.push(total);
            out.push(c);
            return;
        }
        for first in 0..=total {
            head.push(first);
            rec(total - first, parts - 1, head, out);
            head.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}
