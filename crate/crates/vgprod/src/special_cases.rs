//! Closed-form constructors and evaluators for the tractable families:
//! products of asymmetric Laplace variables, symmetric Laplace products,
//! mixed normal-Laplace products, and products of correlated zero-mean
//! normals with a block-diagonal covariance.
//!
//! Each family embeds into a [`ProductSpec`] (these are reparameterizations,
//! not new distributions); the reduced lower-order G-function expressions
//! are implemented directly where they are cheaper and cross-tested against
//! the generic evaluators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::meijer::{
    eval_g_cdf_class, eval_g_cf_class, eval_g_q0, EvalResult, EvalResultC, Gq0Family, MeijerGSpec,
};
use crate::product::{subset_coefficient, ProductSpec};
use crate::rng::{seeded_rng, sub_seed};
use crate::vg::{SampleBatch, VgParams};

// ------------------------------------------------------------------
// asymmetric Laplace products
// ------------------------------------------------------------------

/// Product of N independent asymmetric Laplace factors AL(alpha_i, beta_i);
/// AL(alpha, beta) is the shape-1/2 variance-gamma law.
#[derive(Debug, Clone)]
pub struct LaplaceProductSpec {
    pairs: Vec<(f64, f64)>,
}

impl LaplaceProductSpec {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("need at least one (alpha, beta) pair".into()));
        }
        for &(alpha, beta) in &pairs {
            VgParams::new(0.5, alpha, beta)?;
        }
        Ok(LaplaceProductSpec { pairs })
    }

    /// Symmetric Laplace product (all beta = 0).
    pub fn symmetric(alphas: Vec<f64>) -> Result<Self> {
        Self::new(alphas.into_iter().map(|a| (a, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    /// The equivalent variance-gamma product (every shape 1/2).
    pub fn embed(&self) -> ProductSpec {
        ProductSpec::new(
            self.pairs
                .iter()
                .map(|&(a, b)| VgParams::new(0.5, a, b).expect("validated"))
                .collect(),
        )
        .expect("validated")
    }
}

/// Density of the asymmetric-Laplace product: the sign-selected subset sum
/// of G^{N,0}_{0,N}(omega_sigma |z| | 0...0) values.
pub fn al_product_pdf(spec: &LaplaceProductSpec, z: f64, tol: f64) -> Result<EvalResult> {
    if z == 0.0 {
        return Err(Error::OriginSingularity { m_min: 0.5 });
    }
    let embedded = spec.embed();
    let n = spec.n();
    let gamma2: f64 = embedded.factors().iter().map(|f| f.gamma2()).product();
    let pref = gamma2 / (2f64.powi(n as i32) * embedded.xi());
    let g_spec = MeijerGSpec::q0(vec![0.0; n]);
    let g_tol = (tol / pref / (1 << (n - 1)) as f64).max(1e-300);
    let mut sum = 0.0;
    let mut abs_err = 0.0;
    let mut converged = true;
    for sw in embedded.subset_weights() {
        if sw.subset.parity_even() != (z > 0.0) {
            continue;
        }
        let g = eval_g_q0(&g_spec, sw.omega * z.abs(), g_tol)?;
        sum += g.value;
        abs_err += g.abs_err;
        converged &= g.converged;
    }
    Ok(EvalResult {
        value: pref * sum,
        abs_err: pref * abs_err,
        converged,
    })
}

/// Distribution function of the asymmetric-Laplace product (two-branch
/// closed form; the value at z = 0 is the sign probability).
pub fn al_product_cdf(spec: &LaplaceProductSpec, z: f64, tol: f64) -> Result<EvalResult> {
    let embedded = spec.embed();
    if z == 0.0 {
        return Ok(EvalResult {
            value: embedded.prob_nonpositive(),
            abs_err: 1e-14,
            converged: true,
        });
    }
    let n = spec.n();
    let gamma2: f64 = embedded.factors().iter().map(|f| f.gamma2()).product();
    let pref = gamma2 / (2f64.powi(n as i32) * embedded.xi());
    let g_spec = MeijerGSpec::cdf_class(1.0, vec![1.0; n], 0.0);
    let g_tol = (tol / pref / (1 << (n - 1)) as f64).max(1e-300);
    let mut sum = 0.0;
    let mut abs_err = 0.0;
    let mut converged = true;
    for sw in embedded.subset_weights() {
        if sw.subset.parity_even() != (z > 0.0) {
            continue;
        }
        let g = eval_g_cdf_class(&g_spec, sw.omega * z.abs(), g_tol * sw.omega)?;
        sum += (1.0 - g.value) / sw.omega;
        abs_err += g.abs_err / sw.omega;
        converged &= g.converged;
    }
    Ok(EvalResult {
        value: if z > 0.0 {
            1.0 - pref * sum
        } else {
            pref * sum
        },
        abs_err: pref * abs_err,
        converged,
    })
}

/// Characteristic function of the asymmetric-Laplace product: the signed
/// difference of complex-argument G^{N,1}_{1,N} sums scaled by i/(2^N xi t).
pub fn al_product_cf(spec: &LaplaceProductSpec, t: f64, tol: f64) -> Result<EvalResultC> {
    if t == 0.0 {
        return Ok(EvalResultC {
            value: Complex64::new(1.0, 0.0),
            abs_err: 0.0,
            converged: true,
        });
    }
    let embedded = spec.embed();
    let n = spec.n();
    let gamma2: f64 = embedded.factors().iter().map(|f| f.gamma2()).product();
    let pref = gamma2 / (2f64.powi(n as i32) * embedded.xi() * t);
    let g_spec = MeijerGSpec::cf_class(0.0, vec![0.0; n]);
    let g_tol = (tol / pref.abs() / (1 << n) as f64).max(1e-300);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_err = 0.0;
    let mut converged = true;
    for sw in embedded.subset_weights() {
        let arg = Complex64::new(0.0, sw.omega / t);
        let (arg, sign) = if sw.subset.parity_even() {
            (arg, 1.0)
        } else {
            (-arg, -1.0)
        };
        let g = eval_g_cf_class(&g_spec, arg, g_tol)?;
        sum += sign * g.value;
        abs_err += g.abs_err;
        converged &= g.converged;
    }
    Ok(EvalResultC {
        value: Complex64::new(0.0, pref) * sum,
        abs_err: pref.abs() * abs_err,
        converged,
    })
}

/// Symmetric Laplace product density `xi/2 G^{N,0}_{0,N}(xi |z| | 0...0)`.
pub fn laplace_product_pdf(alphas: &[f64], z: f64, tol: f64) -> Result<EvalResult> {
    if z == 0.0 {
        return Err(Error::OriginSingularity { m_min: 0.5 });
    }
    let xi: f64 = alphas.iter().product();
    let pref = 0.5 * xi;
    let g = eval_g_q0(
        &MeijerGSpec::q0(vec![0.0; alphas.len()]),
        xi * z.abs(),
        (tol / pref).max(1e-300),
    )?;
    Ok(EvalResult {
        value: pref * g.value,
        abs_err: pref * g.abs_err,
        converged: g.converged,
    })
}

/// Symmetric Laplace product distribution function
/// `1/2 + sgn(z)/2 G^{N,1}_{1,N+1}(xi |z| | 1; 1...1, 0)`.
pub fn laplace_product_cdf(alphas: &[f64], z: f64, tol: f64) -> Result<EvalResult> {
    let xi: f64 = alphas.iter().product();
    let n = alphas.len();
    let g = eval_g_cdf_class(
        &MeijerGSpec::cdf_class(1.0, vec![1.0; n], 0.0),
        xi * z.abs(),
        (2.0 * tol).max(1e-300),
    )?;
    Ok(EvalResult {
        value: 0.5 + 0.5 * z.signum() * g.value,
        abs_err: 0.5 * g.abs_err,
        converged: g.converged,
    })
}

/// Symmetric Laplace product characteristic function (real, even).
pub fn laplace_product_cf(alphas: &[f64], t: f64, tol: f64) -> Result<EvalResult> {
    let spec = LaplaceProductSpec::symmetric(alphas.to_vec())?;
    spec.embed().cf_symmetric(t, tol)
}

// ------------------------------------------------------------------
// mixed normal-Laplace products
// ------------------------------------------------------------------

/// Product of 2M independent centred normals N(0, sigma_i^2) and N
/// independent Laplace(alpha_j) factors.
#[derive(Debug, Clone)]
pub struct MixedNormalLaplaceSpec {
    sigmas: Vec<f64>,
    alphas: Vec<f64>,
}

impl MixedNormalLaplaceSpec {
    pub fn new(sigmas: Vec<f64>, alphas: Vec<f64>) -> Result<Self> {
        if sigmas.len() % 2 != 0 {
            return Err(Error::Domain(format!(
                "the normal factor count must be even, got {}",
                sigmas.len()
            )));
        }
        if sigmas.is_empty() && alphas.is_empty() {
            return Err(Error::Domain("need at least one factor".into()));
        }
        if sigmas.iter().any(|&s| !(s > 0.0)) || alphas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Domain("scales must be positive".into()));
        }
        Ok(MixedNormalLaplaceSpec { sigmas, alphas })
    }

    /// nu = (prod sigma_i^{-1}) (prod alpha_j).
    pub fn nu(&self) -> f64 {
        self.sigmas.iter().map(|s| 1.0 / s).product::<f64>()
            * self.alphas.iter().product::<f64>()
    }
    pub fn m_count(&self) -> usize {
        self.sigmas.len() / 2
    }
    pub fn n_count(&self) -> usize {
        self.alphas.len()
    }

    /// The equivalent variance-gamma product: each normal pair becomes a
    /// shape-0 factor, each Laplace factor a shape-1/2 factor.
    pub fn embed(&self) -> ProductSpec {
        let mut factors = Vec::new();
        for pair in self.sigmas.chunks(2) {
            factors.push(VgParams::new(0.0, 1.0 / (pair[0] * pair[1]), 0.0).expect("sigma > 0"));
        }
        for &a in &self.alphas {
            factors.push(VgParams::new(0.5, a, 0.0).expect("alpha > 0"));
        }
        ProductSpec::new(factors).expect("validated")
    }

    fn g_arg(&self, z: f64) -> f64 {
        let mn = (self.m_count() + self.n_count()) as i32;
        (self.nu() * z).powi(2) / 4f64.powi(mn)
    }
}

/// Mixed-product density: a single G with parameter vector
/// (0 x (2M+N), 1/2 x N).
pub fn mixed_product_pdf(spec: &MixedNormalLaplaceSpec, z: f64, tol: f64) -> Result<EvalResult> {
    if z == 0.0 {
        return Err(Error::OriginSingularity { m_min: 0.0 });
    }
    let (m, n) = (spec.m_count(), spec.n_count());
    let mn = m + n;
    let pref = spec.nu()
        / (2f64.powi(mn as i32) * std::f64::consts::PI.powf(m as f64 + n as f64 / 2.0));
    let mut b = vec![0.0; 2 * m + n];
    b.extend(vec![0.5; n]);
    let g = eval_g_q0(&MeijerGSpec::q0(b), spec.g_arg(z), (tol / pref).max(1e-300))?;
    Ok(EvalResult {
        value: pref * g.value,
        abs_err: pref * g.abs_err,
        converged: g.converged,
    })
}

/// Mixed-product distribution function.
pub fn mixed_product_cdf(spec: &MixedNormalLaplaceSpec, z: f64, tol: f64) -> Result<EvalResult> {
    if z == 0.0 {
        return Ok(EvalResult {
            value: 0.5,
            abs_err: 0.0,
            converged: true,
        });
    }
    let (m, n) = (spec.m_count(), spec.n_count());
    let mn = m + n;
    let pref = spec.nu() * z
        / (2f64.powi(mn as i32 + 1) * std::f64::consts::PI.powf(m as f64 + n as f64 / 2.0));
    let mut b_upper = vec![0.0; 2 * m + n];
    b_upper.extend(vec![0.5; n]);
    let g = eval_g_cdf_class(
        &MeijerGSpec::cdf_class(0.5, b_upper, -0.5),
        spec.g_arg(z),
        (tol / pref.abs()).max(1e-300),
    )?;
    Ok(EvalResult {
        value: 0.5 + pref * g.value,
        abs_err: pref.abs() * g.abs_err,
        converged: g.converged,
    })
}

/// Mixed-product characteristic function (real, even in t).
pub fn mixed_product_cf(spec: &MixedNormalLaplaceSpec, t: f64, tol: f64) -> Result<EvalResult> {
    if t == 0.0 {
        return Ok(EvalResult {
            value: 1.0,
            abs_err: 0.0,
            converged: true,
        });
    }
    let (m, n) = (spec.m_count(), spec.n_count());
    let mn = m + n;
    let nu = spec.nu();
    let pref = nu
        / (2f64.powi(mn as i32 - 1)
            * std::f64::consts::PI.powf(m as f64 + (n as f64 - 1.0) / 2.0)
            * t.abs());
    let mut b = vec![0.0; 2 * m + n - 1];
    b.extend(vec![0.5; n]);
    let x = (nu / t).powi(2) / 4f64.powi(mn as i32 - 1);
    let g = eval_g_cf_class(
        &MeijerGSpec::cf_class(0.5, b),
        Complex64::new(x, 0.0),
        (tol / pref).max(1e-300),
    )?;
    Ok(EvalResult {
        value: pref * g.value.re,
        abs_err: pref * (g.abs_err + g.value.im.abs()),
        converged: g.converged,
    })
}

// ------------------------------------------------------------------
// correlated normal products
// ------------------------------------------------------------------

/// Product of 2N jointly normal zero-mean variables whose covariance is
/// 2x2-block diagonal: block i holds (sigma_{2i-1}, sigma_{2i}, rho_i).
#[derive(Debug, Clone)]
pub struct CorrelatedNormalSpec {
    blocks: Vec<(f64, f64, f64)>,
}

impl CorrelatedNormalSpec {
    pub fn new(blocks: Vec<(f64, f64, f64)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Domain("need at least one correlation block".into()));
        }
        for &(s1, s2, rho) in &blocks {
            if !(s1 > 0.0 && s2 > 0.0) {
                return Err(Error::Domain("block scales must be positive".into()));
            }
            if !(rho.abs() < 1.0) {
                return Err(Error::Domain(format!(
                    "correlations must satisfy |rho| < 1, got {rho}"
                )));
            }
        }
        Ok(CorrelatedNormalSpec { blocks })
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }
    /// s = product of all 2N scale parameters.
    pub fn s(&self) -> f64 {
        self.blocks.iter().map(|&(a, b, _)| a * b).product()
    }
    /// tau = prod (1 - rho_i^2).
    pub fn tau(&self) -> f64 {
        self.blocks.iter().map(|&(_, _, r)| 1.0 - r * r).product()
    }

    /// Per-block variance-gamma embedding: the pairwise product
    /// X_{2i-1} X_{2i} is VG(0, 1/(s1 s2 (1-rho^2)), rho/(s1 s2 (1-rho^2))).
    pub fn embed(&self) -> ProductSpec {
        ProductSpec::new(
            self.blocks
                .iter()
                .map(|&(s1, s2, rho)| {
                    let d = s1 * s2 * (1.0 - rho * rho);
                    VgParams::new(0.0, 1.0 / d, rho / d).expect("|rho| < 1")
                })
                .collect(),
        )
        .expect("validated")
    }

    /// Draws of the product via per-block 2x2 Cholesky factors; block i
    /// uses the sub-stream `sub_seed(seed, i)`.
    pub fn sample(&self, n: usize, seed: u64) -> SampleBatch {
        use rand_distr::{Distribution, StandardNormal};
        let mut values = vec![1.0f64; n];
        for (i, &(s1, s2, rho)) in self.blocks.iter().enumerate() {
            let mut rng = seeded_rng(sub_seed(seed, i));
            let c = (1.0 - rho * rho).sqrt();
            for v in values.iter_mut() {
                let u: f64 = StandardNormal.sample(&mut rng);
                let w: f64 = StandardNormal.sample(&mut rng);
                let x1 = s1 * u;
                let x2 = s2 * (rho * u + c * w);
                *v *= x1 * x2;
            }
        }
        let digest = format!("corr-normal{:?}", self.blocks);
        SampleBatch {
            values,
            seed,
            n,
            spec_digest: digest,
        }
    }
}

/// Density of the correlated-normal product: the correlation series with
/// G^{2N,0}_{0,2N} kernels whose parameter vector repeats j/2 twice.
pub fn correlated_normal_product_pdf(
    spec: &CorrelatedNormalSpec,
    z: f64,
    tol: f64,
) -> Result<EvalResult> {
    if z == 0.0 {
        return Err(Error::OriginSingularity { m_min: 0.0 });
    }
    let n = spec.n_blocks();
    let s = spec.s();
    let tau = spec.tau();
    let pref = 1.0
        / (2f64.powi(2 * n as i32 - 1)
            * std::f64::consts::PI.powi(n as i32)
            * s
            * tau.sqrt());
    let x = z * z / (4f64.powi(n as i32) * s * s * tau * tau);
    let rhos: Vec<f64> = spec.blocks.iter().map(|&(_, _, r)| 2.0 * r).collect();
    let tol_series = (tol / pref).max(1e-300);
    // shell-magnitude hump near S_eff (see the product series for the rationale)
    let s_eff: f64 =
        rhos.iter().map(|r| r.abs()).sum::<f64>() * x.powf(1.0 / (2.0 * n as f64));
    let j_min_stop = s_eff.ceil() as usize + 2;
    let rho_max = spec
        .blocks
        .iter()
        .map(|&(_, _, r)| r.abs())
        .fold(0.0f64, f64::max)
        .clamp(1e-6, 1.0 - 1e-9);
    let j_cap = (((tol_series * 1e-2).max(1e-280).ln() / rho_max.ln()).ceil() as usize + n + 12)
        .max(2 * s_eff.ceil() as usize + 30)
        .clamp(12, 160);
    if j_min_stop + 4 > 160 {
        return Err(Error::NonConvergence {
            achieved: f64::INFINITY,
            requested: tol,
        });
    }
    let family = Gq0Family::new(
        &vec![0.0; n],
        x,
        tol_series * 1e-2,
        j_cap,
        rhos.iter().map(|r| r.abs()).sum(),
    )?;

    let mut sum = 0.0;
    let mut abs_err = 0.0;
    let mut small = 0usize;
    let mut truncated = true;
    let mut last_contrib = 0.0f64;
    let mut value_scale = 0.0f64;
    for shell in 0..=j_cap {
        let mut shell_contrib = 0.0f64;
        let mut evaluated = 0usize;
        let mut visit = |j: &Vec<usize>| {
            let mut coef = 1.0;
            for (ji, ri) in j.iter().zip(&rhos) {
                coef *= ri.powi(*ji as i32) / fact(*ji);
            }
            if coef == 0.0 {
                return;
            }
            let a = subset_coefficient(j, z > 0.0) as f64;
            let all_even = j.iter().all(|v| v % 2 == 0);
            let k: Vec<usize> = j
                .iter()
                .map(|&v| if all_even { v / 2 } else { (v - 1) / 2 })
                .collect();
            let g = if all_even {
                family.eval_even(&k)
            } else {
                family.eval_odd(&k)
            };
            let term = coef * a * g.value;
            shell_contrib += term.abs();
            evaluated += 1;
            sum += term;
            abs_err += coef.abs() * a.abs() * g.abs_err;
        };
        if shell % 2 == 0 {
            for c in compositions(shell / 2, n) {
                visit(&c.iter().map(|&k| 2 * k).collect());
            }
        }
        if shell >= n && (shell - n) % 2 == 0 {
            for c in compositions((shell - n) / 2, n) {
                visit(&c.iter().map(|&k| 2 * k + 1).collect());
            }
        }
        if evaluated == 0 {
            continue;
        }
        last_contrib = shell_contrib;
        value_scale = value_scale.max(sum.abs());
        let threshold = tol_series.max(value_scale * 5e-15);
        if shell >= j_min_stop && shell_contrib < threshold * 0.1 {
            small += 1;
            if small >= 2 {
                abs_err += shell_contrib;
                truncated = false;
                break;
            }
        } else {
            small = 0;
        }
    }
    if truncated {
        abs_err += last_contrib.max(tol_series);
    }
    Ok(EvalResult {
        value: pref * sum,
        abs_err: pref * abs_err,
        converged: !truncated,
    })
}

fn fact(k: usize) -> f64 {
    let mut f = 1.0;
    for i in 2..=k {
        f *= i as f64;
    }
    f
}

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
