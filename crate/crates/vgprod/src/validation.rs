//! Named validation suites runnable from the CLI and reused by the
//! acceptance tests: G-function identities, oracle equivalence on the
//! standard spec grid, normalization, asymptotic-regime ratios, and Monte
//! Carlo goodness of fit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::par_map;
use crate::meijer::{eval_g_cdf_class, eval_g_line, eval_g_q0, MeijerGSpec};
use crate::oracle::{cf_fourier, convolution_pdf, ks_statistic, mc_product_sample, CdfGrid,
    OracleDensity};
use crate::product::{
    pdf_origin_asymptotic, quantile_asymptotic, quantile_numeric, tail_asymptotic_cdf,
    ProductSpec, Tail,
};
use crate::rng::splitmix64;
use crate::vg::VgParams;

/// One validation check: name, measured discrepancy, threshold, verdict.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub discrepancy: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(name: impl Into<String>, discrepancy: f64, threshold: f64) -> Self {
        let pass = discrepancy.is_finite() && discrepancy <= threshold;
        CheckReport {
            name: name.into(),
            discrepancy,
            threshold,
            pass,
        }
    }
}

pub const SUITES: [&str; 5] = [
    "identities",
    "oracle-equivalence",
    "normalization",
    "asymptotics",
    "montecarlo",
];

/// Runs one named suite. The Monte Carlo suite takes the seed; the others
/// are fully deterministic (the identity grid derives its own stream from
/// the seed).
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckReport>> {
    match name {
        "identities" => Ok(run_identities(seed)),
        "oracle-equivalence" => Ok(run_oracle_equivalence()),
        "normalization" => Ok(run_normalization()),
        "asymptotics" => Ok(run_asymptotics()),
        "montecarlo" => Ok(run_montecarlo(seed)),
        other => Err(Error::Domain(format!(
            "unknown suite '{other}'; available: {}",
            SUITES.join(", ")
        ))),
    }
}

fn vg(m: f64, alpha: f64, ratio: f64) -> VgParams {
    VgParams::new(m, alpha, ratio * alpha).expect("grid factor valid")
}

/// The canonical 12-spec grid (N in {2,3}; shapes from {-1/4, 0, 1/2, 2};
/// skew ratios from {0, +1/2, -1/2}) used by the oracle-equivalence,
/// normalization, sign-probability and Monte Carlo checks.
pub fn standard_grid() -> Vec<ProductSpec> {
    let specs: Vec<Vec<VgParams>> = vec![
        vec![vg(-0.25, 1.0, 0.0), vg(0.5, 2.0, 0.0)],
        vec![vg(0.0, 0.5, 0.0), vg(2.0, 1.0, 0.0)],
        vec![vg(0.5, 1.0, 0.5), vg(0.5, 1.0, -0.5)],
        vec![vg(-0.25, 2.0, -0.5), vg(2.0, 0.5, 0.5)],
        vec![vg(0.0, 1.0, 0.5), vg(0.5, 3.0, 0.0)],
        vec![vg(2.0, 1.0, 0.5), vg(2.0, 1.0, 0.5)],
        vec![vg(0.5, 1.0, 0.0), vg(0.5, 1.0, 0.0), vg(0.5, 1.0, 0.0)],
        vec![vg(-0.25, 1.0, 0.0), vg(0.5, 2.0, 0.0), vg(2.0, 0.5, 0.0)],
        vec![vg(0.0, 1.0, 0.5), vg(0.0, 1.0, -0.5), vg(0.5, 2.0, 0.0)],
        vec![vg(0.5, 1.0, -0.5), vg(2.0, 0.5, 0.5), vg(2.0, 1.0, 0.0)],
        vec![vg(0.0, 2.0, 0.0), vg(2.0, 1.0, 0.5), vg(0.5, 1.0, 0.5)],
        vec![vg(-0.25, 1.0, -0.5), vg(-0.25, 1.0, -0.5), vg(2.0, 1.0, -0.5)],
    ];
    specs
        .into_iter()
        .map(|f| ProductSpec::new(f).expect("grid spec valid"))
        .collect()
}

/// Density comparison points used with the standard grid.
pub const GRID_Z: [f64; 6] = [-5.0, -1.0, -0.2, 0.2, 1.0, 5.0];

// ------------------------------------------------------------------
// identities
// ------------------------------------------------------------------

/// Pseudorandom G^{q,0} parameter sets: 100 cases, b_j in (-0.4, 3),
/// q in {2, 4, 6}.
pub fn identity_grid(seed: u64) -> Vec<Vec<f64>> {
    let mut state = seed;
    let mut next = || {
        state = splitmix64(state);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut cases = Vec::with_capacity(100);
    for i in 0..100 {
        let q = [2, 4, 6][i % 3];
        let b: Vec<f64> = (0..q).map(|_| -0.4 + 3.4 * next()).collect();
        cases.push(b);
    }
    cases
}

pub fn run_identities(seed: u64) -> Vec<CheckReport> {
    let cases = identity_grid(seed);
    let xs = [0.01, 0.5, 2.0, 10.0];

    let worst = |f: &(dyn Fn(&[f64], f64) -> f64 + Sync)| -> f64 {
        par_map(&cases, |b| {
            let mut w = 0.0f64;
            for &x in &xs {
                w = w.max(f(b, x));
            }
            w
        })
        .into_iter()
        .fold(0.0, f64::max)
    };

    let shift_disc = worst(&|b: &[f64], x: f64| {
        let spec = MeijerGSpec::q0(b.to_vec());
        let alpha = 0.75;
        let lhs = x.powf(alpha) * eval_g_q0(&spec, x, 1e-13).unwrap().value;
        let rhs = eval_g_q0(&spec.shift_argument(alpha), x, 1e-13).unwrap().value;
        ((lhs - rhs) / rhs.abs().max(1e-280)).abs()
    });

    let invert_disc = worst(&|b: &[f64], x: f64| {
        let spec = MeijerGSpec::q0(b.to_vec());
        let lhs = eval_g_q0(&spec, x, 1e-13).unwrap().value;
        let inv = spec.invert_argument();
        let rhs = eval_g_line(&inv, Complex64::new(1.0 / x, 0.0), 1e-13)
            .unwrap()
            .value;
        ((lhs - rhs.re) / lhs.abs().max(1e-280)).abs() + rhs.im.abs() / lhs.abs().max(1e-280)
    });

    // distribution-kernel limits: exactly 0 at the origin, 1 at infinity
    let mut kernel_zero: f64 = 0.0;
    let mut kernel_one: f64 = 0.0;
    for n in 1..=3usize {
        let spec = MeijerGSpec::cdf_class(1.0, vec![1.0; n], 0.0);
        kernel_zero = kernel_zero.max(eval_g_cdf_class(&spec, 0.0, 1e-12).unwrap().value.abs());
        let far = eval_g_cdf_class(&spec, 5.0e6, 1e-11).unwrap().value;
        kernel_one = kernel_one.max((far - 1.0).abs());
    }

    vec![
        CheckReport::new("shift identity (argument power)", shift_disc, 1e-10),
        CheckReport::new("inversion identity (argument reciprocal)", invert_disc, 1e-10),
        CheckReport::new("cdf kernel value at 0", kernel_zero, 0.0),
        CheckReport::new("cdf kernel limit at infinity", kernel_one, 1e-8),
    ]
}

// ------------------------------------------------------------------
// oracle equivalence
// ------------------------------------------------------------------

pub fn run_oracle_equivalence() -> Vec<CheckReport> {
    let grid = standard_grid();
    par_map(&grid.iter().enumerate().collect::<Vec<_>>(), |(i, spec)| {
        let mut worst = 0.0f64;
        for &z in &GRID_Z {
            let exact = spec.pdf(z, 1e-9).unwrap().value;
            let oracle = convolution_pdf(spec, z, 1e-8).unwrap();
            let tol = 1e-6f64.max(1e-5 * exact.abs());
            let disc = (exact - oracle).abs() / tol;
            worst = worst.max(disc);
        }
        // normalized so that threshold 1.0 encodes max(1e-6, 1e-5 |f|)
        CheckReport::new(
            format!("pdf vs convolution oracle, spec {i} (N={})", spec.n()),
            worst,
            1.0,
        )
    })
}

// ------------------------------------------------------------------
// normalization
// ------------------------------------------------------------------

/// |integral of the density - 1| for one spec, singularity-split.
pub fn normalization_defect(spec: &ProductSpec) -> f64 {
    let lo = spec.cdf_numeric(0.0, 1e-8).unwrap();
    let hi = spec.complementary_cdf_numeric(0.0, 1e-8).unwrap();
    (lo.value + hi.value - 1.0).abs()
}

pub fn run_normalization() -> Vec<CheckReport> {
    let grid = standard_grid();
    par_map(&grid.iter().enumerate().collect::<Vec<_>>(), |(i, spec)| {
        CheckReport::new(
            format!("density mass, spec {i} (N={})", spec.n()),
            normalization_defect(spec),
            1e-6,
        )
    })
}

// ------------------------------------------------------------------
// asymptotics
// ------------------------------------------------------------------

pub fn run_asymptotics() -> Vec<CheckReport> {
    let mut reports = Vec::new();

    // origin, regime with nonnegative shapes (scales chosen so the slowly
    // converging logarithmic correction stays inside the band at |z|=1e-8)
    let case_i = ProductSpec::new(vec![vg(2.0, 2.0, 0.0), vg(2.0, 2.0, 0.0)]).unwrap();
    let z = 1e-8;
    let ratio = case_i.pdf(z, 1e-12).unwrap().value / pdf_origin_asymptotic(&case_i, z).unwrap();
    reports.push(CheckReport::new(
        "origin ratio, nonnegative shapes",
        (ratio - 1.0).abs(),
        0.05,
    ));

    // origin, negative minimal shape
    let case_ii = ProductSpec::new(vec![vg(-0.25, 2.0, 0.0), vg(0.5, 2.0, 0.0)]).unwrap();
    let ratio = case_ii.pdf(z, 1e-12).unwrap().value / pdf_origin_asymptotic(&case_ii, z).unwrap();
    reports.push(CheckReport::new(
        "origin ratio, negative minimal shape",
        (ratio - 1.0).abs(),
        0.05,
    ));

    // upper tail at (xi z)^{1/N} ~ 25 for a symmetric two-factor spec
    let sym = ProductSpec::new(vec![vg(0.5, 1.0, 0.0), vg(0.5, 1.0, 0.0)]).unwrap();
    let zt = 625.0;
    let numeric = sym.complementary_cdf_numeric(zt, 1e-3 * 2e-22).unwrap().value;
    let asym = tail_asymptotic_cdf(&sym, zt, Tail::Upper).unwrap();
    reports.push(CheckReport::new(
        "tail ratio at (xi z)^(1/N) = 25",
        (numeric / asym - 1.0).abs(),
        0.02,
    ));

    // one-factor Laplace tail is exact
    let lap = ProductSpec::new(vec![vg(0.5, 1.3, 0.0)]).unwrap();
    let t = tail_asymptotic_cdf(&lap, 4.0, Tail::Upper).unwrap();
    let exact = 0.5 * (-1.3f64 * 4.0).exp();
    reports.push(CheckReport::new(
        "one-factor Laplace tail exactness",
        ((t - exact) / exact).abs(),
        1e-12,
    ));

    // quantile ratio drifts monotonically toward 1
    let mut ratios = Vec::new();
    for &p in &[1.0 - 1e-4, 1.0 - 1e-5, 1.0 - 1e-6] {
        let qn = quantile_numeric(&sym, p, 1e-3 * (1.0 - p)).unwrap();
        let qa = quantile_asymptotic(&sym, p).unwrap();
        ratios.push(qn / qa);
    }
    let monotone = ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] > 1.0;
    let drift = (ratios[2] - 1.0).abs();
    reports.push(CheckReport::new(
        format!(
            "quantile ratio monotone toward 1 ({:.4} > {:.4} > {:.4})",
            ratios[0], ratios[1], ratios[2]
        ),
        if monotone { drift } else { f64::INFINITY },
        0.15,
    ));

    reports
}

// ------------------------------------------------------------------
// Monte Carlo
// ------------------------------------------------------------------

/// The four Monte Carlo representatives: one per special-case family plus
/// one generic skewed product.
pub fn montecarlo_specs() -> Vec<(String, ProductSpec)> {
    use crate::special_cases::{CorrelatedNormalSpec, LaplaceProductSpec, MixedNormalLaplaceSpec};
    vec![
        (
            "laplace".into(),
            LaplaceProductSpec::new(vec![(1.0, 0.3), (2.0, 0.0)])
                .unwrap()
                .embed(),
        ),
        (
            "normal-laplace".into(),
            MixedNormalLaplaceSpec::new(vec![1.0, 2.0], vec![1.5])
                .unwrap()
                .embed(),
        ),
        (
            "correlated-normal".into(),
            CorrelatedNormalSpec::new(vec![(1.0, 1.0, 0.5), (1.0, 1.0, -0.3)])
                .unwrap()
                .embed(),
        ),
        (
            "generic-skewed".into(),
            ProductSpec::new(vec![
                VgParams::new(1.0, 1.0, 0.4).unwrap(),
                VgParams::new(0.3, 2.0, -1.0).unwrap(),
            ])
            .unwrap(),
        ),
    ]
}

pub fn run_montecarlo(seed: u64) -> Vec<CheckReport> {
    let specs = montecarlo_specs();
    par_map(&specs, |(name, spec)| {
        let n = 1_000_000;
        let batch = mc_product_sample(spec, n, seed);
        let grid = CdfGrid::build(spec, 1e-7).unwrap();
        let d = ks_statistic(&batch, |z| grid.eval(z)).unwrap();
        CheckReport::new(format!("KS distance, {name}"), d, 0.005)
    })
}

// ------------------------------------------------------------------
// characteristic function consistency (used by the acceptance suite)
// ------------------------------------------------------------------

/// Max |closed-form CF - Fourier oracle| over the standard t points for a
/// symmetric or half-integer spec.
pub fn cf_discrepancy(spec: &ProductSpec, density: OracleDensity) -> f64 {
    let ts = [0.1, 0.7, 2.0, 10.0];
    let mut worst = 0.0f64;
    for &t in &ts {
        let exact = spec.cf(t, 1e-10).unwrap().value;
        let oracle = cf_fourier(spec, t, 1e-7, density).unwrap();
        worst = worst.max((exact - oracle).norm());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_twelve_specs_with_required_coverage() {
        let grid = standard_grid();
        assert_eq!(grid.len(), 12);
        assert!(grid.iter().any(|s| s.n() == 2));
        assert!(grid.iter().any(|s| s.n() == 3));
        // all four shape values appear
        for want in [-0.25, 0.0, 0.5, 2.0] {
            assert!(grid
                .iter()
                .any(|s| s.factors().iter().any(|f| (f.m() - want).abs() < 1e-12)));
        }
        // symmetric, positively and negatively skewed factors appear
        assert!(grid.iter().any(|s| s.is_symmetric()));
        assert!(grid
            .iter()
            .any(|s| s.factors().iter().any(|f| f.beta() > 0.0)));
        assert!(grid
            .iter()
            .any(|s| s.factors().iter().any(|f| f.beta() < 0.0)));
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", 0).is_err());
    }
}
