//! Quadrature primitives shared by the evaluation kernels and the oracles:
//! adaptive Gauss-Kronrod on finite intervals, semi-infinite sweeps for
//! exponentially decaying integrands, and cached Gauss-Legendre panel rules.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Outcome of a numeric integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
    pub evals: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK QK15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15(7) panel. Returns the K15 value and an error
/// estimate rescaled the QUADPACK way.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_gauss = 0.0;
    let mut result_kronrod = fc * WGK[7];
    let mut result_abs = result_kronrod.abs();

    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * fsum;
        }
        result_kronrod += WGK[j] * fsum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    result_gauss += WG[3] * fc;

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 {
            result_asc * scale
        } else {
            result_asc
        };
    }
    let min_err = 50.0 * f64::EPSILON * result_abs;
    if min_err > err {
        err = min_err;
    }
    (value, err)
}

/// Globally adaptive driver over [a, b]: repeatedly bisects the interval
/// with the largest error estimate until the total estimate meets the
/// absolute tolerance or the interval budget runs out.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol_abs: f64) -> QuadResult {
    const MAX_INTERVALS: usize = 3000;
    struct Iv {
        a: f64,
        b: f64,
        v: f64,
        e: f64,
        splittable: bool,
    }
    let tol = tol_abs.max(1e-300);
    let (v0, e0) = gauss_kronrod_15(f, a, b);
    let mut evals = 15;
    let mut ivs = vec![Iv {
        a,
        b,
        v: v0,
        e: e0,
        splittable: true,
    }];
    loop {
        let total_err: f64 = ivs.iter().map(|iv| iv.e).sum();
        if total_err <= tol || ivs.len() >= MAX_INTERVALS {
            break;
        }
        // rounding floor: once the error estimate sits at the QUADPACK
        // 50-eps floor of the absolute mass, refinement cannot help
        let abs_scale: f64 = ivs.iter().map(|iv| iv.v.abs()).sum();
        if total_err <= 250.0 * f64::EPSILON * abs_scale {
            break;
        }
        // split the worst refinable interval
        let worst = ivs
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.splittable)
            .max_by(|x, y| x.1.e.partial_cmp(&y.1.e).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst else { break };
        let iv = ivs.swap_remove(i);
        let mid = 0.5 * (iv.a + iv.b);
        let width_floor = 30.0 * f64::EPSILON * iv.a.abs().max(iv.b.abs()).max(1.0);
        if iv.b - iv.a <= width_floor {
            ivs.push(Iv {
                splittable: false,
                ..iv
            });
            continue;
        }
        let (v1, e1) = gauss_kronrod_15(f, iv.a, mid);
        let (v2, e2) = gauss_kronrod_15(f, mid, iv.b);
        evals += 30;
        ivs.push(Iv {
            a: iv.a,
            b: mid,
            v: v1,
            e: e1,
            splittable: true,
        });
        ivs.push(Iv {
            a: mid,
            b: iv.b,
            v: v2,
            e: e2,
            splittable: true,
        });
    }
    let value: f64 = ivs.iter().map(|iv| iv.v).sum();
    let abs_err: f64 = ivs.iter().map(|iv| iv.e).sum();
    QuadResult {
        value,
        abs_err,
        converged: abs_err <= tol,
        evals,
    }
}

/// Integrates `f` over [a, inf) for integrands that eventually decay at
/// least geometrically. Sweeps panels of doubling width until two
/// consecutive panel integrals fall below `tol / 4`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: &F, a: f64, tol_abs: f64) -> QuadResult {
    let mut value = 0.0;
    let mut abs_err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    let mut lo = a;
    let mut width = 1.0f64.max(a.abs() * 0.125);
    let mut small_count = 0;
    let mut last: f64 = f64::INFINITY;
    for _ in 0..120 {
        let hi = lo + width;
        let r = adaptive(f, lo, hi, tol_abs / 8.0);
        value += r.value;
        abs_err += r.abs_err;
        evals += r.evals;
        converged &= r.converged;
        if r.value.abs() < tol_abs / 4.0 {
            small_count += 1;
            if small_count >= 2 {
                // Geometric tail bound from the observed decay.
                let ratio = if last > 0.0 {
                    (r.value.abs() / last).min(0.9)
                } else {
                    0.5
                };
                abs_err += r.value.abs() * ratio / (1.0 - ratio);
                return QuadResult {
                    value,
                    abs_err,
                    converged,
                    evals,
                };
            }
        } else {
            small_count = 0;
        }
        last = r.value.abs().max(1e-300);
        lo = hi;
        width *= 2.0;
    }
    QuadResult {
        value,
        abs_err,
        converged: false,
        evals,
    }
}

/// Gauss-Legendre rule of order `n` on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence and cached.
pub fn legendre_rule(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(rule) = guard.get(&n) {
        return rule.clone();
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and its derivative.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new((nodes, weights));
    guard.insert(n, rule.clone());
    rule
}
