//! Independent brute-force verifiers: numeric convolution of factor
//! densities, Monte Carlo product sampling, a goodness-of-fit statistic and
//! a numeric Fourier transform. Nothing here touches the G-function code;
//! the only density these oracles consume is the direct Bessel-form factor
//! density, so agreement with the formula paths is meaningful evidence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::product::{tail_asymptotic_cdf, ProductSpec, Tail};
use crate::quad::{adaptive, integrate_to_inf};
use crate::rng::{seeded_rng, sub_seed};
use crate::vg::{SampleBatch, VgParams};

/// Density of X1 * X2 by direct convolution,
/// `f(z) = int f1(x) f2(z/x) dx / |x|`, with the quadrature split at the
/// origin and at |x| ~ |z| scale knots.
fn convolve_two(f1: &VgParams, f2: &VgParams, z: f64, tol: f64) -> f64 {
    let integrand = |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let a = f1.pdf(x).unwrap_or(0.0);
        if a == 0.0 {
            return 0.0;
        }
        a * f2.pdf(z / x).unwrap_or(0.0) / x.abs()
    };
    // reach: f1 decays like e^{-(alpha-|beta|)|x|}; f2(z/x) decays once
    // |z/x| is large, i.e. for |x| small
    let lam1 = f1.alpha() - f1.beta().abs();
    let reach = (1200.0f64.min(60.0 + 40.0 * z.abs().max(1.0).ln())) / lam1;
    let knot = z.abs().sqrt().clamp(1e-3, reach * 0.5);
    let mut total = 0.0;
    for (a, b) in [
        (-reach, -knot),
        (-knot, 0.0),
        (0.0, knot),
        (knot, reach),
    ] {
        total += adaptive(&integrand, a, b, tol / 8.0).value;
    }
    total
}

/// Mellin-free density oracle for products of two or three factors. The
/// three-factor case nests a second quadrature; cost grows exponentially in
/// N, hence the cap.
pub fn convolution_pdf(spec: &ProductSpec, z: f64, tol: f64) -> Result<f64> {
    let factors = spec.factors();
    match factors.len() {
        2 => Ok(convolve_two(&factors[0], &factors[1], z, tol)),
        3 => {
            let (f1, f2, f3) = (factors[0], factors[1], factors[2]);
            let inner_tol = tol / 10.0;
            let integrand = |x: f64| {
                if x == 0.0 {
                    return 0.0;
                }
                let a = f3.pdf(x).unwrap_or(0.0);
                if a < 1e-280 {
                    return 0.0;
                }
                a * convolve_two(&f1, &f2, z / x, inner_tol.max(1e-9 * a)) / x.abs()
            };
            let lam3 = f3.alpha() - f3.beta().abs();
            let reach = 80.0 / lam3;
            let knot = z.abs().sqrt().clamp(1e-3, reach * 0.5);
            let mut total = 0.0;
            for (a, b) in [
                (-reach, -knot),
                (-knot, 0.0),
                (0.0, knot),
                (knot, reach),
            ] {
                total += adaptive(&integrand, a, b, tol / 8.0).value;
            }
            Ok(total)
        }
        n => Err(Error::Domain(format!(
            "convolution oracle supports N in {{2, 3}}, got {n}"
        ))),
    }
}

/// Componentwise factor draws multiplied together; factor i uses the
/// derived sub-stream `sub_seed(seed, i)`.
pub fn mc_product_sample(spec: &ProductSpec, n: usize, seed: u64) -> SampleBatch {
    let mut values = vec![1.0f64; n];
    for (i, f) in spec.factors().iter().enumerate() {
        let mut rng = seeded_rng(sub_seed(seed, i));
        for (v, draw) in values.iter_mut().zip(f.sample_into(n, &mut rng)) {
            *v *= draw;
        }
    }
    let digest = spec
        .factors()
        .iter()
        .map(|f| f.digest())
        .collect::<Vec<_>>()
        .join("*");
    SampleBatch {
        values,
        seed,
        n,
        spec_digest: digest,
    }
}

/// Kolmogorov-Smirnov statistic: sup-distance between the empirical CDF of
/// the batch and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(batch: &SampleBatch, cdf: F) -> Result<f64> {
    if batch.n < 10 {
        return Err(Error::Domain(format!(
            "KS statistic needs n >= 10 samples, got {}",
            batch.n
        )));
    }
    let mut xs = batch.values.clone();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(((i + 1) as f64 / n - f).abs());
        d = d.max((i as f64 / n - f).abs());
    }
    Ok(d)
}

/// Configuration for the Fourier oracle: which density feeds the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleDensity {
    /// The convolution oracle (fully independent of the G-function code;
    /// N <= 3 only).
    #[default]
    Convolution,
    /// The exact series density (faster; independent of the CF formulas but
    /// not of the G evaluator).
    Formula,
}

/// Numeric characteristic function `int e^{itz} f(z) dz` with
/// oscillation-aware panel sizing (panel width <= pi/(2|t|)) and the
/// integrable origin singularity handled in logarithmic coordinates.
pub fn cf_fourier(spec: &ProductSpec, t: f64, tol: f64, density: OracleDensity) -> Result<Complex64> {
    let pdf = |z: f64| -> f64 {
        match density {
            OracleDensity::Convolution => convolution_pdf(spec, z, tol * 0.1).unwrap_or(0.0),
            OracleDensity::Formula => spec.pdf(z, tol * 0.01).map_or(0.0, |r| r.value),
        }
    };
    if t == 0.0 {
        // plain mass integral
        let v = fourier_side(&pdf, 0.0, tol, spec, Tail::Upper)
            + fourier_side(&pdf, 0.0, tol, spec, Tail::Lower);
        return Ok(Complex64::new(v, 0.0));
    }

    let mut total = Complex64::new(0.0, 0.0);
    for side in [Tail::Upper, Tail::Lower] {
        let sgn = if side == Tail::Upper { 1.0 } else { -1.0 };
        // origin patch in log coordinates: z = sgn e^{-v}
        let delta = 1e-5f64;
        let origin = |v: f64| {
            let z = sgn * (-v).exp();
            let w = Complex64::new(0.0, t * z).exp();
            (-v).exp() * pdf(z) * w
        };
        let or = integrate_complex_to_inf(&origin, -(delta.ln()), tol / 8.0);
        total += or;
        // oscillatory body: fixed-width panels capped at pi/(2|t|)
        let cut = tail_cut(spec, side, tol);
        let width = (std::f64::consts::PI / (2.0 * t.abs())).min(1.0);
        let mut a = delta;
        while a < cut {
            let b = (a + width).min(cut);
            let re = adaptive(&|z: f64| pdf(sgn * z) * (t * sgn * z).cos(), a, b, tol / 20.0);
            let im = adaptive(&|z: f64| pdf(sgn * z) * (t * sgn * z).sin(), a, b, tol / 20.0);
            total += Complex64::new(re.value, im.value);
            a = b;
        }
    }
    Ok(total)
}

fn tail_cut(spec: &ProductSpec, side: Tail, tol: f64) -> f64 {
    let mut z = 1.0f64;
    for _ in 0..120 {
        let v = match side {
            Tail::Upper => tail_asymptotic_cdf(spec, z, Tail::Upper),
            Tail::Lower => tail_asymptotic_cdf(spec, -z, Tail::Lower),
        }
        .unwrap_or(1.0);
        if 3.0 * v < tol / 10.0 {
            return z;
        }
        z *= 1.4;
    }
    z
}

fn fourier_side<F: Fn(f64) -> f64>(
    pdf: &F,
    _t: f64,
    tol: f64,
    spec: &ProductSpec,
    side: Tail,
) -> f64 {
    let sgn = if side == Tail::Upper { 1.0 } else { -1.0 };
    let delta = 1e-5f64;
    let or = integrate_to_inf(
        &|v: f64| (-v).exp() * pdf(sgn * (-v).exp()),
        -(delta.ln()),
        tol / 8.0,
    );
    let cut = tail_cut(spec, side, tol);
    or.value + adaptive(&|z: f64| pdf(sgn * z), delta, cut, tol / 8.0).value
}

fn integrate_complex_to_inf<F: Fn(f64) -> Complex64>(f: &F, a: f64, tol: f64) -> Complex64 {
    let re = integrate_to_inf(&|v| f(v).re, a, tol);
    let im = integrate_to_inf(&|v| f(v).im, a, tol);
    Complex64::new(re.value, im.value)
}

/// Precomputed density samples on an oscillation-aware grid, giving the
/// Fourier transform at any |t| <= t_max as a weighted sum. Building the
/// cache is the expensive part (one density evaluation per node, done in
/// parallel); each subsequent `cf(t)` is a cheap pass over the nodes.
pub struct FourierCache {
    nodes: Vec<(f64, f64, f64)>, // (z, weight, density)
    origin_mass: f64,
    t_max: f64,
}

impl FourierCache {
    pub fn build(
        spec: &ProductSpec,
        t_max: f64,
        tol: f64,
        density: OracleDensity,
    ) -> Result<FourierCache> {
        let delta = 1e-5;
        let rule = crate::quad::legendre_rule(12);
        let mut panels: Vec<(f64, f64)> = Vec::new();
        let width = (0.8 * std::f64::consts::PI / (2.0 * t_max.max(0.1))).min(0.5);
        for side in [Tail::Upper, Tail::Lower] {
            let sgn = if side == Tail::Upper { 1.0 } else { -1.0 };
            let cut = tail_cut(spec, side, tol);
            let mut a = delta;
            while a < cut {
                // geometric grading through the origin blow-up, capped by
                // the oscillation width
                let step = (0.4 * a).clamp(delta, width);
                let b = (a + step).min(cut);
                panels.push((sgn * a, sgn * b));
                a = b;
            }
        }
        // nodes for all panels, density evaluated in parallel
        let mut raw: Vec<(f64, f64)> = Vec::new();
        for &(a, b) in &panels {
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in rule.0.iter().zip(&rule.1) {
                raw.push((mid + half * x, w * half.abs()));
            }
        }
        let dens = crate::grid::par_map(&raw, |&(z, _)| match density {
            OracleDensity::Convolution => convolution_pdf(spec, z, tol * 0.1).unwrap_or(0.0),
            OracleDensity::Formula => spec.pdf(z, tol * 0.01).map_or(0.0, |r| r.value),
        });
        let nodes = raw
            .iter()
            .zip(dens)
            .map(|(&(z, w), f)| (z, w, f))
            .collect();
        // mass of the sliver |z| < delta, where e^{itz} = 1 + O(t delta)
        let mut origin_mass = 0.0;
        for sgn in [1.0, -1.0] {
            let g = |v: f64| {
                let z = sgn * (-v).exp();
                (-v).exp()
                    * match density {
                        OracleDensity::Convolution => {
                            convolution_pdf(spec, z, tol * 0.1).unwrap_or(0.0)
                        }
                        OracleDensity::Formula => spec.pdf(z, tol * 0.01).map_or(0.0, |r| r.value),
                    }
            };
            origin_mass += integrate_to_inf(&g, -(delta.ln()), tol / 8.0).value;
        }
        Ok(FourierCache {
            nodes,
            origin_mass,
            t_max,
        })
    }

    /// The transform `int e^{itz} f(z) dz` for |t| <= t_max.
    pub fn cf(&self, t: f64) -> Complex64 {
        debug_assert!(t.abs() <= self.t_max * 1.000001);
        let mut acc = Complex64::new(self.origin_mass, 0.0);
        for &(z, w, f) in &self.nodes {
            acc += w * f * Complex64::new(0.0, t * z).exp();
        }
        acc
    }
}

/// Monotone interpolant of a distribution function built from one pass of
/// cumulative density quadrature; cheap to evaluate at millions of sample
/// points for KS tests.
pub struct CdfGrid {
    knots: Vec<f64>,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
}

impl CdfGrid {
    /// Builds the grid from the formula density of `spec`. Knots are
    /// log-spaced near the origin (where the density may blow up) and
    /// uniform further out, truncated by the asymptotic tails.
    pub fn build(spec: &ProductSpec, tol: f64) -> Result<CdfGrid> {
        let cut_up = tail_cut(spec, Tail::Upper, tol);
        let cut_lo = tail_cut(spec, Tail::Lower, tol);
        let mut knots: Vec<f64> = Vec::new();
        // negative side in, positive side out
        let mut neg: Vec<f64> = log_then_linear(cut_lo);
        neg.reverse();
        for v in neg {
            knots.push(-v);
        }
        knots.push(0.0);
        knots.extend(log_then_linear(cut_up));

        let pdf: Vec<f64> = crate::grid::eval_grid(&knots, |z| {
            if z == 0.0 {
                0.0
            } else {
                spec.pdf(z, tol * 1e-3).map_or(0.0, |r| r.value)
            }
        });

        // cumulative sums: mass below the first knot from the asymptotic
        // tail estimate, then per-segment Simpson with midpoint evaluations
        let mut cdf = Vec::with_capacity(knots.len());
        let mut acc = tail_asymptotic_cdf(spec, knots[0], Tail::Lower).unwrap_or(0.0);
        cdf.push(acc);
        for i in 1..knots.len() {
            let (a, b) = (knots[i - 1], knots[i]);
            let seg = if a.abs().min(b.abs()) < 1e-4 && a.abs().max(b.abs()) <= 2e-3 {
                // across/near the origin: integrate in log coordinates
                spec.mass_interval(a, b, tol * 0.1).value
            } else {
                let mid = 0.5 * (a + b);
                let fm = spec.pdf(mid, tol * 1e-3).map_or(0.0, |r| r.value);
                (b - a) / 6.0 * (pdf[i - 1] + 4.0 * fm + pdf[i])
            };
            acc += seg;
            cdf.push(acc);
        }
        // renormalize the small closure defect onto the whole curve
        let total = acc + tail_asymptotic_cdf(spec, knots[knots.len() - 1], Tail::Upper)
            .unwrap_or(0.0);
        if (total - 1.0).abs() < 0.02 {
            for v in cdf.iter_mut() {
                *v /= total;
            }
        }
        Ok(CdfGrid { knots, cdf, pdf })
    }

    /// Interpolated distribution function (monotone cubic Hermite using the
    /// stored density as the exact derivative).
    pub fn eval(&self, z: f64) -> f64 {
        let n = self.knots.len();
        if z <= self.knots[0] {
            return self.cdf[0] * ((z - self.knots[0]).exp().min(1.0));
        }
        if z >= self.knots[n - 1] {
            let tail = 1.0 - self.cdf[n - 1];
            return 1.0 - tail * ((self.knots[n - 1] - z).exp().min(1.0));
        }
        let i = match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&z).unwrap())
        {
            Ok(i) => return self.cdf[i],
            Err(i) => i - 1,
        };
        let h = self.knots[i + 1] - self.knots[i];
        let s = (z - self.knots[i]) / h;
        let (y0, y1) = (self.cdf[i], self.cdf[i + 1]);
        let (d0, d1) = (self.pdf[i] * h, self.pdf[i + 1] * h);
        // cubic Hermite basis
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        v.clamp(0.0, 1.0)
    }
}

fn log_then_linear(cut: f64) -> Vec<f64> {
    // geometric grading throughout: the density's curvature scale is ~|z|
    // near the (logarithmic) origin blow-up and grows outward
    let mut v = Vec::new();
    let mut z = 1e-8;
    while z < cut {
        v.push(z);
        z *= 1.08;
    }
    v.push(cut);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn vg(m: f64, alpha: f64, beta: f64) -> VgParams {
        VgParams::new(m, alpha, beta).unwrap()
    }

    #[test]
    fn convolution_matches_bessel_closed_form() {
        // Laplace(1) x Laplace(1) at z = 0.5 -> K_0(2 sqrt 0.5)
        let spec = ProductSpec::new(vec![vg(0.5, 1.0, 0.0), vg(0.5, 1.0, 0.0)]).unwrap();
        let got = convolution_pdf(&spec, 0.5, 1e-9).unwrap();
        let want = bessel_k(0.0, 2.0 * 0.5f64.sqrt()).unwrap();
        assert!((got - want).abs() < 1e-7, "got {got} want {want}");
    }

    #[test]
    fn convolution_symmetric_in_z_for_symmetric_specs() {
        let spec = ProductSpec::new(vec![vg(0.0, 1.0, 0.0), vg(1.0, 2.0, 0.0)]).unwrap();
        let a = convolution_pdf(&spec, 0.7, 1e-8).unwrap();
        let b = convolution_pdf(&spec, -0.7, 1e-8).unwrap();
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn convolution_rejects_large_n() {
        let spec = ProductSpec::new(vec![vg(0.5, 1.0, 0.0); 4]).unwrap();
        assert!(convolution_pdf(&spec, 1.0, 1e-6).is_err());
    }

    #[test]
    fn mc_sampling_reproducible_and_sign_consistent() {
        let spec = ProductSpec::new(vec![vg(0.5, 1.0, 0.4), vg(1.0, 2.0, -0.6)]).unwrap();
        let a = mc_product_sample(&spec, 2000, 11);
        let b = mc_product_sample(&spec, 2000, 11);
        assert_eq!(a.values, b.values);

        let n = 400_000;
        let batch = mc_product_sample(&spec, n, 5);
        let frac = batch.values.iter().filter(|&&v| v <= 0.0).count() as f64 / n as f64;
        let p = spec.prob_nonpositive();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((frac - p).abs() < 4.0 * se, "frac={frac} p={p}");
    }

    #[test]
    fn mc_sign_flip_mirrors_distribution() {
        // negating every skew draws from the law of prod(-X_i) = (-1)^N Z;
        // negating those samples once more must reproduce the law of
        // (-1)^{N+1} Z — for N = 2 that is the mirrored distribution
        let spec = ProductSpec::new(vec![vg(0.5, 1.0, 0.4), vg(1.0, 2.0, -0.6)]).unwrap();
        let all_flipped =
            ProductSpec::new(spec.factors().iter().map(|f| f.mirrored()).collect()).unwrap();
        let n = 200_000;
        let sign = if spec.n() % 2 == 0 { 1.0 } else { -1.0 };
        let mut av: Vec<f64> = mc_product_sample(&spec, n, 3)
            .values
            .iter()
            .map(|v| sign * v)
            .collect();
        let mut bv = mc_product_sample(&all_flipped, n, 4).values;
        av.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        bv.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        let mut d: f64 = 0.0;
        let nn = n as f64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < n && j < n {
            if av[i] <= bv[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / nn - j as f64 / nn).abs());
        }
        // two-sample KS 1% critical value: 1.63 sqrt(2/n)
        assert!(d < 1.63 * (2.0 / nn).sqrt(), "two-sample KS = {d}");
    }

    #[test]
    fn ks_statistic_properties() {
        // draws from the claimed cdf: uniform via the probability transform
        let n = 100_000;
        let mut rng = seeded_rng(17);
        use rand::Rng;
        let values: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let batch = SampleBatch {
            values,
            seed: 17,
            n,
            spec_digest: "uniform".into(),
        };
        let d = ks_statistic(&batch, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d <= 1.63 / (n as f64).sqrt(), "d = {d}");
        assert!(d >= 0.0 && d <= 1.0);

        // constant batch vs a continuous cdf
        let constant = SampleBatch {
            values: vec![0.5; 100],
            seed: 0,
            n: 100,
            spec_digest: "const".into(),
        };
        let d = ks_statistic(&constant, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d >= 0.5);

        let small = SampleBatch {
            values: vec![0.0; 5],
            seed: 0,
            n: 5,
            spec_digest: "small".into(),
        };
        assert!(ks_statistic(&small, |_| 0.5).is_err());
    }

    #[test]
    fn fourier_oracle_laplace_cf() {
        // N = 1 Laplace(2): phi(1) = 0.8
        let spec = ProductSpec::new(vec![vg(0.5, 2.0, 0.0)]).unwrap();
        let got = cf_fourier(&spec, 1.0, 1e-7, OracleDensity::Formula).unwrap();
        assert!((got.re - 0.8).abs() < 1e-6, "got {got}");
        assert!(got.im.abs() < 1e-6);
        // t = 0 -> total mass
        let mass = cf_fourier(&spec, 0.0, 1e-7, OracleDensity::Formula).unwrap();
        assert!((mass.re - 1.0).abs() < 1e-6);
        // conjugate symmetry
        let plus = cf_fourier(&spec, 0.7, 1e-7, OracleDensity::Formula).unwrap();
        let minus = cf_fourier(&spec, -0.7, 1e-7, OracleDensity::Formula).unwrap();
        assert!((plus - minus.conj()).norm() < 2e-6);
    }

    #[test]
    fn cdf_grid_tracks_exact_distribution() {
        let spec = ProductSpec::new(vec![vg(0.5, 1.0, 0.0), vg(1.0, 2.0, 0.0)]).unwrap();
        let grid = CdfGrid::build(&spec, 1e-7).unwrap();
        for &z in &[-3.0, -0.4, -1e-5, 0.3, 2.5] {
            let exact = spec.cdf_symmetric(z, 1e-10).unwrap().value;
            let interp = grid.eval(z);
            assert!(
                (exact - interp).abs() < 5e-5,
                "z={z}: exact {exact} interp {interp}"
            );
        }
    }
}
