//! Residue-series evaluation of G^{q,0}_{0,q}(x | -; b).
//!
//! Closing the Mellin-Barnes line to the right gives
//! G(x) = - sum over the poles of prod_j Gamma(b_j - s) x^s.
//! Parameters whose pairwise differences are integers (within 1e-9) share
//! poles; a pole of order r contributes the coefficient of u^{r-1} in the
//! exponential of a truncated log-series whose inputs are zeta values,
//! generalized harmonic numbers and polygamma values. The series is entire,
//! so it converges for every x; it is used as the primary path for tiny
//! arguments (where the line quadrature loses relative accuracy against the
//! origin blow-up) and as an independent cross-check otherwise.

use crate::error::Result;
use crate::specfun::{lgamma, lgamma_sign, polygamma, zeta_int, EULER_GAMMA};

const MAX_POLES: usize = 2500;

/// Generalized harmonic numbers H_k^(n) = sum_{i=1}^k i^{-n}, filled lazily.
struct Harmonics {
    // table[k][n-1] for n = 1..=max_order
    table: Vec<Vec<f64>>,
    max_order: usize,
}

impl Harmonics {
    fn new(max_order: usize) -> Self {
        Harmonics {
            table: vec![vec![0.0; max_order]],
            max_order,
        }
    }
    fn get(&mut self, k: usize, n: usize) -> f64 {
        while self.table.len() <= k {
            let i = self.table.len() as f64;
            let prev = self.table.last().unwrap();
            let row: Vec<f64> = (1..=self.max_order)
                .map(|n| prev[n - 1] + i.powi(-(n as i32)))
                .collect();
            self.table.push(row);
        }
        self.table[k][n - 1]
    }
}

// coefficient of u^{r-1} in exp(sum_n s_n u^n), s indexed from 1
fn exp_series_coeff(s: &[f64], r: usize) -> f64 {
    if r == 1 {
        return 1.0;
    }
    let ord = r - 1;
    let mut e = vec![0.0; ord + 1];
    e[0] = 1.0;
    for n in 1..=ord {
        let mut acc = 0.0;
        for m in 1..=n {
            acc += m as f64 * s[m] * e[n - m];
        }
        e[n] = acc / n as f64;
    }
    e[ord]
}

pub(crate) struct ResidueEval {
    pub value: f64,
    pub abs_err: f64,
    pub converged: bool,
}

pub(crate) fn eval_q0_residue(b: &[f64], x: f64, tol_abs: f64) -> Result<ResidueEval> {
    let q = b.len();
    assert!(q >= 1);
    let ln_x = x.ln();

    // Partition parameters into integer-difference groups.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, &bj) in b.iter().enumerate() {
        let mut placed = false;
        for g in groups.iter_mut() {
            let d = bj - b[g[0]];
            if (d - d.round()).abs() <= 1e-9 {
                g.push(j);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(vec![j]);
        }
    }
    // (base value, member offsets)
    let bases: Vec<f64> = groups
        .iter()
        .map(|g| g.iter().map(|&j| b[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let offsets: Vec<Vec<i64>> = groups
        .iter()
        .zip(&bases)
        .map(|(g, &base)| g.iter().map(|&j| (b[j] - base).round() as i64).collect())
        .collect();

    let mut harmonics = Harmonics::new(q.max(2));
    let mut next_k: Vec<i64> = vec![0; groups.len()];
    let mut sum = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut tiny_streak = 0;
    let s0_check = 2.0 * x.powf(1.0 / q as f64) + 4.0;
    let mut n_poles = 0usize;
    let mut last_term = 0.0f64;

    while n_poles < MAX_POLES {
        // next pole: smallest s0 over groups
        let (gi, _) = next_k
            .iter()
            .enumerate()
            .map(|(gi, &k)| (gi, bases[gi] + k as f64))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let k_level = next_k[gi];
        next_k[gi] += 1;
        n_poles += 1;
        let s0 = bases[gi] + k_level as f64;

        // members of the pole and their factorial indices
        let in_pole: Vec<(usize, usize)> = groups[gi]
            .iter()
            .zip(&offsets[gi])
            .filter(|(_, &o)| o <= k_level)
            .map(|(&j, &o)| (j, (k_level - o) as usize))
            .collect();
        let r = in_pole.len();
        debug_assert!(r >= 1);
        let pole_set: Vec<usize> = in_pole.iter().map(|&(j, _)| j).collect();

        // log-magnitude and sign of the u^{-r} prefactor
        let mut ln_c = s0 * ln_x;
        let mut sign = 1.0f64;
        for &(_, kj) in &in_pole {
            ln_c -= lgamma(kj as f64 + 1.0)?;
            sign *= -1.0;
            if kj % 2 == 1 {
                sign = -sign;
            }
        }
        for (j, &bj) in b.iter().enumerate() {
            if pole_set.contains(&j) {
                continue;
            }
            let w = bj - s0;
            let (lg, sg) = lgamma_sign(w)?;
            ln_c += lg;
            sign *= sg;
        }

        // series coefficients of the analytic log part, orders 1..r-1
        let mut s_coeff = vec![0.0f64; r.max(1)];
        if r > 1 {
            for n in 1..r {
                let mut acc = 0.0;
                let base = if n == 1 {
                    EULER_GAMMA
                } else {
                    zeta_int(n) / n as f64
                };
                let par = if n % 2 == 0 { 1.0 } else { -1.0 };
                for &(_, kj) in &in_pole {
                    acc += base + par * harmonics.get(kj, n) / n as f64;
                }
                let mut nfact = 1.0;
                for i in 1..=n {
                    nfact *= i as f64;
                }
                for (j, &bj) in b.iter().enumerate() {
                    if pole_set.contains(&j) {
                        continue;
                    }
                    acc += par * polygamma(n - 1, bj - s0)? / nfact;
                }
                if n == 1 {
                    acc += ln_x;
                }
                s_coeff[n] = acc;
            }
        }

        let term = -sign * ln_c.exp() * exp_series_coeff(&s_coeff, r);
        sum += term;
        abs_sum += term.abs();
        last_term = term.abs();

        if s0 > s0_check {
            if term.abs() < 0.1 * tol_abs {
                tiny_streak += 1;
                if tiny_streak >= 3 * groups.len() {
                    break;
                }
            } else {
                tiny_streak = 0;
            }
        }
    }

    // a few tens of floating operations per term; near-colliding groups
    // amplify term magnitudes, which abs_sum tracks
    let cancellation = abs_sum * 1e-14;
    let trunc = if n_poles >= MAX_POLES {
        last_term.max(tol_abs)
    } else {
        last_term
    };
    let abs_err = cancellation + trunc;
    Ok(if n_poles >= MAX_POLES {
        ResidueEval {
            value: sum,
            abs_err,
            converged: false,
        }
    } else {
        ResidueEval {
            value: sum,
            abs_err,
            converged: abs_err <= tol_abs.max(sum.abs() * 1e-12),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    #[test]
    fn exponential_series() {
        // alternating-series cancellation caps the attainable relative
        // accuracy as x grows; the reported abs_err must cover it
        for &x in &[1e-6f64, 0.1, 1.3, 4.0] {
            let r = eval_q0_residue(&[0.0], x, 1e-12).unwrap();
            assert!(r.converged, "x={x} abs_err={}", r.abs_err);
            let exact = (-x).exp();
            assert!(
                ((r.value - exact) / exact).abs() < 1e-10,
                "x={x} got={}",
                r.value
            );
        }
        let r = eval_q0_residue(&[0.0], 9.0, 1e-12).unwrap();
        let exact = (-9.0f64).exp();
        assert!((r.value - exact).abs() < r.abs_err.max(1e-12));
    }

    #[test]
    fn double_pole_bessel_reduction() {
        // G^{2,0}_{0,2}(x | -; 0, 0) = 2 K_0(2 sqrt x)
        for &x in &[1e-8, 0.49, 4.0] {
            let r = eval_q0_residue(&[0.0, 0.0], x, 1e-13).unwrap();
            let exact = 2.0 * bessel_k(0.0, 2.0 * x.sqrt()).unwrap();
            assert!(
                ((r.value - exact) / exact).abs() < 1e-11,
                "x={x} got={} want={exact}",
                r.value
            );
        }
    }

    #[test]
    fn distinct_parameters_bessel_reduction() {
        // G^{2,0}_{0,2}(x | -; a, b) = 2 x^{(a+b)/2} K_{a-b}(2 sqrt x)
        let (a, b) = (0.8, 0.0);
        let x = 1.21;
        let r = eval_q0_residue(&[a, b], x, 1e-13).unwrap();
        let exact = 2.0 * x.powf(0.5 * (a + b)) * bessel_k(a - b, 2.0 * x.sqrt()).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn half_integer_collision_groups() {
        // b = (0, 1/2, 1, 3/2): two groups {0,1}, {1/2,3/2}; compare against
        // the classical product formula via K with duplication:
        // G^{4,0}_{0,4} has no elementary form here, so check against the
        // line integral instead in the meijer-level tests; here just check
        // it runs and is positive and finite.
        let r = eval_q0_residue(&[0.0, 0.5, 1.0, 1.5], 0.3, 1e-12).unwrap();
        assert!(r.converged && r.value.is_finite() && r.value > 0.0);
    }

    #[test]
    fn triple_pole_smoke() {
        let r = eval_q0_residue(&[0.0, 0.0, 0.0], 0.09, 1e-12).unwrap();
        assert!(r.converged && r.value.is_finite() && r.value > 0.0);
    }
}
