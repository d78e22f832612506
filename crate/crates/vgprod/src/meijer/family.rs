//! Shared-contour evaluation for the G^{2N,0}_{0,2N} family that appears in
//! the product-density series: every term has parameter vector
//! {j_1/2, ..., j_N/2, m_1 + j_1/2, ..., m_N + j_N/2} at one fixed argument,
//! and the subset coefficient kills every term whose parities are mixed.
//! One contour line therefore serves the whole series: the j = 0 bases
//! Gamma(-s) Gamma(m_i - s) (even) and Gamma(1/2 - s) Gamma(m_i + 1/2 - s)
//! (odd) are evaluated once per node, and each term multiplies in cached
//! prefix products of the Pochhammer-style linear factors, so a term costs
//! N complex multiplications per node regardless of its degree.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::error::Result;
use crate::meijer::contour::{choose_abscissa, plan_side, LineSpec};
use crate::meijer::EvalResult;
use crate::quad::legendre_rule;

const NODES_PER_PANEL: usize = 16;

struct FamilyNode {
    s: Complex64,
    w: f64,
    f_even: Complex64,
    f_odd: Complex64,
}

// per parity, per factor: prefix[k][node] = prod_{r<k} (off+r-s)(m_i+off+r-s),
// with the final entry of each level holding the cut-point value
struct PrefixCache {
    levels: Vec<Vec<Vec<Complex64>>>, // [factor][k][node + 1]
}

pub(crate) struct Gq0Family {
    m: Vec<f64>,
    nodes: Vec<FamilyNode>,
    cut_s: Complex64,
    cut_even: Complex64,
    cut_odd: Complex64,
    decay: f64,
    prefix: RefCell<[PrefixCache; 2]>,
}

impl Gq0Family {
    /// Builds the contour for argument `x` shared by all series terms with
    /// total degree j_1 + ... + j_N up to `j_total_max`, whose coefficients
    /// decay like `coef_scale^J / J!`.
    pub fn new(
        m_params: &[f64],
        x: f64,
        tol_hint: f64,
        j_total_max: usize,
        coef_scale: f64,
    ) -> Result<Self> {
        let n = m_params.len();
        let mut b_even: Vec<f64> = vec![0.0; n];
        b_even.extend_from_slice(m_params);
        let spec_even = LineSpec {
            top_b: b_even,
            top_a: vec![],
            bot_a: vec![],
            bot_b: vec![],
            ln_x: Complex64::new(x.ln(), 0.0),
        };
        let mut spec_odd = spec_even.clone();
        for v in spec_odd.top_b.iter_mut() {
            *v += 0.5;
        }

        let c = choose_abscissa(&spec_even)?;
        let two_pi = 2.0 * std::f64::consts::PI;
        let ln_cut0 = (tol_hint * two_pi * 0.05).max(1e-300).ln();
        // Degree-J terms pick up a polynomial factor ~ (|c| + T + J/2)^J
        // along the line but carry coefficients ~ coef_scale^J / J!. The
        // extra cut depth only needs to cover terms near the coefficient
        // hump J* ~ coef_scale x^{1/q}; far beyond it the coefficients damp
        // the (honestly reported) per-term tails into irrelevance.
        let probe = plan_side(&spec_even, c, 1.0, ln_cut0)?;
        let t0 = probe.panels.last().map(|p| p.1).unwrap_or(1.0);
        let m_max = m_params.iter().cloned().fold(0.0f64, f64::max);
        let ln_s = coef_scale.max(1e-6).ln();
        let s_eff = coef_scale * x.powf(1.0 / (2.0 * n as f64));
        let j_hump = (1.5 * s_eff).ceil() as usize + 10;
        let mut margin = 0.0f64;
        let mut ln_jfact = 0.0;
        for j in 1..=j_total_max.max(1).min(j_hump) {
            let jf = j as f64;
            ln_jfact += jf.ln();
            let cand = jf * (2.0 + c.abs() + t0 + m_max + jf / 2.0).ln() + jf * ln_s - ln_jfact;
            margin = margin.max(cand);
        }
        let plan = plan_side(&spec_even, c, 1.0, ln_cut0 - margin)?;

        let rule = legendre_rule(NODES_PER_PANEL);
        let (gl_x, gl_w) = (&rule.0, &rule.1);
        let mut nodes = Vec::with_capacity(plan.panels.len() * NODES_PER_PANEL);
        for &(ta, tb) in &plan.panels {
            let half = 0.5 * (tb - ta);
            let mid = 0.5 * (ta + tb);
            for (xk, wk) in gl_x.iter().zip(gl_w) {
                let t = mid + half * xk;
                let s = Complex64::new(c, t);
                nodes.push(FamilyNode {
                    s,
                    w: wk * half,
                    f_even: spec_even.ln_f(s).exp(),
                    f_odd: spec_odd.ln_f(s).exp(),
                });
            }
        }
        let t_cut = plan.panels.last().map(|p| p.1).unwrap_or(1.0);
        let cut_s = Complex64::new(c, t_cut);
        let n_nodes = nodes.len();
        let ones = || PrefixCache {
            levels: vec![vec![vec![Complex64::new(1.0, 0.0); n_nodes + 1]]; n],
        };
        Ok(Gq0Family {
            m: m_params.to_vec(),
            nodes,
            cut_s,
            cut_even: spec_even.ln_f(cut_s).exp(),
            cut_odd: spec_odd.ln_f(cut_s).exp(),
            decay: plan.decay_rate,
            prefix: RefCell::new([ones(), ones()]),
        })
    }

    // extend the prefix cache so level k exists for factor i
    fn ensure_levels(&self, parity: usize, i: usize, k: usize) {
        let offset = if parity == 0 { 0.0 } else { 0.5 };
        let mut caches = self.prefix.borrow_mut();
        let levels = &mut caches[parity].levels[i];
        while levels.len() <= k {
            let kprev = levels.len() - 1;
            let rf = kprev as f64 + offset;
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(self.nodes.len() + 1);
            for (node, p) in self.nodes.iter().zip(prev.iter()) {
                next.push(p * (rf - node.s) * (self.m[i] + rf - node.s));
            }
            next.push(prev[self.nodes.len()] * (rf - self.cut_s) * (self.m[i] + rf - self.cut_s));
            levels.push(next);
        }
    }

    fn eval_with(&self, k: &[usize], parity: usize) -> EvalResult {
        let pi = std::f64::consts::PI;
        for (i, &ki) in k.iter().enumerate() {
            self.ensure_levels(parity, i, ki);
        }
        let caches = self.prefix.borrow();
        let cache = &caches[parity];
        let n_nodes = self.nodes.len();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs_acc = 0.0;
        for (idx, node) in self.nodes.iter().enumerate() {
            let f = if parity == 0 { node.f_even } else { node.f_odd };
            let mut poch = Complex64::new(1.0, 0.0);
            for (i, &ki) in k.iter().enumerate() {
                poch *= cache.levels[i][ki][idx];
            }
            let term = f * poch;
            acc += node.w * term;
            abs_acc += node.w * term.norm();
        }
        let value = acc.re / pi;
        let cut_f = if parity == 0 {
            self.cut_even
        } else {
            self.cut_odd
        };
        let mut cut_poch = Complex64::new(1.0, 0.0);
        for (i, &ki) in k.iter().enumerate() {
            cut_poch *= cache.levels[i][ki][n_nodes];
        }
        // the imaginary part of the half-line sum is real information that
        // cancels against the conjugate side, not an error indicator
        let tail = (cut_f * cut_poch).norm() / self.decay / pi;
        let abs_err = tail + abs_acc / pi * 1e-15;
        EvalResult {
            value,
            abs_err,
            converged: true,
        }
    }

    /// G with j_i = 2 k_i (all-even parity term).
    pub fn eval_even(&self, k: &[usize]) -> EvalResult {
        self.eval_with(k, 0)
    }

    /// G with j_i = 2 k_i + 1 (all-odd parity term).
    pub fn eval_odd(&self, k: &[usize]) -> EvalResult {
        self.eval_with(k, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meijer::{eval_g_q0, MeijerGSpec};

    #[test]
    fn family_terms_match_standalone_evaluations() {
        let m = [0.5, 1.25];
        let x = 0.37;
        let fam = Gq0Family::new(&m, x, 1e-12, 16, 2.0).unwrap();
        // even term j = (2, 0)
        let got = fam.eval_even(&[1, 0]);
        let spec = MeijerGSpec::q0(vec![1.0, 0.0, 1.5, 1.25]);
        let want = eval_g_q0(&spec, x, 1e-12).unwrap();
        assert!(
            (got.value - want.value).abs() < 1e-10,
            "even: {} vs {}",
            got.value,
            want.value
        );
        // odd term j = (1, 3)
        let got = fam.eval_odd(&[0, 1]);
        let spec = MeijerGSpec::q0(vec![0.5, 1.5, 1.0, 2.75]);
        let want = eval_g_q0(&spec, x, 1e-12).unwrap();
        assert!(
            (got.value - want.value).abs() < 1e-10,
            "odd: {} vs {}",
            got.value,
            want.value
        );
        // deep-shell term exercises the cached prefix levels; the family
        // resolves high-degree terms only to their coefficient-damped share
        // of the tolerance, so compare within the reported error bound
        let got = fam.eval_even(&[5, 3]);
        let spec = MeijerGSpec::q0(vec![5.0, 3.0, 5.5, 4.25]);
        let want = eval_g_q0(&spec, x, 1e-12).unwrap();
        let diff = (got.value - want.value).abs();
        assert!(
            diff <= 2.0 * (got.abs_err + want.abs_err) && diff < 1e-6 * want.value.abs(),
            "deep: {} vs {} (diff {diff:.2e}, est {:.2e})",
            got.value,
            want.value,
            got.abs_err
        );
    }

    #[test]
    fn family_handles_large_argument() {
        let m = [0.5, 0.5];
        let x = 5.0e4;
        let fam = Gq0Family::new(&m, x, 1e-14, 8, 1.0).unwrap();
        let got = fam.eval_even(&[0, 0]);
        let spec = MeijerGSpec::q0(vec![0.0, 0.0, 0.5, 0.5]);
        let want = eval_g_q0(&spec, x, 1e-14).unwrap();
        assert!(((got.value - want.value) / want.value).abs() < 1e-8);
    }
}
