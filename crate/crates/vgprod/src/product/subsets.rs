//! Signed-subset machinery: the power set split by parity, the subset
//! weights omega_sigma, and the parity coefficient that collapses the
//! 2^N subset sum in the product-density series.

use crate::error::{Error, Result};
use crate::vg::VgParams;

/// Hard cap on the factor count: subset enumeration is 2^N.
pub const MAX_FACTORS: usize = 12;

/// One subset of {1..N} together with its parity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignedSubset {
    bits: u16,
    n: usize,
}

impl SignedSubset {
    pub fn new(bits: u16, n: usize) -> Self {
        debug_assert!(n <= MAX_FACTORS);
        SignedSubset { bits, n }
    }
    pub fn contains(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }
    /// True when |sigma| is even.
    pub fn parity_even(&self) -> bool {
        self.len() % 2 == 0
    }
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }
    pub fn complement_members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| !self.contains(i))
    }
}

/// A subset together with omega_sigma = prod_{k in sigma} lambda_k^+ *
/// prod_{l not in sigma} lambda_l^-.
#[derive(Debug, Clone, Copy)]
pub struct SubsetWeight {
    pub subset: SignedSubset,
    pub omega: f64,
}

/// Exhaustive, duplicate-free enumeration of all 2^N subset weights.
pub fn subset_weights(factors: &[VgParams]) -> Result<Vec<SubsetWeight>> {
    let n = factors.len();
    if n > MAX_FACTORS {
        return Err(Error::TooManyFactors {
            n,
            max: MAX_FACTORS,
        });
    }
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0u16..(1u16 << n) {
        let subset = SignedSubset::new(bits, n);
        let mut omega = 1.0;
        for i in 0..n {
            omega *= if subset.contains(i) {
                factors[i].lambda_plus()
            } else {
                factors[i].lambda_minus()
            };
        }
        out.push(SubsetWeight { subset, omega });
    }
    Ok(out)
}

/// The series coefficient a_{j_1..j_N}(z): the parity-signed subset sum
/// collapses to `2^{N-1} [all j even]` plus `sign(z) 2^{N-1} [all j odd]`;
/// mixed parities vanish.
pub fn subset_coefficient(j: &[usize], z_positive: bool) -> i64 {
    let n = j.len();
    let all_even = j.iter().all(|&v| v % 2 == 0);
    let all_odd = j.iter().all(|&v| v % 2 == 1);
    let half = 1i64 << (n - 1);
    match (all_even, all_odd) {
        (true, false) => half,
        (false, true) => {
            if z_positive {
                half
            } else {
                -half
            }
        }
        (true, true) => half, // n == 1 with j even is both cases' union
        (false, false) => 0,
    }
}

/// Brute-force oracle for the coefficient: literal sum over the signed
/// subset family.
pub fn subset_coefficient_enumerated(j: &[usize], z_positive: bool) -> i64 {
    let n = j.len();
    let mut acc = 0i64;
    for bits in 0u16..(1u16 << n) {
        let subset = SignedSubset::new(bits, n);
        if subset.parity_even() != z_positive {
            continue;
        }
        let mut prod = 1i64;
        for k in subset.members() {
            if j[k] % 2 == 1 {
                prod = -prod;
            }
        }
        acc += prod;
    }
    acc
}
