//! Classical occupancy model of a balanced, lossless N-port followed by N
//! detectors of efficiency `eta`.
//!
//! Each photon independently lands in one of `N` bins with probability
//! `1/N` and is detected with probability `eta`; `m` counts the bins that
//! saw at least one detected photon. Four independent evaluations of
//! `P(m|n)` are provided: the two boundary formulas, the recursion in `n`,
//! the inclusion-exclusion closed form, and exhaustive enumeration.
//!
//! The recursion is the reference when the closed form's alternating sum
//! loses precision. Counts above `N` have probability zero.

use crate::error::{Error, Result};
use crate::math::{binomial, falling_factorial, CompensatedSum};

/// Limit on the number of per-photon outcome sequences `brute_force_pmn`
/// will walk.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// `P(0|n) = (1 - eta)^n`.
pub fn p_zero(n: u32, eta: f64) -> f64 {
    (1.0 - eta).powi(n as i32)
}

/// `P(n|n) = (eta/N)^n N!/(N-n)!`, zero for `n > N`.
pub fn p_all(bins: u32, n: u32, eta: f64) -> f64 {
    if n > bins {
        return 0.0;
    }
    (eta / bins as f64).powi(n as i32) * falling_factorial(bins as u64, n as u64)
}

/// Memoized table of the recursion
///
/// `P(m|n+1) = P(m|n) [(1-eta) + eta m/N] + P(m-1|n) (N+1-m) eta/N`
///
/// seeded with `P(0|0) = 1`.
#[derive(Debug, Clone)]
pub struct RecursionTable {
    bins: u32,
    eta: f64,
    // rows[n][m], m in 0..=bins
    rows: Vec<Vec<f64>>,
}

impl RecursionTable {
    pub fn new(bins: u32, eta: f64) -> Self {
        assert!(bins > 0, "at least one bin required");
        let mut first = vec![0.0; bins as usize + 1];
        first[0] = 1.0;
        Self {
            bins,
            eta,
            rows: vec![first],
        }
    }

    /// Distribution over `m = 0..=N` for `n` photons.
    pub fn row(&mut self, n: u32) -> &[f64] {
        let nbins = self.bins as f64;
        while self.rows.len() <= n as usize {
            let prev = self.rows.last().expect("table is seeded");
            let mut next = vec![0.0; prev.len()];
            for m in 0..=self.bins as usize {
                let stay = prev[m] * ((1.0 - self.eta) + self.eta * m as f64 / nbins);
                let fresh = if m > 0 {
                    prev[m - 1] * ((self.bins as usize + 1 - m) as f64 * self.eta / nbins)
                } else {
                    0.0
                };
                next[m] = stay + fresh;
            }
            self.rows.push(next);
        }
        &self.rows[n as usize]
    }

    pub fn get(&mut self, m: u32, n: u32) -> f64 {
        if m > self.bins {
            return 0.0;
        }
        self.row(n)[m as usize]
    }
}

pub fn recursion_pmn(bins: u32, eta: f64, m: u32, n: u32) -> f64 {
    RecursionTable::new(bins, eta).get(m, n)
}

/// `C(N,m) sum_j (-1)^j C(m,j) [(1-eta) + (m-j) eta/N]^n`.
pub fn closed_form_pmn(bins: u32, eta: f64, m: u32, n: u32) -> f64 {
    if m > bins || m > n {
        return 0.0;
    }
    let nbins = bins as f64;
    let mut acc = CompensatedSum::default();
    for j in 0..=m {
        let base = (1.0 - eta) + (m - j) as f64 * eta / nbins;
        let term = binomial(m as u64, j as u64) * base.powi(n as i32);
        acc.add(if j % 2 == 0 { term } else { -term });
    }
    binomial(bins as u64, m as u64) * acc.value()
}

/// Number of outcome sequences enumerated for `n` photons over `N` bins:
/// each photon is either missed or detected in one of the bins.
pub fn brute_force_outcomes(bins: u32, n: u32) -> u128 {
    (bins as u128 + 1).saturating_pow(n)
}

/// Exact distribution over `m = 0..=n` by walking every per-photon outcome
/// (missed, or detected in bin `i`).
pub fn brute_force_distribution(bins: u32, eta: f64, n: u32) -> Result<Vec<f64>> {
    let outcomes = brute_force_outcomes(bins, n);
    if outcomes > BRUTE_FORCE_LIMIT || bins > 64 {
        return Err(Error::InstanceTooLarge {
            outcomes,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let hit = eta / bins as f64;
    let miss = 1.0 - eta;
    let mut dist = vec![0.0; n as usize + 1];

    fn walk(left: u32, mask: u64, prob: f64, bins: u32, hit: f64, miss: f64, dist: &mut [f64]) {
        if prob == 0.0 {
            return;
        }
        if left == 0 {
            dist[mask.count_ones() as usize] += prob;
            return;
        }
        walk(left - 1, mask, prob * miss, bins, hit, miss, dist);
        for bin in 0..bins {
            walk(left - 1, mask | 1 << bin, prob * hit, bins, hit, miss, dist);
        }
    }

    walk(n, 0, 1.0, bins, hit, miss, &mut dist);
    Ok(dist)
}

pub fn brute_force_pmn(bins: u32, eta: f64, m: u32, n: u32) -> Result<f64> {
    let dist = brute_force_distribution(bins, eta, n)?;
    Ok(dist.get(m as usize).copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_detection_formula() {
        assert_eq!(p_zero(0, 0.3), 1.0);
        assert_eq!(p_zero(3, 1.0), 0.0);
        assert!((p_zero(2, 0.7) - 0.09).abs() < 1e-15);
    }

    #[test]
    fn all_detected_formula() {
        assert!((p_all(16, 2, 0.7) - 0.459375).abs() < 1e-15);
        assert!((p_all(16, 2, 1.0) - 15.0 / 16.0).abs() < 1e-15);
        assert_eq!(p_all(16, 1, 1.0), 1.0);
        assert_eq!(p_all(4, 5, 1.0), 0.0);
    }

    #[test]
    fn recursion_boundaries() {
        let mut table = RecursionTable::new(16, 0.43);
        for n in 0..=16 {
            assert!((table.get(0, n) - p_zero(n, 0.43)).abs() < 1e-14);
            assert!((table.get(n, n) - p_all(16, n, 0.43)).abs() < 1e-14);
        }
        assert_eq!(table.get(17, 20), 0.0);
    }

    #[test]
    fn recursion_matches_brute_force_small_case() {
        let bf = brute_force_pmn(4, 0.5, 2, 3).unwrap();
        assert!((recursion_pmn(4, 0.5, 2, 3) - bf).abs() < 1e-15);
        for m in 0..=3 {
            let bf = brute_force_pmn(4, 0.5, m, 3).unwrap();
            assert!((closed_form_pmn(4, 0.5, m, 3) - bf).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_limits() {
        assert!((closed_form_pmn(16, 0.3, 0, 5) - p_zero(5, 0.3)).abs() < 1e-15);
        for n in 0..=16 {
            let expected = falling_factorial(16, n as u64) / 16f64.powi(n as i32);
            assert!((closed_form_pmn(16, 1.0, n, n) - expected).abs() < 1e-12);
        }
        let full = closed_form_pmn(16, 1.0, 16, 16);
        assert!((full - 1.134e-6).abs() < 1e-9);
        // alternating sum: absolute error grows with m
        assert!((full - p_all(16, 16, 1.0)).abs() < 1e-12);
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(brute_force_pmn(2, 1.0, 1, 1).unwrap(), 1.0);
        assert_eq!(brute_force_pmn(2, 1.0, 2, 2).unwrap(), 0.5);
        assert!(matches!(
            brute_force_pmn(16, 0.5, 3, 16),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn rows_are_normalized() {
        for eta in [0.0, 0.2, 0.5, 1.0] {
            let mut table = RecursionTable::new(7, eta);
            for n in 0..12 {
                let s: f64 = table.row(n).iter().sum();
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_efficiency_never_clicks() {
        for n in 0..6 {
            assert_eq!(recursion_pmn(8, 0.0, 0, n), 1.0);
            for m in 1..=n {
                assert_eq!(recursion_pmn(8, 0.0, m, n), 0.0);
                assert_eq!(closed_form_pmn(8, 0.0, m, n), 0.0);
            }
        }
    }

    // With eta = 1 the miss term vanishes and the recursion weights become
    // m/N and (N+1-m)/N.
    #[test]
    fn unit_efficiency_recursion_structure() {
        let bins = 5u32;
        let mut table = RecursionTable::new(bins, 1.0);
        for n in 0..8u32 {
            let row = table.row(n).to_vec();
            let next = table.row(n + 1).to_vec();
            for m in 0..=bins as usize {
                let mut expected = row[m] * m as f64 / bins as f64;
                if m > 0 {
                    expected += row[m - 1] * (bins as usize + 1 - m) as f64 / bins as f64;
                }
                assert!((next[m] - expected).abs() < 1e-15);
            }
        }
    }
}
