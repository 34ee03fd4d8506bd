//! Least-squares fit of a click histogram to the binomial coherent-state model.
//!
//! The objective is `sum_m (c_m - A P(m; mu'))^2` with unweighted raw counts.
//! For fixed `mu'` the best normalization `A` is linear and solved in closed
//! form, so the fit reduces to a one-dimensional search over `mu'`: a
//! logarithmic grid followed by golden-section refinement inside the bracket
//! around the best grid point.

use serde::{Deserialize, Serialize};

use crate::coherent::CoherentClickModel;
use crate::error::{Error, Result};
use crate::BINS;

/// Observed or simulated counts for `m = 0..=16` clicks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickHistogram {
    counts: Vec<u64>,
}

impl ClickHistogram {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() != BINS + 1 {
            return Err(Error::Format(format!(
                "histogram needs {} entries (m = 0..={BINS}), got {}",
                BINS + 1,
                counts.len()
            )));
        }
        Ok(Self { counts })
    }

    pub fn zeros() -> Self {
        Self {
            counts: vec![0; BINS + 1],
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn record(&mut self, m: usize) {
        self.counts[m] += 1;
    }

    pub fn merge(&mut self, other: &ClickHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn empirical_probs(&self) -> Vec<f64> {
        let total = self.total();
        if total == 0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts.iter().map(|&c| c as f64 / total as f64).collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64).collect()
    }

    /// Counts scaled to `total * probs[m]`, rounded to the nearest integer.
    pub fn from_expected(probs: &[f64], total: f64) -> Result<Self> {
        Self::new(probs.iter().map(|p| (p * total).round() as u64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub normalization: f64,
    pub mu_prime: f64,
    pub eta_l_mu0: f64,
    pub rss: f64,
    pub iterations: u32,
    /// Set when the optimum sits on the edge of the search range.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub at_search_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub mu_min: f64,
    pub mu_max: f64,
    pub grid_points: usize,
    pub rel_tol: f64,
    pub max_iterations: u32,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            mu_min: 1e-4,
            mu_max: 10.0,
            grid_points: 161,
            rel_tol: 1e-8,
            max_iterations: 200,
        }
    }
}

impl FitOptions {
    /// Logarithmically spaced `mu'` values probed before refinement.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = (self.mu_min.ln(), self.mu_max.ln());
        let steps = (self.grid_points - 1) as f64;
        (0..self.grid_points)
            .map(|i| (lo + (hi - lo) * i as f64 / steps).exp())
            .collect()
    }
}

/// Best normalization and residual sum of squares at a fixed `mu'`.
pub fn profile(hist: &ClickHistogram, mu_prime: f64) -> (f64, f64) {
    profile_counts(&hist.as_f64(), mu_prime)
}

/// [`profile`] over real-valued counts.
pub fn profile_counts(counts: &[f64], mu_prime: f64) -> (f64, f64) {
    let model = CoherentClickModel::new(mu_prime, BINS).expect("mu' is non-negative");
    let p: Vec<f64> = (0..=BINS)
        .map(|m| model.click_pmf(m).expect("m within bins"))
        .collect();
    let (mut cp, mut pp) = (0.0, 0.0);
    for (&c, &pm) in counts.iter().zip(&p) {
        cp += c * pm;
        pp += pm * pm;
    }
    let a = cp / pp;
    let rss = counts
        .iter()
        .zip(&p)
        .map(|(&c, &pm)| {
            let r = c - a * pm;
            r * r
        })
        .sum();
    (a, rss)
}

pub fn fit_histogram(hist: &ClickHistogram) -> Result<FitResult> {
    fit_histogram_with(hist, &FitOptions::default())
}

pub fn fit_histogram_with(hist: &ClickHistogram, opts: &FitOptions) -> Result<FitResult> {
    fit_counts(&hist.as_f64(), opts)
}

/// Fits real-valued (for example expected, unrounded) counts for
/// `m = 0..=16`.
pub fn fit_counts(counts: &[f64], opts: &FitOptions) -> Result<FitResult> {
    if counts.len() != BINS + 1 {
        return Err(Error::Format(format!(
            "expected {} counts, got {}",
            BINS + 1,
            counts.len()
        )));
    }
    if counts.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
        return Err(Error::InvalidParameter("counts must be finite and non-negative".into()));
    }
    if counts.iter().sum::<f64>() == 0.0 {
        return Err(Error::Unidentifiable("histogram has no events"));
    }
    if counts.iter().filter(|&&c| c > 0.0).count() < 2 {
        return Err(Error::Unidentifiable("all events share a single click count"));
    }
    if !(opts.mu_min > 0.0 && opts.mu_max > opts.mu_min && opts.grid_points >= 3) {
        return Err(Error::InvalidParameter("invalid fit search range".into()));
    }

    let grid = opts.grid();
    let objective = |mu: f64| profile_counts(counts, mu).1;
    let values: Vec<f64> = grid.iter().map(|&mu| objective(mu)).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("grid is non-empty");
    let at_search_boundary = best == 0 || best == grid.len() - 1;

    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(grid.len() - 1)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    let mut iterations = 0;
    while hi - lo > opts.rel_tol * 0.5 * (hi + lo) && iterations < opts.max_iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
        iterations += 1;
    }

    let (mut mu, mut rss) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    // never return something worse than a probed grid point
    if values[best] < rss {
        mu = grid[best];
        rss = values[best];
    }
    let (normalization, _) = profile_counts(counts, mu);
    Ok(FitResult {
        normalization,
        mu_prime: mu,
        eta_l_mu0: BINS as f64 * mu,
        rss,
        iterations,
        at_search_boundary,
    })
}
