//! Click statistics of the two binary detectors.
//!
//! A bin hit by `q` photons fails to click with probability `(1 - eta)^q`;
//! bins click independently, so every basis term of the propagated state
//! contributes a Poisson-binomial count distribution weighted by its
//! probability. Dark counts and multi-photon detector correlations are not
//! modeled.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::fock::{term_count_bound, FockState};
use crate::math::CompensatedSum;
use crate::network::{self, NetworkConfig, TmdLayout, TOTAL_MODES};
use crate::BINS;

/// Above this many basis states `p_correct` switches to the routing formula.
pub const QUANTUM_TERM_BUDGET: f64 = 1.0e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    eta: f64,
}

impl DetectorModel {
    pub fn new(eta: f64) -> Result<Self> {
        check_probability("eta", eta)?;
        Ok(Self { eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Probability that a bin holding `q` photons clicks.
    pub fn click_probability(&self, q: u32) -> f64 {
        if q == 0 {
            0.0
        } else {
            1.0 - (1.0 - self.eta).powi(q as i32)
        }
    }
}

/// `P(m)` for `m = 0..=bins`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClickDistribution {
    probs: Vec<f64>,
}

impl ClickDistribution {
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("empty click distribution".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0 + 1e-9).contains(*p)) {
            return Err(Error::ProbabilityOutOfRange { name: "P(m)", value: *p });
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, m: usize) -> f64 {
        self.probs.get(m).copied().unwrap_or(0.0)
    }

    pub fn max_count(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        self.probs.iter().for_each(|&p| acc.add(p));
        acc.value()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(m, p)| m as f64 * p).sum()
    }
}

/// Distribution of the number of successes among independent Bernoulli
/// trials with success probabilities `p`, by iterated convolution.
pub fn poisson_binomial(p: &[f64]) -> Vec<f64> {
    let mut dist = vec![0.0; p.len() + 1];
    dist[0] = 1.0;
    for (i, &pi) in p.iter().enumerate() {
        for k in (0..=i + 1).rev() {
            let stay = dist[k] * (1.0 - pi);
            let step = if k > 0 { dist[k - 1] * pi } else { 0.0 };
            dist[k] = stay + step;
        }
    }
    dist
}

/// Probability mass of a state grouped by the multiset of photon numbers
/// found in the detection bins. Click statistics depend only on this
/// multiset, so one profile serves any number of efficiencies.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyProfile {
    bins: usize,
    // sorted (descending) non-zero occupations -> probability
    weights: BTreeMap<Vec<u8>, f64>,
}

impl OccupancyProfile {
    pub fn from_state(state: &FockState, layout: &TmdLayout) -> Result<Self> {
        if state.modes() != layout.mode_count() {
            return Err(Error::ModeCountMismatch {
                state: state.modes(),
                layout: layout.mode_count(),
            });
        }
        let detection = layout.detection_modes();
        let mut weights: BTreeMap<Vec<u8>, f64> = BTreeMap::new();
        for (occ, prob) in state.probabilities() {
            let mut key: Vec<u8> = detection
                .iter()
                .map(|&m| occ[m])
                .filter(|&q| q > 0)
                .collect();
            key.sort_unstable_by(|a, b| b.cmp(a));
            *weights.entry(key).or_insert(0.0) += prob;
        }
        Ok(Self {
            bins: detection.len(),
            weights,
        })
    }

    pub fn patterns(&self) -> usize {
        self.weights.len()
    }

    pub fn click_distribution(&self, det: &DetectorModel) -> ClickDistribution {
        let mut acc = vec![CompensatedSum::default(); self.bins + 1];
        for (pattern, &weight) in &self.weights {
            let p: Vec<f64> = pattern
                .iter()
                .map(|&q| det.click_probability(q as u32))
                .collect();
            for (m, pm) in poisson_binomial(&p).into_iter().enumerate() {
                acc[m].add(weight * pm);
            }
        }
        ClickDistribution {
            probs: acc.iter().map(CompensatedSum::value).collect(),
        }
    }
}

pub fn click_distribution_from_state(
    state: &FockState,
    layout: &TmdLayout,
    det: &DetectorModel,
) -> Result<ClickDistribution> {
    Ok(OccupancyProfile::from_state(state, layout)?.click_distribution(det))
}

/// Full pipeline: propagate `n` photons at loop transmission `f`, then detect.
pub fn pmn(n: usize, f: f64, det: &DetectorModel) -> Result<ClickDistribution> {
    let layout = network::build_layout();
    let state = network::propagate_with_layout(&layout, &NetworkConfig::new(f, n)?)?;
    click_distribution_from_state(&state, &layout, det)
}

/// How a click distribution was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Propagated number state, summed term by term.
    Quantum,
    /// Independent per-photon routing, summed by dynamic programming.
    Routing,
}

/// Quantum route while the state stays under [`QUANTUM_TERM_BUDGET`] basis
/// states, routing otherwise.
pub fn preferred_method(n: usize) -> Method {
    if term_count_bound(n, TOTAL_MODES) <= QUANTUM_TERM_BUDGET {
        Method::Quantum
    } else {
        Method::Routing
    }
}

/// `P(m|n)` for the device at loop transmission `f`, by the given method.
pub fn pmn_with(method: Method, n: usize, f: f64, det: &DetectorModel) -> Result<ClickDistribution> {
    match method {
        Method::Quantum => pmn(n, f, det),
        Method::Routing => routing_distribution(n, &network::reach_by_mode(f)?, det),
    }
}

/// Probability `P(n|n)` that all `n` photons are resolved; zero for `n > 16`.
pub fn p_correct(n: usize, f: f64, det: &DetectorModel) -> Result<f64> {
    check_probability("f", f)?;
    if n > BINS {
        return Ok(0.0);
    }
    Ok(pmn_with(preferred_method(n), n, f, det)?.get(n))
}

/// Largest photon number [`routing_distribution`] accepts (`n!` must stay finite).
pub const ROUTING_MAX_PHOTONS: usize = 170;

/// Exact click distribution when each of `n` photons independently reaches
/// bin `i` with probability `reach[i]` (and is lost otherwise).
///
/// The multinomial sum over occupation vectors is organized bin by bin on
/// `(photons placed, bins clicked)` with weights `r^q / q!`; every term is
/// non-negative, so there is no cancellation.
pub fn routing_distribution(n: usize, reach: &[f64], det: &DetectorModel) -> Result<ClickDistribution> {
    if n > ROUTING_MAX_PHOTONS {
        return Err(Error::InvalidParameter(format!(
            "routing supports at most {ROUTING_MAX_PHOTONS} photons, got {n}"
        )));
    }
    for &r in reach {
        check_probability("reach", r)?;
    }
    let lost = (1.0 - reach.iter().sum::<f64>()).max(0.0);
    let bins = reach.len();
    let mut inv_fact = vec![1.0; n + 1];
    for q in 1..=n {
        inv_fact[q] = inv_fact[q - 1] / q as f64;
    }
    // table[k][c]: k photons placed in the bins seen so far, c of them clicked
    let mut table = vec![vec![0.0; bins + 1]; n + 1];
    table[0][0] = 1.0;
    for (i, &r) in reach.iter().enumerate() {
        let mut next = vec![vec![0.0; bins + 1]; n + 1];
        for k in 0..=n {
            for c in 0..=i.min(k) {
                let w = table[k][c];
                if w == 0.0 {
                    continue;
                }
                next[k][c] += w;
                for q in 1..=n - k {
                    let place = w * r.powi(q as i32) * inv_fact[q];
                    let click = det.click_probability(q as u32);
                    next[k + q][c + 1] += place * click;
                    next[k + q][c] += place * (1.0 - click);
                }
            }
        }
        table = next;
    }
    let n_fact = 1.0 / inv_fact[n];
    let mut probs = vec![0.0; bins + 1];
    for (k, row) in table.iter().enumerate() {
        let rest = n_fact * lost.powi((n - k) as i32) * inv_fact[n - k];
        for (c, &w) in row.iter().enumerate() {
            probs[c] += w * rest;
        }
    }
    ClickDistribution::from_probs(probs)
}
