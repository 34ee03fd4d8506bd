//! Seeded trajectory sampling of the detector.
//!
//! Photons are routed one at a time: a photon reaches detection bin `i` with
//! probability `reach[i]` (from the loop transmissions) or is lost, and an
//! arriving photon is detected with probability `eta`. Per-photon routing is
//! a valid sampling law here because the network never interferes distinct
//! routes; the test suite checks it against the propagated quantum state.
//!
//! Shots are processed in fixed-size batches. Batch `k` draws from the
//! ChaCha stream `k` of the master seed, so a result depends only on the
//! seed and the configuration, never on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::fit::ClickHistogram;
use crate::network::{self, TIME_BINS};
use crate::BINS;

/// Shots per RNG substream.
pub const BATCH_SHOTS: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoherentLoss {
    /// Every bin receives `l / 16` of the input on average.
    Equal { l: f64 },
    /// Bin with loop exponent `b` receives `f^b / 16`.
    PerBin { f: f64 },
}

impl CoherentLoss {
    pub fn reach(&self) -> Result<[f64; BINS]> {
        match *self {
            CoherentLoss::Equal { l } => {
                check_probability("l", l)?;
                Ok([l / BINS as f64; BINS])
            }
            CoherentLoss::PerBin { f } => network::reach_by_mode(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Source {
    Fock { n: u32, f: f64, eta: f64 },
    Coherent { mu0: f64, eta: f64, loss: CoherentLoss },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    /// Delay between adjacent time bins, ns.
    pub delta_t: f64,
    /// Detector dead time, ns.
    pub tau: f64,
    /// Optical pulse length, ns.
    pub pulse_duration: f64,
}

impl TimingConfig {
    pub fn new(delta_t: f64, tau: f64, pulse_duration: f64) -> Result<Self> {
        for (name, v) in [("delta_t", delta_t), ("tau", tau), ("pulse_duration", pulse_duration)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if pulse_duration >= delta_t {
            return Err(Error::InvalidParameter(format!(
                "pulses of {pulse_duration} ns overlap at a bin spacing of {delta_t} ns"
            )));
        }
        Ok(Self {
            delta_t,
            tau,
            pulse_duration,
        })
    }

    /// 110 ns bin spacing, 60 ns dead time, 50 ps pulses.
    pub fn apparatus() -> Self {
        Self {
            delta_t: 110.0,
            tau: 60.0,
            pulse_duration: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub shots: u64,
    pub seed: u64,
    pub source: Source,
    /// When set, clicks are filtered through the per-detector dead time.
    pub timing: Option<TimingConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub histogram: ClickHistogram,
    pub empirical_probs: Vec<f64>,
    pub seed_used: u64,
    /// Clicks discarded by the dead time (zero without timing).
    pub lost_clicks: u64,
}

/// Outcome of feeding one trigger's clicks through both detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DeadTimeOutcome {
    pub registered: [u32; 2],
    pub lost: u32,
}

impl DeadTimeOutcome {
    pub fn total_registered(&self) -> u32 {
        self.registered.iter().sum()
    }
}

/// Applies a non-paralyzable dead time to one detector. `bins` is a bitmask
/// of clicked time bins; bin `b` clicks at `b * delta_t`. Returns
/// `(registered, lost)`.
pub fn register_clicks(bins: u8, timing: &TimingConfig) -> (u32, u32) {
    let mut last: Option<f64> = None;
    let (mut registered, mut lost) = (0, 0);
    for bin in 0..TIME_BINS {
        if bins >> bin & 1 == 0 {
            continue;
        }
        let t = bin as f64 * timing.delta_t;
        match last {
            Some(prev) if t - prev < timing.tau => lost += 1,
            _ => {
                registered += 1;
                last = Some(t);
            }
        }
    }
    (registered, lost)
}

/// Dead-time filtering of a click pattern given per detector as bin bitmasks
/// `[A, B]`. Detectors are independent.
pub fn dead_time_sim(clicked: [u8; 2], timing: &TimingConfig) -> DeadTimeOutcome {
    let mut out = DeadTimeOutcome::default();
    for (d, &bins) in clicked.iter().enumerate() {
        let (r, l) = register_clicks(bins, timing);
        out.registered[d] = r;
        out.lost += l;
    }
    out
}

/// Cumulative table over the 16 bins; the remainder is the loss outcome.
struct Router {
    cumulative: [f64; BINS],
}

impl Router {
    fn new(reach: &[f64; BINS]) -> Self {
        let mut cumulative = [0.0; BINS];
        let mut acc = 0.0;
        for (c, r) in cumulative.iter_mut().zip(reach) {
            acc += r;
            *c = acc;
        }
        Self { cumulative }
    }

    fn route<R: Rng>(&self, rng: &mut R) -> Option<usize> {
        let u: f64 = rng.random();
        self.cumulative.iter().position(|&c| u < c)
    }
}

struct ShotSampler {
    router: Router,
    eta: f64,
    photons: PhotonSource,
    timing: Option<TimingConfig>,
}

enum PhotonSource {
    Fixed(u32),
    Poisson(Poisson<f64>),
    Vacuum,
}

impl ShotSampler {
    /// Returns `(registered clicks, lost clicks)` for one trigger.
    fn shot<R: Rng>(&self, rng: &mut R) -> (usize, u32) {
        let n = match &self.photons {
            PhotonSource::Fixed(n) => *n as u64,
            PhotonSource::Poisson(p) => p.sample(rng) as u64,
            PhotonSource::Vacuum => 0,
        };
        let mut mask: u16 = 0;
        for _ in 0..n {
            if let Some(bin) = self.router.route(rng) {
                if rng.random::<f64>() < self.eta {
                    mask |= 1 << bin;
                }
            }
        }
        match &self.timing {
            None => (mask.count_ones() as usize, 0),
            Some(timing) => {
                let split = [(mask & 0xff) as u8, (mask >> TIME_BINS) as u8];
                let out = dead_time_sim(split, timing);
                (out.total_registered() as usize, out.lost)
            }
        }
    }
}

fn run_batches(sampler: &ShotSampler, shots: u64, seed: u64) -> (ClickHistogram, u64) {
    let batches = shots.div_ceil(BATCH_SHOTS);
    let partials: Vec<(ClickHistogram, u64)> = (0..batches)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = BATCH_SHOTS.min(shots - k * BATCH_SHOTS);
            let mut hist = ClickHistogram::zeros();
            let mut lost = 0u64;
            for _ in 0..count {
                let (m, l) = sampler.shot(&mut rng);
                hist.record(m);
                lost += l as u64;
            }
            (hist, lost)
        })
        .collect();
    let mut hist = ClickHistogram::zeros();
    let mut lost = 0;
    for (h, l) in &partials {
        hist.merge(h);
        lost += l;
    }
    (hist, lost)
}

fn finish(config: &McConfig, sampler: ShotSampler) -> Result<McResult> {
    if config.shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let (histogram, lost_clicks) = run_batches(&sampler, config.shots, config.seed);
    Ok(McResult {
        empirical_probs: histogram.empirical_probs(),
        histogram,
        seed_used: config.seed,
        lost_clicks,
    })
}

pub fn sample_fock_clicks(config: &McConfig) -> Result<McResult> {
    let Source::Fock { n, f, eta } = config.source else {
        return Err(Error::InvalidParameter("expected a Fock source".into()));
    };
    check_probability("eta", eta)?;
    let sampler = ShotSampler {
        router: Router::new(&network::reach_by_mode(f)?),
        eta,
        photons: PhotonSource::Fixed(n),
        timing: config.timing,
    };
    finish(config, sampler)
}

pub fn sample_coherent_clicks(config: &McConfig) -> Result<McResult> {
    let Source::Coherent { mu0, eta, loss } = config.source else {
        return Err(Error::InvalidParameter("expected a coherent source".into()));
    };
    check_probability("eta", eta)?;
    if !(mu0 >= 0.0 && mu0.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu0 must be >= 0, got {mu0}")));
    }
    let photons = if mu0 == 0.0 {
        PhotonSource::Vacuum
    } else {
        PhotonSource::Poisson(
            Poisson::new(mu0).map_err(|e| Error::InvalidParameter(e.to_string()))?,
        )
    };
    let sampler = ShotSampler {
        router: Router::new(&loss.reach()?),
        eta,
        photons,
        timing: config.timing,
    };
    finish(config, sampler)
}

/// Dispatches on the configured source.
pub fn run(config: &McConfig) -> Result<McResult> {
    match config.source {
        Source::Fock { .. } => sample_fock_clicks(config),
        Source::Coherent { .. } => sample_coherent_clicks(config),
    }
}
