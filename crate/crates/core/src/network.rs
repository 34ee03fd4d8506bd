//! The 23-mode detector topology.
//!
//! Three coupler + delay-loop stages (loop lengths L, 2L, 4L) turn the input
//! pulse into 8 time bins, and a final 50/50 coupler sends each bin to one of
//! two detectors. Fiber attenuation in the long arm of stage `k` is modeled
//! by one loss tap of transmission `f^(2^(k-1))` per delayed pulse, which
//! adds 1 + 2 + 4 = 7 loss modes to the 16 detection modes.
//!
//! Mode numbering:
//!
//! | modes  | role                                   |
//! |--------|----------------------------------------|
//! | 0..8   | detector A, time bins 0..7             |
//! | 8..16  | detector B, time bins 0..7             |
//! | 16     | stage 1 loss, bin 1                    |
//! | 17..19 | stage 2 loss, bins 2, 3                |
//! | 19..23 | stage 3 loss, bins 4..7                |
//!
//! Time bin `b` has traversed `b` units of loop length (binary weights 1, 2,
//! 4), so bins sorted by arrival time carry loop exponent `b`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Result};
use crate::fock::{FockState, ModeCount, SplitSpec};

pub const TIME_BINS: usize = 8;
pub const DETECTION_MODES: usize = 16;
pub const LOSS_MODES: usize = 7;
pub const TOTAL_MODES: usize = DETECTION_MODES + LOSS_MODES;
pub const STAGES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Detector {
    A,
    B,
}

impl Detector {
    pub const BOTH: [Detector; 2] = [Detector::A, Detector::B];

    pub fn index(self) -> usize {
        match self {
            Detector::A => 0,
            Detector::B => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ModeRole {
    Detection {
        detector: Detector,
        time_bin: usize,
        loop_exponent: u32,
    },
    Loss {
        stage: usize,
        time_bin: usize,
        /// Loop lengths (in units of L) covered by this tap.
        tap_exponent: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub index: usize,
    #[serde(flatten)]
    pub role: ModeRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmdLayout {
    pub modes: Vec<ModeEntry>,
}

impl TmdLayout {
    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    pub fn detection_mode(&self, detector: Detector, time_bin: usize) -> usize {
        assert!(time_bin < TIME_BINS, "time bin {time_bin} out of range");
        detector.index() * TIME_BINS + time_bin
    }

    pub fn detection_modes(&self) -> Vec<usize> {
        self.modes
            .iter()
            .filter(|e| matches!(e.role, ModeRole::Detection { .. }))
            .map(|e| e.index)
            .collect()
    }

    pub fn loss_modes(&self) -> Vec<usize> {
        self.modes
            .iter()
            .filter(|e| matches!(e.role, ModeRole::Loss { .. }))
            .map(|e| e.index)
            .collect()
    }

    /// Loss mode fed by the delayed pulse entering `time_bin` at `stage` (1-based).
    pub fn loss_mode(&self, stage: usize, time_bin: usize) -> Option<usize> {
        self.modes.iter().find_map(|e| match e.role {
            ModeRole::Loss { stage: s, time_bin: b, .. } if s == stage && b == time_bin => {
                Some(e.index)
            }
            _ => None,
        })
    }

    pub fn loop_exponent(&self, time_bin: usize) -> u32 {
        time_bin as u32
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub fn build_layout() -> TmdLayout {
    let mut modes = Vec::with_capacity(TOTAL_MODES);
    for detector in Detector::BOTH {
        for time_bin in 0..TIME_BINS {
            modes.push(ModeEntry {
                index: modes.len(),
                role: ModeRole::Detection {
                    detector,
                    time_bin,
                    loop_exponent: time_bin as u32,
                },
            });
        }
    }
    for stage in 1..=STAGES {
        let width = 1usize << (stage - 1);
        for source in 0..width {
            modes.push(ModeEntry {
                index: modes.len(),
                role: ModeRole::Loss {
                    stage,
                    time_bin: source + width,
                    tap_exponent: width as u32,
                },
            });
        }
    }
    TmdLayout { modes }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// Power transmission of one loop length L.
    pub f: f64,
    /// Input photon number.
    pub n: usize,
}

impl NetworkConfig {
    pub fn new(f: f64, n: usize) -> Result<Self> {
        check_probability("f", f)?;
        Ok(Self { f, n })
    }
}

/// Propagates an `n`-photon number state through the full device.
pub fn propagate(config: &NetworkConfig) -> Result<FockState> {
    propagate_with_layout(&build_layout(), config)
}

pub fn propagate_with_layout(layout: &TmdLayout, config: &NetworkConfig) -> Result<FockState> {
    check_probability("f", config.f)?;
    let modes = ModeCount::new(layout.mode_count())?;
    let a = |bin| layout.detection_mode(Detector::A, bin);
    // Pulses travel in the detector-A slot of their current bin until the
    // final coupler.
    let mut state = FockState::number_state(config.n, modes, a(0))?;
    for stage in 1..=STAGES {
        let width = 1usize << (stage - 1);
        let transmission = config.f.powi(width as i32);
        for bin in 0..width {
            let delayed = bin + width;
            state = state.apply_split(&SplitSpec {
                in_mode: a(bin),
                out_a: a(bin),
                out_b: a(delayed),
                t: 0.5,
            })?;
            let loss = layout
                .loss_mode(stage, delayed)
                .expect("layout has a loss mode for every delayed pulse");
            state = state.apply_loss(a(delayed), loss, transmission)?;
        }
    }
    for bin in 0..TIME_BINS {
        state = state.apply_split(&SplitSpec {
            in_mode: a(bin),
            out_a: a(bin),
            out_b: layout.detection_mode(Detector::B, bin),
            t: 0.5,
        })?;
    }
    Ok(state)
}

/// Probability that a single photon reaches each `(detector, time_bin)`:
/// `f^b / 16` for a bin of loop exponent `b`.
pub fn per_bin_reach_probability(
    layout: &TmdLayout,
    f: f64,
) -> Result<BTreeMap<(Detector, usize), f64>> {
    check_probability("f", f)?;
    let mut out = BTreeMap::new();
    for entry in &layout.modes {
        if let ModeRole::Detection {
            detector,
            time_bin,
            loop_exponent,
        } = entry.role
        {
            out.insert(
                (detector, time_bin),
                f.powi(loop_exponent as i32) / DETECTION_MODES as f64,
            );
        }
    }
    Ok(out)
}

/// Reach probabilities indexed by detection mode (0..16).
pub fn reach_by_mode(f: f64) -> Result<[f64; DETECTION_MODES]> {
    let layout = build_layout();
    let map = per_bin_reach_probability(&layout, f)?;
    let mut out = [0.0; DETECTION_MODES];
    for ((detector, bin), p) in map {
        out[layout.detection_mode(detector, bin)] = p;
    }
    Ok(out)
}

/// Mean single-photon transmission over all 16 bins, `(1 - f^8) / (8 (1 - f))`.
pub fn average_transmission(f: f64) -> f64 {
    if f == 1.0 {
        1.0
    } else {
        (1.0 - f.powi(TIME_BINS as i32)) / (TIME_BINS as f64 * (1.0 - f))
    }
}
