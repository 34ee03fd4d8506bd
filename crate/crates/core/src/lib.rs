//! Simulation of a fiber-loop time-multiplexed detector (TMD).
//!
//! A single optical pulse is split by a cascade of 50/50 couplers and delay
//! loops into 16 weaker pulses (8 time bins on each of two binary detectors).
//! The crate provides:
//!
//! * [`fock`]: exact propagation of multimode number states through two-mode
//!   splitting transforms,
//! * [`network`]: the concrete 23-mode detector topology with fiber loss taps,
//! * [`detection`]: conversion of a propagated state into the click
//!   distribution `P(m|n)`,
//! * [`oracle`]: the classical balanced N-port model (boundary formulas,
//!   recursion, closed form, brute-force enumeration),
//! * [`coherent`]: Poisson / binomial click statistics for laser input,
//! * [`fit`]: profiled least-squares fitting of click histograms,
//! * [`montecarlo`]: seeded trajectory sampling and detector dead time,
//! * [`io`] and [`cli`]: the CSV / JSON formats and the `tmd` command line.
//!
//! All coupler amplitudes are real and non-negative
//! (`a†_in -> sqrt(t) a†_a + sqrt(1-t) a†_b`). The delay loops have strongly
//! unmatched path lengths, so no two routes ever interfere and a relative
//! phase convention cannot change any probability computed here.

pub mod cli;
pub mod coherent;
pub mod detection;
pub mod fit;
pub mod fock;
pub mod io;
pub mod montecarlo;
pub mod network;
pub mod oracle;

mod error;
mod math;

pub use error::{Error, Result};

/// Number of detection bins in the standard device (2 detectors x 8 bins).
pub const BINS: usize = 16;
