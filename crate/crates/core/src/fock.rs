//! Sparse multimode number states and exact two-mode splitting.
//!
//! A [`FockState`] is a superposition of occupation-number basis states with
//! real amplitudes, stored in an ordered map keyed by the occupation tuple.
//! Every operation returns a new state; nothing is mutated in place.
//!
//! Coupler convention: the creation operator of the input mode is replaced by
//! `sqrt(t) a†_a + sqrt(1 - t) a†_b`. All amplitudes therefore stay real and
//! non-negative. This drops the usual `i` on the reflected arm, which is safe
//! only because the networks built here are trees with unmatched delays, so
//! distinct routes never recombine into the same basis state.

use std::collections::BTreeMap;

use crate::error::{check_probability, Error, Result};
use crate::math::binomial;

/// Largest number of modes a state may carry.
pub const MAX_MODES: usize = 23;

/// Occupation numbers, one entry per mode.
pub type Occupation = Vec<u8>;

/// Number of modes in play for a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeCount(usize);

impl ModeCount {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 || modes > MAX_MODES {
            return Err(Error::InvalidParameter(format!(
                "mode count must be in 1..={MAX_MODES}, got {modes}"
            )));
        }
        Ok(Self(modes))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// One basis state with its amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTerm {
    pub occupations: Occupation,
    pub amplitude: f64,
}

/// A two-mode splitting transform.
///
/// Photons in `in_mode` are sent to `out_a` with probability `t` and to
/// `out_b` otherwise. `out_b` must be empty. `out_a` must be empty as well,
/// unless it equals `in_mode`, which models a loss tap that keeps the
/// transmitted light in place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub in_mode: usize,
    pub out_a: usize,
    pub out_b: usize,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: ModeCount,
    photons: usize,
    terms: BTreeMap<Occupation, f64>,
}

impl FockState {
    /// `n` photons in `mode`, vacuum elsewhere.
    pub fn number_state(n: usize, modes: ModeCount, mode: usize) -> Result<Self> {
        if mode >= modes.get() {
            return Err(Error::ModeOutOfRange {
                index: mode,
                modes: modes.get(),
            });
        }
        let q = u8::try_from(n).map_err(|_| {
            Error::InvalidParameter(format!("at most {} photons per state, got {n}", u8::MAX))
        })?;
        let mut occupations = vec![0u8; modes.get()];
        occupations[mode] = q;
        let mut terms = BTreeMap::new();
        terms.insert(occupations, 1.0);
        Ok(Self {
            modes,
            photons: n,
            terms,
        })
    }

    pub fn vacuum(modes: ModeCount) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u8; modes.get()], 1.0);
        Self {
            modes,
            photons: 0,
            terms,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes.get()
    }

    pub fn photon_number(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending occupation order.
    pub fn terms(&self) -> impl Iterator<Item = FockTerm> + '_ {
        self.terms.iter().map(|(occ, &amp)| FockTerm {
            occupations: occ.clone(),
            amplitude: amp,
        })
    }

    /// `(occupations, |amplitude|^2)` pairs in ascending occupation order.
    pub fn probabilities(&self) -> impl Iterator<Item = (&[u8], f64)> + '_ {
        self.terms.iter().map(|(occ, &amp)| (occ.as_slice(), amp * amp))
    }

    pub fn amplitude(&self, occupations: &[u8]) -> f64 {
        self.terms.get(occupations).copied().unwrap_or(0.0)
    }

    /// Sum of squared amplitudes.
    pub fn norm_squared(&self) -> f64 {
        let mut acc = crate::math::CompensatedSum::default();
        for amp in self.terms.values() {
            acc.add(amp * amp);
        }
        acc.value()
    }

    /// Whether `mode` holds no photons in any term.
    pub fn is_mode_empty(&self, mode: usize) -> bool {
        self.terms.keys().all(|occ| occ[mode] == 0)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.modes() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index: mode,
                modes: self.modes(),
            })
        }
    }

    pub fn apply_split(&self, spec: &SplitSpec) -> Result<Self> {
        self.check_mode(spec.in_mode)?;
        self.check_mode(spec.out_a)?;
        self.check_mode(spec.out_b)?;
        check_probability("t", spec.t)?;
        if spec.out_a == spec.out_b {
            return Err(Error::SameOutputs(spec.out_a));
        }
        if spec.out_b == spec.in_mode {
            return Err(Error::InvalidParameter(
                "the reflected output must differ from the input mode".into(),
            ));
        }
        if !self.is_mode_empty(spec.out_b) {
            return Err(Error::OccupiedOutput(spec.out_b));
        }
        if spec.out_a != spec.in_mode && !self.is_mode_empty(spec.out_a) {
            return Err(Error::OccupiedOutput(spec.out_a));
        }

        let kept = spec.t;
        let diverted = 1.0 - spec.t;
        let mut terms = BTreeMap::new();
        for (occ, &amp) in &self.terms {
            let q = occ[spec.in_mode];
            if q == 0 {
                *terms.entry(occ.clone()).or_insert(0.0) += amp;
                continue;
            }
            for k in 0..=q {
                let weight = binomial(q as u64, k as u64)
                    * kept.powi(k as i32)
                    * diverted.powi((q - k) as i32);
                if weight == 0.0 {
                    continue;
                }
                let mut next = occ.clone();
                next[spec.in_mode] = 0;
                next[spec.out_a] = k;
                next[spec.out_b] = q - k;
                *terms.entry(next).or_insert(0.0) += amp * weight.sqrt();
            }
        }
        Ok(Self {
            modes: self.modes,
            photons: self.photons,
            terms,
        })
    }

    /// Loss tap: keep photons in `mode` with probability `transmission`,
    /// move the rest to the empty `loss_mode`.
    pub fn apply_loss(&self, mode: usize, loss_mode: usize, transmission: f64) -> Result<Self> {
        self.apply_split(&SplitSpec {
            in_mode: mode,
            out_a: mode,
            out_b: loss_mode,
            t: transmission,
        })
    }

    /// Joint occupation probabilities of the listed modes, with every other
    /// mode summed out. Keys list occupations in the order of `modes`.
    pub fn marginal_probabilities(&self, modes: &[usize]) -> Result<BTreeMap<Occupation, f64>> {
        for &m in modes {
            self.check_mode(m)?;
        }
        let mut out: BTreeMap<Occupation, f64> = BTreeMap::new();
        for (occ, &amp) in &self.terms {
            let key: Occupation = modes.iter().map(|&m| occ[m]).collect();
            *out.entry(key).or_insert(0.0) += amp * amp;
        }
        Ok(out)
    }
}

/// Upper bound on the number of basis states of `n` photons in `modes` modes,
/// `C(n + modes - 1, modes - 1)`.
pub fn term_count_bound(n: usize, modes: usize) -> f64 {
    binomial((n + modes - 1) as u64, (modes - 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(k: usize) -> ModeCount {
        ModeCount::new(k).unwrap()
    }

    #[test]
    fn number_state_construction() {
        let vac = FockState::number_state(0, m(23), 0).unwrap();
        assert_eq!(vac.len(), 1);
        assert_eq!(vac.amplitude(&[0; 23]), 1.0);

        let two = FockState::number_state(2, m(23), 0).unwrap();
        let mut occ = vec![0u8; 23];
        occ[0] = 2;
        assert_eq!(two.amplitude(&occ), 1.0);
        assert_eq!(two.len(), 1);

        let five = FockState::number_state(5, m(23), 0).unwrap();
        assert_eq!(five.norm_squared(), 1.0);
        assert_eq!(five.photon_number(), 5);
    }

    #[test]
    fn number_state_rejects_bad_mode() {
        assert!(matches!(
            FockState::number_state(1, m(23), 23),
            Err(Error::ModeOutOfRange { index: 23, modes: 23 })
        ));
        assert!(ModeCount::new(24).is_err());
        assert!(ModeCount::new(0).is_err());
    }

    #[test]
    fn single_photon_balanced_split() {
        let s = FockState::number_state(1, m(3), 0).unwrap();
        let out = s
            .apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 0.5 })
            .unwrap();
        let r = 0.5f64.sqrt();
        assert!((out.amplitude(&[0, 1, 0]) - r).abs() < 1e-15);
        assert!((out.amplitude(&[0, 0, 1]) - r).abs() < 1e-15);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn vacuum_is_unchanged_by_split() {
        let s = FockState::vacuum(m(3));
        let out = s
            .apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 0.3 })
            .unwrap();
        assert_eq!(out, s);
    }

    // Routing oracle: each of the two photons independently picks an arm
    // with probability 1/2, giving multinomial weights 1/4, 1/2, 1/4.
    #[test]
    fn two_photon_balanced_split_matches_routing() {
        let s = FockState::number_state(2, m(3), 0).unwrap();
        let out = s
            .apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 0.5 })
            .unwrap();
        let p = out.marginal_probabilities(&[1, 2]).unwrap();
        let mut routed: BTreeMap<Occupation, f64> = BTreeMap::new();
        for first in 0..2 {
            for second in 0..2 {
                let mut occ = vec![0u8; 2];
                occ[first] += 1;
                occ[second] += 1;
                *routed.entry(occ).or_insert(0.0) += 0.25;
            }
        }
        assert_eq!(routed.len(), 3);
        for (k, v) in &routed {
            assert!((p[k] - v).abs() < 1e-15, "{k:?}");
        }
        assert!((p[&vec![2, 0]] - 0.25).abs() < 1e-15);
        assert!((p[&vec![1, 1]] - 0.5).abs() < 1e-15);
        assert!((p[&vec![0, 2]] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn loss_limits() {
        let s = FockState::number_state(3, m(2), 0).unwrap();
        assert_eq!(s.apply_loss(0, 1, 1.0).unwrap(), s);

        let opaque = s.apply_loss(0, 1, 0.0).unwrap();
        assert_eq!(opaque.len(), 1);
        assert_eq!(opaque.amplitude(&[0, 3]), 1.0);
    }

    #[test]
    fn single_photon_loss_probability() {
        let s = FockState::number_state(1, m(2), 0).unwrap();
        let out = s.apply_loss(0, 1, 0.97).unwrap();
        let p = out.marginal_probabilities(&[0, 1]).unwrap();
        assert!((p[&vec![1, 0]] - 0.97).abs() < 1e-15);
        assert!((p[&vec![0, 1]] - 0.03).abs() < 1e-15);
    }

    #[test]
    fn split_error_paths() {
        let s = FockState::number_state(1, m(3), 0).unwrap();
        let bad_t = SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 1.5 };
        assert!(matches!(s.apply_split(&bad_t), Err(Error::ProbabilityOutOfRange { .. })));
        let same = SplitSpec { in_mode: 0, out_a: 1, out_b: 1, t: 0.5 };
        assert!(matches!(s.apply_split(&same), Err(Error::SameOutputs(1))));
        let occupied = SplitSpec { in_mode: 1, out_a: 0, out_b: 2, t: 0.5 };
        assert!(matches!(s.apply_split(&occupied), Err(Error::OccupiedOutput(0))));
        assert!(matches!(s.apply_loss(2, 0, 0.5), Err(Error::OccupiedOutput(0))));
        assert!(matches!(s.apply_loss(0, 5, 0.5), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn marginals() {
        let vac = FockState::vacuum(m(5));
        let p = vac.marginal_probabilities(&[1, 3]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[&vec![0, 0]], 1.0);

        let s = FockState::number_state(2, m(3), 0)
            .unwrap()
            .apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 0.3 })
            .unwrap();
        let full = s.marginal_probabilities(&[0, 1, 2]).unwrap();
        for (occ, prob) in s.probabilities() {
            assert_eq!(full[occ], prob);
        }
        assert!(s.marginal_probabilities(&[3]).is_err());
    }

    #[test]
    fn full_transmission_is_identity_on_probabilities() {
        let s = FockState::number_state(4, m(3), 0).unwrap();
        let out = s
            .apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 1.0 })
            .unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.amplitude(&[0, 4, 0]), 1.0);
    }

    // Balanced 16-way tree built from four layers of splits.
    #[test]
    fn single_photon_tree_is_uniform() {
        let mut s = FockState::number_state(1, m(16), 0).unwrap();
        for layer in 0..4 {
            let width = 1usize << layer;
            for i in 0..width {
                s = s
                    .apply_split(&SplitSpec { in_mode: i, out_a: i, out_b: i + width, t: 0.5 })
                    .unwrap();
            }
        }
        let modes: Vec<usize> = (0..16).collect();
        let p = s.marginal_probabilities(&modes).unwrap();
        assert_eq!(p.len(), 16);
        for v in p.values() {
            assert!((v - 1.0 / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn term_bound_values() {
        assert_eq!(term_count_bound(2, 3), 6.0);
        assert_eq!(term_count_bound(0, 23), 1.0);
        assert_eq!(term_count_bound(5, 23), 80730.0);
    }

    proptest! {
        #[test]
        fn splits_preserve_norm_and_photon_number(
            n in 0usize..6,
            ts in proptest::collection::vec(0.0f64..=1.0, 1..6),
        ) {
            let modes = ts.len() + 1;
            let mut s = FockState::number_state(n, m(modes), 0).unwrap();
            // chain: each split sends part of mode i into the empty mode i+1
            for (i, &t) in ts.iter().enumerate() {
                s = s.apply_loss(i, i + 1, t).unwrap();
                prop_assert!((s.norm_squared() - 1.0).abs() < 1e-12);
                prop_assert!(s.len() as f64 <= term_count_bound(n, modes));
                for term in s.terms() {
                    let total: usize = term.occupations.iter().map(|&q| q as usize).sum();
                    prop_assert_eq!(total, n);
                    prop_assert!(term.amplitude >= 0.0);
                }
            }
        }
    }
}
