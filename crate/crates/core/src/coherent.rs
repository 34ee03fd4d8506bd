//! Click statistics for coherent-state (laser) input.
//!
//! With all bins assumed to suffer the same loss, each bin sees a Poisson
//! photon number of mean `mu' = eta l mu0 / N`, fails to click with
//! probability `exp(-mu')`, and the number of clicks is binomial.

use serde::{Deserialize, Serialize};

use crate::detection::ClickDistribution;
use crate::error::{check_probability, Error, Result};
use crate::math::binomial;
use crate::BINS;

/// `mu^n e^-mu / n!`.
pub fn poisson_pmf(mu: f64, n: u64) -> f64 {
    if mu == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let ln_factorial: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    (n as f64 * mu.ln() - mu - ln_factorial).exp()
}

/// Per-bin mean `eta l mu0 / bins`.
pub fn effective_mu(eta: f64, l: f64, mu0: f64, bins: usize) -> f64 {
    eta * l * mu0 / bins as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    pub mu0: f64,
    /// Average system transmission.
    pub l: f64,
    pub eta: f64,
    pub bins: usize,
}

impl CoherentParams {
    pub fn new(mu0: f64, l: f64, eta: f64) -> Result<Self> {
        Self::with_bins(mu0, l, eta, BINS)
    }

    pub fn with_bins(mu0: f64, l: f64, eta: f64, bins: usize) -> Result<Self> {
        if !(mu0 >= 0.0 && mu0.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu0 must be >= 0, got {mu0}")));
        }
        if bins == 0 {
            return Err(Error::InvalidParameter("at least one bin required".into()));
        }
        check_probability("l", l)?;
        check_probability("eta", eta)?;
        Ok(Self { mu0, l, eta, bins })
    }

    pub fn mu_prime(&self) -> f64 {
        effective_mu(self.eta, self.l, self.mu0, self.bins)
    }

    pub fn eta_l_mu0(&self) -> f64 {
        self.eta * self.l * self.mu0
    }

    pub fn click_model(&self) -> CoherentClickModel {
        CoherentClickModel::new(self.mu_prime(), self.bins).expect("mu' is validated")
    }
}

/// Binomial click model with per-bin no-click probability `p0 = exp(-mu')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentClickModel {
    pub p0: f64,
    pub pa: f64,
    pub bins: usize,
}

impl CoherentClickModel {
    pub fn new(mu_prime: f64, bins: usize) -> Result<Self> {
        if !(mu_prime >= 0.0 && mu_prime.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mu' must be a finite value >= 0, got {mu_prime}"
            )));
        }
        let p0 = (-mu_prime).exp();
        Ok(Self {
            p0,
            pa: -(-mu_prime).exp_m1(),
            bins,
        })
    }

    /// From the product `eta l mu0` over the default 16 bins.
    pub fn from_eta_l_mu0(eta_l_mu0: f64) -> Result<Self> {
        Self::new(eta_l_mu0 / BINS as f64, BINS)
    }

    pub fn mu_prime(&self) -> f64 {
        -self.p0.ln()
    }

    pub fn click_pmf(&self, m: usize) -> Result<f64> {
        if m > self.bins {
            return Err(Error::InvalidParameter(format!(
                "m = {m} exceeds the {} available bins",
                self.bins
            )));
        }
        let n = self.bins as i32;
        let m = m as i32;
        Ok(binomial(self.bins as u64, m as u64) * self.p0.powi(n - m) * self.pa.powi(m))
    }

    pub fn distribution(&self) -> ClickDistribution {
        let probs = (0..=self.bins)
            .map(|m| self.click_pmf(m).expect("m within bins"))
            .collect();
        ClickDistribution::from_probs(probs).expect("binomial masses are probabilities")
    }

    pub fn mean_clicks(&self) -> f64 {
        self.bins as f64 * self.pa
    }
}

/// Click distribution of the binomial model at a given `eta l mu0`.
pub fn click_distribution(eta_l_mu0: f64) -> Result<ClickDistribution> {
    Ok(CoherentClickModel::from_eta_l_mu0(eta_l_mu0)?.distribution())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn poisson_edge_cases() {
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 3), 0.0);
        let total: f64 = (0..=60).map(|n| poisson_pmf(2.5, n)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((poisson_pmf(2.5, 2) - 2.5f64.powi(2) * (-2.5f64).exp() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn effective_mean() {
        assert_eq!(effective_mu(1.0, 1.0, 16.0, 16), 1.0);
        assert_eq!(effective_mu(0.7, 1.0, 0.0, 16), 0.0);
        let p = CoherentParams::new(10.0, 0.55, 0.7).unwrap();
        assert!((p.mu_prime() - 0.7 * 0.55 * 10.0 / 16.0).abs() < 1e-15);
        assert!(CoherentParams::new(-1.0, 0.5, 0.5).is_err());
        assert!(CoherentParams::new(1.0, 1.5, 0.5).is_err());
    }

    #[test]
    fn vacuum_model() {
        let model = CoherentClickModel::new(0.0, 16).unwrap();
        assert_eq!(model.click_pmf(0).unwrap(), 1.0);
        assert_eq!(model.click_pmf(1).unwrap(), 0.0);
    }

    #[test]
    fn published_bright_fit_value() {
        let model = CoherentClickModel::from_eta_l_mu0(13.1).unwrap();
        assert!((model.mu_prime() - 0.81875).abs() < 1e-14);
        assert!((model.p0 - 0.4410).abs() < 5e-5);
        assert!((model.mean_clicks() - 8.94).abs() < 5e-3);
        assert!(model.click_pmf(17).is_err());
    }

    #[test]
    fn weak_pulse_concentrates_at_low_counts() {
        let d = click_distribution(0.57).unwrap();
        let low: f64 = d.probs()[..3].iter().sum();
        assert!(low > 0.98);
        assert!(d.get(0) > d.get(1) && d.get(1) > d.get(2));
    }

    #[test]
    fn small_mean_ratio() {
        let mu = 1e-4;
        let model = CoherentClickModel::new(mu, 16).unwrap();
        let ratio = model.click_pmf(1).unwrap() / model.click_pmf(0).unwrap();
        assert!((ratio - 16.0 * mu).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn normalized_with_binomial_mean(mu in 0.0f64..8.0) {
            let model = CoherentClickModel::new(mu, 16).unwrap();
            let d = model.distribution();
            prop_assert!((d.total() - 1.0).abs() < 1e-12);
            prop_assert!((d.mean() - 16.0 * (1.0 - (-mu).exp())).abs() < 1e-12);
        }
    }
}
