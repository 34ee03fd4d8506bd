use proptest::prelude::*;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmd::coherent::{click_distribution, CoherentClickModel};
use tmd::fit::{self, ClickHistogram, FitOptions};
use tmd::BINS;

fn expected_counts(mu_prime: f64, total: f64) -> Vec<f64> {
    let model = CoherentClickModel::new(mu_prime, BINS).unwrap();
    (0..=BINS).map(|m| total * model.click_pmf(m).unwrap()).collect()
}

#[test]
fn noiseless_round_trip_at_published_values() {
    for product in [13.1, 2.65, 0.57] {
        let counts = expected_counts(product / 16.0, 1e6);
        let r = fit::fit_counts(&counts, &FitOptions::default()).unwrap();
        assert!((r.eta_l_mu0 / product - 1.0).abs() < 1e-6, "{product}: {r:?}");
        assert_eq!(r.eta_l_mu0, 16.0 * r.mu_prime);
    }
}

#[test]
fn noisy_histogram_within_five_percent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2650);
    let dist = click_distribution(2.65).unwrap();
    let sampler = WeightedIndex::new(dist.probs()).unwrap();
    let mut hist = ClickHistogram::zeros();
    for _ in 0..100_000 {
        hist.record(sampler.sample(&mut rng));
    }
    let r = fit::fit_histogram(&hist).unwrap();
    assert!((r.eta_l_mu0 / 2.65 - 1.0).abs() < 0.05, "{r:?}");
    assert!((r.normalization / 1e5 - 1.0).abs() < 0.05);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scale_equivariance(mu in 0.02f64..2.0, scale in 0.5f64..50.0) {
        let base = expected_counts(mu, 1e4);
        let scaled: Vec<f64> = base.iter().map(|c| c * scale).collect();
        let a = fit::fit_counts(&base, &FitOptions::default()).unwrap();
        let b = fit::fit_counts(&scaled, &FitOptions::default()).unwrap();
        prop_assert!((b.mu_prime / a.mu_prime - 1.0).abs() < 1e-6);
        prop_assert!((b.normalization / (scale * a.normalization) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn refined_objective_beats_grid(mu in 0.01f64..3.0, noise in proptest::collection::vec(0u64..50, 17)) {
        let counts: Vec<u64> = expected_counts(mu, 1e4)
            .iter()
            .zip(&noise)
            .map(|(c, n)| c.round() as u64 + n)
            .collect();
        let hist = ClickHistogram::new(counts).unwrap();
        let r = fit::fit_histogram(&hist).unwrap();
        prop_assert!(r.rss >= 0.0);
        for g in FitOptions::default().grid() {
            prop_assert!(r.rss <= fit::profile(&hist, g).1);
        }
    }
}
