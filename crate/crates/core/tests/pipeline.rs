use proptest::prelude::*;
use tmd::detection::{self, DetectorModel, Method};
use tmd::network::{self, NetworkConfig};
use tmd::oracle;

fn det(eta: f64) -> DetectorModel {
    DetectorModel::new(eta).unwrap()
}

#[test]
fn lossless_zero_clicks_and_support() {
    for n in 0..=5usize {
        for eta in [0.2, 0.43, 0.7, 1.0] {
            let d = detection::pmn(n, 1.0, &det(eta)).unwrap();
            assert!((d.get(0) - oracle::p_zero(n as u32, eta)).abs() < 1e-12);
            assert!((d.total() - 1.0).abs() < 1e-10);
            assert!(d.probs()[n + 1..].iter().all(|&p| p == 0.0));
        }
    }
}

#[test]
fn two_photon_figures() {
    let d = detection::pmn(2, 1.0, &det(0.7)).unwrap();
    assert!((d.get(2) - 0.459375).abs() < 1e-12);
    assert!((d.get(0) - 0.09).abs() < 1e-12);
    let d = detection::pmn(2, 1.0, &det(0.2)).unwrap();
    assert!((d.get(2) - 0.0375).abs() < 1e-12);
}

#[test]
fn p_correct_non_increasing_as_loss_grows() {
    let fs = [1.0, 0.99, 0.97, 0.9, 0.7, 0.4, 0.0];
    for n in 1..=4 {
        for eta in [0.43, 0.7] {
            let values: Vec<f64> = fs
                .iter()
                .map(|&f| detection::p_correct(n, f, &det(eta)).unwrap())
                .collect();
            for w in values.windows(2) {
                assert!(w[1] <= w[0] + 1e-15, "n={n} eta={eta}: {values:?}");
            }
        }
    }
}

#[test]
fn single_photon_loss_occupancy() {
    let layout = network::build_layout();
    for f in [1.0, 0.97, 0.8] {
        let state = network::propagate(&NetworkConfig::new(f, 1).unwrap()).unwrap();
        let reach: f64 = network::per_bin_reach_probability(&layout, f)
            .unwrap()
            .values()
            .sum();
        let in_loss: f64 = state
            .probabilities()
            .filter(|(occ, _)| layout.loss_modes().iter().any(|&m| occ[m] > 0))
            .map(|(_, p)| p)
            .sum();
        assert!((in_loss - (1.0 - reach)).abs() < 1e-12, "f={f}");
    }
}

#[test]
fn propagated_state_invariants() {
    for (f, n) in [(1.0, 4), (0.97, 4), (0.5, 3)] {
        let state = network::propagate(&NetworkConfig::new(f, n).unwrap()).unwrap();
        assert!((state.norm_squared() - 1.0).abs() < 1e-12);
        assert!(state.len() as f64 <= tmd::fock::term_count_bound(n, 23));
        for term in state.terms() {
            assert_eq!(term.occupations.iter().map(|&q| q as usize).sum::<usize>(), n);
        }
    }
}

#[test]
fn large_photon_numbers_use_routing() {
    // 16!/(16^n (16-n)!) eta^n
    let d = det(0.9);
    for n in 7..=16 {
        assert_eq!(detection::preferred_method(n), Method::Routing);
        let p = detection::p_correct(n, 1.0, &d).unwrap();
        let analytic = oracle::p_all(16, n as u32, 0.9);
        assert!((p - analytic).abs() <= 1e-12 * analytic.max(1e-3), "n={n}");
    }
    let full = detection::pmn_with(Method::Routing, 10, 1.0, &d).unwrap();
    for m in 0..=10u32 {
        let rec = oracle::recursion_pmn(16, 0.9, m, 10);
        assert!((full.get(m as usize) - rec).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quantum_matches_closed_form_when_lossless(n in 0usize..=4, eta in 0.0f64..=1.0) {
        let d = detection::pmn(n, 1.0, &det(eta)).unwrap();
        for m in 0..=n as u32 {
            prop_assert!((d.get(m as usize) - oracle::closed_form_pmn(16, eta, m, n as u32)).abs() < 1e-10);
        }
    }

    #[test]
    fn quantum_matches_routing_with_loss(n in 0usize..=4, f in 0.0f64..=1.0, eta in 0.0f64..=1.0) {
        let q = detection::pmn_with(Method::Quantum, n, f, &det(eta)).unwrap();
        let r = detection::pmn_with(Method::Routing, n, f, &det(eta)).unwrap();
        for m in 0..=16 {
            prop_assert!((q.get(m) - r.get(m)).abs() < 1e-12);
        }
    }
}
