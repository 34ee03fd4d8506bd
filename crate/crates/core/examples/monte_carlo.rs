//! Seeded Monte Carlo click histograms compared with the exact distributions.
//!
//!     cargo run --release --example monte_carlo

use tmd::coherent;
use tmd::detection::{self, DetectorModel};
use tmd::montecarlo::{self, CoherentLoss, McConfig, Source};
use tmd::network;

fn main() -> tmd::Result<()> {
    let shots = 200_000;
    let fock = montecarlo::run(&McConfig {
        shots,
        seed: 1,
        source: Source::Fock { n: 3, f: 0.97, eta: 0.43 },
        timing: None,
    })?;
    let exact = detection::pmn(3, 0.97, &DetectorModel::new(0.43)?)?;
    println!("three photons, f = 0.97, eta = 0.43 ({shots} shots, seed {}):", fock.seed_used);
    for m in 0..=3 {
        println!("  m = {m}  mc {:.5}  exact {:.5}", fock.empirical_probs[m], exact.get(m));
    }

    // Equal loss at the network's mean transmission versus the actual
    // bin-dependent loss, both with the same mean eta*l*mu0.
    let (eta, f, product) = (0.7, 0.97, 2.65);
    let l = network::average_transmission(f);
    let mu0 = product / (eta * l);
    let coherent = |loss| {
        montecarlo::run(&McConfig { shots, seed: 1, source: Source::Coherent { mu0, eta, loss }, timing: None })
    };
    let equal = coherent(CoherentLoss::Equal { l })?;
    let per_bin = coherent(CoherentLoss::PerBin { f })?;
    let model = coherent::click_distribution(product)?;
    println!("\ncoherent light, eta*l*mu0 = {product}:");
    println!("  m   binomial  equal-loss mc  per-bin-loss mc");
    for m in 0..=8 {
        println!(
            "  {m:2}  {:.5}   {:.5}        {:.5}",
            model.get(m),
            equal.empirical_probs[m],
            per_bin.empirical_probs[m]
        );
    }
    Ok(())
}
