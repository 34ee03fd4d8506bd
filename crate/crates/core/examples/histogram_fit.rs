//! Recovers eta*l*mu0 from a sampled click histogram by least squares.
//!
//!     cargo run --example histogram_fit

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmd::coherent;
use tmd::fit::{self, ClickHistogram};

fn main() -> tmd::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for product in [13.1, 2.65, 0.57] {
        let dist = coherent::click_distribution(product)?;
        let sampler = WeightedIndex::new(dist.probs()).expect("valid weights");
        let mut hist = ClickHistogram::zeros();
        for _ in 0..100_000 {
            hist.record(sampler.sample(&mut rng));
        }
        let result = fit::fit_histogram(&hist)?;
        println!(
            "true {product:5}  fitted {:.4}  (A = {:.0}, rss = {:.1}, {} iterations)",
            result.eta_l_mu0, result.normalization, result.rss, result.iterations
        );
    }
    Ok(())
}
