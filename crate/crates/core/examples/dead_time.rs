//! Dead-time filtering of click trains for two bin spacings.
//!
//!     cargo run --release --example dead_time

use tmd::montecarlo::{self, McConfig, Source, TimingConfig};

fn main() -> tmd::Result<()> {
    let pattern = 0b1011_0110u8;
    for timing in [TimingConfig::apparatus(), TimingConfig::new(30.0, 60.0, 0.05)?] {
        let (registered, lost) = montecarlo::register_clicks(pattern, &timing);
        println!(
            "delta_t = {:5} ns, tau = {} ns: pattern {pattern:08b} -> {registered} registered, {lost} lost",
            timing.delta_t, timing.tau
        );
    }

    for timing in [TimingConfig::apparatus(), TimingConfig::new(30.0, 60.0, 0.05)?] {
        let result = montecarlo::run(&McConfig {
            shots: 100_000,
            seed: 5,
            source: Source::Fock { n: 6, f: 1.0, eta: 1.0 },
            timing: Some(timing),
        })?;
        println!(
            "six photons, delta_t = {:5} ns: mean registered clicks {:.3}, lost {}",
            timing.delta_t,
            result.histogram.counts().iter().enumerate().map(|(m, &c)| m as f64 * c as f64).sum::<f64>()
                / result.histogram.total() as f64,
            result.lost_clicks
        );
    }
    Ok(())
}
