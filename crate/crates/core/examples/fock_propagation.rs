//! Sends a two-photon number state through a single 50:50 split and then
//! through the full 23-mode network, printing the resulting terms.
//!
//!     cargo run --example fock_propagation

use tmd::fock::{FockState, ModeCount, SplitSpec};
use tmd::network::{self, NetworkConfig};

fn main() -> tmd::Result<()> {
    let state = FockState::number_state(2, ModeCount::new(3)?, 0)?;
    let split = state.apply_split(&SplitSpec { in_mode: 0, out_a: 1, out_b: 2, t: 0.5 })?;
    println!("|2,0,0> after a 50:50 split:");
    for (occ, p) in split.probabilities() {
        println!("  {occ:?}  p = {p:.4}");
    }

    let full = network::propagate(&NetworkConfig::new(0.97, 2)?)?;
    println!(
        "\ntwo photons through the network (f = 0.97): {} terms, norm {:.15}, {} photons",
        full.len(),
        full.norm_squared(),
        full.photon_number()
    );
    let mut largest: Vec<_> = full.probabilities().collect();
    largest.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (occ, p) in largest.iter().take(5) {
        println!("  {occ:?}  p = {p:.6}");
    }
    Ok(())
}
