//! Prints the mode table of the network and the single-photon reach
//! probability of every detection mode.
//!
//!     cargo run --example layout_dump

use tmd::network::{self, Detector};

fn main() -> tmd::Result<()> {
    let layout = network::build_layout();
    println!("{}", layout.to_json()?);

    let f = 0.97;
    let reach = network::per_bin_reach_probability(&layout, f)?;
    println!("\nreach probability per bin at f = {f}:");
    for bin in 0..network::TIME_BINS {
        println!(
            "  bin {bin} (f^{})  A {:.5}  B {:.5}",
            layout.loop_exponent(bin),
            reach[&(Detector::A, bin)],
            reach[&(Detector::B, bin)]
        );
    }
    println!("average transmission: {:.5}", network::average_transmission(f));
    Ok(())
}
