//! Click statistics P(m|n) of the detector for number-state input, and the
//! probability P(n|n) of counting every photon.
//!
//!     cargo run --example click_distribution

use tmd::detection::{self, DetectorModel};

fn main() -> tmd::Result<()> {
    let det = DetectorModel::new(0.43)?;
    let f = 0.97;
    for n in [1, 3, 5] {
        let dist = detection::pmn(n, f, &det)?;
        let row: Vec<String> = (0..=n).map(|m| format!("{:.4}", dist.get(m))).collect();
        println!("P(m|{n}), m = 0..={n}: {}", row.join("  "));
    }

    println!("\nP(n|n) at f = {f}:");
    for n in [1, 2, 4, 8, 12, 16] {
        let method = detection::preferred_method(n);
        let eta1 = detection::p_correct(n, f, &DetectorModel::new(1.0)?)?;
        let eta_lab = detection::p_correct(n, f, &det)?;
        println!("  n = {n:2}  eta=1: {eta1:.5}  eta=0.43: {eta_lab:.3e}  ({method:?})");
    }
    Ok(())
}
