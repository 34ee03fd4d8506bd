//! The lossless click distribution from three independent routes: the
//! recursion, the closed form and brute-force enumeration.
//!
//!     cargo run --example classical_oracle

use tmd::oracle::{self, RecursionTable};

fn main() -> tmd::Result<()> {
    let (bins, eta, n) = (8, 0.7, 5);
    let mut table = RecursionTable::new(bins, eta);
    let brute = oracle::brute_force_distribution(bins, eta, n)?;
    println!(
        "N = {bins}, eta = {eta}, n = {n} ({} enumerated outcomes)",
        oracle::brute_force_outcomes(bins, n)
    );
    println!(" m   recursion        closed form      brute force");
    for m in 0..=n {
        println!(
            "{m:2}   {:.12}   {:.12}   {:.12}",
            table.get(m, n),
            oracle::closed_form_pmn(bins, eta, m, n),
            brute[m as usize]
        );
    }

    println!("\nN = 16 limits:");
    for n in [2, 4, 8, 16] {
        println!(
            "  n = {n:2}  P(0|n) = {:.3e}  P(n|n) = {:.6}",
            oracle::p_zero(n, 0.7),
            oracle::p_all(16, n, 0.7)
        );
    }
    Ok(())
}
