//! Binomial click distributions for attenuated coherent light.
//!
//!     cargo run --example coherent_model

use tmd::coherent::{CoherentClickModel, CoherentParams};

fn main() -> tmd::Result<()> {
    for product in [13.1, 2.65, 0.57] {
        let model = CoherentClickModel::from_eta_l_mu0(product)?;
        let dist = model.distribution();
        let row: Vec<String> = dist.probs().iter().map(|p| format!("{p:.3}")).collect();
        println!(
            "eta*l*mu0 = {product:5}  mu' = {:.5}  <m> = {:.3}\n  {}",
            model.mu_prime(),
            model.mean_clicks(),
            row.join(" ")
        );
    }

    let params = CoherentParams::new(34.0, 0.55, 0.7)?;
    println!(
        "\nmu0 = 34, l = 0.55, eta = 0.7: eta*l*mu0 = {:.3}, P(3 clicks) = {:.4}",
        params.eta_l_mu0(),
        params.click_model().click_pmf(3)?
    );
    Ok(())
}
