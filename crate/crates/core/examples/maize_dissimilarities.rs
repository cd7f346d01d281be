//! Association between genetic distance and heterosis among seven maize
//! populations: Pearson correlation of the distances, the Mantel test, and
//! the distance covariance inner product test.
//!
//! cargo run --release --example maize_dissimilarities

use pdcor::estimators::dcor_star;
use pdcor::fixtures::{maize_genetic, maize_heterosis, maize_heterosis_reprinted, MAIZE_POPULATIONS};
use pdcor::inference::{dcov_ip_test, mantel_test, pearson_t_test, PermutationConfig};

fn main() -> pdcor::Result<()> {
    let genetic = maize_genetic();
    println!("populations: {}", MAIZE_POPULATIONS.join(", "));
    for (label, heterosis) in [
        ("heterosis, (Pop21, Pop29) = +0.4", maize_heterosis()),
        ("heterosis, (Pop21, Pop29) = -0.4", maize_heterosis_reprinted()),
    ] {
        println!("{label}");
        let r = pearson_t_test(&genetic.upper_triangle(), &heterosis.upper_triangle())?;
        println!("  Pearson r = {:.4}, t = {:.3} on {} df, p = {:.4}", r.r, r.t, r.df, r.p_value);
        let m = mantel_test(&genetic, &heterosis, &PermutationConfig::new(99_999, 1))?;
        println!("  Mantel r = {:.5}, two-tailed p = {:.4}", m.statistic, m.p_value);
        println!("  R* = {:.4}", dcor_star(&genetic, &heterosis)?);
        let t = dcov_ip_test(&genetic, &heterosis, &PermutationConfig::new(9999, 1))?;
        println!("  inner product test: n U = {:.4}, p = {:.4}", t.statistic, t.p_value);
    }
    Ok(())
}
