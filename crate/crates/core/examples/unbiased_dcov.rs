//! Biased and unbiased squared distance covariance, and the bias-corrected
//! distance correlation R*.
//!
//! cargo run --release --example unbiased_dcov

use pdcor::distgeom::{pairwise_distances, DataMatrix};
use pdcor::estimators::{dcor_sq_biased, dcor_star, dcov_sq_biased, dcov_sq_unbiased, dcov_sq_unbiased_fast};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> pdcor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Independent samples in 30 dimensions: the biased dCor is far from 0,
    // R* is not.
    for n in [20, 50, 200] {
        let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            (0..n).map(|_| (0..30).map(|_| rng.sample(StandardNormal)).collect()).collect()
        };
        let x = DataMatrix::from_rows(&draw(&mut rng))?;
        let y = DataMatrix::from_rows(&draw(&mut rng))?;
        println!(
            "n = {n:3}  dCor^2 = {:.4}  R* = {:+.4}  V^2 = {:.4}  unbiased = {:+.5}",
            dcor_sq_biased(&x, &y)?,
            dcor_star(&x, &y)?,
            dcov_sq_biased(&x, &y)?,
            dcov_sq_unbiased(&x, &y)?,
        );
    }

    // The O(n^2) row-sum form agrees with the U-centered inner product.
    let x: Vec<f64> = (0..500).map(|_| rng.sample(StandardNormal)).collect();
    let y: Vec<f64> = x.iter().map(|v: &f64| v * v + 0.5 * rng.sample::<f64, _>(StandardNormal)).collect();
    let a = pairwise_distances(&DataMatrix::from_column(&x)?);
    let b = pairwise_distances(&DataMatrix::from_column(&y)?);
    let direct = dcov_sq_unbiased(&a, &b)?;
    let fast = dcov_sq_unbiased_fast(&a, &b)?;
    println!("y = x^2 + noise, n = 500: unbiased dCov^2 {direct:.10} (direct) vs {fast:.10} (row sums)");
    println!("R* = {:.4}", dcor_star(&a, &b)?);
    Ok(())
}
