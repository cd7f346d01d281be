//! Permutation tests of independence. The p-value does not depend on the
//! number of worker threads.
//!
//! cargo run --release --example independence_tests

use pdcor::distgeom::DataMatrix;
use pdcor::inference::{dcov_ip_test, dcov_test, PermutationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> pdcor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 40;
    let x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let noise: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    // Uncorrelated but dependent.
    let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| a * a + 0.3 * e).collect();
    let (x, y, e) = (
        DataMatrix::from_column(&x)?,
        DataMatrix::from_column(&y)?,
        DataMatrix::from_column(&noise)?,
    );

    let cfg = PermutationConfig::new(1999, 42);
    for (label, other) in [("y = x^2 + e", &y), ("independent e", &e)] {
        let t = dcov_test(&x, other, &cfg)?;
        let ip = dcov_ip_test(&x, other, &cfg)?;
        println!(
            "{label:14} dcov: nV^2 = {:.4}, p = {:.4} | inner product: nU = {:+.4}, R* = {:+.4}, p = {:.4}",
            t.statistic, t.p_value, ip.statistic, ip.estimate, ip.p_value
        );
    }

    let one = dcov_test(&x, &y, &cfg.with_workers(1))?;
    let four = dcov_test(&x, &y, &cfg.with_workers(4))?;
    assert_eq!(one, four);
    println!("1 and 4 workers give identical results: {}", serde_json::to_string(&one).unwrap());
    Ok(())
}
