//! Forward selection by partial distance correlation on synthetic data
//! with a nonlinear signal.
//!
//! cargo run --release --example variable_selection

use pdcor::distgeom::DataMatrix;
use pdcor::select::{forward_select, SelectOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> pdcor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (n, m) = (80, 6);
    let cols: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    // Depends on x1 linearly and on x4 through its square.
    let y: Vec<f64> = (0..n)
        .map(|i| cols[1][i] + 1.5 * cols[4][i].powi(2) + 0.3 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let x = DataMatrix::from_columns(&refs)?;

    let options = SelectOptions {
        replicates: 499,
        seed: 9,
        ..SelectOptions::default()
    };
    let trace = forward_select(&DataMatrix::from_column(&y)?, &x, &options)?;
    for (k, s) in trace.steps.iter().enumerate() {
        println!(
            "step {}: x{}  criterion {:.4}  p = {:.3}  {}",
            k + 1,
            s.variable,
            s.criterion,
            s.p_value,
            if s.accepted { "entered" } else { "rejected" }
        );
    }
    println!("selected {:?}, stopped: {:?}", trace.selected(), trace.stopped_reason);
    Ok(())
}
