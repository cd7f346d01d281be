//! Partial distance correlation and the pdCov test, next to the linear
//! partial correlation and partial Mantel tests.
//!
//! cargo run --release --example partial_dcor

use pdcor::distgeom::DataMatrix;
use pdcor::inference::{mantel_partial_test_data, pcor_test, pdcov_test, PcorReference, PermutationConfig};
use pdcor::partial::pdcor_from_data;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> pdcor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 60;
    let mut normal = || -> Vec<f64> { (0..n).map(|_| rng.sample(StandardNormal)).collect() };
    let z = normal();
    let (ex, ey) = (normal(), normal());

    // x and y depend on each other only through z.
    let x: Vec<f64> = z.iter().zip(&ex).map(|(z, e)| z + 0.5 * e).collect();
    let y_cond: Vec<f64> = z.iter().zip(&ey).map(|(z, e)| z * z + 0.5 * e).collect();
    // y also depends on x directly.
    let y_direct: Vec<f64> = y_cond.iter().zip(&x).map(|(y, x)| y + 2.0 * (1.5 * x).sin()).collect();

    let cfg = PermutationConfig::new(999, 5);
    let xm = DataMatrix::from_column(&x)?;
    let zm = DataMatrix::from_column(&z)?;
    for (label, y) in [("through z only", &y_cond), ("direct effect", &y_direct)] {
        let ym = DataMatrix::from_column(y)?;
        let s = pdcor_from_data(&xm, &ym, &zm)?;
        let pd = pdcov_test(&xm, &ym, &zm, &cfg)?;
        let mantel = mantel_partial_test_data(&xm, &ym, &zm, &cfg)?;
        let pcor = pcor_test(&x, y, &z, PcorReference::Normal)?;
        println!("{label}:");
        println!(
            "  R*(x,y) = {:+.3}  R*(x,z) = {:+.3}  R*(y,z) = {:+.3}  pdCor = {:+.3}",
            s.rxy, s.rxz, s.ryz, s.pdcor
        );
        println!(
            "  p-values: pdcov {:.3}  partial Mantel {:.3}  pcor {:.3}",
            pd.p_value, mantel.p_value, pcor.p_value
        );
    }
    Ok(())
}
