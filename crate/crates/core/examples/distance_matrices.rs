//! Distance matrices and the two centerings.
//!
//! cargo run --example distance_matrices

use pdcor::distgeom::{bray_curtis, double_center, pairwise_distances, u_center, DataMatrix};
use pdcor::fixtures::iris_setosa;

fn main() -> pdcor::Result<()> {
    let x = DataMatrix::from_rows(&[
        vec![0.0, 0.0],
        vec![3.0, 4.0],
        vec![6.0, 0.0],
        vec![3.0, -1.0],
        vec![1.0, 2.0],
    ])?;
    let d = pairwise_distances(&x);
    println!("Euclidean distances:\n{}", d.as_matrix());

    // Double centering: rows and columns of the result sum to zero.
    let a_hat = double_center(&d);
    println!("double centered:{}", a_hat);

    // U-centering: zero diagonal and zero row sums, defined for n >= 4.
    let a_tilde = u_center(&d)?;
    println!("U-centered:{}", a_tilde.as_matrix());
    println!("largest |row sum| = {:e}", a_tilde.max_row_sum());

    // Bray-Curtis dissimilarities are not a metric.
    let iris = iris_setosa();
    let bc = bray_curtis(&iris)?;
    let mut violations = 0;
    let n = bc.order();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if bc.get(i, j) > bc.get(i, k) + bc.get(k, j) + 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    println!("Bray-Curtis on {} setosa flowers: {violations} triangle inequality violations", n);
    Ok(())
}
