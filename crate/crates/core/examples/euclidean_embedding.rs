//! Any U-centered matrix is the U-centered distance matrix of some points.
//! Here the dissimilarities are Bray-Curtis, which violate the triangle
//! inequality, for the 50 setosa iris flowers.
//!
//! cargo run --release --example euclidean_embedding

use pdcor::distgeom::{bray_curtis, pairwise_distances, u_center};
use pdcor::embed::{cailliez_constant, euclidean_representation};
use pdcor::fixtures::iris_setosa;

fn main() -> pdcor::Result<()> {
    let d = bray_curtis(&iris_setosa())?;
    let au = u_center(&d)?;
    println!("additive constant for the U-centered matrix: {:.6}", cailliez_constant(&au.as_dissimilarity())?);

    let v = euclidean_representation(&au)?;
    println!(
        "{} points in R^{}, constant {:.6}, relative residual {:e}",
        v.points.nrows(),
        v.dimension(),
        v.constant,
        v.residual
    );
    let vu = u_center(&pairwise_distances(&v.points))?;
    let max_diff = (vu.as_matrix() - au.as_matrix()).amax();
    println!("max |U(points) - U(d)| = {max_diff:e}");
    let tail: Vec<String> = v.eigenvalues.iter().rev().take(3).map(|l| format!("{l:.2e}")).collect();
    println!("smallest eigenvalues: {}", tail.join(", "));
    Ok(())
}
