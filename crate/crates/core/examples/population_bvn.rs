//! Population distance correlation of the bivariate normal, and the
//! population partial distance correlation it implies.
//!
//! cargo run --example population_bvn

use pdcor::estimators::{dcor_sq_bvn, pdcor_population, rho_from_dcor_sq, DcorTriple};

fn main() -> pdcor::Result<()> {
    println!("  rho   dCor^2");
    for rho in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        println!("{rho:5.2}   {:.4}", dcor_sq_bvn(rho)?);
    }
    for r2 in [0.04, 0.2] {
        println!("dCor^2 = {r2} at rho = {:.8}", rho_from_dcor_sq(r2)?);
    }

    // Z = X + Y with X, Y iid normal: rho(X,Z) = rho(Y,Z) = 1/sqrt 2 and X, Y
    // independent, yet the partial distance correlation is not zero.
    let rxz = dcor_sq_bvn(std::f64::consts::FRAC_1_SQRT_2)?;
    let triple = DcorTriple::new(0.0, rxz, rxz)?;
    println!("X, Y independent, Z = X + Y: pdCor = {:.4}", pdcor_population(&triple)?);

    let triple = DcorTriple::new(dcor_sq_bvn(0.5)?, rxz, rxz)?;
    println!(
        "dCor^2 (XY, XZ, YZ) = ({:.4}, {rxz:.4}, {rxz:.4}): pdCor = {:.4}",
        triple.rxy,
        pdcor_population(&triple)?
    );
    Ok(())
}
