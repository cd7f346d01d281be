//! Sample distance covariance and correlation statistics, plus closed-form
//! population values for the bivariate normal.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::distgeom::{double_center, u_center, AsDissimilarity, DissimilarityMatrix, MIN_U_CENTER_ORDER};
use crate::error::{Error, Result};
use crate::hilbert;
use crate::numeric::compensated_sum;

/// Squared distance correlations (or bias-corrected R* values) for the three
/// pairs of a trivariate problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcorTriple {
    pub rxy: f64,
    pub rxz: f64,
    pub ryz: f64,
}

impl DcorTriple {
    pub fn new(rxy: f64, rxz: f64, ryz: f64) -> Result<Self> {
        for (name, v) in [("rxy", rxy), ("rxz", rxz), ("ryz", ryz)] {
            if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                return Err(Error::OutOfDomain(format!("{name} = {v} is not in [-1, 1]")));
            }
        }
        Ok(Self { rxy, rxz, ryz })
    }
}

fn matched<'a>(
    a: &'a impl AsDissimilarity,
    b: &'a impl AsDissimilarity,
) -> Result<(std::borrow::Cow<'a, DissimilarityMatrix>, std::borrow::Cow<'a, DissimilarityMatrix>)> {
    if a.order() != b.order() {
        return Err(Error::Dimension {
            expected: a.order(),
            got: b.order(),
        });
    }
    Ok((a.dissimilarity(), b.dissimilarity()))
}

/// Biased squared distance covariance `(1/n^2) sum_ij A_ij B_ij` over
/// double-centered distance matrices. Never negative.
pub fn dcov_sq_biased(x: &impl AsDissimilarity, y: &impl AsDissimilarity) -> Result<f64> {
    let (a, b) = matched(x, y)?;
    let n = a.order() as f64;
    let (ah, bh) = (double_center(&a), double_center(&b));
    let s = compensated_sum(ah.iter().zip(bh.iter()).map(|(p, q)| p * q));
    Ok((s / (n * n)).max(0.0))
}

/// Biased squared distance correlation, in `[0, 1]`; 0 when either
/// distance variance vanishes.
pub fn dcor_sq_biased(x: &impl AsDissimilarity, y: &impl AsDissimilarity) -> Result<f64> {
    let (a, b) = matched(x, y)?;
    let (ah, bh) = (double_center(&a), double_center(&b));
    let dot = |p: &nalgebra::DMatrix<f64>, q: &nalgebra::DMatrix<f64>| {
        compensated_sum(p.iter().zip(q.iter()).map(|(s, t)| s * t))
    };
    let (vxy, vxx, vyy) = (dot(&ah, &bh), dot(&ah, &ah), dot(&bh, &bh));
    let den = (vxx * vyy).sqrt();
    if den <= 0.0 {
        return Ok(0.0);
    }
    Ok((vxy.max(0.0) / den).clamp(0.0, 1.0))
}

/// Unbiased estimator of squared distance covariance: the inner product of
/// the two U-centered matrices. May be negative.
pub fn dcov_sq_unbiased(x: &impl AsDissimilarity, y: &impl AsDissimilarity) -> Result<f64> {
    let (a, b) = matched(x, y)?;
    hilbert::inner(&u_center(&a)?, &u_center(&b)?)
}

/// Same value as [`dcov_sq_unbiased`], computed in `O(n^2)` from the sums
///
/// * `T1 = sum_{k != l} a_kl b_kl`
/// * `T2 = a.. b..`
/// * `T3 = sum_k a_k. b_k.`
///
/// as `n (n - 3) (A . B) = T1 + T2 / ((n - 1)(n - 2)) - 2 T3 / (n - 2)`,
/// without forming the centered matrices.
pub fn dcov_sq_unbiased_fast(a: &DissimilarityMatrix, b: &DissimilarityMatrix) -> Result<f64> {
    let n = a.order();
    if b.order() != n {
        return Err(Error::Dimension {
            expected: n,
            got: b.order(),
        });
    }
    if n < MIN_U_CENTER_ORDER {
        return Err(Error::Size {
            needed: MIN_U_CENTER_ORDER,
            got: n,
        });
    }
    let (am, bm) = (a.as_matrix(), b.as_matrix());
    let t1 = compensated_sum(am.iter().zip(bm.iter()).map(|(p, q)| p * q));
    let ra: Vec<f64> = am.column_iter().map(|c| compensated_sum(c.iter().copied())).collect();
    let rb: Vec<f64> = bm.column_iter().map(|c| compensated_sum(c.iter().copied())).collect();
    let t2 = compensated_sum(ra.iter().copied()) * compensated_sum(rb.iter().copied());
    let t3 = compensated_sum(ra.iter().zip(&rb).map(|(p, q)| p * q));
    let nf = n as f64;
    let total = t1 + t2 / ((nf - 1.0) * (nf - 2.0)) - 2.0 * t3 / (nf - 2.0);
    Ok(total / (nf * (nf - 3.0)))
}

/// Bias-corrected distance correlation `R*`, in `[-1, 1]`; 0 when either
/// U-centered matrix has zero norm.
pub fn dcor_star(x: &impl AsDissimilarity, y: &impl AsDissimilarity) -> Result<f64> {
    let (a, b) = matched(x, y)?;
    let (au, bu) = (u_center(&a)?, u_center(&b)?);
    let den = hilbert::norm(&au)? * hilbert::norm(&bu)?;
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok((hilbert::inner(&au, &bu)? / den).clamp(-1.0, 1.0))
}

/// Population squared distance correlation of a bivariate normal pair with
/// Pearson correlation `rho`.
///
/// The normalizing constant is `1 + pi/3 - sqrt(3)`, which is what makes the
/// value 1 at `rho = 1`.
pub fn dcor_sq_bvn(rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() > 1.0 {
        return Err(Error::OutOfDomain(format!("correlation {rho} is not in [-1, 1]")));
    }
    let r = rho.abs();
    let num = r * r.asin() + (1.0 - r * r).sqrt() - r * (r / 2.0).asin() - (4.0 - r * r).sqrt() + 1.0;
    let den = 1.0 + PI / 3.0 - 3.0_f64.sqrt();
    Ok((num / den).clamp(0.0, 1.0))
}

/// Inverse of [`dcor_sq_bvn`] on `[0, 1]`, by bisection.
pub fn rho_from_dcor_sq(r2: f64) -> Result<f64> {
    if !r2.is_finite() || !(0.0..=1.0).contains(&r2) {
        return Err(Error::OutOfDomain(format!(
            "squared distance correlation {r2} is not in [0, 1]"
        )));
    }
    if r2 == 0.0 {
        return Ok(0.0);
    }
    if r2 == 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if dcor_sq_bvn(mid)? < r2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Population partial distance correlation from the three squared distance
/// correlations. Defined as 0 when either conditioning correlation is 1.
pub fn pdcor_population(t: &DcorTriple) -> Result<f64> {
    for (name, v) in [("rxy", t.rxy), ("rxz", t.rxz), ("ryz", t.ryz)] {
        if !v.is_finite() || !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfDomain(format!(
                "squared distance correlation {name} = {v} is not in [0, 1]"
            )));
        }
    }
    const ONE_TOL: f64 = 1e-12;
    if (1.0 - t.rxz).abs() <= ONE_TOL || (1.0 - t.ryz).abs() <= ONE_TOL {
        return Ok(0.0);
    }
    let den = (1.0 - t.rxz * t.rxz).sqrt() * (1.0 - t.ryz * t.ryz).sqrt();
    Ok((t.rxy - t.rxz * t.ryz) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgeom::{pairwise_distances, DataMatrix};

    fn col(v: &[f64]) -> DataMatrix {
        DataMatrix::from_column(v).unwrap()
    }

    #[test]
    fn constant_sample_has_zero_statistics() {
        let x = col(&[2.0; 6]);
        let y = col(&[0.3, 1.0, -2.0, 4.0, 0.0, 1.5]);
        assert_eq!(dcov_sq_biased(&x, &y).unwrap(), 0.0);
        assert_eq!(dcor_sq_biased(&x, &y).unwrap(), 0.0);
        assert_eq!(dcov_sq_unbiased(&x, &y).unwrap(), 0.0);
        assert_eq!(dcor_star(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn self_covariance_matches_distance_variance() {
        let x = col(&[0.0, 1.0, 2.0, 3.0]);
        let a = double_center(&pairwise_distances(&x));
        let dvar = a.iter().map(|v| v * v).sum::<f64>() / 16.0;
        assert!((dcov_sq_biased(&x, &x).unwrap() - dvar).abs() < 1e-15);
    }

    #[test]
    fn rigid_image_has_unit_dcor() {
        let x = DataMatrix::from_rows(&[
            vec![0.0, 1.0],
            vec![2.0, -1.0],
            vec![0.5, 0.5],
            vec![3.0, 2.0],
            vec![-1.0, 0.0],
        ])
        .unwrap();
        // Rotation by 30 degrees, scaling by 2.5, translation.
        let (s, c) = (30f64.to_radians().sin(), 30f64.to_radians().cos());
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|i| {
                let r = x.row(i);
                vec![1.0 + 2.5 * (c * r[0] - s * r[1]), -4.0 + 2.5 * (s * r[0] + c * r[1])]
            })
            .collect();
        let y = DataMatrix::from_rows(&rows).unwrap();
        assert!((dcor_sq_biased(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        assert!((dcor_star(&x, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn row_mismatch_is_an_error() {
        let err = dcov_sq_biased(&col(&[1.0, 2.0, 3.0]), &col(&[1.0, 2.0])).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 3, got: 2 }));
    }

    #[test]
    fn unbiased_needs_four_points() {
        assert!(matches!(
            dcov_sq_unbiased(&col(&[1.0, 2.0, 3.0]), &col(&[1.0, 2.0, 4.0])),
            Err(Error::Size { .. })
        ));
        let z = DissimilarityMatrix::zeros(3);
        assert!(dcov_sq_unbiased_fast(&z, &z).is_err());
    }

    #[test]
    fn fast_path_on_zero_input() {
        let z = DissimilarityMatrix::zeros(6);
        assert_eq!(dcov_sq_unbiased_fast(&z, &z).unwrap(), 0.0);
    }

    #[test]
    fn bvn_endpoints() {
        assert_eq!(dcor_sq_bvn(0.0).unwrap(), 0.0);
        assert!((dcor_sq_bvn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(dcor_sq_bvn(1.01).is_err());
        assert_eq!(rho_from_dcor_sq(0.0).unwrap(), 0.0);
        assert!(rho_from_dcor_sq(-0.1).is_err());
    }

    #[test]
    fn population_pdcor_branches() {
        let t = DcorTriple::new(0.3, 1.0, 0.2).unwrap();
        assert_eq!(pdcor_population(&t).unwrap(), 0.0);
        let t = DcorTriple::new(0.04, 0.2, 0.2).unwrap();
        assert!(pdcor_population(&t).unwrap().abs() < 1e-15);
        let t = DcorTriple::new(-0.1, 0.2, 0.2).unwrap();
        assert!(pdcor_population(&t).is_err());
        assert!(DcorTriple::new(1.5, 0.0, 0.0).is_err());
    }
}
