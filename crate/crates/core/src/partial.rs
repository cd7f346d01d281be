//! Sample partial distance covariance and correlation.
//!
//! With `A`, `B`, `C` the U-centered distance matrices of `x`, `y`, `z`, the
//! projections `P_x = A - [(A.C)/(C.C)] C` and `P_y = B - [(B.C)/(C.C)] C`
//! give
//!
//! * pdCov(x, y; z) = `(P_x . P_y)`,
//! * pdCor(x, y; z) = `(P_x . P_y) / (|P_x| |P_y|)`, or 0 when the
//!   denominator vanishes.
//!
//! When neither `R*_xz` nor `R*_yz` is 1, pdCor equals
//! `(R*_xy - R*_xz R*_yz) / sqrt((1 - R*_xz^2)(1 - R*_yz^2))`.

use serde::{Deserialize, Serialize};

use crate::distgeom::{u_center, AsDissimilarity, UCenteredMatrix};
use crate::error::{Error, Result};
use crate::hilbert::{self, inner, is_negligible, project_complement};

/// Which degenerate branch, if any, produced the reported pdCor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    None,
    /// `|P_x| |P_y| = 0`; pdCor is defined as 0.
    ZeroNormXy,
    /// `(C . C) = 0`; the projections are the unprojected matrices.
    ZeroNormZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdcorSummary {
    pub rxy: f64,
    pub rxz: f64,
    pub ryz: f64,
    pub pdcov: f64,
    pub pdcor: f64,
    pub degenerate: Degeneracy,
}

/// The three U-centered matrices and the two projections.
#[derive(Debug, Clone)]
pub struct Projections {
    pub a: UCenteredMatrix,
    pub b: UCenteredMatrix,
    pub c: UCenteredMatrix,
    pub px: UCenteredMatrix,
    pub py: UCenteredMatrix,
    pub z_degenerate: bool,
}

impl Projections {
    pub fn new(
        x: &impl AsDissimilarity,
        y: &impl AsDissimilarity,
        z: &impl AsDissimilarity,
    ) -> Result<Self> {
        let n = x.order();
        for o in [y.order(), z.order()] {
            if o != n {
                return Err(Error::Dimension { expected: n, got: o });
            }
        }
        let a = u_center(&x.dissimilarity())?;
        let b = u_center(&y.dissimilarity())?;
        let c = u_center(&z.dissimilarity())?;
        let z_degenerate = hilbert::is_degenerate(&c)?;
        let px = project_complement(&a, &c)?;
        let py = project_complement(&b, &c)?;
        Ok(Self {
            a,
            b,
            c,
            px,
            py,
            z_degenerate,
        })
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    /// True when either projection is zero relative to the matrix it was
    /// projected from.
    pub fn xy_degenerate(&self) -> Result<bool> {
        let n = self.order();
        Ok(is_negligible(inner(&self.px, &self.px)?, n, self.a.max_abs())
            || is_negligible(inner(&self.py, &self.py)?, n, self.b.max_abs()))
    }

    pub fn pdcov(&self) -> Result<f64> {
        inner(&self.px, &self.py)
    }

    /// pdCor as the cosine of the angle between the projections.
    pub fn cosine(&self) -> Result<f64> {
        if self.xy_degenerate()? {
            return Ok(0.0);
        }
        let den = hilbert::norm(&self.px)? * hilbert::norm(&self.py)?;
        Ok((self.pdcov()? / den).clamp(-1.0, 1.0))
    }

    fn r_star(&self, p: &UCenteredMatrix, q: &UCenteredMatrix) -> Result<f64> {
        let den = hilbert::norm(p)? * hilbert::norm(q)?;
        if den == 0.0 {
            return Ok(0.0);
        }
        Ok((inner(p, q)? / den).clamp(-1.0, 1.0))
    }

    pub fn summary(&self) -> Result<PdcorSummary> {
        let rxy = self.r_star(&self.a, &self.b)?;
        let rxz = self.r_star(&self.a, &self.c)?;
        let ryz = self.r_star(&self.b, &self.c)?;
        let pdcov = self.pdcov()?;
        let (pdcor, degenerate) = if self.xy_degenerate()? {
            (0.0, Degeneracy::ZeroNormXy)
        } else if self.z_degenerate {
            (rxy, Degeneracy::ZeroNormZ)
        } else if let Some(r) = correlation_formula(rxy, rxz, ryz, self)? {
            (r, Degeneracy::None)
        } else {
            (self.cosine()?, Degeneracy::None)
        };
        Ok(PdcorSummary {
            rxy,
            rxz,
            ryz,
            pdcov,
            pdcor,
            degenerate,
        })
    }
}

/// The partial-correlation form, or `None` when a conditioning R* is 1 within
/// the degeneracy tolerance.
fn correlation_formula(rxy: f64, rxz: f64, ryz: f64, p: &Projections) -> Result<Option<f64>> {
    let n = p.order();
    // (1 - R*^2) |A|^2 is |P_x|^2; apply the same negligibility rule.
    let aa = inner(&p.a, &p.a)?;
    let bb = inner(&p.b, &p.b)?;
    let sx = 1.0 - rxz * rxz;
    let sy = 1.0 - ryz * ryz;
    if is_negligible(sx * aa, n, p.a.max_abs()) || is_negligible(sy * bb, n, p.b.max_abs()) {
        return Ok(None);
    }
    Ok(Some(
        ((rxy - rxz * ryz) / (sx.sqrt() * sy.sqrt())).clamp(-1.0, 1.0),
    ))
}

/// Sample partial distance covariance `(P_x . P_y)`.
pub fn pdcov_sample(
    x: &impl AsDissimilarity,
    y: &impl AsDissimilarity,
    z: &impl AsDissimilarity,
) -> Result<f64> {
    Projections::new(x, y, z)?.pdcov()
}

/// Sample partial distance correlation with the pairwise R* values.
pub fn pdcor_sample(
    x: &impl AsDissimilarity,
    y: &impl AsDissimilarity,
    z: &impl AsDissimilarity,
) -> Result<PdcorSummary> {
    Projections::new(x, y, z)?.summary()
}

/// pdCor computed only from the projection definition.
pub fn pdcor_cosine(
    x: &impl AsDissimilarity,
    y: &impl AsDissimilarity,
    z: &impl AsDissimilarity,
) -> Result<f64> {
    Projections::new(x, y, z)?.cosine()
}

/// Partial distance correlation of three raw samples.
pub fn pdcor_from_data(
    x: &crate::distgeom::DataMatrix,
    y: &crate::distgeom::DataMatrix,
    z: &crate::distgeom::DataMatrix,
) -> Result<PdcorSummary> {
    pdcor_sample(x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distgeom::{pairwise_distances, DataMatrix};
    use crate::estimators::{dcor_star, dcov_sq_unbiased};

    fn col(v: &[f64]) -> DataMatrix {
        DataMatrix::from_column(v).unwrap()
    }

    const X: [f64; 7] = [0.3, -1.2, 2.2, 0.0, 1.1, -0.4, 3.0];
    const Y: [f64; 7] = [1.0, 0.2, -0.7, 2.5, 0.1, -1.9, 0.6];
    const Z: [f64; 7] = [-0.5, 1.5, 0.8, 0.9, -2.1, 0.4, 1.2];

    #[test]
    fn constant_condition_reduces_to_unbiased_dcov() {
        let (x, y, z) = (col(&X), col(&Y), col(&[4.0; 7]));
        let pd = pdcov_sample(&x, &y, &z).unwrap();
        assert!((pd - dcov_sq_unbiased(&x, &y).unwrap()).abs() < 1e-15);
        let s = pdcor_from_data(&x, &y, &z).unwrap();
        assert_eq!(s.degenerate, Degeneracy::ZeroNormZ);
        assert!((s.pdcor - dcor_star(&x, &y).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn conditioning_on_y_removes_everything() {
        let (x, y) = (col(&X), col(&Y));
        assert!(pdcov_sample(&x, &y, &y).unwrap().abs() < 1e-12);
    }

    #[test]
    fn identical_samples_take_the_zero_branch() {
        let x = col(&X);
        let s = pdcor_from_data(&x, &x, &x).unwrap();
        assert!((s.rxy - 1.0).abs() < 1e-12);
        assert_eq!(s.pdcor, 0.0);
        assert_eq!(s.degenerate, Degeneracy::ZeroNormXy);
    }

    #[test]
    fn expansion_matches_projection() {
        let (x, y, z) = (col(&X), col(&Y), col(&Z));
        let p = Projections::new(&x, &y, &z).unwrap();
        let ab = inner(&p.a, &p.b).unwrap();
        let ac = inner(&p.a, &p.c).unwrap();
        let bc = inner(&p.b, &p.c).unwrap();
        let cc = inner(&p.c, &p.c).unwrap();
        let (alpha, beta) = (ac / cc, bc / cc);
        let expanded = ab - alpha * bc - beta * ac + alpha * beta * cc;
        assert!((p.pdcov().unwrap() - expanded).abs() < 1e-14);
    }

    #[test]
    fn formula_agrees_with_cosine() {
        let (x, y, z) = (col(&X), col(&Y), col(&Z));
        let s = pdcor_sample(&x, &y, &z).unwrap();
        let cos = pdcor_cosine(&x, &y, &z).unwrap();
        assert_eq!(s.degenerate, Degeneracy::None);
        assert!((s.pdcor - cos).abs() < 1e-12);
    }

    #[test]
    fn dissimilarity_and_data_paths_agree() {
        let (x, y, z) = (col(&X), col(&Y), col(&Z));
        let from_data = pdcor_from_data(&x, &y, &z).unwrap();
        let from_d = pdcor_sample(
            &pairwise_distances(&x),
            &pairwise_distances(&y),
            &pairwise_distances(&z),
        )
        .unwrap();
        assert_eq!(from_data, from_d);
    }

    #[test]
    fn order_mismatch() {
        let z = col(&Z[..6]);
        assert!(matches!(
            pdcor_sample(&col(&X), &col(&Y), &z),
            Err(Error::Dimension { expected: 7, got: 6 })
        ));
    }
}
