//! Inner-product space operations on U-centered matrices.
//!
//! The inner product of two elements of order `n` is
//! `(1 / (n (n - 3))) * sum_{i != j} c_ij d_ij`.

use crate::distgeom::{UCenteredMatrix, MIN_U_CENTER_ORDER};
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Relative threshold below which a squared norm is treated as zero.
///
/// A squared norm `s` of a matrix of order `n` is negligible when
/// `s <= DEGENERACY_TOL * n^2 * scale^2`, where `scale` is the largest entry
/// magnitude of the reference matrix.
pub const DEGENERACY_TOL: f64 = 1e-14;

pub fn inner(a: &UCenteredMatrix, b: &UCenteredMatrix) -> Result<f64> {
    let n = check_pair(a, b)?;
    // Diagonals are zero, so the full sum equals the off-diagonal sum.
    let s = compensated_sum(
        a.as_matrix()
            .iter()
            .zip(b.as_matrix().iter())
            .map(|(x, y)| x * y),
    );
    Ok(s / (n as f64 * (n as f64 - 3.0)))
}

pub fn norm(a: &UCenteredMatrix) -> Result<f64> {
    Ok(inner(a, a)?.max(0.0).sqrt())
}

/// Whether a squared norm is zero relative to a reference scale.
pub fn is_negligible(sq_norm: f64, n: usize, scale: f64) -> bool {
    let n = n as f64;
    sq_norm <= DEGENERACY_TOL * n * n * scale * scale
}

/// True when `inner(c, c)` is zero within the scale-invariant tolerance.
pub fn is_degenerate(c: &UCenteredMatrix) -> Result<bool> {
    Ok(is_negligible(inner(c, c)?, c.order(), c.max_abs()))
}

/// `alpha * a + beta * b`.
pub fn linear_combination(
    alpha: f64,
    a: &UCenteredMatrix,
    beta: f64,
    b: &UCenteredMatrix,
) -> Result<UCenteredMatrix> {
    check_pair(a, b)?;
    let m = a.as_matrix() * alpha + b.as_matrix() * beta;
    Ok(UCenteredMatrix::from_matrix_unchecked(m))
}

pub fn scale(alpha: f64, a: &UCenteredMatrix) -> UCenteredMatrix {
    UCenteredMatrix::from_matrix_unchecked(a.as_matrix() * alpha)
}

/// Projection coefficient `(a . c) / (c . c)`, or `None` when `c` is
/// degenerate.
pub fn projection_coefficient(a: &UCenteredMatrix, c: &UCenteredMatrix) -> Result<Option<f64>> {
    let cc = inner(c, c)?;
    if is_negligible(cc, c.order(), c.max_abs()) {
        return Ok(None);
    }
    Ok(Some(inner(a, c)? / cc))
}

/// Orthogonal projection of `a` onto the complement of `c`:
/// `a - [(a . c) / (c . c)] c`. When `c` is degenerate, `a` is returned.
pub fn project_complement(a: &UCenteredMatrix, c: &UCenteredMatrix) -> Result<UCenteredMatrix> {
    match projection_coefficient(a, c)? {
        Some(alpha) => linear_combination(1.0, a, -alpha, c),
        None => Ok(a.clone()),
    }
}

fn check_pair(a: &UCenteredMatrix, b: &UCenteredMatrix) -> Result<usize> {
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
    Ok(n)
}
