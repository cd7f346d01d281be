//! Euclidean representation of dissimilarities and of U-centered matrices.
//!
//! Classical (metric) MDS recovers a configuration from a dissimilarity
//! matrix whose double-centered `-d^2/2` matrix is positive semi-definite.
//! When it is not, the Cailliez additive constant `c*` is the smallest `c`
//! such that `d_ij + c` (off the diagonal) is Euclidean.
//!
//! Because U-centering ignores a constant added to the off-diagonal entries,
//! any element `H` of the U-centered space can be represented exactly: embed
//! `H + c*` and U-center the distances of the resulting points.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::distgeom::{
    double_center_matrix, pairwise_distances, u_center, DataMatrix, DissimilarityMatrix,
    UCenteredMatrix, MIN_U_CENTER_ORDER,
};
use crate::error::{Error, Result};
use crate::numeric::max_abs;

/// Eigenvalues with `lambda >= -PSD_RTOL * |lambda|_max` count as nonnegative.
pub const PSD_RTOL: f64 = 1e-9;

/// Relative reconstruction tolerance for an exact representation.
pub const REPRESENTATION_RTOL: f64 = 1e-8;

const IMAG_RTOL: f64 = 1e-8;
const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 100_000;
const REFINE_STEPS: usize = 8;
const SNAP_RTOL: f64 = 1e-6;
/// Positive eigenvalues above this fraction of the largest become axes.
/// Dropping a small but genuine axis distorts short distances badly.
const AXIS_RTOL: f64 = 1e-13;

/// A configuration of points together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingResult {
    /// `n x k` configuration, centered at the origin.
    pub points: DataMatrix,
    /// Additive constant applied to the off-diagonal dissimilarities.
    pub constant: f64,
    /// Full spectrum of the double-centered `-d^2/2` matrix, descending.
    pub eigenvalues: Vec<f64>,
    /// Relative reconstruction error: of the distances for [`classical_mds`],
    /// of the U-centered distances for [`euclidean_representation`].
    pub residual: f64,
}

impl EmbeddingResult {
    pub fn dimension(&self) -> usize {
        self.points.ncols()
    }

    pub fn sidecar(&self) -> EmbeddingSidecar {
        EmbeddingSidecar {
            constant: self.constant,
            eigenvalues: self.eigenvalues.clone(),
            residual: self.residual,
            dimension: self.dimension(),
        }
    }
}

/// JSON document written next to an embedded configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSidecar {
    pub constant: f64,
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
    pub dimension: usize,
}

/// Classical MDS into at most `k` dimensions.
///
/// Keeps the leading `min(k, #positive eigenvalues)` axes, scaled so that the
/// coordinate vector of axis `i` has squared length `lambda_i`.
pub fn classical_mds(d: &DissimilarityMatrix, k: usize) -> Result<EmbeddingResult> {
    let n = d.order();
    if n < 2 {
        return Err(Error::Size { needed: 2, got: n });
    }
    if k == 0 || k > n - 1 {
        return Err(Error::OutOfDomain(format!(
            "embedding dimension {k} must lie in 1..={}",
            n - 1
        )));
    }
    let (points, eigenvalues) = mds_points(d.as_matrix(), k)?;
    let scale = d.max_abs();
    let fitted = pairwise_distances(&points);
    let err = (fitted.as_matrix() - d.as_matrix()).amax();
    Ok(EmbeddingResult {
        points,
        constant: 0.0,
        eigenvalues,
        residual: if scale > 0.0 { err / scale } else { err },
    })
}

/// Cailliez additive constant: the largest real eigenvalue of
///
/// ```text
/// [  0    2 B(d^2) ]
/// [ -I   -4 B(d)   ]
/// ```
///
/// where `B(m)` double-centers `-m/2`, raised if necessary to `-min d_ij` so
/// that no adjusted entry is negative. For every `c >= c*` the adjusted
/// dissimilarities `d_ij + c (i != j)` are Euclidean.
pub fn cailliez_constant(d: &DissimilarityMatrix) -> Result<f64> {
    Ok(constant_candidates(d)?[0])
}

/// The additive constant followed by, when the eigenvalue is ill-conditioned,
/// a nearby alternative estimate.
fn constant_candidates(d: &DissimilarityMatrix) -> Result<Vec<f64>> {
    let n = d.order();
    if n < 2 {
        return Err(Error::Size { needed: 2, got: n });
    }
    let scale = d.max_abs();
    if scale == 0.0 {
        return Ok(vec![0.0]);
    }
    // The constant is homogeneous of degree one; solve on unit scale so the
    // blocks of the companion matrix are balanced.
    let unit = d.as_matrix() / scale;
    let (b_sq, b_lin) = cailliez_blocks(&unit);

    let mut z = DMatrix::zeros(2 * n, 2 * n);
    z.view_mut((0, n), (n, n)).copy_from(&(&b_sq * 2.0));
    z.view_mut((n, n), (n, n)).copy_from(&(&b_lin * -4.0));
    for i in 0..n {
        z[(n + i, i)] = -1.0;
    }
    let schur = Schur::try_new(z, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numeric("eigensolver did not converge for the additive constant".into()))?;
    let eig = schur.complex_eigenvalues();
    let radius = eig.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let c = eig
        .iter()
        .filter(|e| e.im.abs() <= IMAG_RTOL * radius.max(1.0))
        .map(|e| e.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !c.is_finite() {
        return Err(Error::Numeric("no real eigenvalue for the additive constant".into()));
    }
    let c = refine_constant(&b_sq, &b_lin, c);
    // The eigenproblem only sees squared dissimilarities, so a root below the
    // floor would leave some adjusted entries negative.
    let floor = nonnegativity_floor(&unit);
    let mut out = if c < floor {
        vec![floor]
    } else {
        match snap_to_coincidence(&b_sq, &b_lin, c, floor) {
            Some(floor) => vec![floor, c],
            None => vec![c],
        }
    };
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// Exact Euclidean representation of `h` in at most `n - 2` dimensions.
///
/// The returned points satisfy `u_center(pairwise_distances(points)) == h`
/// entrywise within [`REPRESENTATION_RTOL`] relative to `max|h|`.
pub fn euclidean_representation(h: &UCenteredMatrix) -> Result<EmbeddingResult> {
    let n = h.order();
    let out = represent(h, n - 2)?;
    if out.residual > REPRESENTATION_RTOL {
        return Err(Error::Representation {
            residual: out.residual,
        });
    }
    Ok(out)
}

/// Representation truncated to at most `k` dimensions. No exactness check;
/// the achieved residual is reported.
pub fn euclidean_representation_with_dim(h: &UCenteredMatrix, k: usize) -> Result<EmbeddingResult> {
    let n = h.order();
    if k == 0 || k > n - 1 {
        return Err(Error::OutOfDomain(format!(
            "embedding dimension {k} must lie in 1..={}",
            n - 1
        )));
    }
    represent(h, k)
}

fn represent(h: &UCenteredMatrix, k: usize) -> Result<EmbeddingResult> {
    let n = h.order();
    if n < MIN_U_CENTER_ORDER {
        return Err(Error::Size {
            needed: MIN_U_CENTER_ORDER,
            got: n,
        });
    }
    let d = h.as_dissimilarity();
    let mut best: Option<EmbeddingResult> = None;
    for c_star in constant_candidates(&d)? {
        let candidate = represent_with_constant(h, &d, c_star, k)?;
        let done = candidate.residual <= REPRESENTATION_RTOL;
        if best.as_ref().is_none_or(|b| candidate.residual < b.residual) {
            best = Some(candidate);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one candidate constant"))
}

fn represent_with_constant(h: &UCenteredMatrix, d: &DissimilarityMatrix, c_star: f64, k: usize) -> Result<EmbeddingResult> {
    let n = h.order();
    let mut constant = c_star.max(0.0);
    let mut adjusted = d.add_constant(constant);
    let (mut points, mut eigenvalues) = mds_points(adjusted.as_matrix(), k)?;
    if c_star < 0.0 && positive_count(&eigenvalues) > n - 2 {
        // Clipping a negative constant to zero can leave n - 1 positive axes;
        // c* itself always fits in n - 2.
        constant = c_star;
        adjusted = d.add_constant(constant);
        (points, eigenvalues) = mds_points(adjusted.as_matrix(), k)?;
    }
    let residual = u_center_residual(&points, h)?;
    Ok(EmbeddingResult {
        points,
        constant,
        eigenvalues,
        residual,
    })
}

/// `max|u_center(pairwise_distances(points)) - h| / max|h|`.
pub fn u_center_residual(points: &DataMatrix, h: &UCenteredMatrix) -> Result<f64> {
    let fitted = u_center(&pairwise_distances(points))?;
    let err = (fitted.as_matrix() - h.as_matrix()).amax();
    let scale = h.max_abs();
    Ok(if scale > 0.0 { err / scale } else { err })
}

fn positive_count(eigenvalues: &[f64]) -> usize {
    let tol = PSD_RTOL * max_abs(eigenvalues);
    eigenvalues.iter().filter(|&&l| l > tol).count()
}

/// Double centers `-d^2/2`, keeps the leading `k` positive axes. Returns the
/// points and the full descending spectrum.
fn mds_points(d: &DMatrix<f64>, k: usize) -> Result<(DataMatrix, Vec<f64>)> {
    let n = d.nrows();
    let b = double_center_matrix(&d.map(|v| -0.5 * v * v));
    let eig = SymmetricEigen::try_new(b, SCHUR_EPS, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let tol = AXIS_RTOL * max_abs(&eigenvalues);
    let axes: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| eig.eigenvalues[i] > tol)
        .take(k)
        .collect();
    let dim = axes.len().max(1);
    let mut values = vec![0.0; n * dim];
    for (col, &a) in axes.iter().enumerate() {
        let s = eig.eigenvalues[a].sqrt();
        let v = eig.eigenvectors.column(a);
        // Sign convention: the largest-magnitude coordinate is positive.
        let pivot = v.iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            values[i * dim + col] = sign * s * v[i];
        }
    }
    Ok((DataMatrix::from_row_major(n, dim, values)?, eigenvalues))
}

/// `B(d^2)` and `B(d)`, where `B(m)` double-centers `-m/2`.
fn cailliez_blocks(d: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let b_sq = double_center_matrix(&d.map(|v| -0.5 * v * v));
    let b_lin = double_center_matrix(&d.map(|v| -0.5 * v));
    (b_sq, b_lin)
}

fn centering_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 - 1.0 / n as f64 } else { -1.0 / n as f64 })
}

/// Smallest eigenpair of the double-centered `-(d + c)^2 / 2`, ignoring the
/// constant direction, together with the largest eigenvalue magnitude.
fn smallest_nontrivial(
    b_sq: &DMatrix<f64>,
    b_lin: &DMatrix<f64>,
    centering: &DMatrix<f64>,
    c: f64,
) -> Option<(f64, nalgebra::DVector<f64>)> {
    let n = b_sq.nrows();
    let m = b_sq + b_lin * (2.0 * c) + centering * (0.5 * c * c);
    let eig = SymmetricEigen::try_new(m, SCHUR_EPS, SCHUR_MAX_ITER)?;
    let ones = 1.0 / (n as f64).sqrt();
    // Drop the eigenvector closest to the constant direction.
    let trivial = (0..n).max_by(|&a, &b| {
        let pa = eig.eigenvectors.column(a).sum().abs() * ones;
        let pb = eig.eigenvectors.column(b).sum().abs() * ones;
        pa.total_cmp(&pb)
    })?;
    (0..n)
        .filter(|&i| i != trivial)
        .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
}

/// When the constant is pinned by a pair of points that must coincide, the
/// eigenvalue is (nearly) double and only accurate to about the square root
/// of machine precision. Returns the exact bound `-min d_ij` if it is close
/// and already Euclidean.
fn snap_to_coincidence(b_sq: &DMatrix<f64>, b_lin: &DMatrix<f64>, c: f64, floor: f64) -> Option<f64> {
    let n = b_sq.nrows();
    if n < 3 || c == floor || (c - floor).abs() > SNAP_RTOL * (1.0 + c.abs()) {
        return None;
    }
    let centering = centering_matrix(n);
    let top = (b_sq + b_lin * (2.0 * floor) + &centering * (0.5 * floor * floor)).amax();
    match smallest_nontrivial(b_sq, b_lin, &centering, floor) {
        Some((mu, _)) if mu >= -PSD_RTOL * top => Some(floor),
        _ => None,
    }
}

/// `-min d_ij` over `i != j`: no smaller constant leaves every adjusted
/// dissimilarity nonnegative.
fn nonnegativity_floor(d: &DMatrix<f64>) -> f64 {
    let n = d.nrows();
    let mut floor = f64::INFINITY;
    for j in 0..n {
        for i in 0..j {
            floor = floor.min(d[(i, j)]);
        }
    }
    -floor
}

/// Polishes the constant from the eigensolver.
///
/// The double-centered matrix of `-(d + c)^2 / 2` is
/// `B(d^2) + 2c B(d) + (c^2/2) J`. For the eigenvector `x` of its smallest
/// nontrivial eigenvalue, the Rayleigh quotient is a quadratic in `c`; its
/// largest root is the next iterate.
fn refine_constant(b_sq: &DMatrix<f64>, b_lin: &DMatrix<f64>, c0: f64) -> f64 {
    let n = b_sq.nrows();
    let centering = centering_matrix(n);
    let smallest = |c: f64| smallest_nontrivial(b_sq, b_lin, &centering, c);
    if n < 3 {
        return c0;
    }
    let Some((mut best_mu, mut x)) = smallest(c0) else {
        return c0;
    };
    let mut best = c0;
    for _ in 0..REFINE_STEPS {
        let a = x.dot(&(b_sq * &x));
        let b = x.dot(&(b_lin * &x));
        let disc = 4.0 * b * b - 2.0 * a;
        if disc < 0.0 {
            break;
        }
        let next = -2.0 * b + disc.sqrt();
        let Some((mu, xn)) = smallest(next) else {
            break;
        };
        if mu.abs() >= best_mu.abs() {
            break;
        }
        best = next;
        best_mu = mu;
        x = xn;
    }
    best
}
