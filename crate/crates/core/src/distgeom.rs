//! Distance and dissimilarity matrices, double centering, and U-centering.
//!
//! Three matrix newtypes carry the invariants the rest of the crate relies on:
//!
//! * [`DataMatrix`]: `n` observations of `p` finite coordinates, row-major.
//! * [`DissimilarityMatrix`]: square, symmetric, zero diagonal, finite. Entries
//!   may be negative; heterosis-style dissimilarities routinely are.
//! * [`UCenteredMatrix`]: an element of the space of U-centered matrices of
//!   order `n >= 4` (symmetric, zero diagonal, zero row and column sums).

use std::borrow::Cow;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, max_abs};

/// Absolute tolerance used when checking dissimilarity symmetry.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Relative tolerance on row sums of a U-centered matrix.
pub const ROW_SUM_RTOL: f64 = 1e-9;

/// Smallest order for which the U-centered inner product is defined.
pub const MIN_U_CENTER_ORDER: usize = 4;

const PARALLEL_ROWS: usize = 256;

/// A sample of `n` observations in `p` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    /// Builds a matrix from row-major values.
    pub fn from_row_major(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "data matrix must have at least one row and one column, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidInput(format!(
                "row {i} has {} columns, expected {cols}",
                r.len()
            )));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// A univariate sample.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::from_row_major(values.len(), 1, values.to_vec())
    }

    /// Column-wise concatenation of several univariate samples.
    pub fn from_columns(columns: &[&[f64]]) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.len());
        if let Some(c) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: c.len(),
            });
        }
        let p = columns.len();
        let mut values = Vec::with_capacity(n * p);
        for i in 0..n {
            values.extend(columns.iter().map(|c| c[i]));
        }
        Self::from_row_major(n, p, values)
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            values.extend(m.row(i).iter().copied());
        }
        Self::from_row_major(rows, cols, values)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.values)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&j) = columns.iter().find(|&&j| j >= self.cols) {
            return Err(Error::OutOfDomain(format!(
                "column {j} out of range for {} columns",
                self.cols
            )));
        }
        let mut values = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            values.extend(columns.iter().map(|&j| self.get(i, j)));
        }
        Self::from_row_major(self.rows, columns.len(), values)
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows, "permutation length must equal row count");
        let mut values = Vec::with_capacity(self.values.len());
        for &src in perm {
            values.extend_from_slice(self.row(src));
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            values,
        }
    }

    /// Centers each column and scales it to unit sample standard deviation.
    /// Constant columns become all zeros.
    pub fn standardized(&self) -> Self {
        let mut out = self.values.clone();
        let n = self.rows as f64;
        for j in 0..self.cols {
            let col = self.column(j);
            let mean = compensated_sum(col.iter().copied()) / n;
            let ss = compensated_sum(col.iter().map(|v| (v - mean) * (v - mean)));
            let sd = if self.rows > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
            for i in 0..self.rows {
                let v = &mut out[i * self.cols + j];
                *v = if sd > 0.0 { (*v - mean) / sd } else { 0.0 };
            }
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            values: out,
        }
    }

    /// True when every row equals the first row.
    pub fn is_constant(&self) -> bool {
        let first = self.row(0);
        (1..self.rows).all(|i| self.row(i) == first)
    }
}

/// A symmetric, zero-diagonal matrix of finite dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    m: DMatrix<f64>,
}

impl DissimilarityMatrix {
    /// Validates symmetry (absolute tolerance [`SYMMETRY_TOL`]), zero diagonal,
    /// and finiteness. Near-symmetric input is stored exactly symmetrized.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = check_square_finite(&m)?;
        for i in 0..n {
            if m[(i, i)] != 0.0 {
                return Err(Error::NonZeroDiagonal {
                    i,
                    value: m[(i, i)],
                });
            }
            for j in (i + 1)..n {
                if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        upper: m[(i, j)],
                        lower: m[(j, i)],
                    });
                }
            }
        }
        Ok(Self::symmetrize(m))
    }

    /// Accepts any square finite matrix with zero diagonal and replaces it
    /// with `(m + m^T) / 2`.
    pub fn symmetrized(m: DMatrix<f64>) -> Result<Self> {
        let n = check_square_finite(&m)?;
        if let Some(i) = (0..n).find(|&i| m[(i, i)] != 0.0) {
            return Err(Error::NonZeroDiagonal {
                i,
                value: m[(i, i)],
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// Builds a matrix from its strict upper triangle, given row by row.
    pub fn from_upper_triangle(n: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Dimension {
                expected: n * n.saturating_sub(1) / 2,
                got: upper.len(),
            });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                m[(i, j)] = upper[k];
                m[(j, i)] = upper[k];
                k += 1;
            }
        }
        Self::new(m)
    }

    fn symmetrize(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { m }
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self { m }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: DMatrix::zeros(n, n),
        }
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Entry `(i, j)` of the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            m: permute_symmetric(&self.m, perm),
        }
    }

    /// Strict upper triangle, row by row: `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    /// Adds `c` to every off-diagonal entry.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut m = self.m.add_scalar(c);
        m.fill_diagonal(0.0);
        Self { m }
    }

    /// Largest off-diagonal magnitude.
    pub fn max_abs(&self) -> f64 {
        max_abs(self.m.iter())
    }
}

/// An element of the Hilbert space of U-centered matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct UCenteredMatrix {
    m: DMatrix<f64>,
}

impl UCenteredMatrix {
    /// Validates all invariants: order at least 4, symmetric, zero diagonal,
    /// and row sums zero within `ROW_SUM_RTOL * max|entry|`.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let d = DissimilarityMatrix::new(m)?;
        let n = d.order();
        if n < MIN_U_CENTER_ORDER {
            return Err(Error::Size {
                needed: MIN_U_CENTER_ORDER,
                got: n,
            });
        }
        let tol = ROW_SUM_RTOL * d.max_abs();
        for i in 0..n {
            let s = compensated_sum(d.m.row(i).iter().copied());
            if s.abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "row {i} of a U-centered matrix sums to {s:e}"
                )));
            }
        }
        Ok(Self { m: d.m })
    }

    /// Re-symmetrizes and zeros the diagonal; callers guarantee the rest.
    pub(crate) fn from_matrix_unchecked(mut m: DMatrix<f64>) -> Self {
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)] = 0.0;
            for j in (i + 1)..n {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self { m }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        if n < MIN_U_CENTER_ORDER {
            return Err(Error::Size {
                needed: MIN_U_CENTER_ORDER,
                got: n,
            });
        }
        Ok(Self {
            m: DMatrix::zeros(n, n),
        })
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Reinterprets the matrix as a (generally non-metric) dissimilarity.
    pub fn as_dissimilarity(&self) -> DissimilarityMatrix {
        DissimilarityMatrix::from_matrix_unchecked(self.m.clone())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            m: permute_symmetric(&self.m, perm),
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.m.iter())
    }

    /// Largest absolute row sum.
    pub fn max_row_sum(&self) -> f64 {
        self.m
            .row_iter()
            .map(|r| compensated_sum(r.iter().copied()).abs())
            .fold(0.0, f64::max)
    }
}

/// Anything that yields a dissimilarity matrix: raw samples produce their
/// Euclidean distance matrix, dissimilarities are used as given.
pub trait AsDissimilarity {
    fn dissimilarity(&self) -> Cow<'_, DissimilarityMatrix>;

    fn order(&self) -> usize {
        self.dissimilarity().order()
    }
}

impl AsDissimilarity for DataMatrix {
    fn dissimilarity(&self) -> Cow<'_, DissimilarityMatrix> {
        Cow::Owned(pairwise_distances(self))
    }

    fn order(&self) -> usize {
        self.nrows()
    }
}

impl AsDissimilarity for DissimilarityMatrix {
    fn dissimilarity(&self) -> Cow<'_, DissimilarityMatrix> {
        Cow::Borrowed(self)
    }
}

impl<T: AsDissimilarity + ?Sized> AsDissimilarity for &T {
    fn dissimilarity(&self) -> Cow<'_, DissimilarityMatrix> {
        (**self).dissimilarity()
    }

    fn order(&self) -> usize {
        (**self).order()
    }
}

/// Euclidean distance matrix of the rows of `x`.
pub fn pairwise_distances(x: &DataMatrix) -> DissimilarityMatrix {
    let n = x.nrows();
    let row_of = |i: usize| -> Vec<f64> {
        let xi = x.row(i);
        (0..n)
            .map(|j| {
                xi.iter()
                    .zip(x.row(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    };
    let rows: Vec<Vec<f64>> = if n >= PARALLEL_ROWS {
        (0..n).into_par_iter().map(row_of).collect()
    } else {
        (0..n).map(row_of).collect()
    };
    // Column-major fill of a symmetric matrix: column i is row i.
    DissimilarityMatrix::from_matrix_unchecked(DMatrix::from_vec(n, n, rows.concat()))
}

/// Bray-Curtis dissimilarity with the `1/p` normalization:
/// `(1/p) * sum_k |x_ik - x_jk| / sum_k (x_ik + x_jk)`.
///
/// Note the extra `1/p` factor relative to the usual ecology convention.
pub fn bray_curtis(x: &DataMatrix) -> Result<DissimilarityMatrix> {
    let n = x.nrows();
    let p = x.ncols() as f64;
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (xi, xj) = (x.row(i), x.row(j));
            let num: f64 = xi.iter().zip(xj).map(|(a, b)| (a - b).abs()).sum();
            let den: f64 = xi.iter().zip(xj).map(|(a, b)| a + b).sum();
            if den == 0.0 {
                return Err(Error::DegeneratePair { i, j });
            }
            let v = num / den / p;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(DissimilarityMatrix::from_matrix_unchecked(m))
}

/// Classical double centering: `a_ij - mean_i. - mean_.j + mean_..`.
/// Row and column sums of the result vanish; the diagonal generally does not.
pub fn double_center(d: &DissimilarityMatrix) -> DMatrix<f64> {
    double_center_matrix(d.as_matrix())
}

/// Double centering of an arbitrary square matrix.
pub(crate) fn double_center_matrix(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let nf = n as f64;
    let row_means: Vec<f64> = a
        .row_iter()
        .map(|r| compensated_sum(r.iter().copied()) / nf)
        .collect();
    let col_means: Vec<f64> = a
        .column_iter()
        .map(|c| compensated_sum(c.iter().copied()) / nf)
        .collect();
    let grand = compensated_sum(row_means.iter().copied()) / nf;
    DMatrix::from_fn(n, n, |i, j| a[(i, j)] - row_means[i] - col_means[j] + grand)
}

/// U-centering. Requires `n >= 4`.
pub fn u_center(d: &DissimilarityMatrix) -> Result<UCenteredMatrix> {
    let n = d.order();
    if n < MIN_U_CENTER_ORDER {
        return Err(Error::Size {
            needed: MIN_U_CENTER_ORDER,
            got: n,
        });
    }
    let a = d.as_matrix();
    let nf = n as f64;
    // Symmetric input: row sums equal column sums.
    let sums: Vec<f64> = a
        .column_iter()
        .map(|c| compensated_sum(c.iter().copied()))
        .collect();
    let total = compensated_sum(sums.iter().copied());
    let scaled: Vec<f64> = sums.iter().map(|s| s / (nf - 2.0)).collect();
    let grand = total / ((nf - 1.0) * (nf - 2.0));
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            a[(i, j)] - scaled[i] - scaled[j] + grand
        }
    });
    Ok(UCenteredMatrix { m })
}

fn check_square_finite(m: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::Dimension {
            expected: r,
            got: c,
        });
    }
    if r == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    for j in 0..c {
        for i in 0..r {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(r)
}

fn permute_symmetric(m: &DMatrix<f64>, perm: &[usize]) -> DMatrix<f64> {
    let n = m.nrows();
    assert_eq!(perm.len(), n, "permutation length must equal matrix order");
    DMatrix::from_fn(n, n, |i, j| m[(perm[i], perm[j])])
}
