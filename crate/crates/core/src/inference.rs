//! Permutation tests of independence and of zero partial distance
//! covariance, plus the linear-correlation baselines (partial correlation
//! t-test and the simple and partial Mantel tests).
//!
//! Permutation p-values use `(1 + #{T_k >= T_0}) / (1 + R)`. Replicate `k`
//! permutes with [`RngSpec::new(seed, k)`](crate::rng::RngSpec), so results
//! are bit-identical for any worker count.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::distgeom::{
    double_center, pairwise_distances, u_center, AsDissimilarity, DataMatrix, DissimilarityMatrix,
    UCenteredMatrix, MIN_U_CENTER_ORDER,
};
use crate::embed::{euclidean_representation, EmbeddingResult};
use crate::error::{Error, Result};
use crate::estimators::{dcor_sq_biased, dcor_star, dcov_sq_unbiased};
use crate::hilbert;
use crate::numeric::{compensated_sum, pearson};
use crate::partial::{Degeneracy, PdcorSummary, Projections};
use crate::rng::{RngSpec, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dcov,
    DcovIp,
    Pdcov,
    PcorT,
    Mantel,
    MantelPartial,
}

/// Which tail of the permutation distribution counts as extreme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alternative {
    /// `T_k >= T_0`.
    Greater,
    /// `|T_k| >= |T_0|`.
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub method: Method,
    pub statistic: f64,
    pub estimate: f64,
    pub p_value: f64,
    pub replicates: usize,
    pub seed: u64,
    #[serde(default)]
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationConfig {
    pub replicates: usize,
    pub seed: u64,
    /// `None` uses the global rayon pool, `Some(1)` runs inline.
    pub workers: Option<usize>,
    /// `None` selects the method's default tail.
    pub alternative: Option<Alternative>,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        Self {
            replicates: 999,
            seed: DEFAULT_SEED,
            workers: None,
            alternative: None,
        }
    }
}

impl PermutationConfig {
    pub fn new(replicates: usize, seed: u64) -> Self {
        Self {
            replicates,
            seed,
            ..Self::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_alternative(mut self, alternative: Alternative) -> Self {
        self.alternative = Some(alternative);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::OutOfDomain("at least one replicate is required".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::OutOfDomain("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// `(1 + #{t >= t0}) / (1 + len)`.
pub fn perm_pvalue(t0: f64, ts: &[f64]) -> f64 {
    let hits = ts.iter().filter(|&&t| t >= t0).count();
    (1 + hits) as f64 / (1 + ts.len()) as f64
}

fn tail_pvalue(t0: f64, ts: &[f64], alternative: Alternative) -> f64 {
    match alternative {
        Alternative::Greater => perm_pvalue(t0, ts),
        Alternative::TwoSided => {
            let abs: Vec<f64> = ts.iter().map(|t| t.abs()).collect();
            perm_pvalue(t0.abs(), &abs)
        }
    }
}

/// Evaluates `stat` on the permutation of every replicate.
pub fn replicate_statistics<F>(n: usize, cfg: &PermutationConfig, stat: F) -> Result<Vec<f64>>
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    cfg.validate()?;
    let one = |k: usize| stat(&RngSpec::new(cfg.seed, k as u64).permutation(n));
    let out = match cfg.workers {
        Some(1) => (0..cfg.replicates).map(one).collect(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(|| (0..cfg.replicates).into_par_iter().map(one).collect()),
        None => (0..cfg.replicates).into_par_iter().map(one).collect(),
    };
    Ok(out)
}

/// `sum_ij a[perm_i, perm_j] * b[i, j]`.
fn permuted_dot(a: &DMatrix<f64>, perm: &[usize], b: &DMatrix<f64>) -> f64 {
    let n = b.nrows();
    let mut s = 0.0;
    for j in 0..n {
        let aj = a.column(perm[j]);
        let bj = b.column(j);
        for i in 0..n {
            s += aj[perm[i]] * bj[i];
        }
    }
    s
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_order(n: usize) -> Result<()> {
    if n < MIN_U_CENTER_ORDER {
        return Err(Error::Size {
            needed: MIN_U_CENTER_ORDER,
            got: n,
        });
    }
    Ok(())
}

fn check_same(n: usize, other: usize) -> Result<()> {
    if n != other {
        return Err(Error::Dimension {
            expected: n,
            got: other,
        });
    }
    Ok(())
}

fn degenerate_result(method: Method, statistic: f64, estimate: f64, cfg: &PermutationConfig) -> TestResult {
    TestResult {
        method,
        statistic,
        estimate,
        p_value: 1.0,
        replicates: cfg.replicates,
        seed: cfg.seed,
        degenerate: true,
    }
}

/// Permutation dCov test of independence with statistic `n V_n^2(x, y)`.
/// Replicates permute the observations of `x`.
pub fn dcov_test(
    x: &impl AsDissimilarity,
    y: &impl AsDissimilarity,
    cfg: &PermutationConfig,
) -> Result<TestResult> {
    cfg.validate()?;
    let n = x.order();
    check_same(n, y.order())?;
    check_order(n)?;
    let (a, b) = (x.dissimilarity(), y.dissimilarity());
    let (ah, bh) = (double_center(&a), double_center(&b));
    let estimate = dcor_sq_biased(&*a, &*b)?.sqrt();
    let nf = n as f64;
    if ah.iter().all(|&v| v == 0.0) || bh.iter().all(|&v| v == 0.0) {
        return Ok(degenerate_result(Method::Dcov, 0.0, estimate, cfg));
    }
    let stat = |perm: &[usize]| permuted_dot(&ah, perm, &bh) / nf;
    let t0 = stat(&identity(n));
    let ts = replicate_statistics(n, cfg, stat)?;
    Ok(TestResult {
        method: Method::Dcov,
        statistic: t0,
        estimate,
        p_value: tail_pvalue(t0, &ts, cfg.alternative.unwrap_or(Alternative::Greater)),
        replicates: cfg.replicates,
        seed: cfg.seed,
        degenerate: false,
    })
}

/// Permutation test on `n (A . B)`, the unbiased statistic, valid for
/// arbitrary dissimilarities. Replicates relabel rows and columns of `a`
/// together. The estimate is `R*`.
pub fn dcov_ip_test(
    a: &impl AsDissimilarity,
    b: &impl AsDissimilarity,
    cfg: &PermutationConfig,
) -> Result<TestResult> {
    cfg.validate()?;
    let n = a.order();
    check_same(n, b.order())?;
    check_order(n)?;
    let (da, db) = (a.dissimilarity(), b.dissimilarity());
    let (au, bu) = (u_center(&da)?, u_center(&db)?);
    let statistic = n as f64 * dcov_sq_unbiased(&*da, &*db)?;
    let estimate = dcor_star(&*da, &*db)?;
    if hilbert::is_degenerate(&au)? || hilbert::is_degenerate(&bu)? {
        return Ok(degenerate_result(Method::DcovIp, statistic, estimate, cfg));
    }
    let (ts, t0) = inner_product_replicates(&au, &bu, cfg)?;
    Ok(TestResult {
        method: Method::DcovIp,
        statistic,
        estimate,
        p_value: tail_pvalue(t0, &ts, cfg.alternative.unwrap_or(Alternative::Greater)),
        replicates: cfg.replicates,
        seed: cfg.seed,
        degenerate: false,
    })
}

/// Replicates of `n (A[perm] . B)` and the unpermuted value computed the
/// same way.
fn inner_product_replicates(
    a: &UCenteredMatrix,
    b: &UCenteredMatrix,
    cfg: &PermutationConfig,
) -> Result<(Vec<f64>, f64)> {
    let n = a.order();
    let scale = 1.0 / (n as f64 - 3.0);
    let (am, bm) = (a.as_matrix(), b.as_matrix());
    let stat = |perm: &[usize]| permuted_dot(am, perm, bm) * scale;
    let t0 = stat(&identity(n));
    Ok((replicate_statistics(n, cfg, stat)?, t0))
}

/// Euclidean configurations whose U-centered distance matrices equal the two
/// projections of a partial dCov problem.
#[derive(Debug, Clone)]
pub struct ProjectedSamples {
    pub summary: PdcorSummary,
    pub u: EmbeddingResult,
    pub v: EmbeddingResult,
    u_centered: UCenteredMatrix,
    v_centered: UCenteredMatrix,
}

impl ProjectedSamples {
    /// `None` when a projection has zero norm.
    pub fn new(
        x: &impl AsDissimilarity,
        y: &impl AsDissimilarity,
        z: &impl AsDissimilarity,
    ) -> Result<Option<Self>> {
        let p = Projections::new(x, y, z)?;
        let summary = p.summary()?;
        if summary.degenerate == Degeneracy::ZeroNormXy {
            return Ok(None);
        }
        let u = euclidean_representation(&p.px)?;
        let v = euclidean_representation(&p.py)?;
        let u_centered = u_center(&pairwise_distances(&u.points))?;
        let v_centered = u_center(&pairwise_distances(&v.points))?;
        Ok(Some(Self {
            summary,
            u,
            v,
            u_centered,
            v_centered,
        }))
    }

    /// Inner-product test on the embedded samples.
    pub fn pdcov_test(&self, cfg: &PermutationConfig) -> Result<TestResult> {
        cfg.validate()?;
        let n = self.u_centered.order() as f64;
        let statistic = n * hilbert::inner(&self.u_centered, &self.v_centered)?;
        let (ts, t0) = inner_product_replicates(&self.u_centered, &self.v_centered, cfg)?;
        Ok(TestResult {
            method: Method::Pdcov,
            statistic,
            estimate: self.summary.pdcor,
            p_value: tail_pvalue(t0, &ts, cfg.alternative.unwrap_or(Alternative::Greater)),
            replicates: cfg.replicates,
            seed: cfg.seed,
            degenerate: false,
        })
    }

    /// Biased dCov test applied to the embedded samples.
    pub fn dcov_test(&self, cfg: &PermutationConfig) -> Result<TestResult> {
        let mut r = dcov_test(&self.u.points, &self.v.points, cfg)?;
        r.estimate = self.summary.pdcor;
        Ok(r)
    }
}

/// Permutation test of zero partial distance covariance.
///
/// The projections of `x` and `y` onto the complement of `z` are represented
/// as Euclidean samples `U` and `V`; the statistic is `n (U~ . V~)` and
/// replicates permute the rows of `U`. The estimate is the sample pdCor.
pub fn pdcov_test(
    x: &impl AsDissimilarity,
    y: &impl AsDissimilarity,
    z: &impl AsDissimilarity,
    cfg: &PermutationConfig,
) -> Result<TestResult> {
    cfg.validate()?;
    match ProjectedSamples::new(x, y, z)? {
        Some(samples) => samples.pdcov_test(cfg),
        None => {
            let s = Projections::new(x, y, z)?;
            let n = s.order() as f64;
            Ok(degenerate_result(Method::Pdcov, n * s.pdcov()?, 0.0, cfg))
        }
    }
}

/// Reference distribution for the partial correlation t statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcorReference {
    /// Standard normal, as in common partial-correlation software. Liberal
    /// for small samples.
    #[default]
    Normal,
    /// Student t with `n - 3` degrees of freedom.
    StudentT,
}

/// Sample partial correlation `r(x, y; z)` of univariate samples.
pub fn partial_correlation(x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    let n = x.len();
    check_same(n, y.len())?;
    check_same(n, z.len())?;
    let rxy = pearson(x, y).ok_or_else(|| Error::Degenerate("x or y has zero variance".into()))?;
    let rxz = pearson(x, z).ok_or(Error::UndefinedPartial)?;
    let ryz = pearson(y, z).ok_or(Error::UndefinedPartial)?;
    partial_from_correlations(rxy, rxz, ryz)
}

fn partial_from_correlations(rxy: f64, rxz: f64, ryz: f64) -> Result<f64> {
    let den = (1.0 - rxz * rxz) * (1.0 - ryz * ryz);
    if den <= 0.0 {
        return Err(Error::UndefinedPartial);
    }
    Ok(((rxy - rxz * ryz) / den.sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided partial correlation test with statistic
/// `t = r sqrt((n - 3) / (1 - r^2))`.
pub fn pcor_test(x: &[f64], y: &[f64], z: &[f64], reference: PcorReference) -> Result<TestResult> {
    let n = x.len();
    if n < 5 {
        return Err(Error::Size { needed: 5, got: n });
    }
    let r = partial_correlation(x, y, z)?;
    let df = n as f64 - 3.0;
    let t = if r.abs() >= 1.0 {
        f64::INFINITY.copysign(r)
    } else {
        r * (df / (1.0 - r * r)).sqrt()
    };
    let p_value = match reference {
        PcorReference::Normal => 2.0 * Normal::standard().sf(t.abs()),
        PcorReference::StudentT => {
            let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Numeric(e.to_string()))?;
            2.0 * dist.sf(t.abs())
        }
    };
    Ok(TestResult {
        method: Method::PcorT,
        statistic: t,
        estimate: r,
        p_value: p_value.min(1.0),
        replicates: 0,
        seed: 0,
        degenerate: false,
    })
}

/// Pearson correlation with its two-sided t test on `n - 2` degrees of
/// freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTest {
    pub r: f64,
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

pub fn pearson_t_test(x: &[f64], y: &[f64]) -> Result<CorrelationTest> {
    let n = x.len();
    check_same(n, y.len())?;
    if n < 3 {
        return Err(Error::Size { needed: 3, got: n });
    }
    let r = pearson(x, y).ok_or_else(|| Error::Degenerate("zero variance".into()))?;
    let df = n as f64 - 2.0;
    let t = if r.abs() >= 1.0 {
        f64::INFINITY.copysign(r)
    } else {
        r * (df / (1.0 - r * r)).sqrt()
    };
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(CorrelationTest {
        r,
        t,
        df,
        p_value: (2.0 * dist.sf(t.abs())).min(1.0),
    })
}

/// Standardized upper triangle (population standard deviation), or `None`
/// when it is constant.
fn standardized_upper(d: &DissimilarityMatrix) -> Option<Vec<f64>> {
    let u = d.upper_triangle();
    let m = u.len() as f64;
    let mean = compensated_sum(u.iter().copied()) / m;
    let ss = compensated_sum(u.iter().map(|v| (v - mean) * (v - mean)));
    if ss <= 0.0 {
        return None;
    }
    let sd = (ss / m).sqrt();
    Some(u.iter().map(|v| (v - mean) / sd).collect())
}

/// Partial Mantel test: linear partial correlation of the upper triangles of
/// `dx` and `dy` controlling for `dz`, with replicates relabeling rows and
/// columns of `dx` together. A `dz` with constant upper triangle (such as
/// the zero matrix) gives the simple Mantel statistic.
///
/// Two-sided by default: `|T_k| >= |T_0|`.
pub fn mantel_partial_test(
    dx: &DissimilarityMatrix,
    dy: &DissimilarityMatrix,
    dz: &DissimilarityMatrix,
    cfg: &PermutationConfig,
) -> Result<TestResult> {
    mantel_impl(dx, dy, dz, cfg, Method::MantelPartial)
}

/// Simple Mantel test, the partial test with a zero conditioning matrix.
pub fn mantel_test(dx: &DissimilarityMatrix, dy: &DissimilarityMatrix, cfg: &PermutationConfig) -> Result<TestResult> {
    mantel_impl(dx, dy, &DissimilarityMatrix::zeros(dx.order()), cfg, Method::Mantel)
}

fn mantel_impl(
    dx: &DissimilarityMatrix,
    dy: &DissimilarityMatrix,
    dz: &DissimilarityMatrix,
    cfg: &PermutationConfig,
    method: Method,
) -> Result<TestResult> {
    cfg.validate()?;
    let n = dx.order();
    check_same(n, dy.order())?;
    check_same(n, dz.order())?;
    check_order(n)?;
    let (Some(zx), Some(zy)) = (standardized_upper(dx), standardized_upper(dy)) else {
        return Ok(degenerate_result(method, 0.0, 0.0, cfg));
    };
    let zz = standardized_upper(dz);
    let m = zx.len() as f64;
    // Standardized dx laid out as a full symmetric matrix for relabeling.
    let mut zx_full = DMatrix::zeros(n, n);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        zx_full[(i, j)] = zx[k];
        zx_full[(j, i)] = zx[k];
    }
    let ryz = zz
        .as_ref()
        .map(|zz| compensated_sum(zy.iter().zip(zz).map(|(p, q)| p * q)) / m);
    let stat = |perm: &[usize]| -> f64 {
        let mut sxy = 0.0;
        let mut sxz = 0.0;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let v = zx_full[(perm[i], perm[j])];
            sxy += v * zy[k];
            if let Some(zz) = &zz {
                sxz += v * zz[k];
            }
        }
        let rxy = (sxy / m).clamp(-1.0, 1.0);
        match ryz {
            None => rxy,
            Some(ryz) => {
                let rxz = (sxz / m).clamp(-1.0, 1.0);
                let den = (1.0 - rxz * rxz) * (1.0 - ryz * ryz);
                if den <= 0.0 {
                    0.0
                } else {
                    ((rxy - rxz * ryz) / den.sqrt()).clamp(-1.0, 1.0)
                }
            }
        }
    };
    let t0 = stat(&identity(n));
    let ts = replicate_statistics(n, cfg, stat)?;
    Ok(TestResult {
        method,
        statistic: t0,
        estimate: t0,
        p_value: tail_pvalue(t0, &ts, cfg.alternative.unwrap_or(Alternative::TwoSided)),
        replicates: cfg.replicates,
        seed: cfg.seed,
        degenerate: false,
    })
}

/// Partial Mantel test on raw univariate or multivariate samples.
pub fn mantel_partial_test_data(
    x: &DataMatrix,
    y: &DataMatrix,
    z: &DataMatrix,
    cfg: &PermutationConfig,
) -> Result<TestResult> {
    mantel_partial_test(
        &pairwise_distances(x),
        &pairwise_distances(y),
        &pairwise_distances(z),
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> DataMatrix {
        DataMatrix::from_column(v).unwrap()
    }

    const X: [f64; 8] = [0.3, -1.2, 2.2, 0.0, 1.1, -0.4, 3.0, 0.7];
    const Y: [f64; 8] = [1.0, 0.2, -0.7, 2.5, 0.1, -1.9, 0.6, 0.0];
    const Z: [f64; 8] = [-0.5, 1.5, 0.8, 0.9, -2.1, 0.4, 1.2, -1.0];

    #[test]
    fn pvalue_formula() {
        let ts: Vec<f64> = (0..9).map(f64::from).collect();
        assert_eq!(perm_pvalue(100.0, &ts), 0.1);
        assert_eq!(perm_pvalue(-1.0, &ts), 1.0);
        let ts: Vec<f64> = (0..499).map(|k| if k < 24 { 2.0 } else { 0.0 }).collect();
        assert_eq!(perm_pvalue(1.0, &ts), 0.05);
        // Ties count.
        assert_eq!(perm_pvalue(2.0, &ts), 0.05);
    }

    #[test]
    fn tests_are_deterministic() {
        let cfg = PermutationConfig::new(199, 11);
        let a = dcov_test(&col(&X), &col(&Y), &cfg).unwrap();
        let b = dcov_test(&col(&X), &col(&Y), &cfg).unwrap();
        assert_eq!(a, b);
        let c = dcov_test(&col(&X), &col(&Y), &cfg.with_workers(1)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn self_dependence_is_maximal() {
        let cfg = PermutationConfig::new(199, 5);
        let r = dcov_test(&col(&X), &col(&X), &cfg).unwrap();
        assert!(r.p_value <= 0.02, "p = {}", r.p_value);
    }

    #[test]
    fn constant_sample_is_degenerate() {
        let cfg = PermutationConfig::new(50, 1);
        let r = dcov_test(&col(&[1.0; 8]), &col(&Y), &cfg).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
        let r = dcov_ip_test(&col(&[1.0; 8]), &col(&Y), &cfg).unwrap();
        assert!(r.degenerate);
    }

    #[test]
    fn dcov_ip_statistic_is_n_times_unbiased() {
        let (x, y) = (col(&X), col(&Y));
        let r = dcov_ip_test(&x, &y, &PermutationConfig::new(20, 3)).unwrap();
        assert_eq!(r.statistic, 8.0 * dcov_sq_unbiased(&x, &y).unwrap());
        assert_eq!(r.estimate, dcor_star(&x, &y).unwrap());
    }

    #[test]
    fn pdcov_statistic_matches_projection_inner_product() {
        let (x, y, z) = (col(&X), col(&Y), col(&Z));
        let r = pdcov_test(&x, &y, &z, &PermutationConfig::new(99, 3)).unwrap();
        let direct = 8.0 * crate::partial::pdcov_sample(&x, &y, &z).unwrap();
        assert!((r.statistic - direct).abs() <= 1e-8 * direct.abs().max(1e-12));
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
    }

    #[test]
    fn pdcov_on_identical_samples_is_degenerate() {
        let x = col(&X);
        let r = pdcov_test(&x, &x, &x, &PermutationConfig::new(10, 1)).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn partial_correlation_of_equal_pairwise_correlations() {
        assert!((partial_from_correlations(0.5, 0.5, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            partial_from_correlations(0.5, 1.0, 0.5),
            Err(Error::UndefinedPartial)
        ));
    }

    #[test]
    fn pcor_requires_five_points() {
        assert!(pcor_test(&X[..4], &Y[..4], &Z[..4], PcorReference::Normal).is_err());
        let r = pcor_test(&X, &Y, &Z, PcorReference::Normal).unwrap();
        let s = pcor_test(&X, &Y, &Z, PcorReference::StudentT).unwrap();
        assert_eq!(r.statistic, s.statistic);
        assert!(s.p_value > r.p_value);
    }

    #[test]
    fn pcor_collinear_condition_is_undefined() {
        let z: Vec<f64> = X.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!(matches!(
            pcor_test(&X, &Y, &z, PcorReference::Normal),
            Err(Error::UndefinedPartial)
        ));
    }

    #[test]
    fn mantel_self_association() {
        let d = pairwise_distances(&col(&X));
        let r = mantel_test(&d, &d, &PermutationConfig::new(199, 2)).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert!(r.p_value <= 0.02);
    }

    #[test]
    fn mantel_statistic_is_pearson_of_triangles() {
        let dx = pairwise_distances(&col(&X));
        let dy = pairwise_distances(&col(&Y));
        let r = mantel_test(&dx, &dy, &PermutationConfig::new(10, 2)).unwrap();
        let expected = pearson(&dx.upper_triangle(), &dy.upper_triangle()).unwrap();
        assert!((r.statistic - expected).abs() < 1e-12);

        let dz = pairwise_distances(&col(&Z));
        let p = mantel_partial_test(&dx, &dy, &dz, &PermutationConfig::new(10, 2)).unwrap();
        let expected =
            partial_correlation(&dx.upper_triangle(), &dy.upper_triangle(), &dz.upper_triangle()).unwrap();
        assert!((p.statistic - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_replicates_rejected() {
        assert!(dcov_test(&col(&X), &col(&Y), &PermutationConfig::new(0, 1)).is_err());
    }
}
