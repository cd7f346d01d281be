//! Monte Carlo estimates of Type-1 error and power for the pdCov, dCov,
//! partial Mantel and partial correlation tests on trivariate samples.

use std::io::Write;

use nalgebra::{Cholesky, Matrix3, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distgeom::DataMatrix;
use crate::error::{Error, Result};
use crate::inference::{
    mantel_partial_test_data, pcor_test, PcorReference, PermutationConfig, ProjectedSamples,
};
use crate::rng::{derive_seed, RngSpec, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// X, Y, Z iid standard normal.
    NormalIndep,
    /// X standard lognormal, Y and Z standard normal, all independent.
    LognormalIndep,
    /// Standard normal marginals with the configured correlations.
    NormalCorr,
    /// As `NormalCorr`, then X is replaced by exp(X).
    LognormalCorr,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::NormalIndep => "normal_indep",
            Generator::LognormalIndep => "lognormal_indep",
            Generator::NormalCorr => "normal_corr",
            Generator::LognormalCorr => "lognormal_corr",
        }
    }

    fn is_lognormal(&self) -> bool {
        matches!(self, Generator::LognormalIndep | Generator::LognormalCorr)
    }

    pub fn is_correlated(&self) -> bool {
        matches!(self, Generator::NormalCorr | Generator::LognormalCorr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMethod {
    Pdcov,
    /// Biased dCov test applied to the Euclidean representations of the
    /// projections.
    Dcov,
    Mantel,
    Pcor,
}

impl SimMethod {
    pub const ALL: [SimMethod; 4] = [SimMethod::Pdcov, SimMethod::Dcov, SimMethod::Mantel, SimMethod::Pcor];

    pub fn name(&self) -> &'static str {
        match self {
            SimMethod::Pdcov => "pdcov",
            SimMethod::Dcov => "dcov",
            SimMethod::Mantel => "mantel",
            SimMethod::Pcor => "pcor",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub sims: usize,
    pub replicates: usize,
    pub alphas: Vec<f64>,
    pub generator: Generator,
    /// Correlations (X,Y), (X,Z), (Y,Z) of the latent normal vector. Ignored
    /// by the independent generators.
    pub correlations: [f64; 3],
    pub seed: u64,
    pub pcor_reference: PcorReference,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 30,
            sims: 1000,
            replicates: 199,
            alphas: vec![0.05, 0.10],
            generator: Generator::NormalIndep,
            correlations: [0.0; 3],
            seed: DEFAULT_SEED,
            pcor_reference: PcorReference::Normal,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sims == 0 || self.replicates == 0 {
            return Err(Error::OutOfDomain("sims and replicates must be positive".into()));
        }
        if self.n < 5 {
            return Err(Error::Size { needed: 5, got: self.n });
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::OutOfDomain(format!("alpha {a} outside (0, 1)")));
        }
        if self.generator.is_correlated() {
            self.cholesky()?;
        }
        Ok(())
    }

    fn cholesky(&self) -> Result<Matrix3<f64>> {
        let [rxy, rxz, ryz] = self.correlations;
        let s = Matrix3::new(1.0, rxy, rxz, rxy, 1.0, ryz, rxz, ryz, 1.0);
        Cholesky::new(s)
            .map(|c| c.l())
            .ok_or_else(|| Error::OutOfDomain(format!("correlations {:?} are not positive definite", self.correlations)))
    }
}

/// A trivariate sample of size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trivariate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

/// Draws one trivariate sample. A lognormal X is standardized to mean 0 and
/// unit standard deviation after exponentiation.
pub fn gen_trivariate(config: &SimConfig, rng: &mut ChaCha8Rng) -> Result<Trivariate> {
    let l = if config.generator.is_correlated() {
        config.cholesky()?
    } else {
        Matrix3::identity()
    };
    let n = config.n;
    let (mut x, mut y, mut z) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for _ in 0..n {
        let e = Vector3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
        let v = l * e;
        x.push(v[0]);
        y.push(v[1]);
        z.push(v[2]);
    }
    if config.generator.is_lognormal() {
        x = standardize(x.iter().map(|v| v.exp()).collect());
    }
    Ok(Trivariate { x, y, z })
}

fn standardize(v: Vec<f64>) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd == 0.0 {
        return v.iter().map(|_| 0.0).collect();
    }
    v.iter().map(|a| (a - mean) / sd).collect()
}

/// The four p-values for one dataset, ordered as [`SimMethod::ALL`].
pub fn dataset_pvalues(sample: &Trivariate, replicates: usize, seed: u64, reference: PcorReference) -> Result<[f64; 4]> {
    let cfg = PermutationConfig {
        replicates,
        seed,
        workers: Some(1),
        alternative: None,
    };
    let x = DataMatrix::from_column(&sample.x)?;
    let y = DataMatrix::from_column(&sample.y)?;
    let z = DataMatrix::from_column(&sample.z)?;
    let (pdcov, dcov) = match ProjectedSamples::new(&x, &y, &z)? {
        Some(s) => (s.pdcov_test(&cfg)?.p_value, s.dcov_test(&cfg)?.p_value),
        None => (1.0, 1.0),
    };
    let mantel = mantel_partial_test_data(&x, &y, &z, &cfg)?.p_value;
    let pcor = match pcor_test(&sample.x, &sample.y, &sample.z, reference) {
        Ok(r) => r.p_value,
        Err(Error::UndefinedPartial) => 1.0,
        Err(e) => return Err(e),
    };
    Ok([pdcov, dcov, mantel, pcor])
}

/// Rejection fraction for one method, sample size and level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub generator: Generator,
    pub n: usize,
    pub alpha: f64,
    pub method: SimMethod,
    pub rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / sims)`.
    pub se: f64,
    pub sims: usize,
}

/// p-values of every simulated dataset, one row per dataset.
pub fn simulate_pvalues(config: &SimConfig) -> Result<Vec<[f64; 4]>> {
    config.validate()?;
    (0..config.sims)
        .into_par_iter()
        .map(|k| {
            let data_seed = derive_seed(config.seed, 2 * k as u64);
            let perm_seed = derive_seed(config.seed, 2 * k as u64 + 1);
            let sample = gen_trivariate(config, &mut RngSpec::new(data_seed, config.n as u64).rng())?;
            dataset_pvalues(&sample, config.replicates, perm_seed, config.pcor_reference)
        })
        .collect()
}

pub fn rates(config: &SimConfig, pvalues: &[[f64; 4]]) -> Vec<RateRow> {
    let sims = pvalues.len();
    let mut rows = Vec::new();
    for &alpha in &config.alphas {
        for (m, method) in SimMethod::ALL.iter().enumerate() {
            let hits = pvalues.iter().filter(|p| p[m] <= alpha).count();
            let rate = hits as f64 / sims as f64;
            rows.push(RateRow {
                generator: config.generator,
                n: config.n,
                alpha,
                method: *method,
                rate,
                se: (rate * (1.0 - rate) / sims as f64).sqrt(),
                sims,
            });
        }
    }
    rows
}

/// Rejection rates under the configured generator (Type-1 error when the
/// generator is independent).
pub fn run_type1(config: &SimConfig) -> Result<Vec<RateRow>> {
    let p = simulate_pvalues(config)?;
    Ok(rates(config, &p))
}

/// Rejection rates at every sample size of `n_grid`.
pub fn run_power(config: &SimConfig, n_grid: &[usize]) -> Result<Vec<RateRow>> {
    let mut rows = Vec::new();
    for &n in n_grid {
        let cfg = SimConfig { n, ..config.clone() };
        rows.extend(run_type1(&cfg)?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[RateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generator", "n", "alpha", "method", "rate", "se", "sims"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.generator.name().to_string(),
            r.n.to_string(),
            r.alpha.to_string(),
            r.method.name().to_string(),
            format!("{:.6}", r.rate),
            format!("{:.6}", r.se),
            r.sims.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv {
        line: 0,
        column: 0,
        message: e.to_string(),
    }
}

/// Looks up the rate of `method` at `alpha` in a table for a single `n`.
pub fn rate_of(rows: &[RateRow], n: usize, alpha: f64, method: SimMethod) -> Option<&RateRow> {
    rows.iter()
        .find(|r| r.n == n && r.method == method && (r.alpha - alpha).abs() < 1e-12)
}
