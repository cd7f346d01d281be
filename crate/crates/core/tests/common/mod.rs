//! Monte Carlo checks shared by the test suites.
#![allow(dead_code)]

use pdcor::distgeom::DataMatrix;
use pdcor::estimators::{dcov_sq_biased, dcov_sq_unbiased};
use pdcor::inference::{dcov_test, pdcov_test, PermutationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{StandardNormal, Uniform};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn column(v: &[f64]) -> DataMatrix {
    DataMatrix::from_column(v).unwrap()
}

/// Sample mean and its standard error.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub struct Unbiasedness {
    pub unbiased: (f64, f64),
    pub biased: (f64, f64),
}

/// Unbiased and biased squared dCov over `draws` independent pairs of
/// uniform samples of size `n`.
pub fn unbiasedness(draws: usize, n: usize, seed: u64) -> Unbiasedness {
    let mut r = rng(seed);
    let u = Uniform::new(0.0, 1.0).unwrap();
    let mut unbiased = Vec::with_capacity(draws);
    let mut biased = Vec::with_capacity(draws);
    for _ in 0..draws {
        let x: Vec<f64> = (0..n).map(|_| r.sample(u)).collect();
        let y: Vec<f64> = (0..n).map(|_| r.sample(u)).collect();
        let (x, y) = (column(&x), column(&y));
        unbiased.push(dcov_sq_unbiased(&x, &y).unwrap());
        biased.push(dcov_sq_biased(&x, &y).unwrap());
    }
    Unbiasedness {
        unbiased: mean_se(&unbiased),
        biased: mean_se(&biased),
    }
}

/// Squared distance covariance of a standard bivariate normal pair with
/// correlation `rho`, from the closed form
/// `(4/pi) (rho asin rho + sqrt(1 - rho^2) - rho asin(rho/2) - sqrt(4 - rho^2) + 1)`.
pub fn bvn_dcov_sq(rho: f64) -> f64 {
    let g = rho * rho.asin() + (1.0 - rho * rho).sqrt() - rho * (rho / 2.0).asin() - (4.0 - rho * rho).sqrt() + 1.0;
    4.0 / std::f64::consts::PI * g
}

/// Monte Carlo estimate of `Cov(|X-X'|, |Y-Y'|) - 2 Cov(|X-X'|, |Y-Y''|)`
/// for a standard bivariate normal pair, with its standard error.
pub fn covariance_of_distances(rho: f64, draws: usize, seed: u64) -> (f64, f64) {
    let mut r = rng(seed);
    let s = (1.0 - rho * rho).sqrt();
    let pair = |r: &mut ChaCha8Rng| {
        let x: f64 = r.sample(StandardNormal);
        let e: f64 = r.sample(StandardNormal);
        (x, rho * x + s * e)
    };
    // Per draw: a = |X-X'|, b = |Y-Y'|, b2 = |Y - Y''|. The target equals
    // E[ab] - 2 E[a b2] + E[a] E[b]; estimate each term from its own block of
    // draws so the product of means is unbiased.
    let mut t1 = Vec::with_capacity(draws);
    let mut t2 = Vec::with_capacity(draws);
    let mut ma = Vec::with_capacity(draws);
    let mut mb = Vec::with_capacity(draws);
    for _ in 0..draws {
        let (x, y) = pair(&mut r);
        let (x1, y1) = pair(&mut r);
        let (_, y2) = pair(&mut r);
        let a = (x - x1).abs();
        t1.push(a * (y - y1).abs());
        t2.push(a * (y - y2).abs());
        let (u, _) = pair(&mut r);
        let (u1, _) = pair(&mut r);
        let (_, v) = pair(&mut r);
        let (_, v1) = pair(&mut r);
        ma.push((u - u1).abs());
        mb.push((v - v1).abs());
    }
    let (e1, s1) = mean_se(&t1);
    let (e2, s2) = mean_se(&t2);
    let (ea, sa) = mean_se(&ma);
    let (eb, sb) = mean_se(&mb);
    // t1 and t2 share a; a conservative SE ignores their positive covariance.
    let se = (s1 * s1 + 4.0 * s2 * s2 + (eb * sa).powi(2) + (ea * sb).powi(2)).sqrt();
    (e1 - 2.0 * e2 + ea * eb, se)
}

/// Kolmogorov-Smirnov distance between permutation p-values and their null
/// distribution, which is uniform on `{1, ..., R+1} / (R+1)`.
pub fn ks_to_discrete_uniform(pvalues: &[f64], replicates: usize) -> f64 {
    let m = pvalues.len() as f64;
    let mut sorted = pvalues.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut d: f64 = 0.0;
    for k in 1..=replicates + 1 {
        let t = k as f64 / (replicates + 1) as f64;
        let below = sorted.partition_point(|p| *p <= t + 1e-12) as f64 / m;
        d = d.max((below - t).abs());
    }
    d
}

/// 1% critical value of the one-sample KS statistic, asymptotic form.
pub fn ks_critical_1pct(m: usize) -> f64 {
    1.628 / (m as f64).sqrt()
}

/// p-values of the dCov and pdCov tests over `runs` independent normal
/// trivariate samples of size `n`.
pub fn null_pvalues(runs: usize, n: usize, replicates: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut dcov = Vec::with_capacity(runs);
    let mut pdcov = Vec::with_capacity(runs);
    for k in 0..runs {
        let mut r = rng(seed.wrapping_add(k as u64));
        let (x, y, z) = (normals(&mut r, n), normals(&mut r, n), normals(&mut r, n));
        let cfg = PermutationConfig::new(replicates, seed ^ ((k as u64) << 20));
        let (x, y, z) = (column(&x), column(&y), column(&z));
        dcov.push(dcov_test(&x, &y, &cfg).unwrap().p_value);
        pdcov.push(pdcov_test(&x, &y, &z, &cfg).unwrap().p_value);
    }
    (dcov, pdcov)
}
