//! Forward variable selection by partial distance correlation.
//!
//! Step 1 enters the candidate with the largest dCor with the response.
//! Every later step enters the candidate maximizing pdCor(y, x_j; w), where
//! `w` holds all previously selected columns as one multivariate sample.
//! A step is accepted when its permutation p-value is at most `alpha`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distgeom::{pairwise_distances, DataMatrix, DissimilarityMatrix, MIN_U_CENTER_ORDER};
use crate::error::{Error, Result};
use crate::estimators::dcor_sq_biased;
use crate::inference::{dcov_test, pdcov_test, PermutationConfig};
use crate::partial::pdcor_sample;
use crate::rng::{derive_seed, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectOptions {
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
    pub max_steps: Option<usize>,
    /// Center and scale every column before computing distances.
    pub standardize: bool,
    /// Test every candidate at each step instead of only the best one.
    pub test_all_candidates: bool,
    pub workers: Option<usize>,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            replicates: 999,
            seed: DEFAULT_SEED,
            max_steps: None,
            standardize: true,
            test_all_candidates: false,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub variable: usize,
    pub criterion: f64,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    pub variable: usize,
    /// dCor at the first step, pdCor afterwards.
    pub criterion: f64,
    pub p_value: f64,
    pub accepted: bool,
    /// Populated only when every candidate is tested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<CandidateScore>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The best remaining candidate was not significant.
    Threshold,
    /// Every candidate entered.
    Exhausted,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    pub stopped_reason: StopReason,
}

impl SelectionTrace {
    /// Accepted variables in order of entry.
    pub fn selected(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.accepted).map(|s| s.variable).collect()
    }
}

/// Index of the largest value; ties go to the earliest position.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

pub fn forward_select(y: &DataMatrix, x: &DataMatrix, options: &SelectOptions) -> Result<SelectionTrace> {
    let n = y.nrows();
    if n < MIN_U_CENTER_ORDER {
        return Err(Error::Size {
            needed: MIN_U_CENTER_ORDER,
            got: n,
        });
    }
    if x.nrows() != n {
        return Err(Error::Dimension {
            expected: n,
            got: x.nrows(),
        });
    }
    if x.ncols() == 0 {
        return Err(Error::InvalidInput("no candidate variables".into()));
    }
    if !(options.alpha > 0.0 && options.alpha < 1.0) {
        return Err(Error::OutOfDomain(format!("alpha must lie in (0, 1), got {}", options.alpha)));
    }
    if y.is_constant() {
        return Err(Error::Degenerate("response is constant".into()));
    }
    let (y, x) = if options.standardize {
        (y.standardized(), x.standardized())
    } else {
        (y.clone(), x.clone())
    };
    let dy = pairwise_distances(&y);
    let columns: Vec<DissimilarityMatrix> = (0..x.ncols())
        .map(|j| pairwise_distances(&DataMatrix::from_column(&x.column(j)).expect("column of valid matrix")))
        .collect();

    let m = x.ncols();
    let max_steps = options.max_steps.unwrap_or(m).min(m);
    let mut selected: Vec<usize> = Vec::new();
    let mut steps = Vec::new();

    let stopped_reason = loop {
        if selected.len() == m {
            break StopReason::Exhausted;
        }
        if steps.len() == max_steps {
            break StopReason::MaxSteps;
        }
        let step = steps.len() as u64;
        let cfg = PermutationConfig {
            replicates: options.replicates,
            seed: derive_seed(options.seed, step),
            workers: options.workers,
            alternative: None,
        };
        let remaining: Vec<usize> = (0..m).filter(|j| !selected.contains(j)).collect();
        let w = if selected.is_empty() {
            None
        } else {
            Some(pairwise_distances(&x.select_columns(&selected)?))
        };

        let score = |j: usize| -> Result<f64> {
            match &w {
                None => Ok(dcor_sq_biased(&columns[j], &dy)?.sqrt()),
                Some(w) => Ok(pdcor_sample(&dy, &columns[j], w)?.pdcor),
            }
        };
        let test = |j: usize| -> Result<f64> {
            let r = match &w {
                None => dcov_test(&columns[j], &dy, &cfg)?,
                Some(w) => pdcov_test(&columns[j], &dy, w, &cfg)?,
            };
            Ok(r.p_value)
        };

        let criteria: Vec<f64> = remaining.par_iter().map(|&j| score(j)).collect::<Result<_>>()?;
        let best = argmax(&criteria);
        let variable = remaining[best];
        let mut candidates = Vec::new();
        let p_value = if options.test_all_candidates {
            let ps: Vec<f64> = remaining.iter().map(|&j| test(j)).collect::<Result<_>>()?;
            candidates = remaining
                .iter()
                .zip(&criteria)
                .zip(&ps)
                .map(|((&variable, &criterion), &p)| CandidateScore {
                    variable,
                    criterion,
                    p_value: Some(p),
                })
                .collect();
            ps[best]
        } else {
            test(variable)?
        };
        let accepted = p_value <= options.alpha;
        steps.push(SelectionStep {
            variable,
            criterion: criteria[best],
            p_value,
            accepted,
            candidates,
        });
        if !accepted {
            break StopReason::Threshold;
        }
        selected.push(variable);
    };

    Ok(SelectionTrace { steps, stopped_reason })
}
