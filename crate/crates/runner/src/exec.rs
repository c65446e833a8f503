//! Parallel experiment execution: matched H0/H1 replicate batches, failure
//! isolation, aggregation into a calibration table and summary statistics.

use bfsim_core::calibration::{
    bin_outcomes, band_fraction, calibration_deviation, observed_vs_nominal,
    spearman_observed_nominal, type1_error_optional_stopping, type2_error_schoenbrodt,
    CalibrationPoint, CalibrationTable, ErrorRateEstimate,
};
use bfsim_core::genmodel::Hypothesis;
use bfsim_core::sequential::{run_trial, StoppingRule, TrialOutcome};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::seeds::replicate_rng;

/// Largest tolerated fraction of failed replicates before the run aborts.
pub const MAX_FAILURE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub hypothesis: Hypothesis,
    pub replicate_index: u64,
    pub error: String,
}

/// Aggregate metrics of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub name: String,
    pub replicates_per_hypothesis: u64,
    pub master_seed: u64,
    pub failed_h0: u64,
    pub failed_h1: u64,
    /// Replicate indices excluded from both batches because either side
    /// failed; keeps the batches matched.
    pub dropped_pairs: u64,
    pub n_calibration_points: usize,
    pub slope: Option<f64>,
    pub max_abs_dev: Option<f64>,
    pub spearman: Option<f64>,
    /// Fraction of calibration points within three binomial standard errors
    /// of the identity line.
    pub band_fraction_3se: Option<f64>,
    pub type1: Option<ErrorRateEstimate>,
    pub type2: Option<ErrorRateEstimate>,
    pub runtime_seconds: f64,
}

/// Everything an experiment produces, before persistence.
#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub h0_outcomes: Vec<TrialOutcome>,
    pub h1_outcomes: Vec<TrialOutcome>,
    pub failures: Vec<FailureRecord>,
    pub table: CalibrationTable,
    pub points: Vec<CalibrationPoint>,
    pub summary: Summary,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(
        "{failed} of {total} replicates failed (more than {max:.1}%); first failure: {first}"
    )]
    TooManyFailures {
        failed: u64,
        total: u64,
        max: f64,
        first: String,
    },
    #[error("calibration error: {0}")]
    Calibration(#[from] bfsim_core::calibration::CalibrationError),
    #[error("no replicate survived in both batches")]
    NothingSurvived,
}

/// Run the experiment on a dedicated worker pool. Identical (config,
/// master_seed) produce identical results for any worker count: every
/// replicate's RNG stream is derived from its own index.
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResults, RunError> {
    config.validate()?;
    let started = std::time::Instant::now();
    let spec = config.trial_spec()?;
    let reps = config.replicates;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("worker pool");

    let run_batch = |hypothesis: Hypothesis| -> Vec<Result<TrialOutcome, String>> {
        pool.install(|| {
            (0..reps)
                .into_par_iter()
                .map(|idx| {
                    let mut rng = replicate_rng(config.master_seed, hypothesis, idx);
                    run_trial(&spec, hypothesis, &mut rng).map_err(|e| e.to_string())
                })
                .collect()
        })
    };

    let raw_h0 = run_batch(Hypothesis::H0);
    let raw_h1 = run_batch(Hypothesis::H1);

    let mut failures = Vec::new();
    for (hypothesis, raw) in [(Hypothesis::H0, &raw_h0), (Hypothesis::H1, &raw_h1)] {
        for (idx, r) in raw.iter().enumerate() {
            if let Err(error) = r {
                failures.push(FailureRecord {
                    hypothesis,
                    replicate_index: idx as u64,
                    error: error.clone(),
                });
            }
        }
    }
    let failed = failures.len() as u64;
    let total = 2 * reps;
    if failed as f64 > MAX_FAILURE_FRACTION * total as f64 {
        return Err(RunError::TooManyFailures {
            failed,
            total,
            max: 100.0 * MAX_FAILURE_FRACTION,
            first: failures[0].error.clone(),
        });
    }
    let failed_h0 = failures
        .iter()
        .filter(|f| f.hypothesis == Hypothesis::H0)
        .count() as u64;
    let failed_h1 = failed - failed_h0;

    // Drop failed indices from both batches so the count ratio keeps its
    // odds interpretation.
    let mut h0_outcomes = Vec::with_capacity(reps as usize);
    let mut h1_outcomes = Vec::with_capacity(reps as usize);
    let mut dropped_pairs = 0u64;
    for (a, b) in raw_h0.into_iter().zip(raw_h1) {
        match (a, b) {
            (Ok(x), Ok(y)) => {
                h0_outcomes.push(x);
                h1_outcomes.push(y);
            }
            _ => dropped_pairs += 1,
        }
    }
    if h0_outcomes.is_empty() {
        return Err(RunError::NothingSurvived);
    }

    let table = bin_outcomes(&h0_outcomes, &h1_outcomes, config.bin_width, config.min_count)?;
    let points = observed_vs_nominal(&table).unwrap_or_default();

    let deviation = calibration_deviation(&points).ok();
    let spearman = spearman_observed_nominal(&points).ok();
    let type1 = match config.stopping {
        StoppingRule::OneSidedThreshold { b, .. } => {
            Some(type1_error_optional_stopping(&h0_outcomes, 1.0 / b)?)
        }
        _ => None,
    };
    let type2 = match config.stopping {
        StoppingRule::SymmetricThreshold { b, .. } => {
            Some(type2_error_schoenbrodt(&h1_outcomes, b)?)
        }
        _ => None,
    };

    let summary = Summary {
        name: config.name.clone(),
        replicates_per_hypothesis: reps,
        master_seed: config.master_seed,
        failed_h0,
        failed_h1,
        dropped_pairs,
        n_calibration_points: points.len(),
        slope: deviation.map(|d| d.0),
        max_abs_dev: deviation.map(|d| d.1),
        spearman,
        band_fraction_3se: if points.is_empty() {
            None
        } else {
            Some(band_fraction(&points, 3.0))
        },
        type1,
        type2,
        runtime_seconds: started.elapsed().as_secs_f64(),
    };

    Ok(ExperimentResults {
        config: config.clone(),
        h0_outcomes,
        h1_outcomes,
        failures,
        table,
        points,
        summary,
    })
}
