//! Normal-mean Bayes factors: known variance, and unknown variance with the
//! scale-invariant 1/σ nuisance prior.

use serde::{Deserialize, Serialize};

use super::{BayesError, LogBayesFactor};

/// Running sums for normal observations: count, Σxᵢ and Σxᵢ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStatsNormal {
    pub n: u64,
    pub sum_x: f64,
    pub sum_x2: f64,
}

impl SufficientStatsNormal {
    pub fn new(n: u64, sum_x: f64, sum_x2: f64) -> Result<Self, BayesError> {
        let stats = Self { n, sum_x, sum_x2 };
        stats.validate()?;
        Ok(stats)
    }

    pub fn validate(&self) -> Result<(), BayesError> {
        if !(self.sum_x.is_finite() && self.sum_x2.is_finite()) {
            return Err(BayesError::InvalidArgument(
                "normal sufficient statistics must be finite".into(),
            ));
        }
        if self.sum_x2 < 0.0 {
            return Err(BayesError::InvalidArgument(format!(
                "sum of squares must be nonnegative, got {}",
                self.sum_x2
            )));
        }
        // Cauchy–Schwarz: (Σx)² ≤ n·Σx², with slack for accumulated rounding.
        let bound = self.n as f64 * self.sum_x2;
        if self.sum_x * self.sum_x > bound * (1.0 + 1e-9) + 1e-300 {
            return Err(BayesError::InvalidArgument(format!(
                "(Σx)² = {} exceeds n·Σx² = {}",
                self.sum_x * self.sum_x,
                bound
            )));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.sum_x / self.n as f64
    }
}

/// Known-variance test of μ = 0 against μ ~ N(0, 1), observation noise σ = 1.
///
/// ln BF₁₀ = n²x̄² / (2(n+1)) − ½ ln(n+1), and n²x̄² = (Σx)².
pub fn log_bf_normal_known_var(stats: &SufficientStatsNormal) -> Result<LogBayesFactor, BayesError> {
    stats.validate()?;
    if stats.n == 0 {
        return Err(BayesError::EmptyData(
            "known-variance Bayes factor needs at least one observation".into(),
        ));
    }
    let n = stats.n as f64;
    let value = stats.sum_x * stats.sum_x / (2.0 * (n + 1.0)) - 0.5 * (n + 1.0).ln();
    Ok(LogBayesFactor(value))
}

/// Unknown-variance test with Jeffreys' 1/σ prior on the scale in both models
/// and μ | σ ~ N(0, σ²) under the alternative.
///
/// ln BF₁₀ = −½ ln(n+1) − (n/2) · ln(1 − (Σx)² / ((n+1)·Σx²)).
///
/// The ratio inside the logarithm is dimensionless, so the value is exactly
/// invariant under rescaling the data by any c ≠ 0.
pub fn log_bf_normal_jeffreys_var(
    stats: &SufficientStatsNormal,
) -> Result<LogBayesFactor, BayesError> {
    stats.validate()?;
    if stats.n == 0 {
        return Err(BayesError::EmptyData(
            "Jeffreys-variance Bayes factor needs at least one observation".into(),
        ));
    }
    if stats.sum_x2 == 0.0 {
        return Err(BayesError::DegenerateData(
            "all observations are zero; the mean/scale ratio is 0/0".into(),
        ));
    }
    let n = stats.n as f64;
    let ratio = stats.sum_x * stats.sum_x / ((n + 1.0) * stats.sum_x2);
    let value = -0.5 * (n + 1.0).ln() - 0.5 * n * (1.0 - ratio).ln();
    Ok(LogBayesFactor(value))
}
