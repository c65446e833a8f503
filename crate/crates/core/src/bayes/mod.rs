//! Log Bayes factors for the five model families.
//!
//! Every value produced here is a natural-log Bayes factor in favor of the
//! alternative, ln BF₁₀ = ln P(D | H₁) − ln P(D | H₀). Posterior odds are the
//! same quantity shifted by the log prior odds. Conversions to base-10 or to
//! plain odds happen only at presentation time.

mod bernoulli;
mod contingency;
mod normal;
mod regression;
mod ttest;

pub use bernoulli::{log_bf_bernoulli_jeffreys, BernoulliCounts};
pub use contingency::{log_bf_contingency_gd, ContingencyTable2x2, GdScheme};
pub use normal::{log_bf_normal_jeffreys_var, log_bf_normal_known_var, SufficientStatsNormal};
pub use regression::{
    log_bf_regression_gprior, log_bf_regression_gprior_scaled, RegressionStat, G_HYPER_SCALE,
    G_HYPER_SHAPE,
};
pub use ttest::{log_bf_ttest_jzs, TTestStat};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::QuadError;

/// Natural log of BF₁₀ = P(D | H₁) / P(D | H₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBayesFactor(pub f64);

impl LogBayesFactor {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn bf10(self) -> f64 {
        self.0.exp()
    }

    pub fn log10(self) -> f64 {
        self.0 / std::f64::consts::LN_10
    }
}

/// Natural log of the posterior odds P(H₁ | D) / P(H₀ | D).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogOdds(pub f64);

impl LogOdds {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn odds(self) -> f64 {
        self.0.exp()
    }
}

/// Failure modes of the Bayes factor engines.
#[derive(Debug, Clone, Error)]
pub enum BayesError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty data: {0}")]
    EmptyData(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("divergent evidence: {0}")]
    DivergentEvidence(String),
    #[error("numeric failure: achieved relative error {achieved:.3e} (requested {requested:.3e})")]
    NumericFailure { achieved: f64, requested: f64 },
}

impl From<QuadError> for BayesError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::BudgetExhausted {
                achieved,
                requested,
                ..
            } => BayesError::NumericFailure {
                achieved,
                requested,
            },
            QuadError::NonFiniteIntegrand { at } => {
                BayesError::InvalidArgument(format!("integrand non-finite at {at}"))
            }
            QuadError::InvalidTolerance(t) => {
                BayesError::InvalidArgument(format!("relative tolerance {t} out of range"))
            }
        }
    }
}

/// Default relative tolerance for the quadrature-backed Bayes factors.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Combine a log Bayes factor with prior odds (plain, not log) into posterior
/// odds: ln odds = ln BF₁₀ + ln(prior odds).
pub fn posterior_odds(bf: LogBayesFactor, prior_odds: f64) -> Result<LogOdds, BayesError> {
    if !(prior_odds.is_finite() && prior_odds > 0.0) {
        return Err(BayesError::InvalidArgument(format!(
            "prior odds must be finite and positive, got {prior_odds}"
        )));
    }
    Ok(LogOdds(bf.0 + prior_odds.ln()))
}
