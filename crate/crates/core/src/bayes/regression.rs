//! Linear regression Bayes factor with the mixture-of-g prior on the
//! coefficients: β | g, σ ~ N(0, g σ² n (X'X)⁻¹), g ~ IG(1/2, √2/8), and the
//! 1/σ prior on intercept and scale shared by both models.

use serde::{Deserialize, Serialize};

use super::{BayesError, LogBayesFactor, DEFAULT_REL_TOL};
use crate::quad::integrate_positive_halfline;

/// Shape parameter of the inverse-gamma hyper-prior on g.
pub const G_HYPER_SHAPE: f64 = 0.5;
/// Scale parameter √2/8 of the inverse-gamma hyper-prior on g.
pub const G_HYPER_SCALE: f64 = std::f64::consts::SQRT_2 / 8.0;

/// The (R², n, p) reduction of a regression comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionStat {
    /// Number of responses.
    pub n: u64,
    /// Number of covariates.
    pub p: u64,
    /// Coefficient of determination of y on X after centering.
    pub r_squared: f64,
}

impl RegressionStat {
    pub fn new(n: u64, p: u64, r_squared: f64) -> Result<Self, BayesError> {
        let stat = Self { n, p, r_squared };
        stat.validate()?;
        Ok(stat)
    }

    pub fn validate(&self) -> Result<(), BayesError> {
        if self.n <= self.p + 1 {
            return Err(BayesError::InvalidArgument(format!(
                "need n > p + 1, got n = {}, p = {}",
                self.n, self.p
            )));
        }
        if !(self.r_squared.is_finite() && (0.0..=1.0).contains(&self.r_squared)) {
            return Err(BayesError::InvalidArgument(format!(
                "R² must lie in [0, 1], got {}",
                self.r_squared
            )));
        }
        Ok(())
    }
}

/// ln of the inverse-gamma(1/2, √2/8) density at g.
fn ln_g_hyperprior(g: f64) -> f64 {
    // b^a / Γ(a) · g^{-a-1} e^{-b/g} with a = 1/2, Γ(1/2) = √π.
    0.5 * G_HYPER_SCALE.ln() - 0.5 * std::f64::consts::PI.ln() - 1.5 * g.ln() - G_HYPER_SCALE / g
}

/// ln BF₁₀ = ln ∫₀^∞ (1+g)^{(n−1−p)/2} (1 + g(1−R²))^{−(n−1)/2} π(g) dg.
pub fn log_bf_regression_gprior(stat: &RegressionStat) -> Result<LogBayesFactor, BayesError> {
    log_bf_regression_gprior_scaled(stat, 1.0, DEFAULT_REL_TOL)
}

/// Same integral with g replaced by κ·g inside the data terms. κ = 1 is the
/// prior matched to the current design; κ = Sxx(n)/Sxx(N) < 1 evaluates the
/// factor under the prior of a larger planned design of size N.
pub fn log_bf_regression_gprior_scaled(
    stat: &RegressionStat,
    kappa: f64,
    rel_tol: f64,
) -> Result<LogBayesFactor, BayesError> {
    stat.validate()?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(BayesError::InvalidArgument(format!(
            "design scale factor must be positive, got {kappa}"
        )));
    }
    if stat.r_squared >= 1.0 {
        return Err(BayesError::DivergentEvidence(
            "R² = 1 makes the marginal likelihood integrand unbounded".into(),
        ));
    }
    let n = stat.n as f64;
    let p = stat.p as f64;
    let one_minus_r2 = 1.0 - stat.r_squared;

    let integrand = |g: f64| {
        let gk = kappa * g;
        let log_f = 0.5 * (n - 1.0 - p) * gk.ln_1p() - 0.5 * (n - 1.0) * (gk * one_minus_r2).ln_1p()
            + ln_g_hyperprior(g);
        log_f.exp()
    };

    let integral = integrate_positive_halfline(integrand, rel_tol)?;
    if !(integral.value.is_finite() && integral.value > 0.0) {
        return Err(BayesError::NumericFailure {
            achieved: f64::INFINITY,
            requested: rel_tol,
        });
    }
    Ok(LogBayesFactor(integral.value.ln()))
}
