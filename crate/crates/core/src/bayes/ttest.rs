//! One-sample Bayesian t-test with a Cauchy prior on the standardized effect
//! size and Jeffreys' 1/σ prior on the scale in both models (Zellner–Siow
//! mixture form).

use serde::{Deserialize, Serialize};

use super::{BayesError, LogBayesFactor, DEFAULT_REL_TOL};
use crate::quad::integrate_positive_halfline;

/// The t-statistic reduction of a one-sample test against μ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestStat {
    /// Sample size.
    pub n: u64,
    /// One-sample t statistic against μ₀.
    pub t: f64,
    /// Null mean, in the units of the measurements.
    pub mu0: f64,
    /// Cauchy scale on the effect size (μ − μ₀)/σ.
    pub r: f64,
}

impl TTestStat {
    pub fn new(n: u64, t: f64, mu0: f64, r: f64) -> Result<Self, BayesError> {
        let stat = Self { n, t, mu0, r };
        stat.validate()?;
        Ok(stat)
    }

    pub fn validate(&self) -> Result<(), BayesError> {
        if self.n < 2 {
            return Err(BayesError::InvalidArgument(format!(
                "t statistic requires n ≥ 2, got n = {}",
                self.n
            )));
        }
        if !self.t.is_finite() || !self.mu0.is_finite() {
            return Err(BayesError::InvalidArgument(
                "t statistic and null mean must be finite".into(),
            ));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(BayesError::InvalidArgument(format!(
                "Cauchy scale must be positive, got {}",
                self.r
            )));
        }
        Ok(())
    }
}

/// ln BF₁₀ of the Cauchy-effect-size t-test, from the t reduction:
///
/// BF₀₁ = (1 + t²/ν)^{−(ν+1)/2} /
///        ∫₀^∞ (1 + ngr²)^{−1/2} (1 + t²/((1+ngr²)ν))^{−(ν+1)/2} π(g) dg,
///
/// with ν = n − 1 and π the inverse-gamma(1/2, 1/2) mixing density
/// (2π)^{−1/2} g^{−3/2} e^{−1/(2g)}. The common (1 + t²/ν) power is factored
/// out of the integrand so it stays in [0, 1] for arbitrarily large |t|.
pub fn log_bf_ttest_jzs(stat: &TTestStat) -> Result<LogBayesFactor, BayesError> {
    log_bf_ttest_jzs_tol(stat, DEFAULT_REL_TOL)
}

pub fn log_bf_ttest_jzs_tol(stat: &TTestStat, rel_tol: f64) -> Result<LogBayesFactor, BayesError> {
    stat.validate()?;
    let nu = (stat.n - 1) as f64;
    let n = stat.n as f64;
    let t2 = stat.t * stat.t;
    let r2 = stat.r * stat.r;
    let half_nu1 = 0.5 * (nu + 1.0);
    let ln_null_power = half_nu1 * (t2 / nu).ln_1p();
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();

    let integrand = |g: f64| {
        let scale = 1.0 + n * g * r2;
        let log_f = -0.5 * scale.ln() - half_nu1 * (t2 / (scale * nu)).ln_1p()
            - 0.5 * ln_2pi
            - 1.5 * g.ln()
            - 0.5 / g;
        log_f.exp()
    };

    let integral = integrate_positive_halfline(integrand, rel_tol)?;
    if !(integral.value.is_finite() && integral.value > 0.0) {
        return Err(BayesError::NumericFailure {
            achieved: f64::INFINITY,
            requested: rel_tol,
        });
    }
    Ok(LogBayesFactor(ln_null_power + integral.value.ln()))
}
