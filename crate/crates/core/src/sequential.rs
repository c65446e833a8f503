//! Sequential trial execution: observations are folded one step at a time
//! into incremental sufficient statistics, the stopping rule is evaluated on
//! the current posterior odds, and a terminal record is emitted.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayes::{
    log_bf_bernoulli_jeffreys, log_bf_contingency_gd, log_bf_normal_jeffreys_var,
    log_bf_normal_known_var, log_bf_regression_gprior_scaled, log_bf_ttest_jzs, posterior_odds,
    BayesError, BernoulliCounts, ContingencyTable2x2, LogBayesFactor, LogOdds, RegressionStat,
    SufficientStatsNormal, TTestStat, DEFAULT_REL_TOL,
};
use crate::genmodel::{
    draw_parameters, sample_step, DesignMatrix, GenError, GenerationMode, Hypothesis,
    ModelFamily, ParameterDraw, PriorSpec, StepUnit,
};

/// Declarative stopping policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StoppingRule {
    /// Stop after exactly `n` steps.
    FixedN { n: u64 },
    /// Stop once the odds leave [1/B, B], checked from `min_n` on, with a
    /// hard cap at `max_n`.
    SymmetricThreshold { b: f64, min_n: u64, max_n: u64 },
    /// Stop once the odds reach B in favor of H1 only; evidence for H0 never
    /// stops the trial before `max_n`.
    OneSidedThreshold { b: f64, min_n: u64, max_n: u64 },
}

impl StoppingRule {
    pub fn validate(&self) -> Result<(), TrialError> {
        match *self {
            StoppingRule::FixedN { n } => {
                if n == 0 {
                    return Err(TrialError::InvalidConfig("fixed n must be ≥ 1".into()));
                }
            }
            StoppingRule::SymmetricThreshold { b, min_n, max_n }
            | StoppingRule::OneSidedThreshold { b, min_n, max_n } => {
                if !(b.is_finite() && b > 1.0) {
                    return Err(TrialError::InvalidConfig(format!(
                        "threshold B must exceed 1, got {b}"
                    )));
                }
                if min_n == 0 || max_n < min_n {
                    return Err(TrialError::InvalidConfig(format!(
                        "need max_n ≥ min_n ≥ 1, got min_n = {min_n}, max_n = {max_n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The largest number of steps the rule can consume.
    pub fn horizon(&self) -> u64 {
        match *self {
            StoppingRule::FixedN { n } => n,
            StoppingRule::SymmetricThreshold { max_n, .. }
            | StoppingRule::OneSidedThreshold { max_n, .. } => max_n,
        }
    }
}

/// Why a trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Threshold,
    MaxN,
    FixedN,
}

impl StopReason {
    pub fn label(self) -> &'static str {
        match self {
            StopReason::Threshold => "threshold",
            StopReason::MaxN => "max_n",
            StopReason::FixedN => "fixed_n",
        }
    }
}

/// Stop-or-continue verdict for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopCheck {
    Continue,
    Stop(StopReason),
}

/// Terminal decision when the rule carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestDecision {
    AcceptH0,
    RejectH0,
    Undecided,
}

/// Evaluate the stopping rule at sample size `n` with current log odds.
/// Threshold crossings take precedence over the max-n cap when both hold.
pub fn should_stop(rule: &StoppingRule, odds: LogOdds, n: u64) -> StopCheck {
    match *rule {
        StoppingRule::FixedN { n: fixed } => {
            if n >= fixed {
                StopCheck::Stop(StopReason::FixedN)
            } else {
                StopCheck::Continue
            }
        }
        StoppingRule::SymmetricThreshold { b, min_n, max_n } => {
            let ln_b = b.ln();
            if n >= min_n && (odds.value() >= ln_b || odds.value() <= -ln_b) {
                StopCheck::Stop(StopReason::Threshold)
            } else if n >= max_n {
                StopCheck::Stop(StopReason::MaxN)
            } else {
                StopCheck::Continue
            }
        }
        StoppingRule::OneSidedThreshold { b, min_n, max_n } => {
            if n >= min_n && odds.value() >= b.ln() {
                StopCheck::Stop(StopReason::Threshold)
            } else if n >= max_n {
                StopCheck::Stop(StopReason::MaxN)
            } else {
                StopCheck::Continue
            }
        }
    }
}

/// Incremental per-model sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SufficientStats {
    /// Shared by the known-variance, Jeffreys-variance and t-test families.
    Normal { n: u64, sum_x: f64, sum_x2: f64 },
    Bernoulli { n1: u64, n0: u64 },
    /// Cell counts laid out as in [`ContingencyTable2x2`].
    Contingency { counts: [u64; 4], steps: u64 },
    Regression {
        n: u64,
        sum_x: f64,
        sum_y: f64,
        sum_xx: f64,
        sum_yy: f64,
        sum_xy: f64,
    },
}

impl SufficientStats {
    pub fn empty(family: ModelFamily) -> Self {
        match family {
            ModelFamily::NormalKnownVar | ModelFamily::NormalJeffreysVar | ModelFamily::Jzs => {
                SufficientStats::Normal {
                    n: 0,
                    sum_x: 0.0,
                    sum_x2: 0.0,
                }
            }
            ModelFamily::Bernoulli => SufficientStats::Bernoulli { n1: 0, n0: 0 },
            ModelFamily::Contingency => SufficientStats::Contingency {
                counts: [0; 4],
                steps: 0,
            },
            ModelFamily::GPriorRegression => SufficientStats::Regression {
                n: 0,
                sum_x: 0.0,
                sum_y: 0.0,
                sum_xx: 0.0,
                sum_yy: 0.0,
                sum_xy: 0.0,
            },
        }
    }

    /// Number of steps folded in so far.
    pub fn steps(&self) -> u64 {
        match *self {
            SufficientStats::Normal { n, .. } => n,
            SufficientStats::Bernoulli { n1, n0 } => n1 + n0,
            SufficientStats::Contingency { steps, .. } => steps,
            SufficientStats::Regression { n, .. } => n,
        }
    }
}

/// Fold one step into the statistics. Update order matches a batch fold over
/// the concatenated data, so stepwise and batch results agree bit for bit.
pub fn update_stats(stats: &SufficientStats, step: &StepUnit) -> Result<SufficientStats, TrialError> {
    match (*stats, *step) {
        (SufficientStats::Normal { n, sum_x, sum_x2 }, StepUnit::One(x)) => {
            Ok(SufficientStats::Normal {
                n: n + 1,
                sum_x: sum_x + x,
                sum_x2: sum_x2 + x * x,
            })
        }
        (SufficientStats::Bernoulli { n1, n0 }, StepUnit::Binary(b)) => {
            Ok(SufficientStats::Bernoulli {
                n1: n1 + u64::from(b == 1),
                n0: n0 + u64::from(b == 0),
            })
        }
        (SufficientStats::Contingency { mut counts, steps }, StepUnit::PerGroup(o1, o2)) => {
            counts[if o1 == 1 { 2 } else { 0 }] += 1;
            counts[if o2 == 1 { 3 } else { 1 }] += 1;
            Ok(SufficientStats::Contingency {
                counts,
                steps: steps + 1,
            })
        }
        (SufficientStats::Contingency { mut counts, steps }, StepUnit::Cell(c)) => {
            if c > 3 {
                return Err(TrialError::FamilyMismatch);
            }
            counts[c as usize] += 1;
            Ok(SufficientStats::Contingency {
                counts,
                steps: steps + 1,
            })
        }
        (
            SufficientStats::Regression {
                n,
                sum_x,
                sum_y,
                sum_xx,
                sum_yy,
                sum_xy,
            },
            StepUnit::Row { x, y },
        ) => Ok(SufficientStats::Regression {
            n: n + 1,
            sum_x: sum_x + x,
            sum_y: sum_y + y,
            sum_xx: sum_xx + x * x,
            sum_yy: sum_yy + y * y,
            sum_xy: sum_xy + x * y,
        }),
        _ => Err(TrialError::FamilyMismatch),
    }
}

/// Which design the regression stopping decision bases its prior on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignPriorBasis {
    /// The prior for the design observed so far (the default reading).
    #[default]
    SoFar,
    /// The prior for the full planned design.
    MaxDesign,
}

/// Everything needed to run one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub prior: PriorSpec,
    pub mode: GenerationMode,
    pub rule: StoppingRule,
    pub prior_odds: f64,
    pub design: Option<DesignMatrix>,
    #[serde(default)]
    pub design_prior_basis: DesignPriorBasis,
}

impl TrialSpec {
    pub fn validate(&self) -> Result<(), TrialError> {
        self.rule.validate()?;
        self.prior.validate().map_err(TrialError::Generation)?;
        if !(self.prior_odds.is_finite() && self.prior_odds > 0.0) {
            return Err(TrialError::InvalidConfig(format!(
                "prior odds must be positive and finite, got {}",
                self.prior_odds
            )));
        }
        let family = self.prior.family();
        if family == ModelFamily::GPriorRegression {
            let design = self
                .design
                .as_ref()
                .ok_or_else(|| TrialError::InvalidConfig("regression requires a design".into()))?;
            if (design.len() as u64) < self.rule.horizon() {
                return Err(TrialError::InvalidConfig(format!(
                    "design has {} rows but the rule can consume {}",
                    design.len(),
                    self.rule.horizon()
                )));
            }
        } else if self.design.is_some() {
            return Err(TrialError::InvalidConfig(
                "a design is only meaningful for the regression family".into(),
            ));
        }
        Ok(())
    }
}

/// Terminal record of one replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub final_log_bf: LogBayesFactor,
    pub final_log_odds: LogOdds,
    pub n_stop: u64,
    pub generating_hypothesis: Hypothesis,
    pub parameter_draw: ParameterDraw,
    pub stopped_by: StopReason,
    pub decision: Option<TestDecision>,
}

/// Trial failures.
#[derive(Debug, Clone, Error)]
pub enum TrialError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("step does not match the statistics' family")]
    FamilyMismatch,
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error(transparent)]
    Bayes(#[from] BayesError),
}

/// Compute the current log Bayes factor from incremental statistics, or
/// `None` while the statistic is not yet defined (t-test before n = 2,
/// regression before n = 3 or with zero variation).
pub fn log_bf_from_stats(
    prior: &PriorSpec,
    stats: &SufficientStats,
    design: Option<&DesignMatrix>,
    basis: DesignPriorBasis,
) -> Result<Option<LogBayesFactor>, TrialError> {
    match (prior, stats) {
        (PriorSpec::NormalKnownVar, SufficientStats::Normal { n, sum_x, sum_x2 }) => {
            if *n == 0 {
                return Ok(None);
            }
            let s = SufficientStatsNormal::new(*n, *sum_x, *sum_x2)?;
            Ok(Some(log_bf_normal_known_var(&s)?))
        }
        (PriorSpec::NormalJeffreysVar, SufficientStats::Normal { n, sum_x, sum_x2 }) => {
            if *n == 0 {
                return Ok(None);
            }
            let s = SufficientStatsNormal::new(*n, *sum_x, *sum_x2)?;
            Ok(Some(log_bf_normal_jeffreys_var(&s)?))
        }
        (PriorSpec::Jzs { r, mu0 }, SufficientStats::Normal { n, sum_x, sum_x2 }) => {
            if *n < 2 {
                return Ok(None);
            }
            let nf = *n as f64;
            let mean = sum_x / nf;
            let ss = sum_x2 - nf * mean * mean;
            if ss <= 0.0 {
                // Zero sample variance: the t statistic is not defined yet.
                return Ok(None);
            }
            let sd = (ss / (nf - 1.0)).sqrt();
            let t = (mean - mu0) / (sd / nf.sqrt());
            let stat = TTestStat::new(*n, t, *mu0, *r)?;
            Ok(Some(log_bf_ttest_jzs(&stat)?))
        }
        (PriorSpec::GPriorRegression, SufficientStats::Regression { n, .. }) if *n <= 2 => {
            Ok(None)
        }
        (
            PriorSpec::GPriorRegression,
            SufficientStats::Regression {
                n,
                sum_x,
                sum_y,
                sum_xx,
                sum_yy,
                sum_xy,
            },
        ) => {
            let nf = *n as f64;
            let sxx = sum_xx - sum_x * sum_x / nf;
            let syy = sum_yy - sum_y * sum_y / nf;
            let sxy = sum_xy - sum_x * sum_y / nf;
            if sxx <= 0.0 || syy <= 0.0 {
                return Ok(None);
            }
            let r2 = (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0);
            let stat = RegressionStat::new(*n, 1, r2)?;
            let kappa = match basis {
                DesignPriorBasis::SoFar => 1.0,
                DesignPriorBasis::MaxDesign => {
                    let design = design.ok_or_else(|| {
                        TrialError::InvalidConfig("max-design basis requires the design".into())
                    })?;
                    let full = DesignMatrix::new(design.x_values.clone())
                        .map_err(TrialError::Generation)?
                        .centered_sum_sq();
                    if full <= 0.0 {
                        return Err(TrialError::InvalidConfig("degenerate full design".into()));
                    }
                    (sxx / full).min(1.0)
                }
            };
            Ok(Some(log_bf_regression_gprior_scaled(
                &stat,
                kappa,
                DEFAULT_REL_TOL,
            )?))
        }
        (PriorSpec::BernoulliJeffreys { theta0 }, SufficientStats::Bernoulli { n1, n0 }) => {
            if n1 + n0 == 0 {
                return Ok(None);
            }
            let counts = BernoulliCounts::new(*n1, *n0, *theta0)?;
            Ok(Some(log_bf_bernoulli_jeffreys(&counts)?))
        }
        (PriorSpec::ContingencyGd { scheme, a }, SufficientStats::Contingency { counts, steps }) => {
            if *steps == 0 {
                return Ok(None);
            }
            let table = ContingencyTable2x2::new(*counts, *scheme, *a)?;
            Ok(Some(log_bf_contingency_gd(&table)?))
        }
        _ => Err(TrialError::FamilyMismatch),
    }
}

/// A (step, odds) point on a trial's trajectory, recorded for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub n: u64,
    pub log_odds: Option<f64>,
}

/// Run one sequential replicate.
pub fn run_trial<R: Rng>(
    spec: &TrialSpec,
    hypothesis: Hypothesis,
    rng: &mut R,
) -> Result<TrialOutcome, TrialError> {
    run_trial_traced(spec, hypothesis, rng, None)
}

/// Like [`run_trial`], optionally recording the whole odds trajectory.
pub fn run_trial_traced<R: Rng>(
    spec: &TrialSpec,
    hypothesis: Hypothesis,
    rng: &mut R,
    mut trace: Option<&mut Vec<TraceRecord>>,
) -> Result<TrialOutcome, TrialError> {
    spec.validate()?;
    let draw = draw_parameters(
        &spec.prior,
        hypothesis,
        &spec.mode,
        spec.design.as_ref(),
        rng,
    )?;

    let mut stats = SufficientStats::empty(spec.prior.family());
    let horizon = spec.rule.horizon();
    let mut last_defined: Option<(u64, LogBayesFactor, LogOdds)> = None;

    for step_index in 0..horizon {
        let step = sample_step(&draw, spec.design.as_ref(), step_index as usize, rng)?;
        stats = update_stats(&stats, &step)?;
        let n = stats.steps();

        let bf = log_bf_from_stats(
            &spec.prior,
            &stats,
            spec.design.as_ref(),
            spec.design_prior_basis,
        )?;
        let Some(bf) = bf else {
            // Statistic not defined yet (e.g. t-test before its second
            // observation): the rule cannot fire.
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceRecord { n, log_odds: None });
            }
            continue;
        };
        let odds = posterior_odds(bf, spec.prior_odds)?;
        if let Some(t) = trace.as_deref_mut() {
            t.push(TraceRecord {
                n,
                log_odds: Some(odds.value()),
            });
        }

        if let StopCheck::Stop(reason) = should_stop(&spec.rule, odds, n) {
            return Ok(finish(spec, hypothesis, draw, n, bf, odds, reason));
        }
        last_defined = Some((n, bf, odds));
    }

    // The loop only falls through when the statistic was never defined at the
    // horizon boundary; report the last defined state if any.
    match last_defined {
        Some((n, bf, odds)) => {
            let reason = match spec.rule {
                StoppingRule::FixedN { .. } => StopReason::FixedN,
                _ => StopReason::MaxN,
            };
            Ok(finish(spec, hypothesis, draw, n, bf, odds, reason))
        }
        None => Err(TrialError::InvalidConfig(
            "the Bayes factor was never defined within the stopping horizon".into(),
        )),
    }
}

fn finish(
    spec: &TrialSpec,
    hypothesis: Hypothesis,
    draw: ParameterDraw,
    n_stop: u64,
    bf: LogBayesFactor,
    odds: LogOdds,
    stopped_by: StopReason,
) -> TrialOutcome {
    let decision = match spec.rule {
        StoppingRule::FixedN { .. } => None,
        StoppingRule::SymmetricThreshold { b, .. } => Some(if odds.value() >= b.ln() {
            TestDecision::RejectH0
        } else if odds.value() <= -b.ln() {
            TestDecision::AcceptH0
        } else {
            TestDecision::Undecided
        }),
        StoppingRule::OneSidedThreshold { b, .. } => Some(if odds.value() >= b.ln() {
            TestDecision::RejectH0
        } else {
            TestDecision::Undecided
        }),
    };
    TrialOutcome {
        final_log_bf: bf,
        final_log_odds: odds,
        n_stop,
        generating_hypothesis: hypothesis,
        parameter_draw: draw,
        stopped_by,
        decision,
    }
}
