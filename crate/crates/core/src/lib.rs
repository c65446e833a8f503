//! Simulation laboratory for Bayes factor hypothesis testing under optional
//! stopping: Bayes factor engines for five model families, data generation
//! under prior-sampled or fixed parameters, sequential trial execution with
//! declarative stopping rules, and calibration statistics for the resulting
//! posterior odds.

pub mod bayes;
pub mod calibration;
pub mod genmodel;
pub mod quad;
pub mod sequential;
pub mod special;

pub use bayes::{LogBayesFactor, LogOdds};
pub use genmodel::{Hypothesis, ModelFamily, PriorSpec};
pub use sequential::{StoppingRule, TrialOutcome, TrialSpec};
