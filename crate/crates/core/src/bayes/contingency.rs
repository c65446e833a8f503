//! Default conjugate Bayes factors for independence in a 2×2 contingency
//! table, in the Gunel–Dickey style: a Dirichlet prior with concentration `a`
//! on the four cells under the saturated model, and independent beta priors
//! on the two margins under the independence model.
//!
//! Two sampling-scheme variants are provided. Under the joint-multinomial
//! scheme the margin priors are Beta(a, a) (uniform on the shared Bernoulli
//! parameter when a = 1); under the Poisson scheme they carry the
//! concentrations Beta(2a, 2a) induced by summing the saturated prior over
//! rows and columns. The gamma rate and total-rate terms of the Poisson
//! construction cancel between the two marginal likelihoods, so both variants
//! reduce to ratios of Dirichlet/beta normalizing constants.

use serde::{Deserialize, Serialize};

use super::{BayesError, LogBayesFactor};
use crate::special::{ln_beta, ln_dirichlet_beta};

/// Sampling scheme selecting the default prior pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GdScheme {
    Poisson,
    JointMultinomial,
}

/// Cell counts laid out row-major with rows = outcome 0/1 and columns =
/// group 1/2: `counts = [N1, N2, N3, N4]` where N1 is (outcome 0, group 1)
/// and N4 is (outcome 1, group 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable2x2 {
    pub counts: [u64; 4],
    pub scheme: GdScheme,
    /// Prior concentration on each cell, default 1.
    pub a: f64,
}

impl ContingencyTable2x2 {
    pub fn new(counts: [u64; 4], scheme: GdScheme, a: f64) -> Result<Self, BayesError> {
        let table = Self { counts, scheme, a };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<(), BayesError> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(BayesError::InvalidArgument(format!(
                "prior concentration must be positive, got {}",
                self.a
            )));
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Row (= outcome) sums.
    pub fn row_sums(&self) -> [u64; 2] {
        [
            self.counts[0] + self.counts[1],
            self.counts[2] + self.counts[3],
        ]
    }

    /// Column (= group) sums.
    pub fn col_sums(&self) -> [u64; 2] {
        [
            self.counts[0] + self.counts[2],
            self.counts[1] + self.counts[3],
        ]
    }
}

/// ln BF₁₀ of the saturated model against independence:
///
/// ln [B₄(N + a) / B₄(a)] − ln [B(R + m) / B(m, m)] − ln [B(C + m) / B(m, m)]
///
/// with R, C the row and column sums and m the scheme's margin concentration.
pub fn log_bf_contingency_gd(table: &ContingencyTable2x2) -> Result<LogBayesFactor, BayesError> {
    table.validate()?;
    let a = table.a;
    let margin = match table.scheme {
        GdScheme::JointMultinomial => a,
        GdScheme::Poisson => 2.0 * a,
    };

    let cells: Vec<f64> = table.counts.iter().map(|&c| c as f64 + a).collect();
    let ln_m1 = ln_dirichlet_beta(&cells) - ln_dirichlet_beta(&[a, a, a, a]);

    let [r0, r1] = table.row_sums();
    let [c1, c2] = table.col_sums();
    let ln_m0 = ln_beta(r0 as f64 + margin, r1 as f64 + margin) - ln_beta(margin, margin)
        + ln_beta(c1 as f64 + margin, c2 as f64 + margin)
        - ln_beta(margin, margin);

    Ok(LogBayesFactor(ln_m1 - ln_m0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(counts: [u64; 4], scheme: GdScheme, a: f64) -> f64 {
        log_bf_contingency_gd(&ContingencyTable2x2::new(counts, scheme, a).unwrap())
            .unwrap()
            .value()
    }

    #[test]
    fn empty_table_is_indifferent() {
        for scheme in [GdScheme::Poisson, GdScheme::JointMultinomial] {
            assert_eq!(bf([0, 0, 0, 0], scheme, 1.0), 0.0);
            assert!(bf([0, 0, 0, 0], scheme, 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn label_symmetry() {
        for scheme in [GdScheme::Poisson, GdScheme::JointMultinomial] {
            let x = bf([7, 3, 7, 3], scheme, 1.0);
            let y = bf([3, 7, 3, 7], scheme, 1.0);
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn simultaneous_row_and_column_permutation_is_invariant() {
        // Swapping both rows and both columns maps [N1,N2,N3,N4] to
        // [N4,N3,N2,N1].
        for scheme in [GdScheme::Poisson, GdScheme::JointMultinomial] {
            for counts in [[5u64, 9, 2, 11], [55, 45, 45, 55], [1, 0, 3, 8]] {
                let swapped = [counts[3], counts[2], counts[1], counts[0]];
                let x = bf(counts, scheme, 1.0);
                let y = bf(swapped, scheme, 1.0);
                assert!((x - y).abs() < 1e-11, "{counts:?}");
            }
        }
    }

    #[test]
    fn independence_leaning_table_favors_the_null() {
        // Perfectly proportional rows: evidence should lean toward H0.
        let v = bf([30, 30, 20, 20], GdScheme::JointMultinomial, 1.0);
        assert!(v < 0.0, "got {v}");
    }

    #[test]
    fn association_grows_the_factor() {
        let weak = bf([26, 24, 24, 26], GdScheme::JointMultinomial, 1.0);
        let strong = bf([40, 10, 10, 40], GdScheme::JointMultinomial, 1.0);
        assert!(strong > weak);
    }

    #[test]
    fn schemes_differ_on_informative_tables() {
        let jm = bf([20, 5, 5, 20], GdScheme::JointMultinomial, 1.0);
        let po = bf([20, 5, 5, 20], GdScheme::Poisson, 1.0);
        assert!((jm - po).abs() > 1e-6);
    }

    #[test]
    fn invalid_concentration_rejected() {
        assert!(ContingencyTable2x2::new([1, 1, 1, 1], GdScheme::Poisson, 0.0).is_err());
        assert!(ContingencyTable2x2::new([1, 1, 1, 1], GdScheme::Poisson, f64::NAN).is_err());
    }
}
