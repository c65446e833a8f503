//! Aggregation of trial outcomes into calibration tables (observed vs
//! nominal posterior odds), deviation metrics, frequentist error-rate
//! estimates under optional stopping, and the martingale identity checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bayes::{
    log_bf_bernoulli_jeffreys, log_bf_normal_known_var, BernoulliCounts, SufficientStatsNormal,
};
use crate::quad::integrate_real_line;
use crate::sequential::TrialOutcome;

/// Binned outcome counts under both hypotheses.
///
/// Bin edges sit at integer multiples of `bin_width` (anchored at zero), so
/// the bin of a log-odds value x is floor(x / bin_width) and its center is
/// (index + 1/2)·bin_width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable {
    pub bin_width: f64,
    pub min_count: u64,
    pub bins: Vec<CalibrationBin>,
    pub total_h0: u64,
    pub total_h1: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBin {
    pub index: i64,
    pub center: f64,
    pub count_h0: u64,
    pub count_h1: u64,
}

/// One observed-vs-nominal point, defined where both histograms carry at
/// least `min_count` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub nominal_log_odds: f64,
    pub observed_log_odds: f64,
    pub count_h0: u64,
    pub count_h1: u64,
}

/// A frequentist error-rate estimate with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRateEstimate {
    pub rate: f64,
    pub mc_standard_error: f64,
    pub n_replicates: u64,
    /// The α or B the decision rule was thresholded at.
    pub threshold: f64,
}

#[derive(Debug, Clone, Error)]
pub enum CalibrationError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unequal replicate counts: {h0} under H0 vs {h1} under H1")]
    UnequalReplicates { h0: usize, h1: usize },
    #[error("no bin carries at least {min_count} outcomes under both hypotheses")]
    EmptyResult { min_count: u64 },
    #[error("need at least {needed} calibration points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate nominal spread: all points share one bin center")]
    DegenerateSpread,
    #[error(transparent)]
    Bayes(#[from] crate::bayes::BayesError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}

fn bin_index(x: f64, width: f64) -> i64 {
    (x / width).floor() as i64
}

/// Bin raw log-odds values from matched H0/H1 replicate batches.
pub fn bin_log_odds(
    h0: &[f64],
    h1: &[f64],
    bin_width: f64,
    min_count: u64,
) -> Result<CalibrationTable, CalibrationError> {
    if h0.is_empty() || h1.is_empty() {
        return Err(CalibrationError::InvalidArgument(
            "both outcome lists must be nonempty".into(),
        ));
    }
    if h0.len() != h1.len() {
        // The count ratio estimates the odds only with matched batch sizes
        // at prior odds one.
        return Err(CalibrationError::UnequalReplicates {
            h0: h0.len(),
            h1: h1.len(),
        });
    }
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(CalibrationError::InvalidArgument(format!(
            "bin width must be positive, got {bin_width}"
        )));
    }

    let mut counts: std::collections::BTreeMap<i64, (u64, u64)> = std::collections::BTreeMap::new();
    for &x in h0 {
        counts.entry(bin_index(x, bin_width)).or_default().0 += 1;
    }
    for &x in h1 {
        counts.entry(bin_index(x, bin_width)).or_default().1 += 1;
    }

    let bins = counts
        .into_iter()
        .map(|(index, (count_h0, count_h1))| CalibrationBin {
            index,
            center: (index as f64 + 0.5) * bin_width,
            count_h0,
            count_h1,
        })
        .collect();

    Ok(CalibrationTable {
        bin_width,
        min_count,
        bins,
        total_h0: h0.len() as u64,
        total_h1: h1.len() as u64,
    })
}

/// Bin terminal trial outcomes by their final log posterior odds.
pub fn bin_outcomes(
    h0_outcomes: &[TrialOutcome],
    h1_outcomes: &[TrialOutcome],
    bin_width: f64,
    min_count: u64,
) -> Result<CalibrationTable, CalibrationError> {
    let h0: Vec<f64> = h0_outcomes.iter().map(|o| o.final_log_odds.value()).collect();
    let h1: Vec<f64> = h1_outcomes.iter().map(|o| o.final_log_odds.value()).collect();
    bin_log_odds(&h0, &h1, bin_width, min_count)
}

/// Merge two partial tables produced with identical binning settings. The
/// operation is associative and commutative, so concurrent workers can fold
/// partial tables in any order.
pub fn merge_tables(
    a: &CalibrationTable,
    b: &CalibrationTable,
) -> Result<CalibrationTable, CalibrationError> {
    if a.bin_width != b.bin_width || a.min_count != b.min_count {
        return Err(CalibrationError::InvalidArgument(
            "cannot merge tables with different binning settings".into(),
        ));
    }
    let mut counts: std::collections::BTreeMap<i64, (u64, u64)> = std::collections::BTreeMap::new();
    for bin in a.bins.iter().chain(b.bins.iter()) {
        let e = counts.entry(bin.index).or_default();
        e.0 += bin.count_h0;
        e.1 += bin.count_h1;
    }
    Ok(CalibrationTable {
        bin_width: a.bin_width,
        min_count: a.min_count,
        bins: counts
            .into_iter()
            .map(|(index, (count_h0, count_h1))| CalibrationBin {
                index,
                center: (index as f64 + 0.5) * a.bin_width,
                count_h0,
                count_h1,
            })
            .collect(),
        total_h0: a.total_h0 + b.total_h0,
        total_h1: a.total_h1 + b.total_h1,
    })
}

/// Observed log odds ln(count_h1 / count_h0) against the nominal bin center,
/// one point per bin that passes `min_count` in both histograms.
pub fn observed_vs_nominal(
    table: &CalibrationTable,
) -> Result<Vec<CalibrationPoint>, CalibrationError> {
    let points: Vec<CalibrationPoint> = table
        .bins
        .iter()
        .filter(|b| b.count_h0 >= table.min_count && b.count_h1 >= table.min_count)
        .map(|b| CalibrationPoint {
            nominal_log_odds: b.center,
            observed_log_odds: (b.count_h1 as f64 / b.count_h0 as f64).ln(),
            count_h0: b.count_h0,
            count_h1: b.count_h1,
        })
        .collect();
    if points.is_empty() {
        return Err(CalibrationError::EmptyResult {
            min_count: table.min_count,
        });
    }
    Ok(points)
}

/// Least-squares slope of observed on nominal, plus the largest absolute
/// deviation from the identity line.
pub fn calibration_deviation(
    points: &[CalibrationPoint],
) -> Result<(f64, f64), CalibrationError> {
    if points.len() < 3 {
        return Err(CalibrationError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.nominal_log_odds).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.observed_log_odds).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut max_abs_dev: f64 = 0.0;
    for p in points {
        let dx = p.nominal_log_odds - mean_x;
        sxx += dx * dx;
        sxy += dx * (p.observed_log_odds - mean_y);
        max_abs_dev = max_abs_dev.max((p.observed_log_odds - p.nominal_log_odds).abs());
    }
    if sxx == 0.0 {
        return Err(CalibrationError::DegenerateSpread);
    }
    Ok((sxy / sxx, max_abs_dev))
}

/// Standardized binomial residual of one calibration point. Conditional on
/// the bin total T = k + m, calibration puts k ~ Binomial(T, p) with
/// p = eᶜ / (1 + eᶜ) at nominal center c; the residual is
/// (k − Tp) / √(Tp(1−p)).
pub fn binomial_residual(point: &CalibrationPoint) -> f64 {
    let t = (point.count_h0 + point.count_h1) as f64;
    let p = 1.0 / (1.0 + (-point.nominal_log_odds).exp());
    let expected = t * p;
    (point.count_h1 as f64 - expected) / (t * p * (1.0 - p)).sqrt()
}

/// Fraction of points whose binomial residual lies within ±z.
pub fn band_fraction(points: &[CalibrationPoint], z: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let inside = points
        .iter()
        .filter(|p| binomial_residual(p).abs() <= z)
        .count();
    inside as f64 / points.len() as f64
}

/// Spearman rank correlation (average ranks for ties) between nominal and
/// observed log odds.
pub fn spearman_observed_nominal(points: &[CalibrationPoint]) -> Result<f64, CalibrationError> {
    if points.len() < 3 {
        return Err(CalibrationError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.nominal_log_odds).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.observed_log_odds).collect();
    let rx = average_ranks(&xs);
    let ry = average_ranks(&ys);
    let n = rx.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..rx.len() {
        let dx = rx[i] - mean;
        let dy = ry[i] - mean;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(CalibrationError::DegenerateSpread);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn rate_estimate(hits: u64, n: u64, threshold: f64) -> ErrorRateEstimate {
    let rate = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
    ErrorRateEstimate {
        rate,
        mc_standard_error: (rate * (1.0 - rate) / n.max(1) as f64).sqrt(),
        n_replicates: n,
        threshold,
    }
}

/// Type-I error estimate under optional stopping: the fraction of H0-generated
/// replicates whose final odds reject H0, i.e. whose posterior odds in favor
/// of H0 dropped to α or below (log odds for H1 at least −ln α).
pub fn type1_error_optional_stopping(
    h0_outcomes: &[TrialOutcome],
    alpha: f64,
) -> Result<ErrorRateEstimate, CalibrationError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CalibrationError::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let cut = -alpha.ln();
    let hits = h0_outcomes
        .iter()
        .filter(|o| o.final_log_odds.value() >= cut)
        .count() as u64;
    Ok(rate_estimate(hits, h0_outcomes.len() as u64, alpha))
}

/// Type-II error estimate for the symmetric-threshold rule: the fraction of
/// H1-generated replicates that accepted H0 (final odds at or below 1/B).
pub fn type2_error_schoenbrodt(
    h1_outcomes: &[TrialOutcome],
    b: f64,
) -> Result<ErrorRateEstimate, CalibrationError> {
    if !(b.is_finite() && b > 1.0) {
        return Err(CalibrationError::InvalidArgument(format!(
            "threshold B must exceed 1, got {b}"
        )));
    }
    let cut = -b.ln();
    let hits = h1_outcomes
        .iter()
        .filter(|o| o.final_log_odds.value() <= cut)
        .count() as u64;
    Ok(rate_estimate(hits, h1_outcomes.len() as u64, b))
}

/// Exhaustively verify the one-step martingale identity of the fair-null
/// Bernoulli Bayes factor,
/// ½·BF(n₁+1, n₀) + ½·BF(n₁, n₀+1) = BF(n₁, n₀),
/// over all count pairs with n₁ + n₀ < max_depth. Returns the largest
/// absolute deviation.
pub fn martingale_check_bernoulli(max_depth: u64) -> Result<f64, CalibrationError> {
    if max_depth > 20 {
        return Err(CalibrationError::InvalidArgument(
            "exhaustive check supported up to depth 20".into(),
        ));
    }
    let bf = |n1: u64, n0: u64| -> Result<f64, CalibrationError> {
        Ok(log_bf_bernoulli_jeffreys(&BernoulliCounts::fair_null(n1, n0))?
            .value()
            .exp())
    };
    let mut worst: f64 = 0.0;
    for total in 0..max_depth {
        for n1 in 0..=total {
            let n0 = total - n1;
            let parent = bf(n1, n0)?;
            let child = 0.5 * bf(n1 + 1, n0)? + 0.5 * bf(n1, n0 + 1)?;
            worst = worst.max((child - parent).abs());
        }
    }
    Ok(worst)
}

/// One-step martingale check for the known-variance normal family by
/// quadrature over the next observation: |E_{H0}[BF_{n+1} | prefix] − BF_n|.
pub fn martingale_check_normal_known_var(
    stats: &SufficientStatsNormal,
    rel_tol: f64,
) -> Result<f64, CalibrationError> {
    let parent = log_bf_normal_known_var(stats)?.value().exp();
    let n = stats.n;
    let sum_x = stats.sum_x;
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    let expectation = integrate_real_line(
        |x| {
            let child = SufficientStatsNormal {
                n: n + 1,
                sum_x: sum_x + x,
                // The known-variance factor depends only on (n, Σx); keep the
                // second moment consistent anyway.
                sum_x2: stats.sum_x2 + x * x,
            };
            let bf = log_bf_normal_known_var(&child).expect("valid stats").value();
            // Combined in log space: the density underflow and the factor's
            // growth would otherwise meet as 0 · ∞ far in the tails.
            (-0.5 * x * x - 0.5 * ln_2pi + bf).exp()
        },
        rel_tol,
    )?;
    Ok((expectation.value - parent).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(nominal: f64, h0: u64, h1: u64) -> CalibrationPoint {
        CalibrationPoint {
            nominal_log_odds: nominal,
            observed_log_odds: (h1 as f64 / h0 as f64).ln(),
            count_h0: h0,
            count_h1: h1,
        }
    }

    #[test]
    fn identical_odds_share_a_bin() {
        let t = bin_log_odds(&[0.42], &[0.42], 0.1, 1).unwrap();
        assert_eq!(t.bins.len(), 1);
        assert_eq!(t.bins[0].count_h0, 1);
        assert_eq!(t.bins[0].count_h1, 1);
    }

    #[test]
    fn boundary_arithmetic_separates_nearby_values() {
        let t = bin_log_odds(&[0.04], &[0.14], 0.1, 1).unwrap();
        assert_eq!(t.bins.len(), 2);
        assert_eq!(t.bins[0].index, 0);
        assert_eq!(t.bins[1].index, 1);
    }

    #[test]
    fn counts_are_conserved() {
        let h0: Vec<f64> = (0..500).map(|i| (i as f64) * 0.013 - 3.0).collect();
        let h1: Vec<f64> = (0..500).map(|i| (i as f64) * 0.017 - 2.0).collect();
        let t = bin_log_odds(&h0, &h1, 0.1, 20).unwrap();
        assert_eq!(t.bins.iter().map(|b| b.count_h0).sum::<u64>(), 500);
        assert_eq!(t.bins.iter().map(|b| b.count_h1).sum::<u64>(), 500);
        assert_eq!(t.total_h0, 500);
        assert_eq!(t.total_h1, 500);
    }

    #[test]
    fn unequal_batches_are_rejected() {
        assert!(matches!(
            bin_log_odds(&[0.0, 1.0], &[0.0], 0.1, 1),
            Err(CalibrationError::UnequalReplicates { .. })
        ));
    }

    #[test]
    fn merge_is_commutative_and_exact() {
        let a = bin_log_odds(&[0.0, 0.5, 1.0], &[0.2, 0.7, 1.2], 0.25, 1).unwrap();
        let b = bin_log_odds(&[-0.4, 0.5], &[0.9, 2.0], 0.25, 1).unwrap();
        let ab = merge_tables(&a, &b).unwrap();
        let ba = merge_tables(&b, &a).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.total_h0, 5);
        let whole = bin_log_odds(
            &[0.0, 0.5, 1.0, -0.4, 0.5],
            &[0.2, 0.7, 1.2, 0.9, 2.0],
            0.25,
            1,
        )
        .unwrap();
        assert_eq!(ab, whole);
    }

    #[test]
    fn observed_ratio_of_35_to_10() {
        let t = CalibrationTable {
            bin_width: 0.1,
            min_count: 10,
            bins: vec![CalibrationBin {
                index: 12,
                center: 1.25,
                count_h0: 10,
                count_h1: 35,
            }],
            total_h0: 45,
            total_h1: 45,
        };
        let pts = observed_vs_nominal(&t).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].observed_log_odds - 3.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn equal_counts_give_zero_observed_odds() {
        let pts =
            observed_vs_nominal(&bin_log_odds(&[0.31; 40], &[0.33; 40], 0.1, 20).unwrap())
                .unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].observed_log_odds, 0.0);
    }

    #[test]
    fn min_count_filters_bins() {
        let t = bin_log_odds(&[0.0, 0.0, 5.0], &[0.0, 0.0, 5.0], 0.1, 2).unwrap();
        let pts = observed_vs_nominal(&t).unwrap();
        assert_eq!(pts.len(), 1); // the lone pair at 5.0 is filtered

        let t = bin_log_odds(&[5.0], &[9.0], 0.1, 2).unwrap();
        assert!(matches!(
            observed_vs_nominal(&t),
            Err(CalibrationError::EmptyResult { .. })
        ));
    }

    #[test]
    fn global_shift_by_whole_bins_moves_nominal_not_observed() {
        // Values are placed well inside their bins so that adding a whole
        // number of bin widths cannot flip any floor() across an edge.
        let width = 0.25;
        let h0: Vec<f64> = (0..200)
            .map(|i| ((i % 9) as f64 - 4.0 + 0.37) * width)
            .collect();
        let h1: Vec<f64> = (0..200)
            .map(|i| ((i % 11) as f64 - 5.0 + 0.61) * width)
            .collect();
        let shift = 3.0 * width;
        let base = observed_vs_nominal(&bin_log_odds(&h0, &h1, width, 5).unwrap()).unwrap();
        let shifted_h0: Vec<f64> = h0.iter().map(|x| x + shift).collect();
        let shifted_h1: Vec<f64> = h1.iter().map(|x| x + shift).collect();
        let shifted =
            observed_vs_nominal(&bin_log_odds(&shifted_h0, &shifted_h1, width, 5).unwrap())
                .unwrap();
        assert_eq!(base.len(), shifted.len());
        for (p, q) in base.iter().zip(shifted.iter()) {
            assert!((q.nominal_log_odds - p.nominal_log_odds - shift).abs() < 1e-12);
            assert_eq!(p.observed_log_odds, q.observed_log_odds);
        }
    }

    #[test]
    fn identity_points_have_unit_slope_and_zero_dev() {
        let pts: Vec<CalibrationPoint> = (0..5)
            .map(|i| {
                let c = i as f64 * 0.5 - 1.0;
                CalibrationPoint {
                    nominal_log_odds: c,
                    observed_log_odds: c,
                    count_h0: 100,
                    count_h1: 100,
                }
            })
            .collect();
        let (slope, max_dev) = calibration_deviation(&pts).unwrap();
        assert!((slope - 1.0).abs() < 1e-12);
        assert_eq!(max_dev, 0.0);
    }

    #[test]
    fn exact_half_slope_line() {
        let pts: Vec<CalibrationPoint> = [(0.0, 0.0), (1.0, 0.5), (2.0, 1.0)]
            .iter()
            .map(|&(x, y)| CalibrationPoint {
                nominal_log_odds: x,
                observed_log_odds: y,
                count_h0: 50,
                count_h1: 50,
            })
            .collect();
        let (slope, _) = calibration_deviation(&pts).unwrap();
        assert!((slope - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deviation_needs_three_points_and_spread() {
        assert!(matches!(
            calibration_deviation(&[point(0.0, 10, 10)]),
            Err(CalibrationError::TooFewPoints { .. })
        ));
        let same_bin = vec![point(1.0, 10, 12), point(1.0, 20, 25), point(1.0, 30, 31)];
        assert!(matches!(
            calibration_deviation(&same_bin),
            Err(CalibrationError::DegenerateSpread)
        ));
    }

    #[test]
    fn binomial_residual_is_zero_at_exact_calibration() {
        // Nominal odds e⁰ = 1 with equal counts: residual 0.
        let p = point(0.0, 200, 200);
        assert!(binomial_residual(&p).abs() < 1e-12);
        // count ratio matching eᶜ also zeroes the residual.
        let c = 2f64.ln();
        let p = CalibrationPoint {
            nominal_log_odds: c,
            observed_log_odds: c,
            count_h0: 100,
            count_h1: 200,
        };
        assert!(binomial_residual(&p).abs() < 1e-12);
        assert_eq!(band_fraction(&[p], 3.0), 1.0);
    }

    #[test]
    fn spearman_detects_monotone_and_scrambled_relations() {
        let monotone: Vec<CalibrationPoint> = (0..10)
            .map(|i| point(i as f64 * 0.3, 100, 60 + 10 * i as u64))
            .collect();
        let rho = spearman_observed_nominal(&monotone).unwrap();
        assert!((rho - 1.0).abs() < 1e-12);

        let scrambled: Vec<CalibrationPoint> = [3.0, 1.0, 4.0, 1.5, 5.0, 0.2, 2.0]
            .iter()
            .enumerate()
            .map(|(i, &y)| CalibrationPoint {
                nominal_log_odds: i as f64,
                observed_log_odds: y,
                count_h0: 50,
                count_h1: 50,
            })
            .collect();
        let rho = spearman_observed_nominal(&scrambled).unwrap();
        assert!(rho < 0.9);
    }

    #[test]
    fn error_rates_from_empty_lists_are_zero() {
        let est = type1_error_optional_stopping(&[], 0.05).unwrap();
        assert_eq!(est.rate, 0.0);
        assert_eq!(est.n_replicates, 0);
    }

    #[test]
    fn error_rate_standard_error_formula() {
        let est = ErrorRateEstimate {
            rate: 0.04,
            mc_standard_error: (0.04f64 * 0.96 / 10_000.0).sqrt(),
            n_replicates: 10_000,
            threshold: 7.0,
        };
        assert!((est.mc_standard_error - 0.00196).abs() < 1e-5);
    }

    #[test]
    fn bernoulli_martingale_identity_to_machine_precision() {
        let dev = martingale_check_bernoulli(10).unwrap();
        assert!(dev <= 1e-12, "max deviation {dev:e}");
    }

    #[test]
    fn bernoulli_martingale_root_case() {
        // BF(1,0) = BF(0,1) by symmetry and the two marginals average to 1.
        let b10 = log_bf_bernoulli_jeffreys(&BernoulliCounts::fair_null(1, 0))
            .unwrap()
            .value()
            .exp();
        let b01 = log_bf_bernoulli_jeffreys(&BernoulliCounts::fair_null(0, 1))
            .unwrap()
            .value()
            .exp();
        assert!((b10 - b01).abs() < 1e-15);
        assert!((0.5 * b10 + 0.5 * b01 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn martingale_depth_cap() {
        assert!(martingale_check_bernoulli(21).is_err());
    }

    #[test]
    fn normal_family_one_step_martingale_by_quadrature() {
        for (n, sum_x) in [(1u64, 0.0), (1, 0.5), (3, -1.2), (5, 2.0), (10, 3.5)] {
            let stats = SufficientStatsNormal {
                n,
                sum_x,
                sum_x2: sum_x * sum_x / n as f64 + n as f64,
            };
            let dev = martingale_check_normal_known_var(&stats, 1e-9).unwrap();
            assert!(dev <= 1e-6, "(n={n}, Σx={sum_x}): deviation {dev:e}");
        }
    }
}
