//! Built-in verification suites behind `check --suite`.

use bfsim_core::bayes::{
    log_bf_normal_jeffreys_var, log_bf_ttest_jzs, SufficientStatsNormal, TTestStat,
};
use bfsim_core::calibration::{
    martingale_check_bernoulli, martingale_check_normal_known_var, type1_error_optional_stopping,
};
use bfsim_core::genmodel::PriorSpec;
use bfsim_core::sequential::{log_bf_from_stats, update_stats, DesignPriorBasis, SufficientStats};
use bfsim_core::genmodel::{ModelFamily, StepUnit};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;

pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn line(name: &str, passed: bool, detail: String) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Martingale identities: exact Bernoulli closed form and the quadrature
/// version for the known-variance normal family.
pub fn martingale_suite() -> Vec<CheckLine> {
    let mut lines = Vec::new();
    match martingale_check_bernoulli(10) {
        Ok(dev) => lines.push(line(
            "bernoulli martingale identity (depth 10)",
            dev <= 1e-12,
            format!("max deviation {dev:.3e} (limit 1e-12)"),
        )),
        Err(e) => lines.push(line("bernoulli martingale identity", false, e.to_string())),
    }
    let mut worst: f64 = 0.0;
    let mut failed = false;
    for (n, sum_x) in [(1u64, 0.0), (2, 1.0), (5, -2.0), (10, 3.5), (20, 0.4)] {
        let stats = SufficientStatsNormal {
            n,
            sum_x,
            sum_x2: sum_x * sum_x / n as f64 + n as f64,
        };
        match martingale_check_normal_known_var(&stats, 1e-9) {
            Ok(dev) => worst = worst.max(dev),
            Err(e) => {
                lines.push(line("normal one-step martingale", false, e.to_string()));
                failed = true;
            }
        }
    }
    if !failed {
        lines.push(line(
            "normal one-step martingale (quadrature)",
            worst <= 1e-6,
            format!("max deviation {worst:.3e} (limit 1e-6)"),
        ));
    }
    lines
}

/// Group-invariance checks on randomized data.
pub fn invariance_suite(seed: u64) -> Vec<CheckLine> {
    let mut rng = Pcg64Mcg::seed_from_u64(seed);
    let mut lines = Vec::new();

    // Scale invariance of the Jeffreys-variance factor over 1,000 draws.
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(2usize..50);
        let data: Vec<f64> = (0..n)
            .map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng))
            .collect();
        let c: f64 = {
            let magnitude = (rng.gen::<f64>() * 6.0 - 3.0).exp();
            if rng.gen::<bool>() {
                -magnitude
            } else {
                magnitude
            }
        };
        let stats = |xs: &[f64]| SufficientStatsNormal {
            n: xs.len() as u64,
            sum_x: xs.iter().sum(),
            sum_x2: xs.iter().map(|x| x * x).sum(),
        };
        let base = log_bf_normal_jeffreys_var(&stats(&data)).unwrap().value();
        let scaled: Vec<f64> = data.iter().map(|x| c * x).collect();
        let moved = log_bf_normal_jeffreys_var(&stats(&scaled)).unwrap().value();
        worst = worst.max((base - moved).abs());
    }
    lines.push(line(
        "scale invariance of the 1/σ-prior factor (1000 draws)",
        worst <= 1e-12,
        format!("max |Δ log BF| = {worst:.3e} (limit 1e-12)"),
    ));

    // Affine invariance of the t-test factor.
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(3u64..25);
        let data: Vec<f64> = (0..n)
            .map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng))
            .collect();
        let mu0 = rng.gen_range(-2.0..2.0);
        let c = rng.gen_range(0.05..20.0);
        let t_of = |xs: &[f64]| {
            let nf = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / nf;
            let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
            (mean - mu0) / ((ss / (nf - 1.0)).sqrt() / nf.sqrt())
        };
        let mapped: Vec<f64> = data.iter().map(|x| c * (x - mu0) + mu0).collect();
        let a = log_bf_ttest_jzs(&TTestStat::new(n, t_of(&data), mu0, 1.0).unwrap())
            .unwrap()
            .value();
        let b = log_bf_ttest_jzs(&TTestStat::new(n, t_of(&mapped), mu0, 1.0).unwrap())
            .unwrap()
            .value();
        worst = worst.max((a - b).abs());
    }
    lines.push(line(
        "affine invariance of the t-test factor (50 draws)",
        worst <= 1e-7,
        format!("max |Δ log BF| = {worst:.3e} (limit 1e-7)"),
    ));

    // Response-affine invariance of the regression factor.
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(5usize..30);
        let ys: Vec<f64> = (0..n)
            .map(|_| rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rng))
            .collect();
        let a = rng.gen_range(0.1..10.0);
        let b = rng.gen_range(-20.0..20.0);
        let fold = |ys: &[f64]| {
            let mut stats = SufficientStats::empty(ModelFamily::GPriorRegression);
            for (i, y) in ys.iter().enumerate() {
                let x = 0.1 * ((i % 20) + 1) as f64;
                stats = update_stats(&stats, &StepUnit::Row { x, y: *y }).unwrap();
            }
            stats
        };
        let mapped: Vec<f64> = ys.iter().map(|y| a * y + b).collect();
        let u = log_bf_from_stats(
            &PriorSpec::GPriorRegression,
            &fold(&ys),
            None,
            DesignPriorBasis::SoFar,
        )
        .unwrap();
        let v = log_bf_from_stats(
            &PriorSpec::GPriorRegression,
            &fold(&mapped),
            None,
            DesignPriorBasis::SoFar,
        )
        .unwrap();
        if let (Some(u), Some(v)) = (u, v) {
            worst = worst.max((u.value() - v.value()).abs());
        }
    }
    lines.push(line(
        "response-affine invariance of the regression factor (50 draws)",
        worst <= 1e-6,
        format!("max |Δ log BF| = {worst:.3e} (limit 1e-6)"),
    ));

    lines
}

/// A quick frequentist Type-I probe on the fair-coin null.
pub fn type1_suite(seed: u64, replicates: u64) -> Vec<CheckLine> {
    let mut cfg = crate::presets::calibration_preset("type1-bernoulli").expect("preset");
    cfg.replicates = replicates;
    cfg.master_seed = seed;
    match crate::exec::run_experiment(&cfg, 0) {
        Ok(results) => {
            let est = type1_error_optional_stopping(&results.h0_outcomes, 0.05).expect("alpha");
            let bound = 0.05 + 3.0 * est.mc_standard_error;
            vec![line(
                "optional-stopping Type-I rate, fair-coin null",
                est.rate <= bound,
                format!(
                    "rate {:.4} over {} replicates (bound {:.4})",
                    est.rate, est.n_replicates, bound
                ),
            )]
        }
        Err(e) => vec![line("optional-stopping Type-I rate", false, e.to_string())],
    }
}

