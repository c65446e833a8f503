//! Acceptance suite: every reproduction target runs at its full published
//! scale and prints one PASS/FAIL line. The suite is a single sequential test
//! so the stated runtime bounds are measured without interference.

use std::time::Instant;

use bfsim::exec::{run_experiment, ExperimentResults};
use bfsim::presets::calibration_preset;
use bfsim::report;
use bfsim_core::bayes::{log_bf_normal_jeffreys_var, SufficientStatsNormal};
use bfsim_core::calibration::{
    band_fraction, martingale_check_bernoulli, martingale_check_normal_known_var,
    CalibrationPoint,
};
use bfsim_core::genmodel::{gprior_beta_density, prior_tail_mass, DesignMatrix, PriorSpec};
use bfsim_core::special::ln_beta;
use rand::{Rng, SeedableRng};
use rand_distr::Distribution;
use rand_pcg::Pcg64Mcg;

struct Gate {
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    fn report(&mut self, criterion: &str, passed: bool, detail: String) {
        println!(
            "{} criterion {criterion}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
        if !passed {
            self.failures.push(format!("criterion {criterion}: {detail}"));
        }
    }
}

fn run_preset(name: &str) -> ExperimentResults {
    let cfg = calibration_preset(name).unwrap_or_else(|| panic!("preset {name}"));
    run_experiment(&cfg, 0).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn slope_of(results: &ExperimentResults) -> f64 {
    results.summary.slope.expect("slope defined")
}

/// Identity-line criteria shared by several reproductions: least-squares
/// slope within [0.95, 1.05] and at least 95% of valid points inside the
/// three-standard-error binomial band.
fn identity_criteria(results: &ExperimentResults) -> (bool, String) {
    let slope = slope_of(results);
    let band = band_fraction(&results.points, 3.0);
    let ok = (0.95..=1.05).contains(&slope) && band >= 0.95;
    (
        ok,
        format!(
            "slope {slope:.4} (need [0.95, 1.05]), band fraction {band:.3} (need ≥ 0.95), {} points",
            results.points.len()
        ),
    )
}

fn mean_excess_above(points: &[CalibrationPoint], nominal_floor: f64) -> Option<f64> {
    let sel: Vec<f64> = points
        .iter()
        .filter(|p| p.nominal_log_odds >= nominal_floor)
        .map(|p| p.observed_log_odds - p.nominal_log_odds)
        .collect();
    if sel.is_empty() {
        None
    } else {
        Some(sel.iter().sum::<f64>() / sel.len() as f64)
    }
}

#[test]
fn acceptance_suite() {
    let mut gate = Gate::new();

    // 1. Prior calibration at fixed n.
    let started = Instant::now();
    let fig1 = run_preset("fig1");
    let elapsed1 = started.elapsed().as_secs_f64();
    let (ok, detail) = identity_criteria(&fig1);
    gate.report(
        "1",
        ok && elapsed1 <= 10.0,
        format!("{detail}; runtime {elapsed1:.1}s (need ≤ 10s)"),
    );

    // 2. Prior calibration under the 10-to-1-or-25 stopping rule.
    let fig1_os = run_preset("fig1-os");
    let (ok, detail) = identity_criteria(&fig1_os);
    gate.report("2", ok, detail);

    // 3. Strong calibration of the scale-invariant nuisance prior: identical
    // behavior at σ = 1 and σ = 2, plus exact scale invariance.
    {
        let s1 = run_preset("fig2-sigma1-os");
        let s2 = run_preset("fig2-sigma2-os");
        let (ok1, d1) = identity_criteria(&s1);
        let (ok2, d2) = identity_criteria(&s2);

        // Bin-by-bin agreement of the two tables within three standard
        // errors (delta method on the two count ratios).
        let mut worst_z: f64 = 0.0;
        let mut compared = 0usize;
        for b1 in &s1.table.bins {
            let Some(b2) = s2.table.bins.iter().find(|b| b.index == b1.index) else {
                continue;
            };
            let min = s1.table.min_count;
            if b1.count_h0 < min || b1.count_h1 < min || b2.count_h0 < min || b2.count_h1 < min {
                continue;
            }
            let obs1 = (b1.count_h1 as f64 / b1.count_h0 as f64).ln();
            let obs2 = (b2.count_h1 as f64 / b2.count_h0 as f64).ln();
            let se = (1.0 / b1.count_h0 as f64
                + 1.0 / b1.count_h1 as f64
                + 1.0 / b2.count_h0 as f64
                + 1.0 / b2.count_h1 as f64)
                .sqrt();
            worst_z = worst_z.max((obs1 - obs2).abs() / se);
            compared += 1;
        }

        // Exact scale invariance over 1,000 random data/scale pairs.
        let mut rng = Pcg64Mcg::seed_from_u64(314_159);
        let mut worst_dev: f64 = 0.0;
        for _ in 0..1000 {
            let n = rng.gen_range(2usize..50);
            let data: Vec<f64> = (0..n)
                .map(|_| rand_distr::StandardNormal.sample(&mut rng))
                .collect();
            let c: f64 = {
                let mag = (rng.gen::<f64>() * 6.0 - 3.0).exp();
                if rng.gen::<bool>() {
                    -mag
                } else {
                    mag
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
            worst_dev = worst_dev.max((base - moved).abs());
        }

        let ok = ok1 && ok2 && compared > 0 && worst_z <= 3.0 && worst_dev <= 1e-12;
        gate.report(
            "3",
            ok,
            format!(
                "σ=1 [{d1}]; σ=2 [{d2}]; {compared} shared bins, worst |Δ|/SE {worst_z:.3} \
                 (need ≤ 3); scale-invariance dev {worst_dev:.2e} (need ≤ 1e-12)"
            ),
        );
    }

    // 4. Strong-calibration violation for a fixed effect under optional
    // stopping: shallow slope, nominal odds overstating observed odds, and
    // the fixed-n companion closer to the identity line.
    {
        let os = run_preset("fig4-os");
        let fixed = run_preset("fig4-fixed-n");
        let slope_os = slope_of(&os);
        let slope_fixed = slope_of(&fixed);
        let excess = mean_excess_above(&os.points, 3f64.ln());
        let ok = slope_os <= 0.9
            && excess.is_some_and(|e| e < 0.0)
            && (slope_fixed - 1.0).abs() < (slope_os - 1.0).abs();
        gate.report(
            "4",
            ok,
            format!(
                "stopping slope {slope_os:.4} (need ≤ 0.9), mean(obs − nom | nom ≥ ln 3) = \
                 {:?} (need < 0), fixed-n slope {slope_fixed:.4} strictly closer to 1",
                excess
            ),
        );
    }

    // 5. Martingale identities.
    {
        let bern = martingale_check_bernoulli(10).unwrap();
        let mut normal: f64 = 0.0;
        for (n, sum_x) in [(1u64, 0.0), (2, 1.0), (5, -2.0), (10, 3.5), (20, 0.4)] {
            let stats = SufficientStatsNormal {
                n,
                sum_x,
                sum_x2: sum_x * sum_x / n as f64 + n as f64,
            };
            normal = normal.max(martingale_check_normal_known_var(&stats, 1e-9).unwrap());
        }
        gate.report(
            "5",
            bern <= 1e-12 && normal <= 1e-6,
            format!(
                "Bernoulli deviation {bern:.2e} (need ≤ 1e-12), normal one-step deviation \
                 {normal:.2e} (need ≤ 1e-6)"
            ),
        );
    }

    // 6. Frequentist Type-I control under optional stopping at α = 0.05.
    {
        let started = Instant::now();
        let bern = run_preset("type1-bernoulli");
        let jzs = run_preset("type1-jzs");
        let elapsed = started.elapsed().as_secs_f64();
        let check = |r: &ExperimentResults| {
            let est = r.summary.type1.expect("one-sided rule");
            (est, est.rate <= 0.05 + 3.0 * est.mc_standard_error)
        };
        let (est_b, ok_b) = check(&bern);
        let (est_j, ok_j) = check(&jzs);
        gate.report(
            "6",
            ok_b && ok_j && elapsed <= 120.0,
            format!(
                "Bernoulli rate {:.4} and t-test rate {:.4} (each ≤ 0.05 + 3·SE ≈ {:.4}); \
                 runtime {elapsed:.1}s (need ≤ 120s)",
                est_b.rate,
                est_j.rate,
                0.05 + 3.0 * est_b.mc_standard_error
            ),
        );
    }

    // 7. The sequential-design Type-II bound at B = 7, δ = 0.3.
    {
        let started = Instant::now();
        let sch = run_preset("schoenbrodt-b7");
        let elapsed = started.elapsed().as_secs_f64();
        let est = sch.summary.type2.expect("symmetric rule");
        gate.report(
            "7",
            est.rate <= 0.05 && elapsed <= 600.0,
            format!(
                "Type-II rate {:.4} over {} replicates (need ≤ 0.05); runtime {elapsed:.1}s \
                 (need ≤ 600s)",
                est.rate, est.n_replicates
            ),
        );
    }

    // 8. Contingency tables: fixed parameters lose monotone calibration
    // under optional stopping while staying roughly linear at fixed n;
    // prior-sampled runs stay on the identity line either way.
    {
        let fixed_n = run_preset("appendix-poisson");
        let os = run_preset("appendix-poisson-os");
        let slope_fx = slope_of(&fixed_n);
        let rho = os.summary.spearman.expect("enough points");
        let ok_a = rho < 0.9 && (0.5..=1.5).contains(&slope_fx);

        let prior_fx = run_preset("appendix-jm-prior");
        let prior_os = run_preset("appendix-jm-prior-os");
        let (ok_b1, d_b1) = identity_criteria(&prior_fx);
        let (ok_b2, d_b2) = identity_criteria(&prior_os);

        gate.report(
            "8",
            ok_a && ok_b1 && ok_b2,
            format!(
                "(a) stopping Spearman {rho:.3} (need < 0.9), fixed-n slope {slope_fx:.3} \
                 (need [0.5, 1.5]); (b) prior-sampled fixed-n [{d_b1}], stopping [{d_b2}]"
            ),
        );
    }

    // 9. Closed-value checks.
    {
        let cauchy = prior_tail_mass(
            &PriorSpec::Jzs { r: 1.0, mu0: 0.0 },
            &[(6.0, f64::INFINITY)],
        )
        .unwrap();
        let gauss =
            prior_tail_mass(&PriorSpec::NormalKnownVar, &[(6.0, f64::INFINITY)]).unwrap();
        let boundary = prior_tail_mass(
            &PriorSpec::BernoulliJeffreys { theta0: 0.5 },
            &[(0.0, 0.01), (0.99, 1.0)],
        )
        .unwrap();
        let center = prior_tail_mass(
            &PriorSpec::BernoulliJeffreys { theta0: 0.5 },
            &[(0.49, 0.51)],
        )
        .unwrap();
        let ratio = boundary / center;
        let beta_value = (ln_beta(1.5, 1.5) - std::f64::consts::PI.ln()).exp();
        let at_zero = |n: usize| {
            gprior_beta_density(0.0, 1.0, 1.0, &DesignMatrix::dose_ladder(n)).unwrap()
        };
        let (d20, d23, d34) = (at_zero(20), at_zero(23), at_zero(34));

        let ok = (cauchy - 0.0526).abs() <= 1e-4
            && cauchy > 0.05
            && (gauss - 9.87e-10).abs() <= 1e-12
            && (ratio - 10.0).abs() <= 0.1
            && (beta_value - 0.125).abs() <= 1e-15
            && d20 > d23
            && d23 > d34;
        gate.report(
            "9",
            ok,
            format!(
                "P(Cauchy ≥ 6) = {cauchy:.6} (≈ 0.0526, > 1/20), P(Gauss ≥ 6) = {gauss:.3e} \
                 (≈ 9.87e-10), boundary/center mass ratio {ratio:.3} (= 10.0 ± 0.1), \
                 B(3/2,3/2)/π = {beta_value} (= 0.125), density-at-zero ordering \
                 {d20:.4} > {d23:.4} > {d34:.4}"
            ),
        );
    }

    // 10. Worker-count independence of the persisted outcomes.
    {
        let mut ok = true;
        let mut detail = String::new();
        for name in ["fig1-os", "appendix-jm"] {
            let cfg = calibration_preset(name).unwrap();
            let a = run_experiment(&cfg, 1).unwrap();
            let b = run_experiment(&cfg, 2).unwrap();
            let dir = std::env::temp_dir().join(format!(
                "bfsim-acceptance-{}-{name}",
                std::process::id()
            ));
            std::fs::create_dir_all(&dir).unwrap();
            let pa = dir.join("a.csv");
            let pb = dir.join("b.csv");
            report::write_outcomes_csv(&pa, &a.h0_outcomes, &a.h1_outcomes).unwrap();
            report::write_outcomes_csv(&pb, &b.h0_outcomes, &b.h1_outcomes).unwrap();
            let identical = std::fs::read(&pa).unwrap() == std::fs::read(&pb).unwrap();
            ok &= identical;
            detail.push_str(&format!(
                "{name}: 1 vs 2 workers {}; ",
                if identical { "byte-identical" } else { "DIFFER" }
            ));
            let _ = std::fs::remove_dir_all(&dir);
        }
        gate.report("10", ok, detail);
    }

    assert!(
        gate.failures.is_empty(),
        "acceptance failures:\n{}",
        gate.failures.join("\n")
    );
}
