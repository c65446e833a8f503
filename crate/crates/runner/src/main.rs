//! Command-line interface: run simulation experiments, evaluate single Bayes
//! factors, re-bin persisted outcomes, and run the built-in check suites.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bfsim::checks;
use bfsim::config::load_config;
use bfsim::exec::{run_experiment, RunError};
use bfsim::presets::{preset, preset_names, Preset};
use bfsim::report;
use bfsim_core::bayes::{
    log_bf_bernoulli_jeffreys, log_bf_contingency_gd, log_bf_normal_jeffreys_var,
    log_bf_normal_known_var, log_bf_regression_gprior, log_bf_ttest_jzs, BernoulliCounts,
    ContingencyTable2x2, GdScheme, LogBayesFactor, RegressionStat, SufficientStatsNormal,
    TTestStat,
};
use bfsim_core::calibration::{bin_log_odds, calibration_deviation, observed_vs_nominal};
use bfsim_core::genmodel::Hypothesis;
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_VALIDATION: i32 = 2;
const EXIT_NUMERIC: i32 = 3;

#[derive(Parser)]
#[command(
    name = "bfsim",
    about = "Bayes factor calibration laboratory: sequential simulation experiments with optional stopping"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation experiment from a config file or a named preset.
    Simulate {
        /// JSON experiment configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Named preset (see the README for the list).
        #[arg(long)]
        preset: Option<String>,
        /// Worker threads; 0 means one per CPU.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (default: $BFSIM_OUT/<name> or out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replicates-per-hypothesis override.
        #[arg(long)]
        replicates: Option<u64>,
    },
    /// Evaluate one Bayes factor from sufficient statistics.
    Bf {
        /// Model family.
        family: BfFamily,
        /// Statistics as name=value pairs (see the README for each family).
        #[arg(long, required = true, num_args = 1..)]
        stats: Vec<String>,
        /// Contingency sampling scheme.
        #[arg(long, value_enum, default_value_t = SchemeArg::JointMultinomial)]
        scheme: SchemeArg,
    },
    /// Re-bin an existing outcomes CSV into a calibration table.
    Calibrate {
        /// outcomes.csv produced by `simulate`.
        #[arg(long)]
        outcomes: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        bin_width: f64,
        #[arg(long, default_value_t = 20)]
        min_count: u64,
        /// Output directory (default: alongside the input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in verification suite.
    Check {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20_260_808)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BfFamily {
    NormalKnownVar,
    NormalJeffreysVar,
    Jzs,
    Gprior,
    Bernoulli,
    Contingency,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Poisson,
    JointMultinomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Martingale,
    Invariance,
    Type1,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            config,
            preset: preset_name,
            workers,
            seed,
            out,
            replicates,
        } => simulate(config, preset_name, workers, seed, out, replicates),
        Command::Bf {
            family,
            stats,
            scheme,
        } => single_bf(family, &stats, scheme),
        Command::Calibrate {
            outcomes,
            bin_width,
            min_count,
            out,
        } => calibrate(&outcomes, bin_width, min_count, out),
        Command::Check { suite, seed } => check(suite, seed),
    }
}

fn default_out_dir(name: &str) -> PathBuf {
    let base = std::env::var_os("BFSIM_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"));
    base.join(name)
}

fn simulate(
    config_path: Option<PathBuf>,
    preset_name: Option<String>,
    workers: usize,
    seed: Option<u64>,
    out: Option<PathBuf>,
    replicates: Option<u64>,
) -> i32 {
    let resolved = match (&config_path, &preset_name) {
        (Some(path), None) => match load_config(path) {
            Ok(cfg) => Preset::Calibration(cfg),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_VALIDATION;
            }
        },
        (None, Some(name)) => match preset(name) {
            Some(p) => p,
            None => {
                eprintln!(
                    "error: unknown preset '{name}'; known presets: {}",
                    preset_names().join(", ")
                );
                return EXIT_VALIDATION;
            }
        },
        _ => {
            eprintln!("error: provide exactly one of --config or --preset");
            return EXIT_VALIDATION;
        }
    };

    match resolved {
        Preset::GPriorCurves(curves) => {
            let out_dir = out.unwrap_or_else(|| default_out_dir(&curves.name));
            match report::write_gprior_curves(&curves, &out_dir) {
                Ok(()) => {
                    println!("wrote {}", out_dir.join("gprior_curves.csv").display());
                    println!("wrote {}", out_dir.join("gprior_curves.svg").display());
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_FAILURE
                }
            }
        }
        Preset::Calibration(mut cfg) => {
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(reps) = replicates {
                cfg.replicates = reps;
            }
            if let Some(out) = out {
                cfg.out_dir = Some(out);
            }
            if let Err(e) = cfg.validate() {
                eprintln!("error: {e}");
                return EXIT_VALIDATION;
            }
            let out_dir = cfg
                .out_dir
                .clone()
                .unwrap_or_else(|| default_out_dir(&cfg.name));

            match run_experiment(&cfg, workers) {
                Ok(results) => {
                    if let Err(e) = report::persist_results(&results, &out_dir) {
                        eprintln!("error: {e}");
                        return EXIT_FAILURE;
                    }
                    let s = &results.summary;
                    println!(
                        "{}: {} replicates/hypothesis in {:.2}s → {}",
                        s.name,
                        s.replicates_per_hypothesis,
                        s.runtime_seconds,
                        out_dir.display()
                    );
                    if let (Some(slope), Some(dev)) = (s.slope, s.max_abs_dev) {
                        println!(
                            "calibration: {} points, slope {:.4}, max |obs − nom| {:.4}, within-3SE fraction {:.3}",
                            s.n_calibration_points,
                            slope,
                            dev,
                            s.band_fraction_3se.unwrap_or(f64::NAN)
                        );
                    }
                    if let Some(t1) = &s.type1 {
                        println!(
                            "type-I estimate at α = {}: {:.4} ± {:.4}",
                            t1.threshold, t1.rate, t1.mc_standard_error
                        );
                    }
                    if let Some(t2) = &s.type2 {
                        println!(
                            "type-II estimate at B = {}: {:.4} ± {:.4}",
                            t2.threshold, t2.rate, t2.mc_standard_error
                        );
                    }
                    if s.failed_h0 + s.failed_h1 > 0 {
                        println!(
                            "failed replicates: {} under H0, {} under H1 ({} pairs dropped)",
                            s.failed_h0, s.failed_h1, s.dropped_pairs
                        );
                    }
                    EXIT_OK
                }
                Err(RunError::Config(e)) => {
                    eprintln!("error: {e}");
                    EXIT_VALIDATION
                }
                Err(e @ RunError::TooManyFailures { .. }) => {
                    eprintln!("error: {e}");
                    EXIT_NUMERIC
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_FAILURE
                }
            }
        }
    }
}

fn parse_stat_map(stats: &[String]) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    for item in stats {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| format!("'{item}' is not name=value"))?;
        let value: f64 = value.parse().map_err(|e| format!("'{item}': {e}"))?;
        map.insert(key.trim().to_string(), value);
    }
    Ok(map)
}

fn single_bf(family: BfFamily, stats: &[String], scheme: SchemeArg) -> i32 {
    let map = match parse_stat_map(stats) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let need = |name: &str| -> Result<f64, String> {
        map.get(name)
            .copied()
            .ok_or_else(|| format!("missing --stats {name}=…"))
    };
    let opt = |name: &str, default: f64| map.get(name).copied().unwrap_or(default);

    let result: Result<LogBayesFactor, String> = (|| {
        let bf = match family {
            BfFamily::NormalKnownVar => {
                let n = need("n")? as u64;
                let sum_x = need("sum_x")?;
                // Only (n, Σx) enter this factor; Σx² defaults to a value
                // consistent with the Cauchy–Schwarz invariant.
                let sum_x2 = opt("sum_x2", if n == 0 { 0.0 } else { sum_x * sum_x });
                let stats = SufficientStatsNormal::new(n, sum_x, sum_x2)
                    .map_err(|e| e.to_string())?;
                log_bf_normal_known_var(&stats).map_err(|e| e.to_string())?
            }
            BfFamily::NormalJeffreysVar => {
                let stats =
                    SufficientStatsNormal::new(need("n")? as u64, need("sum_x")?, need("sum_x2")?)
                        .map_err(|e| e.to_string())?;
                log_bf_normal_jeffreys_var(&stats).map_err(|e| e.to_string())?
            }
            BfFamily::Jzs => {
                let stat = TTestStat::new(
                    need("n")? as u64,
                    need("t")?,
                    opt("mu0", 0.0),
                    opt("r", 1.0),
                )
                .map_err(|e| e.to_string())?;
                log_bf_ttest_jzs(&stat).map_err(|e| e.to_string())?
            }
            BfFamily::Gprior => {
                let stat =
                    RegressionStat::new(need("n")? as u64, need("p")? as u64, need("r_squared")?)
                        .map_err(|e| e.to_string())?;
                log_bf_regression_gprior(&stat).map_err(|e| e.to_string())?
            }
            BfFamily::Bernoulli => {
                let counts = BernoulliCounts::new(
                    need("n1")? as u64,
                    need("n0")? as u64,
                    opt("theta0", 0.5),
                )
                .map_err(|e| e.to_string())?;
                log_bf_bernoulli_jeffreys(&counts).map_err(|e| e.to_string())?
            }
            BfFamily::Contingency => {
                let table = ContingencyTable2x2::new(
                    [
                        need("n1")? as u64,
                        need("n2")? as u64,
                        need("n3")? as u64,
                        need("n4")? as u64,
                    ],
                    match scheme {
                        SchemeArg::Poisson => GdScheme::Poisson,
                        SchemeArg::JointMultinomial => GdScheme::JointMultinomial,
                    },
                    opt("a", 1.0),
                )
                .map_err(|e| e.to_string())?;
                log_bf_contingency_gd(&table).map_err(|e| e.to_string())?
            }
        };
        Ok(bf)
    })();

    match result {
        Ok(bf) => {
            println!("log_bf10 = {}", bf.value());
            println!("bf10 = {}", bf.bf10());
            println!("log10_bf10 = {}", bf.log10());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_VALIDATION
        }
    }
}

fn calibrate(outcomes: &Path, bin_width: f64, min_count: u64, out: Option<PathBuf>) -> i32 {
    let rows = match report::read_outcomes_csv(outcomes) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let h0: Vec<f64> = rows
        .iter()
        .filter(|(h, _)| *h == Hypothesis::H0)
        .map(|(_, v)| *v)
        .collect();
    let h1: Vec<f64> = rows
        .iter()
        .filter(|(h, _)| *h == Hypothesis::H1)
        .map(|(_, v)| *v)
        .collect();
    let table = match bin_log_odds(&h0, &h1, bin_width, min_count) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let out_dir = out.unwrap_or_else(|| {
        outcomes
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_else(|| PathBuf::from("."))
    });
    if let Err(e) = report::write_histogram_csv(&out_dir.join("histogram.csv"), &table) {
        eprintln!("error: {e}");
        return EXIT_FAILURE;
    }
    match observed_vs_nominal(&table) {
        Ok(points) => {
            if let Err(e) = report::write_points_csv(&out_dir.join("calibration.csv"), &points) {
                eprintln!("error: {e}");
                return EXIT_FAILURE;
            }
            match calibration_deviation(&points) {
                Ok((slope, dev)) => println!(
                    "{} points, slope {slope:.4}, max |obs − nom| {dev:.4}",
                    points.len()
                ),
                Err(_) => println!("{} points (too few for a slope)", points.len()),
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

fn check(suite: Suite, seed: u64) -> i32 {
    let lines = match suite {
        Suite::Martingale => checks::martingale_suite(),
        Suite::Invariance => checks::invariance_suite(seed),
        Suite::Type1 => checks::type1_suite(seed, 5_000),
    };
    let mut all_passed = true;
    for l in &lines {
        println!(
            "{} {}: {}",
            if l.passed { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
        all_passed &= l.passed;
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
