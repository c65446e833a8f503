//! Persistence: outcome and calibration CSVs, run summaries, and the
//! observed-vs-nominal scatter as SVG.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bfsim_core::calibration::{CalibrationPoint, CalibrationTable};
use bfsim_core::genmodel::{gprior_beta_density, DesignMatrix, Hypothesis};
use bfsim_core::sequential::TrialOutcome;
use thiserror::Error;

use crate::exec::{ExperimentResults, FailureRecord, Summary};
use crate::presets::GPriorCurvesConfig;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("refusing to write an empty plot: no calibration point passed the count threshold")]
    EmptyBins,
    #[error("serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ReportError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io_err(path))?;
    }
    let mut f = std::fs::File::create(path).map_err(io_err(path))?;
    f.write_all(contents.as_bytes()).map_err(io_err(path))
}

fn flatten_params(outcome: &TrialOutcome) -> String {
    outcome
        .parameter_draw
        .values
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub const OUTCOME_HEADER: &str = "replicate_index,hypothesis,n_stop,stopped_by,log_bf,log_posterior_odds,param_provenance,fixed_or_drawn_parameter_values";

/// One row per surviving replicate, H0 batch first, ordered by index.
pub fn write_outcomes_csv(
    path: &Path,
    h0: &[TrialOutcome],
    h1: &[TrialOutcome],
) -> Result<(), ReportError> {
    let mut out = String::with_capacity((h0.len() + h1.len()) * 80 + 128);
    out.push_str(OUTCOME_HEADER);
    out.push('\n');
    for batch in [h0, h1] {
        for (idx, o) in batch.iter().enumerate() {
            let provenance = match o.parameter_draw.provenance {
                bfsim_core::genmodel::Provenance::FromPrior => "from_prior",
                bfsim_core::genmodel::Provenance::Fixed => "fixed",
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                idx,
                o.generating_hypothesis.label(),
                o.n_stop,
                o.stopped_by.label(),
                o.final_log_bf.value(),
                o.final_log_odds.value(),
                provenance,
                flatten_params(o),
            )
            .expect("string write");
        }
    }
    write_file(path, &out)
}

/// Calibration points: one row per bin passing the count threshold.
pub fn write_points_csv(path: &Path, points: &[CalibrationPoint]) -> Result<(), ReportError> {
    if points.is_empty() {
        return Err(ReportError::EmptyBins);
    }
    let mut out = String::new();
    out.push_str("bin_center_log_odds,count_h0,count_h1,observed_log_odds\n");
    for p in points {
        writeln!(
            out,
            "{},{},{},{}",
            p.nominal_log_odds, p.count_h0, p.count_h1, p.observed_log_odds
        )
        .expect("string write");
    }
    write_file(path, &out)
}

/// The full histogram pair, including bins below the count threshold.
pub fn write_histogram_csv(path: &Path, table: &CalibrationTable) -> Result<(), ReportError> {
    let mut out = String::new();
    out.push_str("bin_center_log_odds,count_h0,count_h1\n");
    for b in &table.bins {
        writeln!(out, "{},{},{}", b.center, b.count_h0, b.count_h1).expect("string write");
    }
    write_file(path, &out)
}

pub fn write_failures_csv(path: &Path, failures: &[FailureRecord]) -> Result<(), ReportError> {
    let mut out = String::new();
    out.push_str("hypothesis,replicate_index,error\n");
    for f in failures {
        writeln!(
            out,
            "{},{},\"{}\"",
            f.hypothesis.label(),
            f.replicate_index,
            f.error.replace('"', "'")
        )
        .expect("string write");
    }
    write_file(path, &out)
}

pub fn write_summary_json(path: &Path, summary: &Summary) -> Result<(), ReportError> {
    let json = serde_json::to_string_pretty(summary)?;
    write_file(path, &format!("{json}\n"))
}

/// Observed-vs-nominal scatter in natural-log coordinates with the identity
/// reference line; tick labels name plain odds (1/100, 1/10, 1, 10, 100) so
/// the plot reads in either convention.
pub fn write_scatter_svg(
    path: &Path,
    points: &[CalibrationPoint],
    title: &str,
) -> Result<(), ReportError> {
    if points.is_empty() {
        return Err(ReportError::EmptyBins);
    }
    let (width, height, margin) = (640.0, 640.0, 70.0);
    let lo = points
        .iter()
        .flat_map(|p| [p.nominal_log_odds, p.observed_log_odds])
        .fold(f64::INFINITY, f64::min)
        - 0.5;
    let hi = points
        .iter()
        .flat_map(|p| [p.nominal_log_odds, p.observed_log_odds])
        .fold(f64::NEG_INFINITY, f64::max)
        + 0.5;
    let scale = (width - 2.0 * margin) / (hi - lo);
    let x = |v: f64| margin + (v - lo) * scale;
    let y = |v: f64| height - margin - (v - lo) * scale;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("string write");
    writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    )
    .expect("string write");
    writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        width / 2.0,
        title
    )
    .expect("string write");

    // Axes box.
    writeln!(
        svg,
        r#"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        width - 2.0 * margin,
        height - 2.0 * margin
    )
    .expect("string write");

    // Odds-valued ticks at powers of ten on the natural-log axes.
    let ln10 = std::f64::consts::LN_10;
    for k in -3i32..=3 {
        let v = k as f64 * ln10;
        if v < lo || v > hi {
            continue;
        }
        let label = match k {
            0 => "1".to_string(),
            k if k > 0 => format!("10^{k}"),
            k => format!("1/10^{}", -k),
        };
        writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/>"#,
            x(v),
            height - margin,
            height - margin + 6.0
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            x(v),
            height - margin + 22.0,
            label
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<line x1="{1:.2}" y1="{0:.2}" x2="{2:.2}" y2="{0:.2}" stroke="black"/>"#,
            y(v),
            margin - 6.0,
            margin
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            margin - 10.0,
            y(v) + 4.0,
            label
        )
        .expect("string write");
    }
    writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">nominal posterior odds (log scale)</text>"#,
        width / 2.0,
        height - 18.0
    )
    .expect("string write");
    writeln!(
        svg,
        r#"<text x="20" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14" transform="rotate(-90 20 {})">observed posterior odds (log scale)</text>"#,
        height / 2.0,
        height / 2.0
    )
    .expect("string write");

    // Identity reference line.
    writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="6 4"/>"#,
        x(lo),
        y(lo),
        x(hi),
        y(hi)
    )
    .expect("string write");

    for p in points {
        writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="steelblue" fill-opacity="0.8"/>"#,
            x(p.nominal_log_odds),
            y(p.observed_log_odds)
        )
        .expect("string write");
    }
    writeln!(svg, "</svg>").expect("string write");
    write_file(path, &svg)
}

/// Persist everything an experiment run produced. The points CSV and the
/// scatter are only written when at least one bin passed the threshold.
pub fn persist_results(results: &ExperimentResults, out_dir: &Path) -> Result<(), ReportError> {
    write_outcomes_csv(
        &out_dir.join("outcomes.csv"),
        &results.h0_outcomes,
        &results.h1_outcomes,
    )?;
    write_histogram_csv(&out_dir.join("histogram.csv"), &results.table)?;
    write_summary_json(&out_dir.join("summary.json"), &results.summary)?;
    if !results.failures.is_empty() {
        write_failures_csv(&out_dir.join("failures.csv"), &results.failures)?;
    }
    if !results.points.is_empty() {
        write_points_csv(&out_dir.join("calibration.csv"), &results.points)?;
        write_scatter_svg(
            &out_dir.join("plot.svg"),
            &results.points,
            &results.config.name,
        )?;
    }
    Ok(())
}

/// Read (hypothesis, final log posterior odds) pairs back from an outcome
/// CSV, for re-binning.
pub fn read_outcomes_csv(path: &Path) -> Result<Vec<(Hypothesis, f64)>, ReportError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let malformed = |message: String| ReportError::Malformed {
        path: path.to_path_buf(),
        message,
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| malformed("empty file".to_string()))?;
    let columns: Vec<&str> = header.split(',').collect();
    let col = |name: &str| -> Result<usize, ReportError> {
        columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| malformed(format!("missing column '{name}'")))
    };
    let hyp_col = col("hypothesis")?;
    let odds_col = col("log_posterior_odds")?;

    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < columns.len() {
            return Err(malformed(format!("row {} is short", lineno + 2)));
        }
        let hypothesis = match fields[hyp_col] {
            "H0" => Hypothesis::H0,
            "H1" => Hypothesis::H1,
            other => return Err(malformed(format!("row {}: bad hypothesis '{other}'", lineno + 2))),
        };
        let odds: f64 = fields[odds_col]
            .parse()
            .map_err(|e| malformed(format!("row {}: {e}", lineno + 2)))?;
        rows.push((hypothesis, odds));
    }
    Ok(rows)
}

/// Evaluate and persist the conditional coefficient-prior curves for the
/// growing fertilizer designs.
pub fn write_gprior_curves(
    config: &GPriorCurvesConfig,
    out_dir: &Path,
) -> Result<(), ReportError> {
    let designs: Vec<DesignMatrix> = config
        .design_sizes
        .iter()
        .map(|&n| DesignMatrix::dose_ladder(n))
        .collect();

    let mut csv = String::from("beta");
    for n in &config.design_sizes {
        write!(csv, ",density_n{n}").expect("string write");
    }
    csv.push('\n');

    let mut curves: Vec<Vec<(f64, f64)>> = vec![Vec::new(); designs.len()];
    for i in 0..config.beta_steps {
        let beta = config.beta_min
            + (config.beta_max - config.beta_min) * i as f64 / (config.beta_steps - 1) as f64;
        write!(csv, "{beta}").expect("string write");
        for (d, design) in designs.iter().enumerate() {
            let dens = gprior_beta_density(beta, config.g, config.sigma, design)
                .expect("valid curve design");
            write!(csv, ",{dens}").expect("string write");
            curves[d].push((beta, dens));
        }
        csv.push('\n');
    }
    write_file(&out_dir.join("gprior_curves.csv"), &csv)?;

    // Simple polyline rendering.
    let (width, height, margin) = (640.0, 480.0, 60.0);
    let max_dens = curves
        .iter()
        .flat_map(|c| c.iter().map(|p| p.1))
        .fold(0.0f64, f64::max);
    let x = |b: f64| {
        margin + (b - config.beta_min) / (config.beta_max - config.beta_min) * (width - 2.0 * margin)
    };
    let y = |d: f64| height - margin - d / max_dens * (height - 2.0 * margin);
    let colors = ["black", "red", "blue", "green", "orange"];
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("string write");
    writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#).expect("w");
    writeln!(
        svg,
        r#"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        width - 2.0 * margin,
        height - 2.0 * margin
    )
    .expect("string write");
    for (i, curve) in curves.iter().enumerate() {
        let pts: Vec<String> = curve
            .iter()
            .map(|(b, d)| format!("{:.2},{:.2}", x(*b), y(*d)))
            .collect();
        writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            pts.join(" "),
            colors[i % colors.len()]
        )
        .expect("string write");
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">n = {}</text>"#,
            width - margin - 80.0,
            margin + 20.0 + 16.0 * i as f64,
            colors[i % colors.len()],
            config.design_sizes[i]
        )
        .expect("string write");
    }
    writeln!(svg, "</svg>").expect("string write");
    write_file(&out_dir.join("gprior_curves.svg"), &svg)
}
