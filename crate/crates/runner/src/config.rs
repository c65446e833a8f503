//! Experiment configuration: JSON schema, defaults, validation, presets
//! lookup and override merging.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bfsim_core::genmodel::{DesignMatrix, GenerationMode, Hypothesis, ModelFamily, PriorSpec};
use bfsim_core::sequential::{DesignPriorBasis, StoppingRule, TrialSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_REPLICATES: u64 = 20_000;
pub const DEFAULT_MASTER_SEED: u64 = 20_260_808;
pub const DEFAULT_BIN_WIDTH: f64 = 0.1;
pub const DEFAULT_MIN_COUNT: u64 = 20;

/// A fully resolved experiment: one model, one generation mode, one stopping
/// rule, matched H0/H1 replicate batches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: PriorSpec,
    pub mode: GenerationMode,
    pub stopping: StoppingRule,
    #[serde(default = "default_prior_odds")]
    pub prior_odds: f64,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default = "default_master_seed")]
    pub master_seed: u64,
    #[serde(default = "default_bin_width")]
    pub bin_width: f64,
    #[serde(default = "default_min_count")]
    pub min_count: u64,
    #[serde(default)]
    pub design: Option<Vec<f64>>,
    #[serde(default)]
    pub design_prior_basis: DesignPriorBasis,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_prior_odds() -> f64 {
    1.0
}
fn default_replicates() -> u64 {
    DEFAULT_REPLICATES
}
fn default_master_seed() -> u64 {
    DEFAULT_MASTER_SEED
}
fn default_bin_width() -> f64 {
    DEFAULT_BIN_WIDTH
}
fn default_min_count() -> u64 {
    DEFAULT_MIN_COUNT
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("unknown preset '{0}'; known presets: {1}")]
    UnknownPreset(String, String),
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

/// On-disk configuration: either a preset name with runtime overrides, or a
/// full experiment description. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    preset: Option<String>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    model: Option<PriorSpec>,
    #[serde(default)]
    mode: Option<GenerationMode>,
    #[serde(default)]
    stopping: Option<StoppingRule>,
    #[serde(default)]
    prior_odds: Option<f64>,
    #[serde(default)]
    replicates: Option<u64>,
    #[serde(default)]
    master_seed: Option<u64>,
    #[serde(default)]
    bin_width: Option<f64>,
    #[serde(default)]
    min_count: Option<u64>,
    #[serde(default)]
    design: Option<Vec<f64>>,
    #[serde(default)]
    design_prior_basis: Option<DesignPriorBasis>,
    #[serde(default)]
    out_dir: Option<PathBuf>,
}

/// Parse a configuration document, resolving a preset reference if present
/// and applying defaults, then validate.
pub fn parse_config(json: &str) -> Result<ExperimentConfig, ConfigError> {
    let file: ConfigFile = serde_json::from_str(json)?;
    let mut config = match &file.preset {
        Some(preset_name) => {
            for (present, field) in [
                (file.model.is_some(), "model"),
                (file.mode.is_some(), "mode"),
                (file.stopping.is_some(), "stopping"),
                (file.design.is_some(), "design"),
                (file.design_prior_basis.is_some(), "design_prior_basis"),
            ] {
                if present {
                    return Err(invalid(
                        field,
                        format!("cannot override a structural field of preset '{preset_name}'"),
                    ));
                }
            }
            match crate::presets::calibration_preset(preset_name) {
                Some(cfg) => cfg,
                None => {
                    return Err(ConfigError::UnknownPreset(
                        preset_name.clone(),
                        crate::presets::preset_names().join(", "),
                    ))
                }
            }
        }
        None => {
            let model = file.model.clone().ok_or_else(|| invalid("model", "missing"))?;
            let mode = file.mode.clone().ok_or_else(|| invalid("mode", "missing"))?;
            let stopping = file
                .stopping
                .ok_or_else(|| invalid("stopping", "missing"))?;
            ExperimentConfig {
                name: file.name.clone().unwrap_or_else(|| "custom".to_string()),
                model,
                mode,
                stopping,
                prior_odds: default_prior_odds(),
                replicates: default_replicates(),
                master_seed: default_master_seed(),
                bin_width: default_bin_width(),
                min_count: default_min_count(),
                design: file.design.clone(),
                design_prior_basis: file.design_prior_basis.unwrap_or_default(),
                out_dir: None,
            }
        }
    };

    if file.preset.is_some() {
        if let Some(name) = file.name {
            config.name = name;
        }
    }
    if let Some(v) = file.prior_odds {
        config.prior_odds = v;
    }
    if let Some(v) = file.replicates {
        config.replicates = v;
    }
    if let Some(v) = file.master_seed {
        config.master_seed = v;
    }
    if let Some(v) = file.bin_width {
        config.bin_width = v;
    }
    if let Some(v) = file.min_count {
        config.min_count = v;
    }
    if let Some(v) = file.out_dir {
        config.out_dir = Some(v);
    }

    config.validate()?;
    Ok(config)
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.replicates == 0 {
            return Err(invalid("replicates", "must be at least 1"));
        }
        if !(self.bin_width.is_finite() && self.bin_width > 0.0) {
            return Err(invalid("bin_width", "must be positive and finite"));
        }
        if self.min_count == 0 {
            return Err(invalid("min_count", "must be at least 1"));
        }
        if !(self.prior_odds.is_finite() && self.prior_odds > 0.0) {
            return Err(invalid("prior_odds", "must be positive and finite"));
        }

        let spec = self
            .trial_spec()
            .map_err(|e| invalid("stopping/design", e.to_string()))?;
        spec.validate()
            .map_err(|e| invalid("model/mode/stopping", e.to_string()))?;

        // The t statistic needs two observations, a regression fit three:
        // the rule must allow the factor to become defined at all.
        let min_defined = match self.model.family() {
            ModelFamily::Jzs => 2,
            ModelFamily::GPriorRegression => 3,
            _ => 1,
        };
        if spec.rule.horizon() < min_defined {
            return Err(invalid(
                "stopping",
                format!(
                    "horizon {} cannot define the {:?} Bayes factor (needs {} steps)",
                    spec.rule.horizon(),
                    self.model.family(),
                    min_defined
                ),
            ));
        }

        // Pre-flight both hypotheses with a throwaway stream: catches missing
        // fixed parameters and improper-prior sampling requests up front.
        let mut probe = crate::seeds::replicate_rng(self.master_seed, Hypothesis::H0, u64::MAX);
        for hyp in [Hypothesis::H0, Hypothesis::H1] {
            bfsim_core::genmodel::draw_parameters(
                &self.model,
                hyp,
                &self.mode,
                spec.design.as_ref(),
                &mut probe,
            )
            .map_err(|e| invalid("mode", format!("{} ({:?})", e, hyp)))?;
        }
        Ok(())
    }

    /// The per-replicate trial specification this configuration describes.
    pub fn trial_spec(&self) -> Result<TrialSpec, ConfigError> {
        let design = match &self.design {
            Some(xs) => Some(
                DesignMatrix::new(xs.clone())
                    .map_err(|e| invalid("design", e.to_string()))?,
            ),
            None => None,
        };
        Ok(TrialSpec {
            prior: self.model.clone(),
            mode: self.mode.clone(),
            rule: self.stopping,
            prior_odds: self.prior_odds,
            design,
            design_prior_basis: self.design_prior_basis,
        })
    }
}

/// Convenience constructor for fixed-parameter modes.
pub fn fixed_mode(h0: &[(&str, f64)], h1: &[(&str, f64)]) -> GenerationMode {
    let map = |kv: &[(&str, f64)]| -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    };
    GenerationMode::Fixed {
        h0: map(h0),
        h1: map(h1),
    }
}

/// Convenience constructor for prior-sampled modes with fixed nuisances.
pub fn from_prior_mode(fixed: &[(&str, f64)]) -> GenerationMode {
    GenerationMode::FromPrior {
        fixed: fixed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    }
}
