//! Experiment orchestration for the Bayes factor calibration laboratory:
//! configuration parsing, frozen presets, deterministic parallel replicate
//! execution, and result persistence.

pub mod checks;
pub mod config;
pub mod exec;
pub mod presets;
pub mod report;
pub mod seeds;

pub use config::{load_config, parse_config, ExperimentConfig};
pub use exec::{run_experiment, ExperimentResults};
pub use presets::{preset, preset_names, Preset};
