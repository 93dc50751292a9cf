//! Scenario files, end-to-end runs and their artifacts.

pub mod config;
pub mod output;
pub mod run;
pub mod tl;

pub use config::{parse_config, parse_config_with_overrides, ConfigError, Method, Normalize, Output, ScenarioConfig, Starter};
pub use run::{run_scenario, simulate, RunError, RunManifest, Simulation};
pub use tl::{compare_tl, transmission_loss, TlComparison, TlGrid};
