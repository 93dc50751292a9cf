use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

use super::config::{ConfigError, Method, Output, ScenarioConfig, Starter};
use super::output::{field_dump, graymap, sha256_hex, slice_csv, tl_csv};
use super::tl::{tl_db, transmission_loss, TlGrid};
use crate::env::{DepthGrid, EnvironmentModel, MunkProfile, RangeGrid};
use crate::error::Error;
use crate::modes::{greene_starter, modal_starter, reference_field, solve_modes};
use crate::propagators::{propagate_with, FdSspStepper, MarchSettings, SsspStepper, Stepper};
use crate::spectral::ComplexField;

pub const MANIFEST_NAME: &str = "manifest.txt";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("solver error: {0}")]
    Solver(#[from] Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    /// Process exit code: 1 for configuration problems, 2 for everything
    /// that fails after the scenario was accepted.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Solver(_) | RunError::Io { .. } => 2,
        }
    }
}

/// Field history produced by a scenario, decimated in range.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub grid: DepthGrid,
    pub ranges: Vec<f64>,
    pub fields: Vec<ComplexField>,
}

impl Simulation {
    /// TL with the configured depth decimation.
    pub fn transmission_loss(&self, depth_every: usize) -> TlGrid {
        transmission_loss(&self.fields, &self.ranges, 1, depth_every)
    }

    /// Full-resolution TL against range at the node nearest to `z`.
    pub fn slice(&self, z: f64) -> Vec<f64> {
        let k = self.grid.nearest(z);
        self.fields.iter().map(|u| tl_db(u.values()[k])).collect()
    }
}

/// Builds the environment described by `config`.
pub fn environment(config: &ScenarioConfig) -> Result<EnvironmentModel, Error> {
    EnvironmentModel::new(MunkProfile::default(), config.eddy, config.frequency, config.c0)
}

/// Starter field on `grid`.
pub fn starter(config: &ScenarioConfig, env: &EnvironmentModel, grid: &DepthGrid) -> Result<ComplexField, Error> {
    match config.starter {
        Starter::Modal => modal_starter(&solve_modes(env, grid, 0.0)?, config.source_depth),
        Starter::Greene => greene_starter(env.k0(), config.source_depth, grid),
    }
}

/// Marching settings for the propagating methods.
pub fn march_settings(config: &ScenarioConfig) -> MarchSettings {
    let mut s = MarchSettings::new(config.pade_order, config.range_step)
        .with_neumann_terms(config.neumann_terms)
        .with_sampling(config.sampling);
    if let Some(sp) = config.sponge {
        s = s.with_sponge(sp);
    }
    s
}

/// Runs the solver without touching the file system.
pub fn simulate(config: &ScenarioConfig) -> Result<Simulation, Error> {
    let env = environment(config)?;
    let grid = DepthGrid::new(config.depth, config.intervals)?;
    let range = RangeGrid::new(config.range_step, config.steps())?;
    let every = config.range_decimation;
    let mut ranges = Vec::new();
    let mut fields = Vec::new();
    match config.method {
        Method::Modes => {
            let modes = solve_modes(&env, &grid, 0.0)?;
            ranges = (0..=range.steps()).step_by(every).map(|n| range.r(n)).collect();
            fields = reference_field(&modes, config.source_depth, &ranges)?;
        }
        Method::Sssp | Method::FdSsp => {
            let u0 = starter(config, &env, &grid)?;
            let mut stepper: Box<dyn Stepper> = match config.method {
                Method::Sssp => Box::new(SsspStepper::new(env, grid, march_settings(config))?),
                _ => Box::new(FdSspStepper::new(env, grid, march_settings(config))?),
            };
            propagate_with(stepper.as_mut(), &u0, &range, |n, r, u| {
                if n % every == 0 {
                    ranges.push(r);
                    fields.push(u.clone());
                }
            })?;
        }
    }
    Ok(Simulation { grid, ranges, fields })
}

/// One emitted file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config_echo: String,
    pub version: String,
    pub wall_time: Duration,
    pub files: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::from("[run]\n");
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "wall_time_s = {:.3}", self.wall_time.as_secs_f64());
        s.push_str("[files]\n");
        for f in &self.files {
            let _ = writeln!(s, "{}\t{}\t{}", f.path, f.sha256, f.bytes);
        }
        s.push_str("[config]\n");
        s.push_str(&self.config_echo);
        s
    }
}

fn slice_name(z: f64) -> String {
    format!("slice_z{}.csv", z.to_string().replace('.', "p"))
}

/// Runs `config`, writes every requested output plus `manifest.txt` into
/// `out_dir` and returns the manifest.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest, RunError> {
    let start = Instant::now();
    let sim = simulate(config)?;
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io { path: out_dir.into(), source })?;

    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut tl: Option<TlGrid> = None;
    let mut tl_grid = || tl.get_or_insert_with(|| sim.transmission_loss(config.depth_decimation)).clone();
    for out in &config.outputs {
        let (name, bytes) = match *out {
            Output::FullField => {
                let depth: Vec<usize> = (0..sim.grid.points()).step_by(config.depth_decimation).collect();
                let cols: Vec<Vec<_>> =
                    sim.fields.iter().map(|u| depth.iter().map(|&k| u.values()[k]).collect()).collect();
                ("field.pwe".to_string(), field_dump(cols.iter().map(|c| c.as_slice()), cols.len(), depth.len()))
            }
            Output::TlGrid => ("tl.csv".to_string(), tl_csv(&tl_grid()).into_bytes()),
            Output::DepthSlice(z) => (slice_name(z), slice_csv(&sim.ranges, &sim.slice(z)).into_bytes()),
            Output::Image => ("tl.pgm".to_string(), graymap(&tl_grid(), config.tl_min, config.tl_max, config.normalize)),
        };
        if files.iter().any(|(n, _)| *n == name) {
            continue;
        }
        files.push((name, bytes));
    }

    let mut entries = Vec::with_capacity(files.len());
    for (name, bytes) in &files {
        let path = out_dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| RunError::Io { path, source })?;
        entries.push(ManifestEntry { path: name.clone(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
    }
    let manifest = RunManifest {
        config_echo: config.to_text(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time: start.elapsed(),
        files: entries,
    };
    let path = out_dir.join(MANIFEST_NAME);
    std::fs::write(&path, manifest.to_text()).map_err(|source| RunError::Io { path, source })?;
    Ok(manifest)
}
