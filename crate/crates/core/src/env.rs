//! Grids, sound-speed models and the derived wavenumber quantities.
//!
//! Depth is measured downward from the surface at `z = 0` to the bottom at
//! `z = H`. Range is the marching coordinate.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Equidistant depth grid `z_n = n * dz`, `n = 0..=N`, with `dz = H / N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthGrid {
    depth: f64,
    intervals: usize,
    dz: f64,
}

impl DepthGrid {
    pub fn new(depth: f64, intervals: usize) -> Result<Self> {
        if !(depth.is_finite() && depth > 0.0) {
            return Err(Error::InvalidParameter(format!("depth must be positive, got {depth}")));
        }
        if intervals < 2 {
            return Err(Error::InvalidParameter(format!(
                "depth grid needs at least 2 intervals, got {intervals}"
            )));
        }
        Ok(Self { depth, intervals, dz: depth / intervals as f64 })
    }

    /// Total depth `H` in metres.
    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// Number of intervals `N`; the grid has `N + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn points(&self) -> usize {
        self.intervals + 1
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    /// Depth of node `n`. The last node is exactly `H`.
    pub fn z(&self, n: usize) -> f64 {
        if n == self.intervals {
            self.depth
        } else {
            n as f64 * self.dz
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.intervals).map(move |n| self.z(n))
    }

    /// Index of the node nearest to depth `z`, clamped to the grid.
    pub fn nearest(&self, z: f64) -> usize {
        let idx = (z / self.dz).round();
        idx.clamp(0.0, self.intervals as f64) as usize
    }
}

/// Marching grid `r_n = n * h`, `n = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeGrid {
    step: f64,
    steps: usize,
}

impl RangeGrid {
    /// `steps = 0` is accepted and describes a history holding only the starter.
    pub fn new(step: f64, steps: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!("range step must be positive, got {step}")));
        }
        Ok(Self { step, steps })
    }

    /// Grid covering `[0, extent]` with the last step landing at or before `extent`.
    pub fn covering(step: f64, extent: f64) -> Result<Self> {
        if !(extent.is_finite() && extent >= 0.0) {
            return Err(Error::InvalidParameter(format!("range extent must be >= 0, got {extent}")));
        }
        let steps = (extent / step + 1e-9).floor() as usize;
        Self::new(step, steps)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn r(&self, n: usize) -> f64 {
        n as f64 * self.step
    }
}

/// Canonical deep-water channel profile
/// `c(z) = c_ref (1 + eps (eta + exp(-eta) - 1))`, `eta = 2 (z - z_axis) / z_axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MunkProfile {
    pub c_ref: f64,
    pub eps: f64,
    pub z_axis: f64,
}

impl Default for MunkProfile {
    fn default() -> Self {
        Self { c_ref: 1500.0, eps: 0.00737, z_axis: 1300.0 }
    }
}

impl MunkProfile {
    pub fn speed(&self, z: f64) -> f64 {
        let eta = 2.0 * (z - self.z_axis) / self.z_axis;
        self.c_ref * (1.0 + self.eps * (eta + (-eta).exp() - 1.0))
    }
}

/// Free-function form of [`MunkProfile::speed`].
pub fn munk_speed(z: f64, profile: &MunkProfile) -> f64 {
    profile.speed(z)
}

/// Gaussian synoptic eddy. The 3D parameterization is reduced to the vertical
/// plane `x = r`, `y = y0`, so the cross-track factor is identically one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EddyModel {
    pub beta: f64,
    pub r_x: f64,
    pub r_y: f64,
    pub r_z: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub c_m: f64,
}

impl EddyModel {
    /// Parameters of the exaggerated warm eddy used in the range-dependent experiment.
    pub fn warm() -> Self {
        Self {
            beta: 1.7125,
            r_x: 32_000.0,
            r_y: 18_000.0,
            r_z: 250.0,
            x0: 50_000.0,
            y0: 0.0,
            z0: 1100.0,
            c_m: 40.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let radii = [("r_x", self.r_x), ("r_y", self.r_y), ("r_z", self.r_z), ("beta", self.beta)];
        for (name, v) in radii {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("eddy {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn speed(&self, r: f64, z: f64) -> f64 {
        let dx = (r - self.x0) / self.r_x;
        let zeta = (z - self.z0) / self.r_z;
        -self.c_m * (-dx * dx).exp() * zeta * (-self.beta * zeta * zeta).exp()
    }
}

pub fn eddy_speed(r: f64, z: f64, eddy: &EddyModel) -> f64 {
    eddy.speed(r, z)
}

/// Sound-speed model plus the source frequency and reference speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentModel {
    munk: MunkProfile,
    eddy: Option<EddyModel>,
    frequency: f64,
    c0: f64,
}

impl EnvironmentModel {
    pub fn new(munk: MunkProfile, eddy: Option<EddyModel>, frequency: f64, c0: f64) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidParameter(format!("frequency must be positive, got {frequency}")));
        }
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::InvalidParameter(format!("reference speed must be positive, got {c0}")));
        }
        if !(munk.c_ref > 0.0 && munk.z_axis > 0.0) {
            return Err(Error::InvalidParameter("Munk c_ref and z_axis must be positive".into()));
        }
        if let Some(e) = &eddy {
            e.validate()?;
        }
        Ok(Self { munk, eddy, frequency, c0 })
    }

    /// Munk channel without eddy, reference speed 1500 m/s.
    pub fn munk(frequency: f64) -> Result<Self> {
        Self::new(MunkProfile::default(), None, frequency, 1500.0)
    }

    pub fn munk_profile(&self) -> &MunkProfile {
        &self.munk
    }

    pub fn eddy(&self) -> Option<&EddyModel> {
        self.eddy.as_ref()
    }

    pub fn is_range_dependent(&self) -> bool {
        self.eddy.is_some()
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Reference wavenumber `k0 = omega / c0`.
    pub fn k0(&self) -> f64 {
        self.omega() / self.c0
    }

    pub fn sound_speed(&self, r: f64, z: f64) -> f64 {
        let c = self.munk.speed(z);
        match &self.eddy {
            Some(e) => c + e.speed(r, z),
            None => c,
        }
    }

    pub fn wavenumber(&self, r: f64, z: f64) -> f64 {
        self.omega() / self.sound_speed(r, z)
    }

    /// `k(r, z_n)^2 - k0^2` at every node of `grid`.
    pub fn wavenumber_perturbation(&self, grid: &DepthGrid, r: f64) -> Vec<f64> {
        let k0 = self.k0();
        grid.nodes()
            .map(|z| {
                let k = self.wavenumber(r, z);
                k * k - k0 * k0
            })
            .collect()
    }
}

/// Free-function form of [`EnvironmentModel::wavenumber_perturbation`].
pub fn wavenumber_perturbation(env: &EnvironmentModel, grid: &DepthGrid, r: f64) -> Vec<f64> {
    env.wavenumber_perturbation(grid, r)
}
