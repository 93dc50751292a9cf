//! Range-marching schemes.
//!
//! Both steppers advance `u(r, .)` to `u(r + h, .)` with the partial-fraction
//! propagator
//!
//! ```text
//! u(r + h) = exp(i k0 h) (d0 u + sum_j d_j w_j),
//! (1 + b~_j (d^2/dz^2 + dk^2)) w_j = u,     b~_j = b_j / k0^2.
//! ```
//!
//! [`SsspStepper`] solves each `w_j` with exact transform-space inversion of
//! `1 + b~_j d^2/dz^2` and a truncated Neumann series for the `dk^2` term.
//! [`FdSspStepper`] uses second-order central differences and a tridiagonal
//! solve.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::env::{DepthGrid, EnvironmentModel, RangeGrid};
use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use crate::pade::{pade_coefficients, PadeCoefficients};
use crate::spectral::{ComplexField, TransformPlan};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Where in `[r, r + h]` the environment is sampled for a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RangeSampling {
    #[default]
    Start,
    Midpoint,
}

/// Complex absorbing layer next to the surface and the bottom.
///
/// Adds `i s(z) k0^2` to `dk^2`, with `s` rising quadratically from zero at
/// the inner edge of the layer to `s_max` at the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sponge {
    pub thickness: f64,
    pub s_max: f64,
}

impl Sponge {
    pub fn validate(&self, grid: &DepthGrid) -> Result<()> {
        if !(self.thickness > 0.0 && self.thickness < 0.5 * grid.depth()) {
            return Err(Error::InvalidParameter(format!(
                "sponge thickness must lie in (0, H/2), got {}",
                self.thickness
            )));
        }
        if !(self.s_max.is_finite() && self.s_max >= 0.0) {
            return Err(Error::InvalidParameter(format!("sponge s_max must be >= 0, got {}", self.s_max)));
        }
        Ok(())
    }

    /// Absorption profile `s(z)` on the grid.
    pub fn profile(&self, grid: &DepthGrid) -> Vec<f64> {
        let h = grid.depth();
        let d = self.thickness;
        grid.nodes()
            .map(|z| {
                let depth_in = if z < d {
                    d - z
                } else if z > h - d {
                    z - (h - d)
                } else {
                    0.0
                };
                self.s_max * (depth_in / d).powi(2)
            })
            .collect()
    }
}

/// Adds the sponge's imaginary part to a `dk^2` profile.
pub fn apply_sponge(dk2: &[Complex64], grid: &DepthGrid, sponge: &Sponge, k0: f64) -> Vec<Complex64> {
    if sponge.s_max == 0.0 {
        return dk2.to_vec();
    }
    dk2.iter()
        .zip(sponge.profile(grid))
        .map(|(&v, s)| v + Complex64::new(0.0, s * k0 * k0))
        .collect()
}

/// `sum_{m=0}^{M} (-b L^-1 dk^2)^m L^-1 u` with `L = 1 + b d^2/dz^2`.
///
/// Each correction term costs one forward/inverse transform pair.
pub fn neumann_solve(
    plan: &TransformPlan,
    b_tilde: Complex64,
    dk2: &[Complex64],
    u: &ComplexField,
    terms: usize,
) -> Result<ComplexField> {
    if dk2.len() != u.len() {
        return Err(Error::SizeMismatch { expected: u.len(), got: dk2.len() });
    }
    let mut term = plan.isovelocity_inverse(b_tilde, u)?;
    let mut sum = term.clone();
    for _ in 0..terms {
        for (t, &k) in term.values_mut().iter_mut().zip(dk2) {
            *t *= -b_tilde * k;
        }
        term = plan.isovelocity_inverse(b_tilde, &term)?;
        for (s, t) in sum.values_mut().iter_mut().zip(term.values()) {
            *s += t;
        }
    }
    Ok(sum)
}

/// Shared marching parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchSettings {
    /// Padé order `p`.
    pub pade_order: usize,
    /// Range step `h` in metres.
    pub range_step: f64,
    /// Neumann cutoff `M` (SSSP only).
    pub neumann_terms: usize,
    pub sponge: Option<Sponge>,
    pub sampling: RangeSampling,
}

impl MarchSettings {
    pub fn new(pade_order: usize, range_step: f64) -> Self {
        Self { pade_order, range_step, neumann_terms: 2, sponge: None, sampling: RangeSampling::Start }
    }

    pub fn with_neumann_terms(mut self, m: usize) -> Self {
        self.neumann_terms = m;
        self
    }

    pub fn with_sponge(mut self, sponge: Sponge) -> Self {
        self.sponge = Some(sponge);
        self
    }

    pub fn with_sampling(mut self, sampling: RangeSampling) -> Self {
        self.sampling = sampling;
        self
    }
}

/// Common state of both steppers.
#[derive(Debug, Clone)]
struct StepCore {
    env: EnvironmentModel,
    grid: DepthGrid,
    coeffs: PadeCoefficients,
    b_tilde: Vec<Complex64>,
    settings: MarchSettings,
    carrier: Complex64,
    /// dk^2 for range-independent media, computed once.
    cached_dk2: Option<Vec<Complex64>>,
}

impl StepCore {
    fn new(env: EnvironmentModel, grid: DepthGrid, settings: MarchSettings) -> Result<Self> {
        if !(settings.range_step.is_finite() && settings.range_step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "range step must be positive, got {}",
                settings.range_step
            )));
        }
        if let Some(s) = &settings.sponge {
            s.validate(&grid)?;
        }
        let k0 = env.k0();
        let coeffs = pade_coefficients(k0 * settings.range_step, settings.pade_order)?;
        let b_tilde = coeffs.b_tilde(k0);
        let carrier = Complex64::from_polar(1.0, k0 * settings.range_step);
        let mut core = Self { env, grid, coeffs, b_tilde, settings, carrier, cached_dk2: None };
        if !env.is_range_dependent() {
            core.cached_dk2 = Some(core.compute_dk2(0.0));
        }
        Ok(core)
    }

    fn compute_dk2(&self, r: f64) -> Vec<Complex64> {
        let r = match self.settings.sampling {
            RangeSampling::Start => r,
            RangeSampling::Midpoint => r + 0.5 * self.settings.range_step,
        };
        let dk2: Vec<Complex64> = self
            .env
            .wavenumber_perturbation(&self.grid, r)
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect();
        match &self.settings.sponge {
            Some(s) => apply_sponge(&dk2, &self.grid, s, self.env.k0()),
            None => dk2,
        }
    }

    fn dk2(&self, r: f64) -> std::borrow::Cow<'_, [Complex64]> {
        match &self.cached_dk2 {
            Some(v) => std::borrow::Cow::Borrowed(v),
            None => std::borrow::Cow::Owned(self.compute_dk2(r)),
        }
    }

    /// `exp(i k0 h) (d0 u + sum_j d_j w_j)`, summed in ascending `j`.
    fn combine(&self, u: &ComplexField, w: &[ComplexField]) -> ComplexField {
        let mut out = u.clone();
        let d0 = self.coeffs.d0();
        out.values_mut().iter_mut().for_each(|v| *v *= d0);
        for (wj, &dj) in w.iter().zip(self.coeffs.d()) {
            for (o, x) in out.values_mut().iter_mut().zip(wj.values()) {
                *o += dj * x;
            }
        }
        out.scale(self.carrier);
        out.zero_endpoints();
        out
    }

    /// `exp(i k0 h) (d0 + sum_j d_j / (1 + b~_j lambda))`.
    fn multiplier(&self, lambda: f64) -> Complex64 {
        let s: Complex64 = self
            .coeffs
            .d()
            .iter()
            .zip(&self.b_tilde)
            .map(|(d, b)| d / (1.0 + b * lambda))
            .sum();
        self.carrier * (self.coeffs.d0() + s)
    }
}

/// One marching step of a propagator.
pub trait Stepper {
    fn grid(&self) -> &DepthGrid;
    fn range_step(&self) -> f64;
    /// Advances `u` from range `r` to `r + h`.
    fn step(&mut self, u: &ComplexField, r: f64) -> Result<ComplexField>;
}

/// Spectral split-step Padé stepper (Dirichlet sine transform).
#[derive(Debug, Clone)]
pub struct SsspStepper {
    core: StepCore,
    plan: TransformPlan,
}

impl SsspStepper {
    pub fn new(env: EnvironmentModel, grid: DepthGrid, settings: MarchSettings) -> Result<Self> {
        Self::with_plan(env, TransformPlan::sine(grid), settings)
    }

    pub fn with_plan(env: EnvironmentModel, plan: TransformPlan, settings: MarchSettings) -> Result<Self> {
        let core = StepCore::new(env, *plan.grid(), settings)?;
        Ok(Self { core, plan })
    }

    pub fn coefficients(&self) -> &PadeCoefficients {
        &self.core.coeffs
    }

    pub fn b_tilde(&self) -> &[Complex64] {
        &self.core.b_tilde
    }

    pub fn plan(&self) -> &TransformPlan {
        &self.plan
    }

    pub fn settings(&self) -> &MarchSettings {
        &self.core.settings
    }

    /// Isovelocity multiplier of transform mode `index` (0-based slot of the plan).
    pub fn mode_multiplier(&self, index: usize) -> Complex64 {
        self.core.multiplier(self.plan.eigenvalues()[index])
    }

    /// `dk^2` (including the sponge) used for a step starting at `r`.
    pub fn perturbation(&self, r: f64) -> Vec<Complex64> {
        self.core.dk2(r).into_owned()
    }
}

impl Stepper for SsspStepper {
    fn grid(&self) -> &DepthGrid {
        &self.core.grid
    }

    fn range_step(&self) -> f64 {
        self.core.settings.range_step
    }

    fn step(&mut self, u: &ComplexField, r: f64) -> Result<ComplexField> {
        let dk2 = self.core.dk2(r);
        let terms = self.core.settings.neumann_terms;
        let w = self
            .core
            .b_tilde
            .par_iter()
            .map(|&b| neumann_solve(&self.plan, b, &dk2, u, terms))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.core.combine(u, &w))
    }
}

/// Finite-difference split-step Padé stepper with Dirichlet closure.
#[derive(Debug, Clone)]
pub struct FdSspStepper {
    core: StepCore,
}

impl FdSspStepper {
    pub fn new(env: EnvironmentModel, grid: DepthGrid, settings: MarchSettings) -> Result<Self> {
        Ok(Self { core: StepCore::new(env, grid, settings)? })
    }

    pub fn coefficients(&self) -> &PadeCoefficients {
        &self.core.coeffs
    }

    /// Eigenvalue of the central second difference for sine mode `l >= 1`.
    pub fn discrete_eigenvalue(&self, l: usize) -> f64 {
        let g = &self.core.grid;
        let s = (l as f64 * std::f64::consts::PI / (2.0 * g.intervals() as f64)).sin();
        -4.0 / (g.dz() * g.dz()) * s * s
    }

    /// Isovelocity multiplier of sine mode `l >= 1`.
    pub fn mode_multiplier(&self, l: usize) -> Complex64 {
        self.core.multiplier(self.discrete_eigenvalue(l))
    }

    fn solve_term(&self, b: Complex64, dk2: &[Complex64], u: &ComplexField) -> Result<ComplexField> {
        let n = self.core.grid.intervals();
        let inv_dz2 = 1.0 / (self.core.grid.dz() * self.core.grid.dz());
        let off = vec![b * inv_dz2; n - 2];
        let diag: Vec<Complex64> =
            (1..n).map(|k| 1.0 + b * (dk2[k] - 2.0 * inv_dz2)).collect();
        let interior = solve_tridiagonal(&off, &diag, &off, &u.values()[1..n])?;
        let mut out = vec![ZERO; n + 1];
        out[1..n].copy_from_slice(&interior);
        ComplexField::new(self.core.grid, out)
    }
}

impl Stepper for FdSspStepper {
    fn grid(&self) -> &DepthGrid {
        &self.core.grid
    }

    fn range_step(&self) -> f64 {
        self.core.settings.range_step
    }

    fn step(&mut self, u: &ComplexField, r: f64) -> Result<ComplexField> {
        if u.len() != self.core.grid.points() {
            return Err(Error::SizeMismatch { expected: self.core.grid.points(), got: u.len() });
        }
        let dk2 = self.core.dk2(r);
        let w = self
            .core
            .b_tilde
            .par_iter()
            .map(|&b| self.solve_term(b, &dk2, u))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.core.combine(u, &w))
    }
}

/// Marches `u0` over `range`, calling `recorder(n, r_n, field)` for the
/// starter (`n = 0`) and after every step. Returns the final field.
pub fn propagate_with<S, F>(stepper: &mut S, u0: &ComplexField, range: &RangeGrid, mut recorder: F) -> Result<ComplexField>
where
    S: Stepper + ?Sized,
    F: FnMut(usize, f64, &ComplexField),
{
    if (range.step() - stepper.range_step()).abs() > 1e-12 * range.step() {
        return Err(Error::InvalidParameter(format!(
            "range grid step {} does not match the stepper step {}",
            range.step(),
            stepper.range_step()
        )));
    }
    recorder(0, 0.0, u0);
    let mut u = u0.clone();
    for n in 1..=range.steps() {
        let r = range.r(n - 1);
        u = stepper.step(&u, r).map_err(|e| Error::AtStep { step: n, range: r, source: Box::new(e) })?;
        recorder(n, range.r(n), &u);
    }
    Ok(u)
}

/// Marches `u0` and collects every field, starter first.
pub fn propagate<S: Stepper + ?Sized>(stepper: &mut S, u0: &ComplexField, range: &RangeGrid) -> Result<Vec<ComplexField>> {
    let mut history = Vec::with_capacity(range.steps() + 1);
    propagate_with(stepper, u0, range, |_, _, u| history.push(u.clone()))?;
    Ok(history)
}
