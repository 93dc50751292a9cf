//! Trigonometric transforms over the depth grid and the exact inversion of
//! `1 + b * d^2/dz^2` in transform space.
//!
//! Conventions (grid `z_n = n H / N`):
//!
//! * `Sine` (Dirichlet): DST-I on the interior nodes `n = 1..N-1`,
//!   `c_l = sum_n u_n sin(pi l n / N)`, `l = 1..N-1`, eigenvalue `-(l pi / H)^2`.
//! * `Cosine` (Neumann): DCT-I on all nodes, `l = 0..N`, eigenvalue `-(l pi / H)^2`.
//! * `Periodic`: DFT on nodes `0..N-1` (node `N` mirrors node `0`),
//!   eigenvalue `-(2 pi l' / H)^2` with `l'` the signed frequency.
//!
//! The eigenvalues are those of the continuous operator, not of a discrete
//! Laplacian; that is what makes the per-mode inversion exact.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::env::DepthGrid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|1 + b lambda_l|` below this is a spectral pole.
pub const SPECTRAL_POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// Homogeneous Dirichlet at top and bottom.
    Sine,
    /// Homogeneous Neumann at top and bottom.
    Cosine,
    Periodic,
}

/// Complex samples `u(z_n)`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: DepthGrid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: DepthGrid) -> Self {
        Self { grid, values: vec![ZERO; grid.points()] }
    }

    pub fn new(grid: DepthGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::SizeMismatch { expected: grid.points(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: DepthGrid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = grid.nodes().map(&mut f).collect();
        Self { grid, values }
    }

    pub fn from_real(grid: DepthGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |z| Complex64::new(f(z), 0.0))
    }

    pub fn grid(&self) -> &DepthGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sets the surface and bottom samples to zero.
    pub fn zero_endpoints(&mut self) {
        let last = self.values.len() - 1;
        self.values[0] = ZERO;
        self.values[last] = ZERO;
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
    }

    /// Euclidean norm of the samples.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Precomputed transform for one grid and boundary condition.
#[derive(Clone)]
pub struct TransformPlan {
    kind: TransformKind,
    grid: DepthGrid,
    eigenvalues: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TransformPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPlan")
            .field("kind", &self.kind)
            .field("grid", &self.grid)
            .field("modes", &self.eigenvalues.len())
            .finish()
    }
}

impl TransformPlan {
    pub fn new(kind: TransformKind, grid: DepthGrid) -> Self {
        let n = grid.intervals();
        let h = grid.depth();
        let (len, eigenvalues): (usize, Vec<f64>) = match kind {
            TransformKind::Sine => {
                (2 * n, (1..n).map(|l| -(l as f64 * PI / h).powi(2)).collect())
            }
            TransformKind::Cosine => {
                (2 * n, (0..=n).map(|l| -(l as f64 * PI / h).powi(2)).collect())
            }
            TransformKind::Periodic => (
                n,
                (0..n)
                    .map(|l| {
                        let signed = if l <= n / 2 { l as f64 } else { l as f64 - n as f64 };
                        -(2.0 * PI * signed / h).powi(2)
                    })
                    .collect(),
            ),
        };
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        Self { kind, grid, eigenvalues, fft, ifft }
    }

    pub fn sine(grid: DepthGrid) -> Self {
        Self::new(TransformKind::Sine, grid)
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn grid(&self) -> &DepthGrid {
        &self.grid
    }

    /// Eigenvalue of `d^2/dz^2` for each coefficient slot, in 1/m^2.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Number of spectral coefficients.
    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    fn check(&self, field: &ComplexField) -> Result<()> {
        if field.len() != self.grid.points() {
            return Err(Error::SizeMismatch { expected: self.grid.points(), got: field.len() });
        }
        Ok(())
    }

    /// Spectral coefficients of `field`. For `Sine`, the endpoint samples are
    /// taken to be zero.
    pub fn forward(&self, field: &ComplexField) -> Result<Vec<Complex64>> {
        self.check(field)?;
        let u = field.values();
        let n = self.grid.intervals();
        Ok(match self.kind {
            TransformKind::Sine => {
                // odd extension: X_l = -2i sum u_n sin(pi l n / N)
                let mut buf = vec![ZERO; 2 * n];
                for k in 1..n {
                    buf[k] = u[k];
                    buf[2 * n - k] = -u[k];
                }
                self.fft.process(&mut buf);
                buf[1..n].iter().map(|x| x * Complex64::new(0.0, 0.5)).collect()
            }
            TransformKind::Cosine => {
                // even extension: X_l = u_0 + (-1)^l u_N + 2 sum u_n cos(pi l n / N)
                let mut buf = vec![ZERO; 2 * n];
                buf[..=n].copy_from_slice(&u[..=n]);
                for k in 1..n {
                    buf[2 * n - k] = u[k];
                }
                self.fft.process(&mut buf);
                buf[..=n].iter().map(|x| x * 0.5).collect()
            }
            TransformKind::Periodic => {
                let mut buf = u[..n].to_vec();
                self.fft.process(&mut buf);
                buf
            }
        })
    }

    /// Inverse of [`TransformPlan::forward`].
    pub fn inverse(&self, coeffs: &[Complex64]) -> Result<ComplexField> {
        if coeffs.len() != self.modes() {
            return Err(Error::SizeMismatch { expected: self.modes(), got: coeffs.len() });
        }
        let n = self.grid.intervals();
        let mut out = vec![ZERO; n + 1];
        match self.kind {
            TransformKind::Sine => {
                // u_n = (2/N) sum_l c_l sin(pi l n / N), via the same odd extension
                let mut buf = vec![ZERO; 2 * n];
                for l in 1..n {
                    buf[l] = coeffs[l - 1];
                    buf[2 * n - l] = -coeffs[l - 1];
                }
                self.fft.process(&mut buf);
                let s = Complex64::new(0.0, 1.0 / n as f64);
                for k in 1..n {
                    out[k] = buf[k] * s;
                }
            }
            TransformKind::Cosine => {
                // u_n = (1/N) [c_0 + (-1)^n c_N + 2 sum_{l=1}^{N-1} c_l cos(pi l n / N)]
                let mut buf = vec![ZERO; 2 * n];
                buf[..=n].copy_from_slice(coeffs);
                for l in 1..n {
                    buf[2 * n - l] = coeffs[l];
                }
                self.ifft.process(&mut buf);
                let s = 1.0 / n as f64;
                for k in 0..=n {
                    out[k] = buf[k] * s;
                }
            }
            TransformKind::Periodic => {
                let mut buf = coeffs.to_vec();
                self.ifft.process(&mut buf);
                let s = 1.0 / n as f64;
                for k in 0..n {
                    out[k] = buf[k] * s;
                }
                out[n] = out[0];
            }
        }
        ComplexField::new(self.grid, out)
    }

    /// Multiplies every coefficient by `1 / (1 + b_tilde lambda_l)` in place.
    pub fn apply_isovelocity_inverse(&self, b_tilde: Complex64, coeffs: &mut [Complex64]) -> Result<()> {
        for (index, (c, &lambda)) in coeffs.iter_mut().zip(&self.eigenvalues).enumerate() {
            let den = 1.0 + b_tilde * lambda;
            if den.norm() < SPECTRAL_POLE_TOL {
                return Err(Error::SpectralPole { index });
            }
            *c /= den;
        }
        Ok(())
    }

    /// Exact solve of `(1 + b_tilde d^2/dz^2) w = field` under the plan's
    /// boundary conditions.
    pub fn isovelocity_inverse(&self, b_tilde: Complex64, field: &ComplexField) -> Result<ComplexField> {
        let mut coeffs = self.forward(field)?;
        self.apply_isovelocity_inverse(b_tilde, &mut coeffs)?;
        self.inverse(&coeffs)
    }
}

/// Free-function form of [`TransformPlan::forward`].
pub fn forward(plan: &TransformPlan, field: &ComplexField) -> Result<Vec<Complex64>> {
    plan.forward(field)
}

/// Free-function form of [`TransformPlan::inverse`].
pub fn inverse(plan: &TransformPlan, coeffs: &[Complex64]) -> Result<ComplexField> {
    plan.inverse(coeffs)
}

/// Free-function form of [`TransformPlan::isovelocity_inverse`].
pub fn isovelocity_inverse(
    plan: &TransformPlan,
    b_tilde: Complex64,
    field: &ComplexField,
) -> Result<ComplexField> {
    plan.isovelocity_inverse(b_tilde, field)
}
