//! Normal modes of the depth problem `psi'' + (k^2(z) - kappa^2) psi = 0`
//! with `psi(0) = psi(H) = 0`, the modal and Greene starters, and the
//! range-independent normal-mode field used as a reference.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::SymTridiagonal;
use crate::env::{DepthGrid, EnvironmentModel};
use crate::error::{Error, Result};
use crate::spectral::ComplexField;

/// Smallest grid accepted by [`solve_modes`].
pub const MIN_MODE_INTERVALS: usize = 16;

/// Propagating modes of one depth profile, ordered by descending `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    grid: DepthGrid,
    kappa: Vec<f64>,
    /// `psi[m][n] = Psi_m(z_n)`, endpoints zero, `sum_n Psi_a Psi_b dz = delta_ab`.
    psi: Vec<Vec<f64>>,
    range_dependent: bool,
}

impl ModeSet {
    pub fn grid(&self) -> &DepthGrid {
        &self.grid
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn psi(&self, m: usize) -> &[f64] {
        &self.psi[m]
    }

    pub fn count(&self) -> usize {
        self.kappa.len()
    }

    /// Keeps only the first `count` modes.
    pub fn truncated(&self, count: usize) -> ModeSet {
        let count = count.min(self.count());
        ModeSet {
            grid: self.grid,
            kappa: self.kappa[..count].to_vec(),
            psi: self.psi[..count].to_vec(),
            range_dependent: self.range_dependent,
        }
    }

    /// `Psi_m(z)` by linear interpolation between grid nodes.
    pub fn psi_at(&self, m: usize, z: f64) -> f64 {
        let n = self.grid.intervals();
        let t = (z / self.grid.dz()).clamp(0.0, n as f64);
        let i = (t.floor() as usize).min(n - 1);
        let w = t - i as f64;
        let p = &self.psi[m];
        p[i] * (1.0 - w) + p[i + 1] * w
    }

    /// Excitation weights `sqrt(2 pi) Psi_m(z_s) / sqrt(kappa_m)`.
    fn weights(&self, source_depth: f64) -> Vec<f64> {
        (0..self.count())
            .map(|m| (2.0 * PI).sqrt() * self.psi_at(m, source_depth) / self.kappa[m].sqrt())
            .collect()
    }
}

/// Solves the discretized Sturm–Liouville problem at range `r` and keeps the
/// modes with `kappa^2 > 0`.
pub fn solve_modes(env: &EnvironmentModel, grid: &DepthGrid, r: f64) -> Result<ModeSet> {
    let n = grid.intervals();
    if n < MIN_MODE_INTERVALS {
        return Err(Error::InvalidParameter(format!(
            "mode solver needs at least {MIN_MODE_INTERVALS} depth intervals, got {n}"
        )));
    }
    let inv_dz2 = 1.0 / (grid.dz() * grid.dz());
    let diag: Vec<f64> = (1..n)
        .map(|i| {
            let k = env.wavenumber(r, grid.z(i));
            k * k - 2.0 * inv_dz2
        })
        .collect();
    let matrix = SymTridiagonal::new(diag, vec![inv_dz2; n - 2]);
    let pairs = matrix.eigenpairs_above(0.0);
    if pairs.is_empty() {
        return Err(Error::NoPropagatingModes);
    }
    let scale = 1.0 / grid.dz().sqrt();
    let mut kappa = Vec::with_capacity(pairs.len());
    let mut psi = Vec::with_capacity(pairs.len());
    for pair in pairs {
        // sign convention: positive slope at the surface
        let sign = if pair.vector[0] < 0.0 { -scale } else { scale };
        let mut column = vec![0.0; n + 1];
        for (dst, v) in column[1..n].iter_mut().zip(&pair.vector) {
            *dst = v * sign;
        }
        kappa.push(pair.value.sqrt());
        psi.push(column);
    }
    Ok(ModeSet { grid: *grid, kappa, psi, range_dependent: env.is_range_dependent() })
}

fn check_source(grid: &DepthGrid, source_depth: f64) -> Result<()> {
    if !(source_depth > 0.0 && source_depth < grid.depth()) {
        return Err(Error::InvalidParameter(format!(
            "source depth must lie in (0, {}), got {source_depth}",
            grid.depth()
        )));
    }
    Ok(())
}

/// `u(z) = sqrt(2 pi) sum_m Psi_m(z_s) Psi_m(z) / sqrt(kappa_m)`.
pub fn modal_starter(modes: &ModeSet, source_depth: f64) -> Result<ComplexField> {
    reference_at(modes, source_depth, 0.0)
}

/// Greene's wide-angle source
/// `sqrt(k0) (1.4467 - 0.4201 k0^2 (z - z_s)^2) exp(-k0^2 (z - z_s)^2 / 3.0512)`,
/// with the endpoints zeroed for Dirichlet marching.
pub fn greene_starter(k0: f64, source_depth: f64, grid: &DepthGrid) -> Result<ComplexField> {
    check_source(grid, source_depth)?;
    let amp = k0.sqrt();
    let mut f = ComplexField::from_real(*grid, |z| {
        let s = k0 * k0 * (z - source_depth).powi(2);
        amp * (1.4467 - 0.4201 * s) * (-s / 3.0512).exp()
    });
    f.zero_endpoints();
    Ok(f)
}

fn reference_at(modes: &ModeSet, source_depth: f64, r: f64) -> Result<ComplexField> {
    check_source(&modes.grid, source_depth)?;
    let weights = modes.weights(source_depth);
    let mut out = vec![Complex64::new(0.0, 0.0); modes.grid.points()];
    for (m, w) in weights.iter().enumerate() {
        let c = if r == 0.0 { Complex64::new(*w, 0.0) } else { Complex64::from_polar(*w, modes.kappa[m] * r) };
        for (o, p) in out.iter_mut().zip(&modes.psi[m]) {
            *o += c * p;
        }
    }
    ComplexField::new(modes.grid, out)
}

/// Normal-mode field `sqrt(2 pi) sum_m Psi_m(z_s) Psi_m(z) exp(i kappa_m r) / sqrt(kappa_m)`
/// at each requested range.
pub fn reference_field(modes: &ModeSet, source_depth: f64, ranges: &[f64]) -> Result<Vec<ComplexField>> {
    if modes.range_dependent {
        return Err(Error::RangeDependentEnvironment);
    }
    ranges.iter().map(|&r| reference_at(modes, source_depth, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{EddyModel, MunkProfile};

    fn constant(frequency: f64) -> EnvironmentModel {
        let flat = MunkProfile { c_ref: 1500.0, eps: 0.0, z_axis: 1300.0 };
        EnvironmentModel::new(flat, None, frequency, 1500.0).unwrap()
    }

    #[test]
    fn constant_medium_matches_analytic_pairs() {
        let env = constant(10.0);
        let grid = DepthGrid::new(1000.0, 2000).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        let k = env.k0();
        let expected_count = (k * 1000.0 / PI).floor() as usize;
        assert_eq!(modes.count(), expected_count);
        for m in 0..modes.count() {
            // eigenvalues of the discrete problem are known in closed form
            let dz = grid.dz();
            let discrete = k * k - 4.0 / (dz * dz) * ((m + 1) as f64 * PI / 4000.0).sin().powi(2);
            let continuous = k * k - ((m + 1) as f64 * PI / 1000.0).powi(2);
            let got = modes.kappa()[m].powi(2);
            assert!((got - discrete).abs() < 1e-12 * k * k, "mode {m}: {got} vs {discrete}");
            let kz2 = k * k - continuous;
            assert!((got - continuous).abs() <= kz2 * kz2 * dz * dz / 12.0 * 1.001);
            let analytic: Vec<f64> = grid
                .nodes()
                .map(|z| (2.0 / 1000.0f64).sqrt() * ((m + 1) as f64 * PI * z / 1000.0).sin())
                .collect();
            let err = modes.psi(m).iter().zip(&analytic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-4, "mode {m} shape error {err}");
        }
    }

    #[test]
    fn cutoff_gives_no_modes() {
        // k < pi / H
        let env = constant(0.5);
        let grid = DepthGrid::new(1000.0, 64).unwrap();
        assert_eq!(solve_modes(&env, &grid, 0.0), Err(Error::NoPropagatingModes));
        assert!(solve_modes(&env, &DepthGrid::new(1000.0, 8).unwrap(), 0.0).is_err());
    }

    #[test]
    fn orthonormal_and_dirichlet() {
        let env = EnvironmentModel::munk(25.0).unwrap();
        let grid = DepthGrid::new(4000.0, 1000).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        let dz = grid.dz();
        for a in 0..modes.count() {
            assert_eq!(modes.psi(a)[0], 0.0);
            assert_eq!(modes.psi(a)[grid.intervals()], 0.0);
            assert!(modes.kappa()[a] > 0.0);
            for b in a..modes.count() {
                let dot: f64 = modes.psi(a).iter().zip(modes.psi(b)).map(|(x, y)| x * y).sum::<f64>() * dz;
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).abs() < 1e-8, "({a},{b}) {dot}");
            }
        }
        assert!(modes.kappa().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn single_mode_starter_is_one_term() {
        let env = constant(5.0);
        let grid = DepthGrid::new(500.0, 200).unwrap();
        let one = solve_modes(&env, &grid, 0.0).unwrap().truncated(1);
        let zs = 180.0;
        let u = modal_starter(&one, zs).unwrap();
        let scale = (2.0 * PI).sqrt() * one.psi_at(0, zs) / one.kappa()[0].sqrt();
        for (v, p) in u.values().iter().zip(one.psi(0)) {
            assert!((v - scale * p).norm() < 1e-14);
        }
    }

    #[test]
    fn starter_rejects_bad_source() {
        let env = constant(5.0);
        let grid = DepthGrid::new(500.0, 200).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        assert!(modal_starter(&modes, 0.0).is_err());
        assert!(modal_starter(&modes, 600.0).is_err());
        assert!(greene_starter(0.4, -1.0, &grid).is_err());
    }

    #[test]
    fn greene_values() {
        let grid = DepthGrid::new(4000.0, 4000).unwrap();
        let k0 = 2.0 * PI * 100.0 / 1500.0;
        let zs = 1100.0;
        let u = greene_starter(k0, zs, &grid).unwrap();
        assert!((u.values()[1100].re - k0.sqrt() * 1.4467).abs() < 1e-14);
        for d in 1..50 {
            assert_eq!(u.values()[1100 + d], u.values()[1100 - d]);
        }
        assert_eq!(u.values()[0].norm(), 0.0);
        // bracket root at k0^2 (z - zs)^2 = 1.4467 / 0.4201
        let dz_root = (1.4467f64 / 0.4201).sqrt() / k0;
        let v = k0.sqrt()
            * (1.4467 - 0.4201 * k0 * k0 * dz_root * dz_root)
            * (-(k0 * dz_root).powi(2) / 3.0512).exp();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn reference_at_zero_equals_starter() {
        let env = EnvironmentModel::munk(20.0).unwrap();
        let grid = DepthGrid::new(4000.0, 800).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        let start = modal_starter(&modes, 1100.0).unwrap();
        let refs = reference_field(&modes, 1100.0, &[0.0, 5000.0]).unwrap();
        assert_eq!(refs[0], start);
        assert_ne!(refs[1], start);
    }

    #[test]
    fn single_mode_reference_has_constant_magnitude() {
        let env = EnvironmentModel::munk(20.0).unwrap();
        let grid = DepthGrid::new(4000.0, 400).unwrap();
        let one = solve_modes(&env, &grid, 0.0).unwrap().truncated(1);
        let refs = reference_field(&one, 1100.0, &[0.0, 1234.0, 98765.0]).unwrap();
        for f in &refs[1..] {
            for (a, b) in f.values().iter().zip(refs[0].values()) {
                assert!((a.norm() - b.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eddy_refuses_reference() {
        let env = EnvironmentModel::new(MunkProfile::default(), Some(EddyModel::warm()), 20.0, 1500.0).unwrap();
        let grid = DepthGrid::new(4000.0, 400).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        assert_eq!(reference_field(&modes, 1100.0, &[0.0]), Err(Error::RangeDependentEnvironment));
    }

    fn sign_changes(v: &[f64]) -> usize {
        let inner: Vec<f64> = v[1..v.len() - 1].iter().copied().filter(|x| *x != 0.0).collect();
        inner.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }

    #[test]
    fn sturm_oscillation_count() {
        let env = EnvironmentModel::munk(50.0).unwrap();
        let grid = DepthGrid::new(4000.0, 2000).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        for m in 0..10 {
            assert_eq!(sign_changes(modes.psi(m)), m, "mode {m}");
        }
    }

    #[test]
    fn munk_modes_self_converge() {
        let env = EnvironmentModel::munk(100.0).unwrap();
        let coarse = solve_modes(&env, &DepthGrid::new(4000.0, 8000).unwrap(), 0.0).unwrap();
        let fine = solve_modes(&env, &DepthGrid::new(4000.0, 16000).unwrap(), 0.0).unwrap();
        // refinement may drop the mode sitting right at cutoff
        assert!(coarse.count().abs_diff(fine.count()) <= 1);
        // modes refracted below the surface: kappa above omega / c_max
        let c_max = env.sound_speed(0.0, 0.0);
        let trapped = fine.kappa().iter().filter(|&&k| k > env.omega() / c_max).count();
        assert!(trapped > 100);
        let worst = coarse.kappa()[..trapped]
            .iter()
            .zip(fine.kappa())
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-4, "{worst}");
    }

    #[test]
    fn constant_medium_starter_matches_closed_form() {
        let env = constant(5.0);
        let (h, zs) = (500.0, 180.0);
        let grid = DepthGrid::new(h, 4000).unwrap();
        let modes = solve_modes(&env, &grid, 0.0).unwrap();
        let k = env.k0();
        assert_eq!(modes.count(), (k * h / PI).floor() as usize);
        let u = modal_starter(&modes, zs).unwrap();
        for (n, z) in grid.nodes().enumerate() {
            let exact: f64 = (1..=modes.count())
                .map(|m| {
                    let kz = m as f64 * PI / h;
                    let kappa = (k * k - kz * kz).sqrt();
                    (2.0 * PI).sqrt() * (2.0 / h) * (kz * zs).sin() * (kz * z).sin() / kappa.sqrt()
                })
                .sum();
            assert!((u.values()[n].re - exact).abs() < 1e-6, "z = {z}");
        }
    }

    #[test]
    fn two_mode_beat_length() {
        let env = constant(20.0);
        let h = 1000.0;
        let grid = DepthGrid::new(h, 2000).unwrap();
        let two = solve_modes(&env, &grid, 0.0).unwrap().truncated(2);
        let k = env.k0();
        let kappa = |m: f64| (k * k - (m * PI / h).powi(2)).sqrt();
        let beat = 2.0 * PI / (kappa(1.0) - kappa(2.0));
        let dr = beat / 2000.0;
        let ranges: Vec<f64> = (0..10_000).map(|i| i as f64 * dr).collect();
        let field = reference_field(&two, 300.0, &ranges).unwrap();
        let k_obs = grid.nearest(400.0);
        let amp: Vec<f64> = field.iter().map(|u| u.values()[k_obs].norm()).collect();
        let peaks: Vec<f64> = (1..amp.len() - 1)
            .filter(|&i| amp[i] > amp[i - 1] && amp[i] >= amp[i + 1])
            .map(|i| ranges[i])
            .collect();
        assert!(peaks.len() >= 4);
        let measured = (peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64;
        assert!(((measured - beat) / beat).abs() < 0.01, "{measured} vs {beat}");
    }
}
