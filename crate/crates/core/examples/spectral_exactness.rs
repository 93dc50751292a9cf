//! In an isovelocity waveguide the spectral stepper multiplies each sine mode
//! by the Padé symbol at the continuous eigenvalue, for any grid size. The
//! finite-difference stepper sees the discrete eigenvalue instead.

use std::f64::consts::PI;

use pwe::env::{DepthGrid, EnvironmentModel, MunkProfile};
use pwe::propagators::{FdSspStepper, MarchSettings, SsspStepper, Stepper};
use pwe::spectral::ComplexField;

fn main() -> pwe::error::Result<()> {
    let flat = MunkProfile { c_ref: 1500.0, eps: 0.0, z_axis: 1300.0 };
    let env = EnvironmentModel::new(flat, None, 100.0, 1500.0)?;
    let settings = MarchSettings::new(4, 100.0);
    let depth = 4000.0;

    for n in [64, 1024] {
        let grid = DepthGrid::new(depth, n)?;
        let mut st = SsspStepper::new(env, grid, settings)?;
        let mut worst = 0.0f64;
        for l in 1..n {
            let mut u = ComplexField::from_real(grid, |z| (l as f64 * PI * z / depth).sin());
            u.zero_endpoints();
            let mu = st.mode_multiplier(l - 1);
            let v = st.step(&u, 0.0)?;
            let err = v.values().iter().zip(u.values()).map(|(a, b)| (a - mu * b).norm()).fold(0.0, f64::max);
            worst = worst.max(err);
        }
        println!("N = {n:5}: max |step(u) - mu u| over {} modes = {worst:.2e}", n - 1);
    }

    let l = 10;
    let exact = SsspStepper::new(env, DepthGrid::new(depth, 64)?, settings)?.mode_multiplier(l - 1);
    println!("\nmode {l}: spectral multiplier {exact:.12}");
    let mut prev: Option<f64> = None;
    for n in [64, 128, 256, 512, 1024, 2048] {
        let fd = FdSspStepper::new(env, DepthGrid::new(depth, n)?, settings)?;
        let err = (fd.mode_multiplier(l) - exact).norm();
        let order = prev.map(|p| format!("order {:.3}", (p / err).log2())).unwrap_or_default();
        println!("  FD N = {n:5}: |mu_fd - mu| = {err:.3e}  {order}");
        prev = Some(err);
    }
    Ok(())
}
