//! Greene's analytic starter next to the modal starter, and how each
//! survives a coarse finite-difference march.

use pwe::env::{DepthGrid, EnvironmentModel, RangeGrid};
use pwe::modes::{greene_starter, modal_starter, solve_modes};
use pwe::propagators::{propagate, FdSspStepper, MarchSettings, SsspStepper, Stepper};
use pwe::spectral::ComplexField;

fn spread(u: &ComplexField) -> f64 {
    // rms distance from the source depth, weighted by |u|^2
    let g = u.grid();
    let w: f64 = u.values().iter().map(|v| v.norm_sqr()).sum();
    let m2: f64 = u.values().iter().enumerate().map(|(n, v)| v.norm_sqr() * (g.z(n) - 1100.0).powi(2)).sum();
    (m2 / w).sqrt()
}

fn main() -> pwe::error::Result<()> {
    let env = EnvironmentModel::munk(100.0)?;
    let fine = DepthGrid::new(4000.0, 4096)?;
    let g = greene_starter(env.k0(), 1100.0, &fine)?;
    let m = modal_starter(&solve_modes(&env, &fine, 0.0)?, 1100.0)?;
    println!("Greene: peak {:.3} at 1100 m, rms width {:.1} m", g.max_abs(), spread(&g));
    println!("modal:  peak {:.3}, rms width {:.1} m", m.max_abs(), spread(&m));
    println!("wavelength at the source: {:.1} m", 2.0 * std::f64::consts::PI / env.k0());

    let range = RangeGrid::new(100.0, 50)?;
    println!("\nenergy kept after 5 km (1.0 = unitary march):");
    for n in [256, 512, 2048] {
        let grid = DepthGrid::new(4000.0, n)?;
        let u0 = greene_starter(env.k0(), 1100.0, &grid)?;
        let settings = MarchSettings::new(4, 100.0).with_neumann_terms(4);
        let mut steppers: [(&str, Box<dyn Stepper>); 2] = [
            ("SSSP", Box::new(SsspStepper::new(env, grid, settings)?)),
            ("FD-SSP", Box::new(FdSspStepper::new(env, grid, settings)?)),
        ];
        for (name, st) in steppers.iter_mut() {
            let h = propagate(st.as_mut(), &u0, &range)?;
            println!("  N = {n:4} {name:>6}: {:.4}", h.last().unwrap().norm() / u0.norm());
        }
    }
    Ok(())
}
