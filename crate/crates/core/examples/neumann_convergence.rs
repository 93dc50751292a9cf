//! Neumann-series solves of `(1 + b~(d^2/dz^2 + dk^2)) w = u` for the Munk
//! perturbation, and what the cutoff M does to a long march.

use pwe::env::{DepthGrid, EnvironmentModel, RangeGrid};
use pwe::modes::{modal_starter, solve_modes};
use pwe::pade::pade_coefficients;
use pwe::propagators::{neumann_solve, propagate_with, MarchSettings, SsspStepper};
use pwe::spectral::TransformPlan;

fn main() -> pwe::error::Result<()> {
    let env = EnvironmentModel::munk(100.0)?;
    let grid = DepthGrid::new(4000.0, 256)?;
    let plan = TransformPlan::sine(grid);
    let dk2: Vec<_> = env.wavenumber_perturbation(&grid, 0.0).into_iter().map(|v| v.into()).collect();
    let u = modal_starter(&solve_modes(&env, &grid, 0.0)?, 1100.0)?;
    let coeffs = pade_coefficients(env.k0() * 100.0, 4)?;

    println!("partial-sum error against a 40-term solve, N = 256, [4/4]:");
    for (j, &b) in coeffs.b_tilde(env.k0()).iter().enumerate() {
        let converged = neumann_solve(&plan, b, &dk2, &u, 40)?;
        let errs: Vec<String> = (0..=6)
            .map(|m| {
                let w = neumann_solve(&plan, b, &dk2, &u, m).unwrap();
                let d: f64 = w.values().iter().zip(converged.values()).map(|(a, c)| (a - c).norm_sqr()).sum::<f64>().sqrt();
                format!("{:.1e}", d / converged.norm())
            })
            .collect();
        println!("  j={} |d_j| = {:6.2}: {}", j + 1, coeffs.d()[j].norm(), errs.join(" "));
    }

    // the residues are large and cancel, so small per-term errors add up
    let grid = DepthGrid::new(4000.0, 1024)?;
    let u0 = modal_starter(&solve_modes(&env, &grid, 0.0)?, 1100.0)?;
    let range = RangeGrid::new(100.0, 250)?;
    println!("\n||u(r)|| / ||u(0)|| along 25 km, N = 1024:");
    for m in 0..=5 {
        let mut st = SsspStepper::new(env, grid, MarchSettings::new(4, 100.0).with_neumann_terms(m))?;
        let mut norms = Vec::new();
        propagate_with(&mut st, &u0, &range, |n, _, f| {
            if n % 50 == 0 {
                norms.push(format!("{:.3e}", f.norm() / u0.norm()));
            }
        })?;
        println!("  M = {m}: {}", norms.join(" "));
    }
    Ok(())
}
