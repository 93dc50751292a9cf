//! Normal modes of the Munk channel: wavenumbers, oscillation counts and
//! orthonormality, then a two-mode interference beat.

use std::f64::consts::PI;

use pwe::env::{DepthGrid, EnvironmentModel};
use pwe::modes::{reference_field, solve_modes};

fn main() -> pwe::error::Result<()> {
    let freq: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100.0);
    let env = EnvironmentModel::munk(freq)?;
    let grid = DepthGrid::new(4000.0, 4000)?;
    let modes = solve_modes(&env, &grid, 0.0)?;
    let trapped = modes.kappa().iter().filter(|&&k| k > env.omega() / env.sound_speed(0.0, 0.0)).count();
    println!("{freq} Hz: {} propagating modes, {trapped} refracted below the surface", modes.count());

    println!("{:>4} {:>12} {:>10} {:>14}", "m", "kappa (1/m)", "zeros", "phase speed");
    for m in (0..10).chain([50, 100, 200]).filter(|&m| m < modes.count()) {
        let psi = modes.psi(m);
        let zeros = psi[1..psi.len() - 1].windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        let kappa = modes.kappa()[m];
        println!("{:>4} {:>12.8} {:>10} {:>12.2} m/s", m + 1, kappa, zeros, env.omega() / kappa);
    }

    let mut worst = 0.0f64;
    for a in 0..modes.count().min(60) {
        for b in a..modes.count().min(60) {
            let dot: f64 = modes.psi(a).iter().zip(modes.psi(b)).map(|(x, y)| x * y).sum::<f64>() * grid.dz();
            worst = worst.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
        }
    }
    println!("orthonormality residual (first 60 modes): {worst:.2e}");

    let two = modes.truncated(2);
    let beat = 2.0 * PI / (two.kappa()[0] - two.kappa()[1]);
    let ranges: Vec<f64> = (0..=40).map(|i| i as f64 * beat / 10.0).collect();
    let field = reference_field(&two, 1100.0, &ranges)?;
    let k = grid.nearest(1100.0);
    println!("\nmodes 1+2 beat length {:.1} km; |u| at 1100 m every beat/10:", beat / 1000.0);
    let amps: Vec<String> = field.iter().map(|u| format!("{:.3}", u.values()[k].norm())).collect();
    println!("{}", amps.join(" "));
    Ok(())
}
