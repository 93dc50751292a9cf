//! Builds the [p/p] partial-fraction propagator and scans its error against
//! the exact one-step symbol.
//!
//! cargo run --example pade_symbol -- [frequency_hz] [step_m]

use std::f64::consts::PI;

use num_complex::Complex64;
use pwe::pade::{exact_symbol, pade_coefficients};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let freq: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100.0);
    let step: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100.0);
    let k0 = 2.0 * PI * freq / 1500.0;
    let sigma = k0 * step;
    println!("sigma = k0 h = {sigma:.4}");

    let c = pade_coefficients(sigma, 4)?;
    println!("[4/4] d0 = {:.6}", c.d0());
    for (j, (d, b)) in c.d().iter().zip(c.b()).enumerate() {
        println!("  j={}  d = {d:.6}  b = {b:.6}  pole X = {:.4}", j + 1, -1.0 / b);
    }

    println!("\n{:>6} {:>12} {:>12} {:>12}", "p", "|X|<=0.05", "|X|<=0.1", "|X|<=0.3");
    for p in 1..=8 {
        let c = pade_coefficients(sigma, p)?;
        let err = |w: f64| {
            (0..=2000)
                .map(|i| {
                    let x = Complex64::new(-w + 2.0 * w * i as f64 / 2000.0, 0.0);
                    let e = exact_symbol(sigma, x);
                    (c.evaluate_ratio(x) - e).norm() / e.norm()
                })
                .fold(0.0, f64::max)
        };
        println!("{p:>6} {:>12.3e} {:>12.3e} {:>12.3e}", err(0.05), err(0.1), err(0.3));
    }

    // on the real axis the approximant stays on the unit circle
    let worst = (0..=1000)
        .map(|i| (c.evaluate_ratio(Complex64::new(-1.0 + 2.0 * i as f64 / 1000.0, 0.0)).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    println!("\nmax ||R(X)| - 1| on [-1, 1]: {worst:.2e}");
    Ok(())
}
