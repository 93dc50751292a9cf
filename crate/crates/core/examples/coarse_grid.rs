//! Coarse depth grids: SSSP and FD-SSP at N = 128, 256, 512 against a
//! fine SSSP run.
//!
//! cargo run --release --example coarse_grid -- [neumann_terms] [range_m]

use pwe::scenario::tl::relative_l2;
use pwe::scenario::{simulate, Method, Normalize, ScenarioConfig, Simulation, Starter};

fn config(method: Method, n: usize, m: usize, range: f64) -> ScenarioConfig {
    ScenarioConfig {
        method,
        frequency: 100.0,
        depth: 4000.0,
        intervals: n,
        range_step: 100.0,
        range,
        pade_order: 4,
        neumann_terms: m,
        starter: Starter::Modal,
        source_depth: 1100.0,
        c0: 1500.0,
        eddy: None,
        sponge: None,
        sampling: Default::default(),
        outputs: vec![],
        tl_min: 30.0,
        tl_max: 75.0,
        normalize: Normalize::None,
        range_decimation: 1,
        depth_decimation: 1,
    }
}

fn magnitudes(sim: &Simulation, stride: usize) -> Vec<f64> {
    sim.fields.iter().flat_map(|u| u.values().iter().step_by(stride).map(|v| v.norm()).collect::<Vec<_>>()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let m: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let range: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(25_000.0);
    let fine = simulate(&config(Method::Sssp, 2048, m, range))?;
    println!("relative L2 error of |u| against SSSP at N = 2048 (M = {m}, {} km):", range / 1000.0);
    println!("{:>6} {:>12} {:>12}", "N", "SSSP", "FD-SSP");
    for n in [128, 256, 512] {
        let reference = magnitudes(&fine, 2048 / n);
        let s = relative_l2(&magnitudes(&simulate(&config(Method::Sssp, n, m, range))?, 1), &reference);
        let f = relative_l2(&magnitudes(&simulate(&config(Method::FdSsp, n, m, range))?, 1), &reference);
        println!("{n:>6} {s:>12.3e} {f:>12.3e}");
    }
    Ok(())
}
