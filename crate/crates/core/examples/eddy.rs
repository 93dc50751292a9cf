//! Propagation through a warm synoptic eddy: field without the eddy,
//! FD-SSP and SSSP through it, and the 900 m slices.
//!
//! cargo run --release --example eddy -- [out_dir] [neumann_terms] [range_m]

use std::path::PathBuf;

use pwe::env::EddyModel;
use pwe::scenario::output::{graymap, slice_csv};
use pwe::scenario::tl::normalized_cross_correlation;
use pwe::scenario::{compare_tl, simulate, Method, Normalize, ScenarioConfig, Starter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "eddy_out".into()));
    let m: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2);
    let range: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100_000.0);
    std::fs::create_dir_all(&out)?;

    let eddy = EddyModel::warm();
    println!(
        "eddy: c_m = {} m/s at ({} km, {} m), radii {} km x {} m",
        eddy.c_m,
        eddy.x0 / 1000.0,
        eddy.z0,
        eddy.r_x / 1000.0,
        eddy.r_z
    );
    let base = ScenarioConfig {
        method: Method::FdSsp,
        frequency: 100.0,
        depth: 4000.0,
        intervals: 2048,
        range_step: 100.0,
        range,
        pade_order: 6,
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
        depth_decimation: 4,
    };
    let runs = [
        ("fdssp_no_eddy", base.clone()),
        ("fdssp", ScenarioConfig { eddy: Some(eddy), ..base.clone() }),
        ("sssp", ScenarioConfig { method: Method::Sssp, eddy: Some(eddy), ..base.clone() }),
    ];
    let mut sims = Vec::new();
    for (name, cfg) in &runs {
        let sim = simulate(cfg)?;
        let img = graymap(&sim.transmission_loss(cfg.depth_decimation), cfg.tl_min, cfg.tl_max, cfg.normalize);
        std::fs::write(out.join(format!("{name}.pgm")), img)?;
        std::fs::write(out.join(format!("{name}_z900.csv")), slice_csv(&sim.ranges, &sim.slice(900.0)))?;
        sims.push(sim);
    }
    let (quiet, fd, sssp) = (&sims[0], &sims[1], &sims[2]);
    let cmp = compare_tl(&sssp.transmission_loss(1), &fd.transmission_loss(1), 90.0, false);
    let eddy_effect = compare_tl(&fd.transmission_loss(1), &quiet.transmission_loss(1), 90.0, false);
    println!("eddy vs no eddy (FD-SSP): median |dTL| {:.2} dB", eddy_effect.median_abs_diff);
    println!("SSSP (M = {m}) vs FD-SSP: median |dTL| {:.2} dB", cmp.median_abs_diff);
    println!("900 m slice correlation: {:.4}", normalized_cross_correlation(&sssp.slice(900.0), &fd.slice(900.0)));
    println!("outputs in {}", out.display());
    Ok(())
}
