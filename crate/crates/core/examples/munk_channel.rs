//! Range-independent Munk channel: SSSP with increasing Neumann cutoff
//! against the normal-mode reference, with TL images and the 1300 m slice.
//!
//! cargo run --release --example munk_channel -- [out_dir] [n] [range_m]

use std::path::PathBuf;

use pwe::scenario::output::{graymap, slice_csv};
use pwe::scenario::tl::relative_l2;
use pwe::scenario::{compare_tl, simulate, Method, Normalize, ScenarioConfig, Starter};

fn config(method: Method, n: usize, range: f64, m: usize) -> ScenarioConfig {
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
        depth_decimation: (n / 512).max(1),
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "munk_channel_out".into()));
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2048);
    let range: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(25_000.0);
    std::fs::create_dir_all(&out)?;

    let reference = simulate(&config(Method::Modes, n, range, 0))?;
    let ref_tl = reference.transmission_loss(1);
    let ref_slice = reference.slice(1300.0);
    let cfg = config(Method::Modes, n, range, 0);
    std::fs::write(out.join("modes.pgm"), graymap(&reference.transmission_loss(cfg.depth_decimation), cfg.tl_min, cfg.tl_max, cfg.normalize))?;
    std::fs::write(out.join("modes_z1300.csv"), slice_csv(&reference.ranges, &ref_slice))?;

    println!("{:>3} {:>14} {:>12} {:>14}", "M", "median |dTL|", "offset", "slice L2 (dB)");
    for m in 0..=4 {
        let mut cfg = config(Method::Sssp, n, range, m);
        let sim = simulate(&cfg)?;
        let cmp = compare_tl(&sim.transmission_loss(1), &ref_tl, 90.0, true);
        let slice = sim.slice(1300.0);
        println!("{m:>3} {:>11.2} dB {:>9.2} dB {:>14.3e}", cmp.median_abs_diff, cmp.offset, relative_l2(&slice, &ref_slice));
        // a divergent partial sum is shown renormalized to its own maximum
        if m == 1 {
            cfg.normalize = Normalize::Max;
        }
        let img = graymap(&sim.transmission_loss(cfg.depth_decimation), cfg.tl_min, cfg.tl_max, cfg.normalize);
        std::fs::write(out.join(format!("sssp_m{m}.pgm")), img)?;
        std::fs::write(out.join(format!("sssp_m{m}_z1300.csv")), slice_csv(&sim.ranges, &slice))?;
    }
    println!("images and slices written to {}", out.display());
    Ok(())
}
