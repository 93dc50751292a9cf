//! Runs a shipped preset through the library entry point and reads the
//! field dump back.
//!
//! cargo run --release --example run_preset -- [preset] [out_dir] [key=value ...]

use std::path::{Path, PathBuf};

use pwe::scenario::output::read_field_dump;
use pwe::scenario::{parse_config_with_overrides, run_scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "coarse_256".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| format!("{preset}_out")));
    let mut overrides: Vec<String> = args.collect();
    if overrides.is_empty() {
        overrides.push("neumann_terms = 4".into());
    }
    overrides.push("outputs = tl_grid, image, full_field".into());

    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets").join(format!("{preset}.cfg"));
    let text = std::fs::read_to_string(&path)?;
    let config = parse_config_with_overrides(&text, &overrides)?;
    println!("{}", config.to_text());

    let manifest = run_scenario(&config, &out)?;
    for f in &manifest.files {
        println!("{:<16} {:>10} bytes  {}", f.path, f.bytes, &f.sha256[..16]);
    }
    let (nr, nz, values) = read_field_dump(&std::fs::read(out.join("field.pwe"))?).ok_or("bad dump")?;
    let last = &values[(nr - 1) * nz..];
    let peak = last.iter().map(|v| v.norm()).fold(0.0, f64::max);
    println!("dump: {nr} ranges x {nz} depths, peak |u| at the last range {peak:.4}");
    println!("wall time {:.2} s", manifest.wall_time.as_secs_f64());
    Ok(())
}
