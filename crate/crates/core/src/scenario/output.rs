//! File formats: TL CSV, depth-slice CSV, 8-bit graymap and binary field dump.

use std::fmt::Write as _;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use super::config::Normalize;
use super::tl::TlGrid;

/// Size of the ASCII header that precedes a field dump.
pub const DUMP_HEADER_BYTES: usize = 64;

/// `r_m,z_m,tl_db` rows in range-major order.
pub fn tl_csv(tl: &TlGrid) -> String {
    let mut s = String::from("r_m,z_m,tl_db\n");
    for (i, r) in tl.ranges.iter().enumerate() {
        for (k, z) in tl.depths.iter().enumerate() {
            let _ = writeln!(s, "{r},{z},{}", tl.at(i, k));
        }
    }
    s
}

/// `r_m,tl_db` rows for one depth.
pub fn slice_csv(ranges: &[f64], tl: &[f64]) -> String {
    let mut s = String::from("r_m,tl_db\n");
    for (r, v) in ranges.iter().zip(tl) {
        let _ = writeln!(s, "{r},{v}");
    }
    s
}

/// Binary P5 graymap, one column per range sample and one row per depth
/// sample (surface at the top). TL in `[tl_min, tl_max]` maps linearly to
/// 255..0, so loud regions are bright.
pub fn graymap(tl: &TlGrid, tl_min: f64, tl_max: f64, normalize: Normalize) -> Vec<u8> {
    let width = tl.ranges.len();
    let height = tl.depths.len();
    let shift = match normalize {
        Normalize::None => 0.0,
        Normalize::Max => -tl.min(),
    };
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.reserve(width * height);
    for k in 0..height {
        for i in 0..width {
            let v = (tl.at(i, k) + shift).clamp(tl_min, tl_max);
            let g = (255.0 * (tl_max - v) / (tl_max - tl_min)).round();
            out.push(g as u8);
        }
    }
    out
}

/// 64-byte header `PWE1 <Nr> <Nz>\n` padded with spaces, then every field
/// as little-endian `f64` (re, im) pairs, range-major.
pub fn field_dump<'a, I>(fields: I, ranges: usize, depth_points: usize) -> Vec<u8>
where
    I: IntoIterator<Item = &'a [Complex64]>,
{
    let mut header = format!("PWE1 {ranges} {depth_points}\n").into_bytes();
    assert!(header.len() <= DUMP_HEADER_BYTES);
    header.resize(DUMP_HEADER_BYTES, b' ');
    let mut out = header;
    out.reserve(ranges * depth_points * 16);
    let mut count = 0;
    for f in fields {
        assert_eq!(f.len(), depth_points);
        for v in f {
            out.extend_from_slice(&v.re.to_le_bytes());
            out.extend_from_slice(&v.im.to_le_bytes());
        }
        count += 1;
    }
    assert_eq!(count, ranges);
    out
}

/// Reads back a dump written by [`field_dump`] as `(Nr, Nz, values)`.
pub fn read_field_dump(bytes: &[u8]) -> Option<(usize, usize, Vec<Complex64>)> {
    let header = std::str::from_utf8(bytes.get(..DUMP_HEADER_BYTES)?).ok()?;
    let mut parts = header.split_whitespace();
    if parts.next()? != "PWE1" {
        return None;
    }
    let nr: usize = parts.next()?.parse().ok()?;
    let nz: usize = parts.next()?.parse().ok()?;
    let body = &bytes[DUMP_HEADER_BYTES..];
    if body.len() != nr * nz * 16 {
        return None;
    }
    let values = body
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    Some((nr, nz, values))
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}
