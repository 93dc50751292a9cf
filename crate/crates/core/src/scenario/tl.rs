//! Transmission loss and field comparison metrics.

use num_complex::Complex64;

use crate::spectral::ComplexField;

/// Guards the logarithm against exact zeros.
pub const TL_FLOOR: f64 = 1e-12;

/// `-20 log10(|u| + floor)` in dB.
pub fn tl_db(u: Complex64) -> f64 {
    -20.0 * (u.norm() + TL_FLOOR).log10()
}

/// TL sampled on a range-depth grid, stored range-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TlGrid {
    pub ranges: Vec<f64>,
    pub depths: Vec<f64>,
    /// `values[i * depths.len() + k]` is TL at `(ranges[i], depths[k])`.
    pub values: Vec<f64>,
}

impl TlGrid {
    pub fn at(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.depths.len() + k]
    }

    /// TL against range at the depth sample nearest to `z`.
    pub fn slice(&self, z: f64) -> Vec<f64> {
        let k = nearest(&self.depths, z);
        (0..self.ranges.len()).map(|i| self.at(i, k)).collect()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Adds `offset` dB to every sample.
    pub fn shifted(&self, offset: f64) -> TlGrid {
        TlGrid { values: self.values.iter().map(|v| v + offset).collect(), ..self.clone() }
    }
}

fn nearest(xs: &[f64], x: f64) -> usize {
    let mut best = 0;
    for (i, v) in xs.iter().enumerate() {
        if (v - x).abs() < (xs[best] - x).abs() {
            best = i;
        }
    }
    best
}

/// TL of a field history at every `range_every`-th column and `depth_every`-th node.
pub fn transmission_loss(history: &[ComplexField], ranges: &[f64], range_every: usize, depth_every: usize) -> TlGrid {
    assert!(!history.is_empty() && history.len() == ranges.len());
    let grid = *history[0].grid();
    let depth_idx: Vec<usize> = (0..grid.points()).step_by(depth_every.max(1)).collect();
    let range_idx: Vec<usize> = (0..history.len()).step_by(range_every.max(1)).collect();
    let mut values = Vec::with_capacity(depth_idx.len() * range_idx.len());
    for &i in &range_idx {
        let u = history[i].values();
        values.extend(depth_idx.iter().map(|&k| tl_db(u[k])));
    }
    TlGrid {
        ranges: range_idx.iter().map(|&i| ranges[i]).collect(),
        depths: depth_idx.iter().map(|&k| grid.z(k)).collect(),
        values,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    assert!(!v.is_empty());
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Result of comparing a TL field against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlComparison {
    /// dB added to the candidate before differencing (0 when uncalibrated).
    pub offset: f64,
    pub median_abs_diff: f64,
    /// Samples inside the comparison region.
    pub samples: usize,
}

/// Median `|TL_a + offset - TL_ref|` over the region where the reference is
/// within `window` dB of its loudest sample. With `calibrate`, the offset is
/// the median difference over that region; otherwise it is zero.
pub fn compare_tl(candidate: &TlGrid, reference: &TlGrid, window: f64, calibrate: bool) -> TlComparison {
    assert_eq!(candidate.values.len(), reference.values.len());
    let floor = reference.min();
    let pairs: Vec<(f64, f64)> = candidate
        .values
        .iter()
        .zip(&reference.values)
        .filter(|(_, r)| **r - floor <= window)
        .map(|(a, r)| (*a, *r))
        .collect();
    let offset = if calibrate { -median(pairs.iter().map(|(a, r)| a - r).collect()) } else { 0.0 };
    let median_abs_diff = median(pairs.iter().map(|(a, r)| (a + offset - r).abs()).collect());
    TlComparison { offset, median_abs_diff, samples: pairs.len() }
}

/// Pearson correlation of two equally long series.
pub fn normalized_cross_correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        ab += (x - ma) * (y - mb);
        aa += (x - ma) * (x - ma);
        bb += (y - mb) * (y - mb);
    }
    ab / (aa * bb).sqrt()
}

/// `||a - b|| / ||b||`.
pub fn relative_l2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::DepthGrid;

    #[test]
    fn decade_arithmetic() {
        assert!(tl_db(Complex64::new(1.0, 0.0)).abs() < 1e-9);
        assert!((tl_db(Complex64::new(0.0, 0.01)) - 40.0).abs() < 1e-8);
        assert!((tl_db(Complex64::new(0.0, 0.0)) - 240.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_shifts_tl_uniformly() {
        let g = DepthGrid::new(10.0, 4).unwrap();
        let u = ComplexField::from_fn(g, |z| Complex64::new(0.1 + z, 0.3 * z));
        let mut v = u.clone();
        v.scale(Complex64::new(10.0, 0.0));
        let a = transmission_loss(&[u], &[0.0], 1, 1);
        let b = transmission_loss(&[v], &[0.0], 1, 1);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((y - x + 20.0).abs() < 1e-9);
        }
    }

    #[test]
    fn decimation_and_layout() {
        let g = DepthGrid::new(4.0, 4).unwrap();
        let h: Vec<ComplexField> =
            (0..3).map(|i| ComplexField::from_fn(g, |z| Complex64::new(1.0 + i as f64 + z, 0.0))).collect();
        let t = transmission_loss(&h, &[0.0, 1.0, 2.0], 2, 2);
        assert_eq!(t.ranges, vec![0.0, 2.0]);
        assert_eq!(t.depths, vec![0.0, 2.0, 4.0]);
        assert!((t.at(1, 2) - tl_db(Complex64::new(7.0, 0.0))).abs() < 1e-12);
        assert_eq!(t.slice(1.9), vec![t.at(0, 1), t.at(1, 1)]);
    }

    #[test]
    fn calibration_removes_constant_offset() {
        let r = TlGrid { ranges: vec![0.0], depths: vec![0.0, 1.0, 2.0], values: vec![10.0, 20.0, 200.0] };
        let c = r.shifted(3.0);
        let cmp = compare_tl(&c, &r, 90.0, true);
        assert_eq!(cmp.samples, 2);
        assert!((cmp.offset + 3.0).abs() < 1e-12);
        assert!(cmp.median_abs_diff < 1e-12);
        assert!((compare_tl(&c, &r, 90.0, false).median_abs_diff - 3.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_bounds() {
        let a = [1.0, 2.0, 3.0, 5.0];
        assert!((normalized_cross_correlation(&a, &a) - 1.0).abs() < 1e-12);
        let b: Vec<f64> = a.iter().map(|x| -2.0 * x + 1.0).collect();
        assert!((normalized_cross_correlation(&a, &b) + 1.0).abs() < 1e-12);
        assert!(relative_l2(&a, &a) == 0.0);
    }
}
