//! Symmetric tridiagonal eigenproblems by Sturm-sequence bisection and
//! inverse iteration.

/// Real symmetric tridiagonal matrix with diagonal `diag` and off-diagonal
/// `off` (`off[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Infinity norm, an upper bound on the spectral radius.
    pub fn norm(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = self.off.get(i).map_or(0.0, |v| v.abs());
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = self.off.get(i).map_or(0.0, |v| v.abs());
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt() * self.norm().max(1.0);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `j`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        assert!(j < self.dim());
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm().max(f64::MIN_POSITIVE) * 4.0;
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(T - shift) x = b` by Gaussian elimination with partial pivoting.
    /// Exactly zero pivots are replaced by `floor`.
    fn shifted_solve(&self, shift: f64, b: &mut [f64], floor: f64) {
        let n = self.dim();
        if n == 1 {
            let p = self.diag[0] - shift;
            b[0] /= if p == 0.0 { floor } else { p };
            return;
        }
        // U has up to two superdiagonals after pivoting
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let dl = &self.off;
        let mut lmul = vec![0.0; n - 1];
        let mut swapped = vec![false; n - 1];
        let mut dl_work = dl.clone();
        for i in 0..n - 1 {
            if d[i].abs() >= dl_work[i].abs() {
                if d[i] == 0.0 {
                    d[i] = floor;
                }
                let f = dl_work[i] / d[i];
                lmul[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                // swap rows i and i+1
                swapped[i] = true;
                let f = d[i] / dl_work[i];
                lmul[i] = f;
                d[i] = dl_work[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - f * tmp;
                du[i] = tmp;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
            }
            dl_work[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = floor;
        }
        // forward substitution with the recorded row swaps
        for i in 0..n - 1 {
            if swapped[i] {
                b.swap(i, i + 1);
                let t = b[i];
                b[i + 1] -= lmul[i] * t;
            } else {
                let t = b[i];
                b[i + 1] -= lmul[i] * t;
            }
        }
        // back substitution
        b[n - 1] /= d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }

    /// Unit eigenvector for an accurately known eigenvalue.
    pub fn eigenvector(&self, value: f64, previous: &[EigenPair], cluster_tol: f64) -> Vec<f64> {
        let n = self.dim();
        let norm = self.norm().max(f64::MIN_POSITIVE);
        let floor = f64::EPSILON * norm;
        let shift = value + floor;
        // deterministic, non-degenerate start vector
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.754_877_666).sin()).collect();
        let close: Vec<&EigenPair> =
            previous.iter().filter(|p| (p.value - value).abs() < cluster_tol).collect();
        for _ in 0..3 {
            self.shifted_solve(shift, &mut x, floor);
            for p in &close {
                let dot: f64 = x.iter().zip(&p.vector).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(&p.vector).for_each(|(a, b)| *a -= dot * b);
            }
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x
    }

    /// All eigenpairs with eigenvalue strictly above `threshold`, in
    /// descending order of eigenvalue.
    pub fn eigenpairs_above(&self, threshold: f64) -> Vec<EigenPair> {
        let n = self.dim();
        let below = self.count_below(threshold);
        let cluster_tol = 1e-6 * self.norm();
        let mut pairs: Vec<EigenPair> = Vec::with_capacity(n - below);
        for j in (below..n).rev() {
            let value = self.eigenvalue(j);
            if value <= threshold {
                continue;
            }
            let vector = self.eigenvector(value, &pairs, cluster_tol);
            pairs.push(EigenPair { value, vector });
        }
        pairs
    }
}
