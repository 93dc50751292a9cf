//! Rational approximation of the one-step propagator symbol.
//!
//! The symbol is `f(X) = exp(i sigma (sqrt(1 + X) - 1))` with `sigma = k0 h`.
//! Its `[p/p]` Padé approximant `P(X) / Q(X)` is rewritten in partial
//! fractions as
//!
//! ```text
//! R(X) = d0 + sum_j d_j / (1 + b_j X)
//! ```
//!
//! so that one marching step reduces to `p` independent solves of
//! `(1 + b_j X) w_j = u`. The factored-out carrier `exp(i sigma)` is applied
//! by the stepper.

use num_complex::Complex64;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

mod dd;

use dd::{Cdd, Dd};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative separation below which two denominator roots count as repeated.
pub const REPEATED_ROOT_TOL: f64 = 1e-8;
/// `|1 + b_j X|` below this is reported as a pole hit.
pub const POLE_HIT_TOL: f64 = 1e-14;

/// Maclaurin coefficients `a_0..=a_order` of `exp(i sigma (sqrt(1 + X) - 1))`.
pub fn propagator_taylor(sigma: f64, order: usize) -> Vec<Complex64> {
    taylor_dd(sigma, order, 1.0).into_iter().map(dd::to_c64).collect()
}

/// Coefficients of `f(Y / scale)`, i.e. `a_n / scale^n`, in double-double.
fn taylor_dd(sigma: f64, order: usize, scale: f64) -> Vec<Cdd> {
    let zero = Dd::zero();
    // inner series: i sigma (sqrt(1 + X) - 1) = sum_{n>=1} i sigma binom(1/2, n) X^n
    let mut inner = vec![Cdd::new(zero, zero); order + 1];
    let mut binom = Dd::one();
    let sigma = Dd::from(sigma);
    let scale = Dd::from(scale);
    let mut pow = Dd::one();
    for (n, slot) in inner.iter_mut().enumerate().skip(1) {
        binom = binom * Dd::from(0.5 - (n as f64 - 1.0)) / Dd::from(n as f64);
        pow = pow / scale;
        *slot = Cdd::new(zero, sigma * binom * pow);
    }
    // g = exp(inner): n g_n = sum_{k=1}^{n} k inner_k g_{n-k}
    let mut g = vec![Cdd::new(zero, zero); order + 1];
    g[0] = Cdd::one();
    for n in 1..=order {
        let mut acc = Cdd::new(zero, zero);
        for k in 1..=n {
            acc = acc + inner[k] * g[n - k] * Dd::from(k as f64);
        }
        g[n] = acc / Dd::from(n as f64);
    }
    g
}

fn poly_eval_dd(coeffs: &[Cdd], x: Cdd) -> Cdd {
    coeffs.iter().rev().fold(Cdd::zero(), |acc, &c| acc * x + c)
}

fn poly_derivative_dd(coeffs: &[Cdd]) -> Vec<Cdd> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * Dd::from(k as f64)).collect()
}

/// Gaussian elimination with partial pivoting in double-double.
fn solve_dense_dd(mut a: Vec<Vec<Cdd>>, mut x: Vec<Cdd>, rel_tol: f64) -> Option<Vec<Cdd>> {
    let n = x.len();
    let scale = a.iter().flatten().map(|&v| dd::magnitude(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| dd::magnitude(a[i][col]).total_cmp(&dd::magnitude(a[j][col])))
            .unwrap_or(col);
        if dd::magnitude(a[piv][col]) <= rel_tol * scale {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(r);
            for (dst, &v) in bottom[0][col..n].iter_mut().zip(&top[col][col..n]) {
                *dst = *dst - f * v;
            }
            let xc = x[col];
            x[r] = x[r] - f * xc;
        }
    }
    for row in (0..n).rev() {
        let mut s = x[row];
        for j in row + 1..n {
            s = s - a[row][j] * x[j];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

fn poly_eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
}

fn poly_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// All roots of the polynomial `sum_k coeffs[k] x^k` by Aberth–Ehrlich
/// iteration followed by a Newton polish.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    let dmonic = poly_derivative(&monic);
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let z = roots[i];
            let pz = poly_eval(&monic, z);
            if pz == ZERO {
                continue;
            }
            let ratio = pz / poly_eval(&dmonic, z);
            let repulsion: Complex64 =
                (0..deg).filter(|&j| j != i).map(|j| ONE / (z - roots[j])).sum();
            let step = ratio / (ONE - ratio * repulsion);
            roots[i] = z - step;
            max_step = max_step.max(step.norm() / z.norm().max(1e-300));
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    let dcoeffs = poly_derivative(coeffs);
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let d = poly_eval(&dcoeffs, *z);
            if d == ZERO {
                break;
            }
            let step = poly_eval(coeffs, *z) / d;
            *z -= step;
        }
    }
    if !converged {
        // accept if the residuals are already at roundoff level
        let scale: f64 = monic.iter().map(|c| c.norm()).sum();
        let ok = roots.iter().all(|&z| {
            let mag: f64 = monic.iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum();
            poly_eval(&monic, z).norm() <= 1e-10 * mag.max(scale)
        });
        if !ok {
            return Err(Error::RootsNotConverged);
        }
    }
    Ok(roots)
}

/// Partial-fraction form of the `[p/p]` propagator approximant.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeCoefficients {
    order: usize,
    sigma: f64,
    d0: Complex64,
    d: Vec<Complex64>,
    b: Vec<Complex64>,
    numerator: Vec<Complex64>,
    denominator: Vec<Complex64>,
}

impl PadeCoefficients {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn d0(&self) -> Complex64 {
        self.d0
    }

    /// Residues `d_1..d_p`.
    pub fn d(&self) -> &[Complex64] {
        &self.d
    }

    /// Pole parameters `b_1..b_p`; the poles sit at `X_j = -1 / b_j`.
    pub fn b(&self) -> &[Complex64] {
        &self.b
    }

    /// `b_j / k0^2`, the coefficient of `d^2/dz^2 + dk^2` in the per-term solve.
    pub fn b_tilde(&self, k0: f64) -> Vec<Complex64> {
        self.b.iter().map(|b| b / (k0 * k0)).collect()
    }

    /// Numerator coefficients of `P`, ascending powers of `X`.
    pub fn numerator(&self) -> &[Complex64] {
        &self.numerator
    }

    /// Denominator coefficients of `Q`, ascending powers, `Q(0) = 1`.
    pub fn denominator(&self) -> &[Complex64] {
        &self.denominator
    }

    /// `P(X) / Q(X)` evaluated directly from the polynomials.
    pub fn evaluate_ratio(&self, x: Complex64) -> Complex64 {
        poly_eval(&self.numerator, x) / poly_eval(&self.denominator, x)
    }

    /// `d0 + sum_j d_j / (1 + b_j X)`.
    pub fn evaluate(&self, x: Complex64) -> Result<Complex64> {
        let mut acc = self.d0;
        for (j, (d, b)) in self.d.iter().zip(&self.b).enumerate() {
            let den = ONE + b * x;
            if den.norm() < POLE_HIT_TOL {
                return Err(Error::PoleHit { index: j });
            }
            acc += d / den;
        }
        Ok(acc)
    }
}

/// Free-function form of [`PadeCoefficients::evaluate`].
pub fn evaluate_rational(coeffs: &PadeCoefficients, x: Complex64) -> Result<Complex64> {
    coeffs.evaluate(x)
}

/// The exact symbol `exp(i sigma (sqrt(1 + X) - 1))` on the principal branch.
pub fn exact_symbol(sigma: f64, x: Complex64) -> Complex64 {
    (Complex64::i() * sigma * ((ONE + x).sqrt() - ONE)).exp()
}

/// Builds the `[p/p]` approximant of the propagator symbol and its partial
/// fractions.
pub fn pade_coefficients(sigma: f64, p: usize) -> Result<PadeCoefficients> {
    if p == 0 {
        return Err(Error::InvalidParameter("Padé order must be >= 1".into()));
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be finite, got {sigma}")));
    }
    if sigma == 0.0 {
        // f == 1; any poles work since every residue vanishes
        let mut numerator = vec![ZERO; p + 1];
        numerator[0] = ONE;
        let mut denominator = vec![ZERO; p + 1];
        denominator[0] = ONE;
        return Ok(PadeCoefficients {
            order: p,
            sigma,
            d0: ONE,
            d: vec![ZERO; p],
            b: vec![ONE; p],
            numerator,
            denominator,
        });
    }

    // Work in Y = scale X so the Taylor data stay O(1) for large sigma.
    let scale = (0.5 * sigma.abs()).max(1.0);
    let a = taylor_dd(sigma, 2 * p, scale);

    // Hankel system: sum_{k=1}^{p} q_k a_{n-k} = -a_n, n = p+1..2p
    let hankel: Vec<Vec<Cdd>> =
        (0..p).map(|row| (0..p).map(|col| a[p + 1 + row - (col + 1)]).collect()).collect();
    let rhs: Vec<Cdd> = (0..p).map(|row| -a[p + 1 + row]).collect();
    let q_tail =
        solve_dense_dd(hankel, rhs, 1e-13).ok_or(Error::SingularPadeSystem { sigma, order: p })?;
    let mut q = Vec::with_capacity(p + 1);
    q.push(Cdd::one());
    q.extend(q_tail);
    let pn: Vec<Cdd> = (0..=p)
        .map(|n| (0..=n).fold(Cdd::zero(), |acc, k| acc + q[k] * a[n - k]))
        .collect();

    let q64: Vec<Complex64> = q.iter().map(|&c| dd::to_c64(c)).collect();
    let q_scale = q64.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if q64[p].norm() <= 1e-12 * q_scale {
        return Err(Error::SingularPadeSystem { sigma, order: p });
    }

    let rough = polynomial_roots(&q64)?;
    for i in 0..p {
        if rough[i].norm() < 1e-300 {
            return Err(Error::SingularPadeSystem { sigma, order: p });
        }
        for j in i + 1..p {
            if (rough[i] - rough[j]).norm() <= REPEATED_ROOT_TOL * rough[i].norm().max(1.0) {
                return Err(Error::RepeatedPoles { root: rough[i] / scale });
            }
        }
    }

    let dq = poly_derivative_dd(&q);
    let roots: Vec<Cdd> = rough
        .iter()
        .map(|&z0| {
            let mut z = dd::from_c64(z0);
            for _ in 0..4 {
                z = z - poly_eval_dd(&q, z) / poly_eval_dd(&dq, z);
            }
            z
        })
        .collect();

    let d0 = dd::to_c64(pn[p] / q[p]);
    // residue of P/Q at Y_j is P(Y_j)/Q'(Y_j) = d_j / b_j with b_j = -1/Y_j
    let d: Vec<Complex64> = roots
        .iter()
        .map(|&y| dd::to_c64(-poly_eval_dd(&pn, y) / (y * poly_eval_dd(&dq, y))))
        .collect();
    let scale_dd = Dd::from(scale);
    let b: Vec<Complex64> =
        roots.iter().map(|&y| dd::to_c64(-(Cdd::new(scale_dd, Dd::zero())) / y)).collect();

    let mut power = Dd::one();
    let mut numerator = Vec::with_capacity(p + 1);
    let mut denominator = Vec::with_capacity(p + 1);
    for k in 0..=p {
        numerator.push(dd::to_c64(pn[k] * power));
        denominator.push(dd::to_c64(q[k] * power));
        power = power * scale_dd;
    }

    Ok(PadeCoefficients { order: p, sigma, d0, d, b, numerator, denominator })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn munk_sigma() -> f64 {
        2.0 * PI * 100.0 / 1500.0 * 100.0
    }

    #[test]
    fn taylor_of_constant_symbol() {
        let a = propagator_taylor(0.0, 6);
        assert_eq!(a[0], ONE);
        assert!(a[1..].iter().all(|&v| v == ZERO));
    }

    #[test]
    fn taylor_low_orders_match_hand_expansion() {
        for &s in &[0.3, 1.0, 7.5, 41.888] {
            let a = propagator_taylor(s, 4);
            assert_eq!(a[0], ONE);
            assert!((a[1] - c(0.0, s / 2.0)).norm() < 1e-14 * s);
            assert!((a[2] - c(-s * s / 8.0, -s / 8.0)).norm() < 1e-13 * s * s);
        }
    }

    #[test]
    fn taylor_matches_finite_differences() {
        // central differences of the exact symbol at X = 0
        let s = 3.0;
        let a = propagator_taylor(s, 3);
        let eps = 1e-3;
        let f = |x: f64| exact_symbol(s, c(x, 0.0));
        let d1 = (f(eps) - f(-eps)) / (2.0 * eps);
        let d2 = (f(eps) - f(0.0) * 2.0 + f(-eps)) / (eps * eps);
        assert!((d1 - a[1]).norm() < 1e-5);
        assert!((d2 / 2.0 - a[2]).norm() < 1e-5);
    }

    #[test]
    fn zero_sigma_is_identity() {
        for p in 1..=6 {
            let pc = pade_coefficients(0.0, p).unwrap();
            assert_eq!(pc.d0(), ONE);
            assert!(pc.d().iter().all(|&d| d == ZERO));
            for &x in &[c(0.0, 0.0), c(-0.7, 0.2), c(3.0, -1.0)] {
                assert!((pc.evaluate(x).unwrap() - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn first_order_by_hand() {
        // [1/1]: q1 = -a2/a1, p0 = 1, p1 = a1 + q1
        let a1 = c(0.0, 0.5);
        let a2 = c(-0.125, -0.125);
        let q1 = -a2 / a1;
        let p1 = a1 + q1;
        let pc = pade_coefficients(1.0, 1).unwrap();
        for &x in &[0.0, 0.1] {
            let x = c(x, 0.0);
            let direct = (ONE + p1 * x) / (ONE + q1 * x);
            assert!((pc.evaluate(x).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn normalization_at_origin() {
        for &s in &[0.5, 5.0, 20.0, munk_sigma(), 50.0] {
            for p in 1..=8 {
                let pc = pade_coefficients(s, p).unwrap();
                let sum: Complex64 = pc.d0() + pc.d().iter().sum::<Complex64>();
                assert!((sum - ONE).norm() <= 1e-10, "sigma {s}, p {p}: {sum}");
                assert_eq!(pc.d().len(), p);
                assert_eq!(pc.b().len(), p);
                for b in pc.b() {
                    assert!(b.is_finite() && b.norm() > 0.0);
                    assert!((ONE / b).norm() > 0.01, "pole too close to origin");
                }
            }
        }
    }

    #[test]
    fn munk_configuration_symbol_accuracy() {
        let s = munk_sigma();
        let pc = pade_coefficients(s, 4).unwrap();
        let worst = (0..1000)
            .map(|i| -0.1 + 0.2 * i as f64 / 999.0)
            .map(|x| {
                let x = c(x, 0.0);
                (pc.evaluate(x).unwrap() - exact_symbol(s, x)).norm() / exact_symbol(s, x).norm()
            })
            .fold(0.0, f64::max);
        // the [4/4] approximant is unique; its worst error on this scan is 3.54e-5
        assert!(worst <= 4e-5, "max relative error {worst:e}");
        assert!(worst >= 3e-5, "max relative error {worst:e}");
    }

    #[test]
    fn sixth_order_at_negative_x() {
        let pc = pade_coefficients(10.0, 6).unwrap();
        let x = c(-0.05, 0.0);
        assert!((pc.evaluate(x).unwrap() - exact_symbol(10.0, x)).norm() < 1e-8);
    }

    #[test]
    fn accuracy_grows_with_order() {
        let s = munk_sigma();
        let scan = |p| {
            let pc = pade_coefficients(s, p).unwrap();
            (0..1000)
                .map(|i| c(-0.1 + 0.2 * i as f64 / 999.0, 0.0))
                .map(|x| (pc.evaluate(x).unwrap() - exact_symbol(s, x)).norm())
                .fold(0.0, f64::max)
        };
        assert!(scan(6) <= scan(4));
    }

    #[test]
    fn taylor_matching_through_order_2p() {
        // series division P/Q reproduces the Maclaurin data
        for &s in &[1.0, 12.0, munk_sigma(), 50.0] {
            for p in 1..=8 {
                let pc = pade_coefficients(s, p).unwrap();
                let a = propagator_taylor(s, 2 * p);
                let (num, den) = (pc.numerator(), pc.denominator());
                let mut series = vec![ZERO; 2 * p + 1];
                for n in 0..=2 * p {
                    let pn = num.get(n).copied().unwrap_or(ZERO);
                    let acc: Complex64 = (1..=n.min(p)).map(|k| den[k] * series[n - k]).sum();
                    series[n] = (pn - acc) / den[0];
                }
                for n in 0..=2 * p {
                    let tol = 1e-6 * a[n].norm().max(1e-300);
                    assert!(
                        (series[n] - a[n]).norm() <= tol.max(1e-12),
                        "sigma {s} p {p} n {n}: {} vs {}",
                        series[n],
                        a[n]
                    );
                }
            }
        }
    }

    #[test]
    fn pole_hit_reported() {
        let pc = pade_coefficients(5.0, 2).unwrap();
        let pole = -ONE / pc.b()[1];
        assert_eq!(pc.evaluate(pole), Err(Error::PoleHit { index: 1 }));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(pade_coefficients(1.0, 0).is_err());
        assert!(pade_coefficients(f64::NAN, 2).is_err());
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (x - 1)(x + 2i)(x - 3) = x^3 + (2i - 4) x^2 + (3 - 8i) x + 6i
        let coeffs = [c(0.0, 6.0), c(3.0, -8.0), c(-4.0, 2.0), ONE];
        let mut roots = polynomial_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let expected = [c(0.0, -2.0), c(1.0, 0.0), c(3.0, 0.0)];
        for (r, e) in roots.iter().zip(&expected) {
            assert!((r - e).norm() < 1e-12, "{r} vs {e}");
        }
    }
}
