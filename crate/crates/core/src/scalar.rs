//! Scalar building blocks shared by every space.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation policy for every infinite series and refinement loop.
///
/// `tol` is the error target for a tail; `max_terms` caps the number of terms
/// on each side of a two-sided sum (or the number of refinements).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationBudget {
    tol: f64,
    max_terms: usize,
}

impl TruncationBudget {
    pub const DEFAULT_TOL: f64 = 1e-12;
    pub const DEFAULT_MAX_TERMS: usize = 10_000;

    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be at least 1".into()));
        }
        Ok(Self { tol, max_terms })
    }

    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(tol, Self::DEFAULT_MAX_TERMS)
    }

    #[inline]
    pub fn tol(&self) -> f64 {
        self.tol
    }

    #[inline]
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same cap, tolerance divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { tol: self.tol / factor, max_terms: self.max_terms }
    }
}

impl Default for TruncationBudget {
    fn default() -> Self {
        Self { tol: Self::DEFAULT_TOL, max_terms: Self::DEFAULT_MAX_TERMS }
    }
}

/// Physicists' Hermite polynomial `H_m(x)` by upward recurrence
/// `H_{m+1} = 2x H_m - 2m H_{m-1}`.
pub fn hermite_poly(m: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("hermite argument must be finite, got {x}")));
    }
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for k in 1..m {
        let next = 2.0 * x * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::Range(format!("H_{m}({x}) overflows")))
    }
}

/// `H_m'(x) = 2m H_{m-1}(x)`.
pub fn hermite_derivative(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * f64::from(m) * hermite_poly(m - 1, x)?)
}

/// `ln(m!)`, exact summation for the small orders used here.
pub fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|k| f64::from(k).ln()).sum()
}

/// Closed form of `int_R exp(-a y^2 + b y) dy = sqrt(pi / a) exp(b^2 / (4a))`.
pub fn gaussian_integral(a: f64, b: Complex64) -> Result<Complex64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!("gaussian integral needs a > 0, got {a}")));
    }
    let value = (PI / a).sqrt() * (b * b / (4.0 * a)).exp();
    crate::error::finite(value, || format!("gaussian integral overflows for a = {a}, b = {b}"))
}

/// The character `chi_alpha(m) = exp(2 i pi alpha m)`.
pub fn character(alpha: f64, m: i64) -> Complex64 {
    // reduce alpha m modulo one before exponentiating; the fma term recovers
    // the rounding error of the product
    let frac = alpha.fract();
    let mf = m as f64;
    let product = frac * mf;
    let low = frac.mul_add(mf, -product);
    unit_phase(product.rem_euclid(1.0) + low)
}

/// The standard hermitian form `H(z, w) = z conj(w)`.
#[inline]
pub fn hermitian_pairing(z: Complex64, w: Complex64) -> Complex64 {
    z * w.conj()
}

/// `exp(2 i pi t)` for real `t`, reduced modulo one first.
#[inline]
pub(crate) fn unit_phase(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t.rem_euclid(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Coefficients of `H_m` built with `H_{m+1} = 2x H_m - H_m'` on
    /// polynomial coefficient vectors.
    fn hermite_coeffs(m: usize) -> Vec<f64> {
        let mut h = vec![1.0];
        for _ in 0..m {
            let mut next = vec![0.0; h.len() + 1];
            for (k, c) in h.iter().enumerate() {
                next[k + 1] += 2.0 * c;
                if k > 0 {
                    next[k - 1] -= k as f64 * c;
                }
            }
            h = next;
        }
        h
    }

    fn horner(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite_poly(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 0.5).unwrap(), 1.0);
        assert_eq!(hermite_poly(3, 1.0).unwrap(), -4.0);
        assert_eq!(horner(&hermite_coeffs(3), 1.0), -4.0);
    }

    #[test]
    fn hermite_matches_coefficient_oracle() {
        for m in 0..=20 {
            let c = hermite_coeffs(m);
            for i in -20..=20 {
                let x = i as f64 * 0.25;
                let want = horner(&c, x);
                let got = hermite_poly(m as u32, x).unwrap();
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn hermite_derivative_form_of_recurrence() {
        for m in 0..30u32 {
            for i in -20..=20 {
                let x = i as f64 * 0.25;
                let next = hermite_poly(m + 1, x).unwrap();
                let rhs = 2.0 * x * hermite_poly(m, x).unwrap() - hermite_derivative(m, x).unwrap();
                assert!((next - rhs).abs() <= 1e-9 * next.abs(), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn hermite_overflow_is_range_error() {
        assert!(matches!(hermite_poly(400, 1e80), Err(Error::Range(_))));
        assert!(matches!(hermite_poly(2, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_integral_examples() {
        let zero = Complex64::new(0.0, 0.0);
        assert_relative_eq!(gaussian_integral(1.0, zero).unwrap().re, PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gaussian_integral(2.0 * PI, zero).unwrap().re, 0.5f64.sqrt(), max_relative = 1e-15);
        // frozen from adaptive quadrature of exp(-y^2 + 2y) over R
        let v = gaussian_integral(1.0, Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - 4.818_029_094_698_722).abs() < 1e-12 && v.im == 0.0);
        assert!(matches!(gaussian_integral(0.0, zero), Err(Error::Domain(_))));
        assert!(matches!(gaussian_integral(-1.0, zero), Err(Error::Domain(_))));
    }

    fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn gaussian_integral_against_quadrature() {
        let bs = [
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(1.0, 1.0),
        ];
        for a in [0.5, 1.0, 2.0 * PI] {
            for b in bs {
                let y_max = 10.0 / a.sqrt() + b.norm() / a;
                let f = |y: f64| (Complex64::new(-a * y * y, 0.0) + b * y).exp();
                let quad = simpson(&f, -y_max, y_max, 20_000);
                let exact = gaussian_integral(a, b).unwrap();
                assert!((quad - exact).norm() <= 1e-10 * exact.norm(), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn character_examples() {
        assert_eq!(character(0.0, 5), Complex64::new(1.0, 0.0));
        let c = character(0.25, 2);
        assert!((c - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let c = character(0.3, 1);
        assert!((c.re + 0.309_016_994_374_947_4).abs() < 1e-12);
        assert!((c.im - 0.951_056_516_295_153_6).abs() < 1e-12);
    }

    #[test]
    fn character_large_index_keeps_phase() {
        // alpha m is an integer plus 1/4 exactly
        let c = character(0.25, 1_000_000_001);
        assert!((c - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn pairing_examples() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(hermitian_pairing(i, i), Complex64::new(1.0, 0.0));
        assert_eq!(hermitian_pairing(Complex64::new(1.0, 1.0), Complex64::new(1.0, 0.0)), Complex64::new(1.0, 1.0));
        assert_eq!(
            hermitian_pairing(Complex64::new(2.0, 3.0), Complex64::new(1.0, -1.0)),
            Complex64::new(-1.0, 5.0)
        );
    }

    #[test]
    fn budget_validation() {
        assert!(TruncationBudget::new(0.0, 10).is_err());
        assert!(TruncationBudget::new(1e-3, 0).is_err());
        let b = TruncationBudget::default();
        assert_eq!((b.tol(), b.max_terms()), (1e-12, 10_000));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn character_is_unimodular_and_multiplicative(alpha in -3.0f64..3.0, m1 in -500i64..500, m2 in -500i64..500) {
                let a = character(alpha, m1);
                let b = character(alpha, m2);
                prop_assert!((a.norm() - 1.0).abs() <= 1e-15);
                prop_assert!((character(alpha, m1 + m2) - a * b).norm() <= 1e-14);
            }

            #[test]
            fn pairing_is_hermitian(a in -1e3f64..1e3, b in -1e3f64..1e3, c in -1e3f64..1e3, d in -1e3f64..1e3) {
                let z = Complex64::new(a, b);
                let w = Complex64::new(c, d);
                prop_assert_eq!(hermitian_pairing(z, w), hermitian_pairing(w, z).conj());
            }
        }
    }
}
