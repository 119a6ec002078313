//! Jacobi `theta_3` and the Riemann theta function with characteristics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::TruncationBudget;
use crate::series::{sum_outward, SeriesSum};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Characteristics `(alpha, beta)` and a modulus `tau` in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaArgs {
    alpha: f64,
    beta: f64,
    tau: Complex64,
}

impl ThetaArgs {
    pub fn new(alpha: f64, beta: f64, tau: Complex64) -> Result<Self> {
        check_tau(tau)?;
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Domain("characteristics must be finite".into()));
        }
        Ok(Self { alpha, beta, tau })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }
}

fn check_tau(tau: Complex64) -> Result<()> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("modulus must satisfy Im(tau) > 0, got {tau}")))
    }
}

fn check_z(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument must be finite, got {z}")))
    }
}

/// Index of the term of largest modulus in `theta_{alpha,beta}(z|tau)`.
fn dominant_index(alpha: f64, z: Complex64, tau: Complex64) -> i64 {
    (-alpha - z.im / tau.im).round() as i64
}

/// `theta_{alpha,beta}(z|tau)` with truncation diagnostics.
pub fn riemann_theta_sum(args: &ThetaArgs, z: Complex64, budget: &TruncationBudget) -> Result<SeriesSum> {
    check_z(z)?;
    let ThetaArgs { alpha, beta, tau } = *args;
    let shifted = z + beta;
    sum_outward(dominant_index(alpha, z, tau), budget, |n| {
        let k = n as f64 + alpha;
        (I * PI * k * k * tau + 2.0 * I * PI * k * shifted).exp()
    })
}

/// `theta_{alpha,beta}(z|tau) = sum_n exp(i pi (n+alpha)^2 tau + 2 i pi (n+alpha)(z+beta))`.
pub fn riemann_theta(args: &ThetaArgs, z: Complex64, budget: &TruncationBudget) -> Result<Complex64> {
    riemann_theta_sum(args, z, budget).map(|s| s.value)
}

/// `theta_3(z|tau) = sum_n exp(i pi n^2 tau + 2 i pi n z)`.
pub fn jacobi_theta3(z: Complex64, tau: Complex64, budget: &TruncationBudget) -> Result<Complex64> {
    riemann_theta(&ThetaArgs::new(0.0, 0.0, tau)?, z, budget)
}

/// Factor `exp(-i pi l^2 tau - 2 i pi l z)` relating `theta_3(z + l tau + m|tau)` to `theta_3(z|tau)`.
pub fn theta3_periodicity_factor(z: Complex64, tau: Complex64, l: i64, _m: i64) -> Result<Complex64> {
    check_tau(tau)?;
    let l = l as f64;
    let value = (-I * PI * l * l * tau - 2.0 * I * PI * l * z).exp();
    crate::error::finite(value, || format!("periodicity factor overflows for l = {l}"))
}

/// Right-hand side of the inversion formula,
/// `(i/tau)^{1/2} exp(-i pi z^2 / tau) theta_3(z/tau | -1/tau)`, principal root.
pub fn theta3_inversion_rhs(z: Complex64, tau: Complex64, budget: &TruncationBudget) -> Result<Complex64> {
    check_tau(tau)?;
    check_z(z)?;
    let root = (I / tau).sqrt();
    let inverted = -tau.inv();
    let prefactor = root * (-I * PI * z * z / tau).exp();
    Ok(prefactor * jacobi_theta3(z / tau, inverted, budget)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn brute_theta(alpha: f64, beta: f64, z: Complex64, tau: Complex64, n_max: i64) -> Complex64 {
        (-n_max..=n_max)
            .map(|n| {
                let k = n as f64 + alpha;
                (I * PI * k * k * tau + 2.0 * I * PI * k * (z + beta)).exp()
            })
            .sum()
    }

    #[test]
    fn theta3_at_i() {
        let b = TruncationBudget::default();
        let oracle: f64 = (-10i64..=10).map(|n| (-PI * (n * n) as f64).exp()).sum();
        let got = jacobi_theta3(c(0.0, 0.0), c(0.0, 1.0), &b).unwrap();
        assert!((got.re - oracle).abs() < 1e-14 && got.im.abs() < 1e-15);
        assert!((got.re - 1.086_434_811_213_308).abs() < 1e-12);
    }

    #[test]
    fn theta3_is_one_periodic() {
        let b = TruncationBudget::default();
        let z = c(0.2, 0.1);
        let tau = c(0.0, 2.0);
        let a = jacobi_theta3(z, tau, &b).unwrap();
        let s = jacobi_theta3(z + 1.0, tau, &b).unwrap();
        assert!((a - s).norm() < 1e-12);
    }

    #[test]
    fn theta3_matches_brute_force() {
        let b = TruncationBudget::default();
        let z = c(0.3, 0.2);
        let tau = c(0.0, 2.0);
        let got = jacobi_theta3(z, tau, &b).unwrap();
        assert!((got - brute_theta(0.0, 0.0, z, tau, 50)).norm() < 1e-12);
    }

    #[test]
    fn riemann_theta_examples() {
        let b = TruncationBudget::default();
        let zero = ThetaArgs::new(0.0, 0.0, c(0.0, 1.0)).unwrap();
        let r = riemann_theta(&zero, c(0.1, 0.0), &b).unwrap();
        let j = jacobi_theta3(c(0.1, 0.0), c(0.0, 1.0), &b).unwrap();
        assert!((r - j).norm() < 1e-13);

        let one = ThetaArgs::new(1.0, 0.0, c(0.0, 2.0)).unwrap();
        let zero2 = ThetaArgs::new(0.0, 0.0, c(0.0, 2.0)).unwrap();
        let a = riemann_theta(&one, c(0.2, 0.0), &b).unwrap();
        let z = riemann_theta(&zero2, c(0.2, 0.0), &b).unwrap();
        assert!((a - z).norm() < 1e-12);

        let (alpha, beta, tau, z) = (0.3, 0.7, c(0.0, 1.5), c(0.1, 0.05));
        let lhs = riemann_theta(&ThetaArgs::new(alpha, beta, tau).unwrap(), z, &b).unwrap();
        let shift = (I * PI * alpha * alpha * tau + 2.0 * I * PI * alpha * (z + beta)).exp();
        let rhs = shift * jacobi_theta3(z + alpha * tau + beta, tau, &b).unwrap();
        assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm());
    }

    #[test]
    fn periodicity_factor_examples() {
        let b = TruncationBudget::default();
        assert_eq!(theta3_periodicity_factor(c(0.4, 0.3), c(0.5, 2.0), 0, 3).unwrap(), c(1.0, 0.0));
        let f = theta3_periodicity_factor(c(0.0, 0.0), c(0.0, 1.0), 1, 0).unwrap();
        assert!((f.re - PI.exp()).abs() < 1e-12 && f.im.abs() < 1e-12);

        let (z, tau) = (c(0.1, 0.0), c(0.0, 2.0));
        let shifted = jacobi_theta3(z + tau + 1.0, tau, &b).unwrap();
        let base = jacobi_theta3(z, tau, &b).unwrap();
        let factor = theta3_periodicity_factor(z, tau, 1, 1).unwrap();
        assert!((shifted / base - factor).norm() <= 1e-10 * factor.norm());
    }

    #[test]
    fn inversion_examples() {
        let b = TruncationBudget::default();
        let at_i = theta3_inversion_rhs(c(0.0, 0.0), c(0.0, 1.0), &b).unwrap();
        let direct = jacobi_theta3(c(0.0, 0.0), c(0.0, 1.0), &b).unwrap();
        assert!((at_i - direct).norm() < 1e-14);

        for (z, tau, tol) in [(c(0.2, 0.0), c(0.0, 0.8), 1e-11), (c(0.1, 0.1), c(1.0, 2.0), 1e-10)] {
            let lhs = jacobi_theta3(z, tau, &b).unwrap();
            let rhs = theta3_inversion_rhs(z, tau, &b).unwrap();
            assert!((lhs - rhs).norm() <= tol * lhs.norm(), "z={z} tau={tau}");
        }
    }

    #[test]
    fn lower_half_plane_is_rejected() {
        let b = TruncationBudget::default();
        assert!(matches!(jacobi_theta3(c(0.0, 0.0), c(1.0, 0.0), &b), Err(Error::Domain(_))));
        assert!(matches!(jacobi_theta3(c(0.0, 0.0), c(0.0, -1.0), &b), Err(Error::Domain(_))));
        assert!(ThetaArgs::new(0.0, 0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn tiny_cap_is_truncation_error() {
        let b = TruncationBudget::new(1e-12, 2).unwrap();
        let err = jacobi_theta3(c(0.0, 0.0), c(0.0, 0.01), &b).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn large_imaginary_argument_is_centered() {
        let b = TruncationBudget::default();
        let z = c(0.3, 4.5);
        let tau = c(0.2, 1.1);
        let got = jacobi_theta3(z, tau, &b).unwrap();
        let brute = brute_theta(0.0, 0.0, z, tau, 80);
        assert!((got - brute).norm() <= 1e-12 * brute.norm());
    }
}
