//! The line space of `sqrt(2) Z`-quasi-periodic functions and the Bargmann
//! transform onto the holomorphic space.
//!
//! The line space has the orthonormal basis
//! `phi_n(q) = 2^{-1/4} exp(sqrt(2) i pi (n + alpha) q)` over one period
//! `[0, sqrt 2]`, and the transform sends `phi_n` to `psi_n`. Its kernel over
//! one period has two closed forms: a Jacobi theta form (kernel "A") obtained
//! by folding the Gaussian over the period lattice, and a Riemann theta form
//! (kernel "G") obtained by summing `psi_n(z) conj(phi_n(q))`. Both are
//! implemented independently; their agreement is the theta inversion formula.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::fock::{basis_psi, e_norm, FockElement};
use crate::quadrature::{line_integral, strip_inner_product, LineScheme};
use crate::scalar::{unit_phase, TruncationBudget};
use crate::series::sum_outward;
use crate::theta::{jacobi_theta3, riemann_theta, ThetaArgs};
use crate::SpaceParams;

/// Trapezoid resolution for the kernel integral over one period.
pub const LINE_START_POINTS: usize = 256;
pub const LINE_MAX_POINTS: usize = 4096;

/// `phi_n(q) = 2^{-1/4} exp(sqrt(2) i pi (n + alpha) q)`.
pub fn phi_basis(n: i64, q: f64, alpha: f64) -> Complex64 {
    // phase (n + alpha) q / sqrt(2), in turns
    let turns = (n as f64 + alpha) * q / SQRT_2;
    2f64.powf(-0.25) * unit_phase(turns)
}

/// A finitely supported `sum_n b_n phi_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LineElementJson", into = "LineElementJson")]
pub struct LineElement {
    alpha: f64,
    coeffs: BTreeMap<i64, Complex64>,
}

impl LineElement {
    pub fn new<T>(alpha: f64, coeffs: T) -> Result<Self>
    where
        T: IntoIterator<Item = (i64, Complex64)>,
    {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        let mut map = BTreeMap::new();
        for (n, b) in coeffs {
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += b;
        }
        Ok(Self { alpha, coeffs: map })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn evaluate(&self, q: f64) -> Complex64 {
        self.coeffs.iter().map(|(&n, &b)| b * phi_basis(n, q, self.alpha)).sum()
    }

    /// `(sum |b_n|^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|b| b.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LineElementJson {
    alpha: f64,
    coeffs: Vec<CoeffJson>,
}

impl TryFrom<LineElementJson> for LineElement {
    type Error = Error;

    fn try_from(raw: LineElementJson) -> Result<Self> {
        if !raw.alpha.is_finite() {
            return Err(Error::Usage("alpha must be finite".into()));
        }
        let mut coeffs = BTreeMap::new();
        for c in raw.coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Usage(format!("coefficient {} is not finite", c.n)));
            }
            if coeffs.insert(c.n, Complex64::new(c.re, c.im)).is_some() {
                return Err(Error::Usage(format!("index {} appears twice", c.n)));
            }
        }
        Ok(Self { alpha: raw.alpha, coeffs })
    }
}

impl From<LineElement> for LineElementJson {
    fn from(e: LineElement) -> Self {
        Self { alpha: e.alpha, coeffs: e.coeffs.into_iter().map(|(n, b)| CoeffJson { n, re: b.re, im: b.im }).collect() }
    }
}

/// Kernel `A(z; q) = (nu/pi)^{3/4} exp(nu/2 z^2 - nu (q/sqrt2 - z)^2) theta_3((i nu/pi)(q/sqrt2 - z) + alpha | i nu/pi)`.
pub fn bargmann_kernel_a(z: Complex64, q: f64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let nu = params.nu();
    let tau = Complex64::new(0.0, nu / PI);
    let offset = q / SQRT_2 - z;
    let theta = jacobi_theta3(tau * offset + params.alpha(), tau, budget)?;
    let value = (nu / PI).powf(0.75) * (0.5 * nu * z * z - nu * offset * offset).exp() * theta;
    finite(value, || format!("kernel A overflows at z = {z}, q = {q}"))
}

/// Kernel `G(z; q) = (nu/pi)^{1/4} exp(nu/2 z^2) theta_{alpha,0}(z - q/sqrt2 | i pi/nu)`.
pub fn generating_kernel_g(z: Complex64, q: f64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let nu = params.nu();
    let args = ThetaArgs::new(params.alpha(), 0.0, Complex64::new(0.0, PI / nu))?;
    let theta = riemann_theta(&args, z - q / SQRT_2, budget)?;
    let value = (nu / PI).powf(0.25) * (0.5 * nu * z * z).exp() * theta;
    finite(value, || format!("kernel G overflows at z = {z}, q = {q}"))
}

/// `G(z; q)` summed directly as `sum_n psi_n(z) conj(phi_n(q))`.
pub fn generating_kernel_g_sum(z: Complex64, q: f64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let center = (-params.alpha() - params.nu() * z.im / PI).round() as i64;
    let mut failure = None;
    let sum = sum_outward(center, budget, |n| match basis_psi(n, z, params) {
        Ok(psi) => psi * phi_basis(n, q, params.alpha()).conj(),
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(sum.value),
    }
}

/// Coefficient-level transform: `b_n` over `phi_n` becomes `b_n` over `psi_n`.
/// The result stores `e_n` coefficients `b_n / ||e_n||`.
pub fn bargmann_transform_coeffs(elem: &LineElement, nu: f64) -> Result<FockElement> {
    let params = SpaceParams::new(nu, elem.alpha)?;
    FockElement::from_psi_coeffs(params, elem.coeffs.iter().map(|(&n, &b)| (n, b)))
}

/// `[B phi](z) = int_0^{sqrt 2} A(z; q) phi(q) dq`, by the periodic trapezoid
/// rule doubled from 256 nodes until two successive values agree within
/// `budget.tol() * max(1, |value|)` (at most 4096 nodes).
pub fn bargmann_pointwise<F>(phi: F, z: Complex64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let integrate = |points: usize| -> Result<Complex64> {
        line_integral(|q| Ok(bargmann_kernel_a(z, q, params, budget)? * phi(q)?), &LineScheme::new(points)?)
    };
    let mut points = LINE_START_POINTS;
    let mut previous = integrate(points)?;
    while points < LINE_MAX_POINTS {
        points *= 2;
        let current = integrate(points)?;
        let change = (current - previous).norm();
        if change <= budget.tol() * current.norm().max(1.0) {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Truncation { terms: points, achieved: (previous - integrate(points / 2)?).norm() })
}

/// The defining whole-line integral
/// `(nu/pi)^{3/4} exp(nu/2 z^2) int_R phi(q) exp(-nu/2 (q - sqrt2 z)^2) dq`,
/// truncated to `|q - sqrt2 Re z| <= 10 / sqrt(nu)` and integrated with `points` trapezoid nodes.
pub fn bargmann_whole_line<F>(phi: F, z: Complex64, params: &SpaceParams, points: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if points < 8 {
        return Err(Error::Domain(format!("whole-line rule needs at least 8 points, got {points}")));
    }
    let nu = params.nu();
    let center = SQRT_2 * z.re;
    let half = 10.0 / nu.sqrt();
    let h = 2.0 * half / points as f64;
    let shift = SQRT_2 * z;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=points {
        let q = center - half + j as f64 * h;
        let weight = if j == 0 || j == points { 0.5 * h } else { h };
        let d = q - shift;
        acc += phi(q)? * (-0.5 * nu * d * d).exp() * weight;
    }
    let value = (nu / PI).powf(0.75) * (0.5 * nu * z * z).exp() * acc;
    finite(value, || format!("whole-line transform overflows at {z}"))
}

/// `[B^{-1} f](q) = <f, G(.; q)>_nu`, by strip quadrature.
pub fn bargmann_inverse(elem: &FockElement, q: f64, budget: &TruncationBudget) -> Result<Complex64> {
    if elem.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let params = *elem.params();
    strip_inner_product(
        |z| elem.evaluate(z),
        |z| generating_kernel_g(z, q, &params, budget),
        params.nu(),
        &elem.strip_scheme(),
    )
}

/// `psi_n` as the image of the unit vector `phi_n`, via its `e_n` coefficient.
pub fn transported_basis(n: i64, params: SpaceParams) -> Result<FockElement> {
    let norm = e_norm(n, &params)?;
    Ok(FockElement::from_e_coeffs(params, [(n, Complex64::new(norm.recip(), 0.0))]))
}
