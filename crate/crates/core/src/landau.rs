//! The full Gaussian-weighted L2 space of quasi-periodic functions and the
//! Landau operator `Delta = -d^2/dz dzbar + nu zbar d/dzbar`.
//!
//! The basis `psi_{m,n}(z) = C_{m,n} e_n(z) H_m(sqrt(2 nu) y + sqrt(2/nu) pi (n + alpha))`
//! is orthonormal, and `Delta psi_{m,n} = nu m psi_{m,n}`. The creation
//! operator `A* = -d/dz + nu zbar` and the annihilation operator `A = d/dzbar`
//! act by
//!
//! ```text
//! i A* psi_{m,n} = sqrt(nu (m + 1)) psi_{m+1,n}
//!    A psi_{m,n} = i sqrt(nu m) psi_{m-1,n}
//! ```
//!
//! so that `A* A = Delta`. Level `m = 0` is the holomorphic space.
//!
//! Every operator has an exact coefficient-level form and a finite-difference
//! form built from central differences with one Richardson step.

use std::collections::BTreeMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::fock::{gaussian_exponential, log_e_norm};
use crate::quadrature::StripScheme;
use crate::scalar::{hermite_poly, ln_factorial};
use crate::SpaceParams;

/// Largest level accepted by [`basis_psi_mn`].
pub const MAX_LEVEL: u32 = 40;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Step for the finite-difference Wirtinger derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerStep {
    h: f64,
}

impl WirtingerStep {
    pub const MIN: f64 = 1e-7;
    pub const MAX: f64 = 1e-2;

    pub fn new(h: f64) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&h) {
            Ok(Self { h })
        } else {
            Err(Error::Domain(format!("step must lie in [1e-7, 1e-2], got {h}")))
        }
    }

    pub fn h(&self) -> f64 {
        self.h
    }
}

impl Default for WirtingerStep {
    fn default() -> Self {
        Self { h: 1e-4 }
    }
}

/// `psi_{m,n}(z)`.
pub fn basis_psi_mn(m: u32, n: i64, z: Complex64, params: &SpaceParams) -> Result<Complex64> {
    if m > MAX_LEVEL {
        return Err(Error::Range(format!("level {m} exceeds the supported maximum {MAX_LEVEL}")));
    }
    let nu = params.nu();
    let shift = (2.0 * nu).sqrt() * (z.im - params.gaussian_center(n as f64));
    let hermite = hermite_poly(m, shift)?;
    // ln C_{m,n} = -(m ln 2 + ln m!)/2 - ln ||e_n||
    let log_c = -0.5 * (m as f64 * 2f64.ln() + ln_factorial(m)) - log_e_norm(n, params);
    let value = gaussian_exponential(log_c, n, z, params) * hermite;
    finite(value, || format!("psi_({m},{n})({z}) overflows"))
}

/// A finitely supported `sum a_{m,n} psi_{m,n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LandauElementJson", into = "LandauElementJson")]
pub struct LandauElement {
    params: SpaceParams,
    coeffs: BTreeMap<(u32, i64), Complex64>,
}

impl LandauElement {
    pub fn zero(params: SpaceParams) -> Self {
        Self { params, coeffs: BTreeMap::new() }
    }

    /// Repeated keys are added.
    pub fn new<T>(params: SpaceParams, coeffs: T) -> Self
    where
        T: IntoIterator<Item = ((u32, i64), Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (key, a) in coeffs {
            *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Self { params, coeffs: map }
    }

    /// The unit vector `psi_{m,n}`.
    pub fn basis(params: SpaceParams, m: u32, n: i64) -> Self {
        Self::new(params, [((m, n), Complex64::new(1.0, 0.0))])
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, i64), Complex64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    /// Levels carrying at least one coefficient.
    pub fn levels(&self) -> Vec<u32> {
        let mut levels: Vec<u32> = self.coeffs.keys().map(|&(m, _)| m).collect();
        levels.dedup();
        levels
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&(m, n), &a) in &self.coeffs {
            acc += a * basis_psi_mn(m, n, z, &self.params)?;
        }
        finite(acc, || format!("element overflows at {z}"))
    }

    /// `Delta f` evaluated through the exact level action.
    pub fn landau_image(&self) -> Self {
        let nu = self.params.nu();
        Self::new(self.params, self.coeffs.iter().map(|(&(m, n), &a)| ((m, n), a * (nu * m as f64))))
    }

    /// Strip scheme covering the Gaussian centers and Hermite degrees of the support.
    pub fn strip_scheme(&self) -> StripScheme {
        let lo = self.coeffs.keys().map(|&(_, n)| n).min();
        let hi = self.coeffs.keys().map(|&(_, n)| n).max();
        let top = self.coeffs.keys().map(|&(m, _)| m).max().unwrap_or(0);
        let scheme = match (lo, hi) {
            (Some(lo), Some(hi)) => StripScheme::spanning(&self.params, lo as f64, hi as f64),
            _ => StripScheme::default(),
        };
        let order = (scheme.y_order() + 8 * top as usize).min(StripScheme::MAX_Y_ORDER);
        scheme.with_y_order(order).unwrap_or(scheme)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    m: u32,
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LandauElementJson {
    nu: f64,
    alpha: f64,
    coeffs: Vec<CoeffJson>,
}

impl TryFrom<LandauElementJson> for LandauElement {
    type Error = Error;

    fn try_from(raw: LandauElementJson) -> Result<Self> {
        let params = SpaceParams::new(raw.nu, raw.alpha).map_err(|e| Error::Usage(e.to_string()))?;
        let mut coeffs = BTreeMap::new();
        for c in raw.coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Usage(format!("coefficient ({}, {}) is not finite", c.m, c.n)));
            }
            if coeffs.insert((c.m, c.n), Complex64::new(c.re, c.im)).is_some() {
                return Err(Error::Usage(format!("index ({}, {}) appears twice", c.m, c.n)));
            }
        }
        Ok(Self { params, coeffs })
    }
}

impl From<LandauElement> for LandauElementJson {
    fn from(e: LandauElement) -> Self {
        Self {
            nu: e.params.nu(),
            alpha: e.params.alpha(),
            coeffs: e.coeffs.into_iter().map(|((m, n), a)| CoeffJson { m, n, re: a.re, im: a.im }).collect(),
        }
    }
}

/// Normalized creation step: the unit at `(m, n)` moves to `(m + 1, n)`.
pub fn raise(elem: &LandauElement) -> LandauElement {
    LandauElement::new(elem.params, elem.coeffs.iter().map(|(&(m, n), &a)| ((m + 1, n), a)))
}

/// Adjoint of [`raise`]: the unit at `(m, n)` moves to `(m - 1, n)` and level 0 is dropped.
pub fn lower(elem: &LandauElement) -> LandauElement {
    LandauElement::new(
        elem.params,
        elem.coeffs.iter().filter(|(&(m, _), _)| m > 0).map(|(&(m, n), &a)| ((m - 1, n), a)),
    )
}

/// Level-`m` part of `elem`.
pub fn project_level(elem: &LandauElement, m: u32) -> LandauElement {
    LandauElement::new(elem.params, elem.coeffs.iter().filter(|(&(k, _), _)| k == m).map(|(&k, &a)| (k, a)))
}

/// `(sum |a_{m,n}|^2)^{1/2}`.
pub fn landau_norm(elem: &LandauElement) -> f64 {
    landau_norm_sqr(elem).sqrt()
}

/// `sum |a_{m,n}|^2`.
pub fn landau_norm_sqr(elem: &LandauElement) -> f64 {
    elem.coeffs.values().map(|a| a.norm_sqr()).sum()
}

/// Values of `f` on the 3x3 stencil of spacing `h` around `z`, indexed `[dx + 1][dy + 1]`.
fn stencil<F>(f: &F, z: Complex64, h: f64) -> Result<[[Complex64; 3]; 3]>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut grid = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in grid.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let offset = Complex64::new((i as f64 - 1.0) * h, (j as f64 - 1.0) * h);
            *cell = f(z + offset)?;
        }
    }
    Ok(grid)
}

/// `(d_x f, d_y f, Laplacian f)` at one step size.
fn differences(g: &[[Complex64; 3]; 3], h: f64) -> (Complex64, Complex64, Complex64) {
    let dx = (g[2][1] - g[0][1]) / (2.0 * h);
    let dy = (g[1][2] - g[1][0]) / (2.0 * h);
    let edges = g[2][1] + g[0][1] + g[1][2] + g[1][0];
    let corners = g[0][0] + g[0][2] + g[2][0] + g[2][2];
    let laplacian = (4.0 * edges + corners - 20.0 * g[1][1]) / (6.0 * h * h);
    (dx, dy, laplacian)
}

/// Richardson-combined `(d_x f, d_y f, Laplacian f)` at `z`.
fn derivatives<F>(f: &F, z: Complex64, step: WirtingerStep) -> Result<(Complex64, Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = step.h();
    let coarse = differences(&stencil(f, z, h)?, h);
    let fine = differences(&stencil(f, z, 0.5 * h)?, 0.5 * h);
    let extrapolate = |c: Complex64, f: Complex64| (4.0 * f - c) / 3.0;
    Ok((extrapolate(coarse.0, fine.0), extrapolate(coarse.1, fine.1), extrapolate(coarse.2, fine.2)))
}

/// `(Delta f)(z)` by finite differences.
pub fn landau_apply<F>(f: F, z: Complex64, params: &SpaceParams, step: WirtingerStep) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (dx, dy, laplacian) = derivatives(&f, z, step)?;
    let d_zbar = 0.5 * (dx + I * dy);
    Ok(-0.25 * laplacian + params.nu() * z.conj() * d_zbar)
}

/// `(A* f)(z) = -df/dz + nu zbar f` by finite differences.
pub fn creation_fd<F>(f: F, z: Complex64, params: &SpaceParams, step: WirtingerStep) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (dx, dy, _) = derivatives(&f, z, step)?;
    let d_z = 0.5 * (dx - I * dy);
    Ok(-d_z + params.nu() * z.conj() * f(z)?)
}

/// `(A f)(z) = df/dzbar` by finite differences.
pub fn annihilation_fd<F>(f: F, z: Complex64, step: WirtingerStep) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (dx, dy, _) = derivatives(&f, z, step)?;
    Ok(0.5 * (dx + I * dy))
}

/// `max_z |Delta psi_{m,n}(z) - nu m psi_{m,n}(z)| / max(1, |psi_{m,n}(z)|)`.
pub fn eigen_residual(m: u32, n: i64, params: &SpaceParams, sample_points: &[Complex64], step: WirtingerStep) -> Result<f64> {
    eigen_residual_for(m, n, params.nu() * m as f64, params, sample_points, step)
}

/// As [`eigen_residual`] against an arbitrary eigenvalue guess.
pub fn eigen_residual_for(
    m: u32,
    n: i64,
    eigenvalue: f64,
    params: &SpaceParams,
    sample_points: &[Complex64],
    step: WirtingerStep,
) -> Result<f64> {
    let f = |z| basis_psi_mn(m, n, z, params);
    let mut worst = 0.0f64;
    for &z in sample_points {
        let value = f(z)?;
        let image = landau_apply(f, z, params, step)?;
        worst = worst.max((image - eigenvalue * value).norm() / value.norm().max(1.0));
    }
    Ok(worst)
}

/// Eigenvalue of level `m`.
pub fn level_eigenvalue(m: u32, params: &SpaceParams) -> f64 {
    params.nu() * m as f64
}

/// Sample points used by default for residual checks.
pub fn default_sample_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.1, 0.2),
        Complex64::new(0.35, -0.6),
        Complex64::new(-0.4, 0.9),
        Complex64::new(0.75, -1.0),
        Complex64::new(0.0, 0.0),
    ]
}
