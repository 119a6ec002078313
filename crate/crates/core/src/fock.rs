//! The holomorphic space of quasi-periodic entire functions.
//!
//! Elements satisfy `f(z + m) = chi_alpha(m) exp(nu (z + m/2) m) f(z)` and have
//! finite norm `int_S |f|^2 exp(-nu |z|^2) dm`. Every such function expands
//! uniquely over `e_n(z) = exp(nu/2 z^2 + 2 i pi (alpha + n) z)`; the `e_n` are
//! orthogonal with `||e_n||^2 = (pi / 2 nu)^{1/2} exp(2 pi^2 (n + alpha)^2 / nu)`
//! and `psi_n = e_n / ||e_n||` is an orthonormal basis.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::scalar::{character, TruncationBudget};
use crate::series::sum_outward;
use crate::theta::{riemann_theta, ThetaArgs};
use crate::SpaceParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `exp(log_scale + nu/2 z^2 + 2 i pi (alpha + n) z)`, assembled from its
/// modulus and phase so that large `n` keeps its phase accuracy.
pub(crate) fn gaussian_exponential(log_scale: f64, n: i64, z: Complex64, params: &SpaceParams) -> Complex64 {
    let nu = params.nu();
    let k = params.alpha() + n as f64;
    let (x, y) = (z.re, z.im);
    let log_modulus = log_scale + 0.5 * nu * (x * x - y * y) - 2.0 * PI * k * y;
    let phase = nu * x * y + 2.0 * PI * k * x;
    Complex64::from_polar(log_modulus.exp(), phase)
}

/// `ln ||e_n||`.
pub(crate) fn log_e_norm(n: i64, params: &SpaceParams) -> f64 {
    let k = params.alpha() + n as f64;
    0.25 * (PI / (2.0 * params.nu())).ln() + PI * PI * k * k / params.nu()
}

/// `e_n(z) = exp(nu/2 z^2 + 2 i pi (alpha + n) z)`.
pub fn basis_e(n: i64, z: Complex64, params: &SpaceParams) -> Result<Complex64> {
    finite(gaussian_exponential(0.0, n, z, params), || format!("e_{n}({z}) overflows"))
}

/// `||e_n|| = (pi / 2 nu)^{1/4} exp(pi^2 (n + alpha)^2 / nu)`.
pub fn e_norm(n: i64, params: &SpaceParams) -> Result<f64> {
    let value = log_e_norm(n, params).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Range(format!("||e_{n}|| overflows for nu = {}", params.nu())))
    }
}

/// `psi_n(z) = (2 nu / pi)^{1/4} exp(-pi^2 (n + alpha)^2 / nu) e_n(z)`.
pub fn basis_psi(n: i64, z: Complex64, params: &SpaceParams) -> Result<Complex64> {
    finite(gaussian_exponential(-log_e_norm(n, params), n, z, params), || format!("psi_{n}({z}) overflows"))
}

/// A finitely supported element `sum_n a_n e_n`.
///
/// Coefficients are kept in the `e_n` convention; use [`FockElement::from_psi_coeffs`]
/// and [`FockElement::psi_coeffs`] to work over the orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FockElementJson", into = "FockElementJson")]
pub struct FockElement {
    params: SpaceParams,
    coeffs: BTreeMap<i64, Complex64>,
}

impl FockElement {
    pub fn zero(params: SpaceParams) -> Self {
        Self { params, coeffs: BTreeMap::new() }
    }

    /// From coefficients over `e_n`; repeated indices are added.
    pub fn from_e_coeffs<T>(params: SpaceParams, coeffs: T) -> Self
    where
        T: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (n, a) in coeffs {
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Self { params, coeffs: map }
    }

    /// From coefficients over the orthonormal `psi_n`.
    pub fn from_psi_coeffs<T>(params: SpaceParams, coeffs: T) -> Result<Self>
    where
        T: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (n, b) in coeffs {
            let a = b / e_norm(n, &params)?;
            *map.entry(n).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Ok(Self { params, coeffs: map })
    }

    /// The unit vector `psi_n`.
    pub fn psi(params: SpaceParams, n: i64) -> Result<Self> {
        Self::from_psi_coeffs(params, [(n, Complex64::new(1.0, 0.0))])
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    /// Coefficients over `e_n`.
    pub fn e_coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    /// Coefficients over `psi_n`, i.e. `a_n ||e_n||`.
    pub fn psi_coeffs(&self) -> Result<BTreeMap<i64, Complex64>> {
        self.coeffs.iter().map(|(&n, &a)| Ok((n, a * e_norm(n, &self.params)?))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|a| *a == Complex64::new(0.0, 0.0))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { params: self.params, coeffs: self.coeffs.iter().map(|(&n, &a)| (n, a * factor)).collect() }
    }

    /// Smallest and largest index in the support.
    pub fn index_range(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    /// `f(z) = sum_n a_n e_n(z)`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &a) in &self.coeffs {
            acc += a * basis_e(n, z, &self.params)?;
        }
        finite(acc, || format!("element overflows at {z}"))
    }

    /// Strip scheme wide enough to integrate `|f|^2 exp(-nu |z|^2)` for this support.
    pub fn strip_scheme(&self) -> crate::quadrature::StripScheme {
        match self.index_range() {
            Some((lo, hi)) => crate::quadrature::StripScheme::spanning(&self.params, lo as f64, hi as f64),
            None => crate::quadrature::StripScheme::default(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FockElementJson {
    nu: f64,
    alpha: f64,
    coeffs: Vec<CoeffJson>,
}

impl TryFrom<FockElementJson> for FockElement {
    type Error = Error;

    fn try_from(raw: FockElementJson) -> Result<Self> {
        let params = SpaceParams::new(raw.nu, raw.alpha)?;
        let mut coeffs = BTreeMap::new();
        for c in raw.coeffs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::Usage(format!("coefficient {} is not finite", c.n)));
            }
            if coeffs.insert(c.n, Complex64::new(c.re, c.im)).is_some() {
                return Err(Error::Usage(format!("index {} appears twice", c.n)));
            }
        }
        Ok(Self { params, coeffs })
    }
}

impl From<FockElement> for FockElementJson {
    fn from(e: FockElement) -> Self {
        Self {
            nu: e.params.nu(),
            alpha: e.params.alpha(),
            coeffs: e.coeffs.into_iter().map(|(n, a)| CoeffJson { n, re: a.re, im: a.im }).collect(),
        }
    }
}

/// `||f||_nu` from the coefficients: `(pi / 2 nu)^{1/2} sum_n exp(2 pi^2 (n + alpha)^2 / nu) |a_n|^2`, square-rooted.
pub fn fock_norm(elem: &FockElement) -> Result<f64> {
    let mut total = 0.0;
    for (&n, &a) in &elem.coeffs {
        total += (a.norm() * e_norm(n, &elem.params)?).powi(2);
    }
    if total.is_finite() {
        Ok(total.sqrt())
    } else {
        Err(Error::Range("norm overflows".into()))
    }
}

/// `|f(z + m) - chi_alpha(m) exp(nu (z + m/2) m) f(z)| / max(1, |f(z)|)`.
pub fn quasiperiod_residual<F>(f: F, z: Complex64, m: i64, params: &SpaceParams) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let fz = f(z)?;
    let mf = m as f64;
    let factor = character(params.alpha(), m) * (params.nu() * (z + 0.5 * mf) * mf).exp();
    let shifted = f(z + mf)?;
    Ok((shifted - factor * fz).norm() / fz.norm().max(1.0))
}

/// `g(z) = exp(-nu/2 z^2 - 2 i pi alpha z) f(z)`, which is 1-periodic when `f` is quasi-periodic.
pub fn periodic_part<F>(f: F, z: Complex64, params: &SpaceParams) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let multiplier = (-0.5 * params.nu() * z * z - 2.0 * I * PI * params.alpha() * z).exp();
    Ok(multiplier * f(z)?)
}

fn kernel_modulus(params: &SpaceParams) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI / params.nu())
}

/// Reproducing kernel `K(z, w) = (2 nu / pi)^{1/2} exp(nu/2 (z^2 + conj(w)^2)) theta_{alpha,0}(z - conj(w) | 2 i pi / nu)`.
pub fn reproducing_kernel(z: Complex64, w: Complex64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let nu = params.nu();
    let args = ThetaArgs::new(params.alpha(), 0.0, kernel_modulus(params))?;
    let wc = w.conj();
    let theta = riemann_theta(&args, z - wc, budget)?;
    let value = (2.0 * nu / PI).sqrt() * (0.5 * nu * (z * z + wc * wc)).exp() * theta;
    finite(value, || format!("kernel overflows at ({z}, {w})"))
}

/// The same kernel summed directly as `sum_n psi_n(z) conj(psi_n(w))`.
pub fn reproducing_kernel_sum(z: Complex64, w: Complex64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let center = (-params.alpha() - (z.im + w.im) * params.nu() / (2.0 * PI)).round() as i64;
    let mut failure = None;
    let sum = sum_outward(center, budget, |n| match (basis_psi(n, z, params), basis_psi(n, w, params)) {
        (Ok(a), Ok(b)) => a * b.conj(),
        (Err(e), _) | (_, Err(e)) => {
            failure.get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(sum.value),
    }
}

/// `K(z, z)^{1/2}`, the sharp constant in `|f(z)| <= ||f|| K(z, z)^{1/2}`.
pub fn pointwise_bound(z: Complex64, params: &SpaceParams, budget: &TruncationBudget) -> Result<f64> {
    let k = reproducing_kernel(z, z, params, budget)?;
    Ok(k.re.max(0.0).sqrt())
}

/// `f(z) = exp(nu/2 z^2) theta_{alpha,beta}(z|tau)`.
pub fn holomorphic_theta(args: &ThetaArgs, z: Complex64, params: &SpaceParams, budget: &TruncationBudget) -> Result<Complex64> {
    let value = (0.5 * params.nu() * z * z).exp() * riemann_theta(args, z, budget)?;
    finite(value, || format!("theta element overflows at {z}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub in_space: bool,
    pub norm: Option<f64>,
}

/// `ln` of the norm-series term `exp(-2 pi (n + alpha)^2 (Im tau - pi / nu))`.
fn log_norm_series_term(args: &ThetaArgs, params: &SpaceParams, n: i64) -> f64 {
    let k = n as f64 + args.alpha();
    -2.0 * PI * k * k * (args.tau().im - PI / params.nu())
}

/// Decides whether `exp(nu/2 z^2) theta_{alpha,beta}(z|tau)` has finite norm
/// (exactly when `Im tau > pi / nu`) and, if so, returns that norm.
pub fn theta_membership(args: &ThetaArgs, params: &SpaceParams, budget: &TruncationBudget) -> Result<Membership> {
    if args.tau().im <= PI / params.nu() {
        return Ok(Membership { in_space: false, norm: None });
    }
    let center = (-args.alpha()).round() as i64;
    let sum = sum_outward(center, budget, |n| Complex64::new(log_norm_series_term(args, params, n).exp(), 0.0))?;
    let squared = (PI / (2.0 * params.nu())).sqrt() * sum.value.re;
    Ok(Membership { in_space: true, norm: Some(squared.sqrt()) })
}

/// Evidence that the norm series diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    /// Natural logs of the partial sums of `sum_n exp(-2 pi (n + alpha)^2 (Im tau - pi / nu))`
    /// over `|n - n_0| <= N` for `N` in [`DIVERGENCE_CUTOFFS`].
    pub log_partial_sums: [f64; 3],
    /// Ratios `t_{N+1} / t_N` of consecutive terms at the same cutoffs.
    pub term_ratios: [f64; 3],
    /// Partial sums strictly increase and the terms do not decay, so the series is unbounded.
    pub certified: bool,
}

pub const DIVERGENCE_CUTOFFS: [usize; 3] = [10, 20, 40];

fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

pub fn certify_divergence(args: &ThetaArgs, params: &SpaceParams) -> DivergenceCertificate {
    let center = (-args.alpha()).round() as i64;
    let term = |n: i64| log_norm_series_term(args, params, n);
    let mut log_partial_sums = [0.0; 3];
    let mut acc = term(center);
    let mut slot = 0;
    for k in 1..=DIVERGENCE_CUTOFFS[2] {
        let offset = k as i64;
        acc = log_add(acc, log_add(term(center + offset), term(center - offset)));
        if k == DIVERGENCE_CUTOFFS[slot] {
            log_partial_sums[slot] = acc;
            slot += 1;
        }
    }
    let term_ratios = DIVERGENCE_CUTOFFS.map(|k| {
        let n = center + k as i64;
        (term(n + 1) - term(n)).exp()
    });
    let increasing = log_partial_sums[0] < log_partial_sums[1] && log_partial_sums[1] < log_partial_sums[2];
    let non_decaying = term_ratios.iter().all(|&r| r >= 1.0);
    DivergenceCertificate { log_partial_sums, term_ratios, certified: increasing && non_decaying }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pi_params(alpha: f64) -> SpaceParams {
        SpaceParams::new(PI, alpha).unwrap()
    }

    #[test]
    fn basis_e_examples() {
        let p = pi_params(0.0);
        assert_eq!(basis_e(0, c(0.0, 0.0), &p).unwrap(), c(1.0, 0.0));
        let v = basis_e(1, c(0.0, 1.0), &p).unwrap();
        assert!((v - c((-2.5 * PI).exp(), 0.0)).norm() < 1e-16);
        let f = |z| basis_e(3, z, &pi_params(0.3));
        assert!(quasiperiod_residual(f, c(0.3, 0.4), 1, &pi_params(0.3)).unwrap() < 1e-12);
    }

    #[test]
    fn e_norm_examples() {
        let p = pi_params(0.0);
        assert!((e_norm(0, &p).unwrap() - 0.5f64.powf(0.25)).abs() < 1e-15);
        for n in -5..=5 {
            let a = e_norm(n, &pi_params(0.3)).unwrap();
            let b = e_norm(-n, &pi_params(-0.3)).unwrap();
            assert_eq!(a, b);
        }
        let tiny = SpaceParams::new(1e-3, 0.0).unwrap();
        assert!(matches!(e_norm(10, &tiny), Err(Error::Range(_))));
    }

    #[test]
    fn psi_examples() {
        let p = pi_params(0.0);
        assert!((basis_psi(0, c(0.0, 0.0), &p).unwrap().re - 2f64.powf(0.25)).abs() < 1e-15);
        let q = pi_params(0.3);
        for (n, z) in [(0, c(0.1, 0.2)), (2, c(-0.7, 1.1)), (-3, c(0.4, -0.9))] {
            let psi = basis_psi(n, z, &q).unwrap();
            let ratio = basis_e(n, z, &q).unwrap() / e_norm(n, &q).unwrap();
            assert!((psi - ratio).norm() <= 1e-13 * psi.norm());
        }
    }

    #[test]
    fn evaluate_examples() {
        let p = pi_params(0.3);
        let z = c(0.1, 0.2);
        assert_eq!(FockElement::zero(p).evaluate(z).unwrap(), c(0.0, 0.0));
        let single = FockElement::from_e_coeffs(p, [(0, c(1.0, 0.0))]);
        assert_eq!(single.evaluate(z).unwrap(), basis_e(0, z, &p).unwrap());
        let two = FockElement::from_e_coeffs(p, [(0, c(1.0, 0.0)), (1, c(0.0, 2.0))]);
        let oracle = basis_e(0, z, &p).unwrap() + c(0.0, 2.0) * basis_e(1, z, &p).unwrap();
        assert!((two.evaluate(z).unwrap() - oracle).norm() < 1e-14);
    }

    #[test]
    fn norm_examples() {
        let p = pi_params(0.0);
        let one = FockElement::from_e_coeffs(p, [(0, c(1.0, 0.0))]);
        assert!((fock_norm(&one).unwrap() - 0.5f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(fock_norm(&FockElement::zero(p)).unwrap(), 0.0);
        let e = FockElement::from_e_coeffs(pi_params(0.3), [(-1, c(0.3, 0.1)), (2, c(-0.2, 0.05))]);
        let doubled = fock_norm(&e.scaled(c(2.0, 0.0))).unwrap();
        assert!((doubled - 2.0 * fock_norm(&e).unwrap()).abs() <= 1e-15 * doubled);
        let unit = FockElement::psi(pi_params(0.3), 4).unwrap();
        assert!((fock_norm(&unit).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn residual_examples() {
        let p = pi_params(0.0);
        let one = |_| Ok(c(1.0, 0.0));
        let r = quasiperiod_residual(one, c(0.0, 0.0), 1, &p).unwrap();
        assert!((r - ((PI / 2.0).exp() - 1.0)).abs() < 1e-14);
        let f = |z| basis_psi(2, z, &p);
        assert_eq!(quasiperiod_residual(f, c(0.4, -0.2), 0, &p).unwrap(), 0.0);
    }

    #[test]
    fn periodic_part_examples() {
        let p = pi_params(0.3);
        let z = c(0.3, 0.5);
        let g = periodic_part(|z| basis_e(2, z, &p), z, &p).unwrap();
        assert!((g - (2.0 * I * PI * 2.0 * z).exp()).norm() < 1e-13);
        let psi2 = |z| basis_psi(2, z, &p);
        let g0 = periodic_part(psi2, z, &p).unwrap();
        let g1 = periodic_part(psi2, z + 1.0, &p).unwrap();
        assert!((g1 - g0).norm() < 1e-11);
        let back = (0.5 * PI * z * z + 2.0 * I * PI * 0.3 * z).exp() * g0;
        let direct = psi2(z).unwrap();
        assert!((back - direct).norm() <= 1e-14 * direct.norm().max(1.0));
    }

    #[test]
    fn kernel_paths_agree() {
        let p = pi_params(0.3);
        let b = TruncationBudget::default();
        let (z, w) = (c(0.1, 0.2), c(0.3, -0.1));
        let theta = reproducing_kernel(z, w, &p, &b).unwrap();
        let sum = reproducing_kernel_sum(z, w, &p, &b).unwrap();
        assert!((theta - sum).norm() <= 1e-10 * theta.norm());
    }

    #[test]
    fn kernel_is_hermitian() {
        let p = pi_params(0.3);
        let b = TruncationBudget::default();
        let pts = [c(0.1, 0.2), c(0.8, -0.4), c(-0.3, 0.9), c(0.5, 0.0), c(0.2, -1.0)];
        for z in pts {
            for w in pts {
                let a = reproducing_kernel(z, w, &p, &b).unwrap();
                let bb = reproducing_kernel(w, z, &p, &b).unwrap();
                assert!((a - bb.conj()).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn bound_at_origin() {
        let p = pi_params(0.0);
        let b = TruncationBudget::default();
        let theta_0_2i: f64 = (-10i64..=10).map(|n| (-2.0 * PI * (n * n) as f64).exp()).sum();
        assert!((theta_0_2i - 1.003_734_885_4).abs() < 1e-10);
        let want = (2f64.sqrt() * theta_0_2i).sqrt();
        assert!((pointwise_bound(c(0.0, 0.0), &p, &b).unwrap() - want).abs() < 1e-14);
        let z = c(0.4, -0.7);
        let k = reproducing_kernel(z, z, &p, &b).unwrap();
        assert!((pointwise_bound(z, &p, &b).unwrap() - k.re.sqrt()).abs() <= 1e-12 * k.re.sqrt());
    }

    #[test]
    fn membership_decisions() {
        let p = pi_params(0.3);
        let b = TruncationBudget::default();
        let inside = theta_membership(&ThetaArgs::new(0.3, 0.2, c(0.0, 2.0)).unwrap(), &p, &b).unwrap();
        assert!(inside.in_space && inside.norm.is_some());
        let outside = theta_membership(&ThetaArgs::new(0.3, 0.2, c(0.0, 0.5)).unwrap(), &p, &b).unwrap();
        assert_eq!(outside, Membership { in_space: false, norm: None });
        let boundary = theta_membership(&ThetaArgs::new(0.3, 0.2, c(0.0, 1.0)).unwrap(), &p, &b).unwrap();
        assert!(!boundary.in_space);
    }

    #[test]
    fn divergence_certificates() {
        let p = pi_params(0.3);
        for im in [0.5, 1.0] {
            let cert = certify_divergence(&ThetaArgs::new(0.3, 0.0, c(0.0, im)).unwrap(), &p);
            assert!(cert.certified, "Im tau = {im}: {cert:?}");
        }
        let cert = certify_divergence(&ThetaArgs::new(0.3, 0.0, c(0.0, 2.0)).unwrap(), &p);
        assert!(!cert.certified);
    }

    #[test]
    fn json_schema_round_trip() {
        let e = FockElement::from_e_coeffs(pi_params(0.3), [(-2, c(0.5, -1.0)), (3, c(0.0, 2.5))]);
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.starts_with("{\"nu\":"));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["coeffs"][0]["n"], -2);
        assert_eq!(v["coeffs"][1]["im"], 2.5);
        let back: FockElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(serde_json::from_str::<FockElement>(r#"{"nu": -1, "alpha": 0, "coeffs": []}"#).is_err());
        let dup = r#"{"nu": 1, "alpha": 0, "coeffs": [{"n": 1, "re": 1, "im": 0}, {"n": 1, "re": 2, "im": 0}]}"#;
        assert!(serde_json::from_str::<FockElement>(dup).is_err());
    }
}
