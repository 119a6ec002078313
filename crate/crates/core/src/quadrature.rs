//! Quadrature oracles for the strip `S = [0, 1] x R` and the period `[0, sqrt 2]`.
//!
//! The strip rule is a tensor product: the periodic trapezoid rule in `x`
//! and Gauss-Hermite in `y`. For `f, g` in the quasi-periodic spaces the
//! integrand `f conj(g) exp(-nu |z|^2)` is 1-periodic in `x` (so the
//! trapezoid rule is spectrally accurate) and carries the Gaussian factor
//! `exp(-2 nu y^2)`, which sets the Gauss-Hermite scale.

use std::collections::HashMap;
use std::f64::consts::{PI, SQRT_2};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::SpaceParams;

/// Gauss-Hermite nodes with weights pre-multiplied by `exp(u^2)`, so that
/// `int_R g(u) du ~= sum_k weight_k g(node_k)` for Gaussian-decaying `g`.
#[derive(Debug)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    fn compute(order: usize) -> Self {
        let n = order;
        // nodes: eigenvalues of the symmetric Jacobi matrix of the Hermite weight
        let mut diag = vec![0.0; n];
        let mut off: Vec<f64> = (1..=n).map(|k| if k < n { (k as f64 / 2.0).sqrt() } else { 0.0 }).collect();
        tridiagonal_eigenvalues(&mut diag, &mut off);
        diag.sort_by(|a, b| b.total_cmp(a));

        let pim4 = PI.powf(-0.25);
        let mut weights = vec![0.0; n];
        for (node, weight) in diag.iter_mut().zip(weights.iter_mut()) {
            let mut z = *node;
            let mut deriv = 0.0;
            for _ in 0..3 {
                // normalised Hermite functions: the Gaussian factor is built in,
                // so values stay O(1) at the outermost nodes
                let mut p1 = pim4 * (-0.5 * z * z).exp();
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                deriv = (2.0 * n as f64).sqrt() * p2;
                let step = p1 / deriv;
                if !step.is_finite() {
                    break;
                }
                z -= step;
            }
            *node = z;
            *weight = 2.0 / (deriv * deriv);
        }
        Self { nodes: diag, weights }
    }

    /// Cached rule of the given order.
    pub fn of_order(order: usize) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(order).or_insert_with(|| Arc::new(Self::compute(order))).clone()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `int g(u) du` (the `exp(-u^2)` factor already divided out).
    pub fn scaled_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n-1]` (implicit QL with Wilkinson shifts). On return
/// `d` holds the eigenvalues, unsorted.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l || iterations >= 60 {
                break;
            }
            iterations += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Tensor rule on the strip: `x_points` trapezoid nodes on `[0, 1)` and a
/// Gauss-Hermite rule of order `y_order` centred at `y_shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripScheme {
    x_points: usize,
    y_order: usize,
    y_shift: f64,
}

impl Default for StripScheme {
    fn default() -> Self {
        Self { x_points: 64, y_order: 64, y_shift: 0.0 }
    }
}

impl StripScheme {
    pub const MAX_Y_ORDER: usize = 1024;

    pub fn new(x_points: usize, y_order: usize, y_shift: f64) -> Result<Self> {
        if x_points < 4 {
            return Err(Error::Domain(format!("strip scheme needs x_points >= 4, got {x_points}")));
        }
        if !(8..=Self::MAX_Y_ORDER).contains(&y_order) {
            return Err(Error::Domain(format!("strip scheme needs 8 <= y_order <= 1024, got {y_order}")));
        }
        if !y_shift.is_finite() {
            return Err(Error::Domain("y_shift must be finite".into()));
        }
        Ok(Self { x_points, y_order, y_shift })
    }

    /// Default resolution, centred on the Gaussian of the index `n_bar`.
    pub fn centered(params: &SpaceParams, n_bar: f64) -> Self {
        Self { y_shift: params.gaussian_center(n_bar), ..Self::default() }
    }

    /// Centred between the Gaussians of indices `lo..=hi`, with the order
    /// raised until the rule reaches both ends.
    pub fn spanning(params: &SpaceParams, lo: f64, hi: f64) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let y_shift = 0.5 * (params.gaussian_center(lo) + params.gaussian_center(hi));
        // half-width of the span in the scaled variable u = sqrt(2 nu) (y - shift)
        let reach = (2.0 * params.nu()).sqrt() * PI * (hi - lo) / (2.0 * params.nu());
        let needed = ((reach + 5.0).powi(2) / 1.6).ceil() as usize;
        let y_order = needed.next_multiple_of(8).clamp(64, Self::MAX_Y_ORDER);
        Self { x_points: 64, y_order, y_shift }
    }

    /// Doubles both resolutions (the order is capped at [`Self::MAX_Y_ORDER`]).
    pub fn refined(&self) -> Self {
        Self {
            x_points: self.x_points * 2,
            y_order: (self.y_order * 2).min(Self::MAX_Y_ORDER),
            y_shift: self.y_shift,
        }
    }

    pub fn with_x_points(self, x_points: usize) -> Result<Self> {
        Self::new(x_points, self.y_order, self.y_shift)
    }

    pub fn with_y_order(self, y_order: usize) -> Result<Self> {
        Self::new(self.x_points, y_order, self.y_shift)
    }

    pub fn x_points(&self) -> usize {
        self.x_points
    }

    pub fn y_order(&self) -> usize {
        self.y_order
    }

    pub fn y_shift(&self) -> f64 {
        self.y_shift
    }

    /// Nodes `z` and weights for `int_S h dm` when `h` decays like `exp(-2 nu y^2)`.
    pub fn nodes(&self, nu: f64) -> Vec<(Complex64, f64)> {
        let rule = GaussHermite::of_order(self.y_order);
        let scale = (2.0 * nu).sqrt().recip();
        let dx = (self.x_points as f64).recip();
        let mut out = Vec::with_capacity(self.x_points * rule.len());
        for j in 0..self.x_points {
            let x = j as f64 * dx;
            for (u, w) in rule.nodes().iter().zip(rule.scaled_weights()) {
                out.push((Complex64::new(x, self.y_shift + u * scale), w * scale * dx));
            }
        }
        out
    }
}

/// Periodic trapezoid rule with `q_points` nodes on `[0, sqrt 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineScheme {
    q_points: usize,
}

impl Default for LineScheme {
    fn default() -> Self {
        Self { q_points: 64 }
    }
}

impl LineScheme {
    pub fn new(q_points: usize) -> Result<Self> {
        if q_points < 4 {
            return Err(Error::Domain(format!("line scheme needs q_points >= 4, got {q_points}")));
        }
        Ok(Self { q_points })
    }

    pub fn q_points(&self) -> usize {
        self.q_points
    }

    pub fn refined(&self) -> Self {
        Self { q_points: self.q_points * 2 }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> {
        let h = SQRT_2 / self.q_points as f64;
        (0..self.q_points).map(move |j| (j as f64 * h, h))
    }
}

fn node_error(z: Complex64, value: Complex64) -> Error {
    Error::Evaluation { node: format!("({}, {})", z.re, z.im), reason: format!("non-finite value {value}") }
}

/// `int_S h(z) dm(z)` for an integrand that already includes its weight.
pub fn strip_integral<H>(h: H, nu: f64, scheme: &StripScheme) -> Result<Complex64>
where
    H: Fn(Complex64) -> Result<Complex64>,
{
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Domain(format!("nu must be > 0, got {nu}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (z, w) in scheme.nodes(nu) {
        let value = h(z)?;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(node_error(z, value));
        }
        acc += value * w;
    }
    Ok(acc)
}

/// `<f, g>_nu = int_S f(z) conj(g(z)) exp(-nu |z|^2) dm(z)`.
pub fn strip_inner_product<F, G>(f: F, g: G, nu: f64, scheme: &StripScheme) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
    G: Fn(Complex64) -> Result<Complex64>,
{
    strip_integral(
        |z| {
            let fz = f(z)?;
            let gz = g(z)?;
            if !(fz.re.is_finite() && fz.im.is_finite()) {
                return Err(node_error(z, fz));
            }
            if !(gz.re.is_finite() && gz.im.is_finite()) {
                return Err(node_error(z, gz));
            }
            Ok(fz * gz.conj() * (-nu * z.norm_sqr()).exp())
        },
        nu,
        scheme,
    )
}

/// `int_0^{sqrt 2} h(q) dq` by the periodic trapezoid rule.
pub fn line_integral<H>(h: H, scheme: &LineScheme) -> Result<Complex64>
where
    H: Fn(f64) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (q, w) in scheme.nodes() {
        let value = h(q)?;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Evaluation { node: format!("q = {q}"), reason: format!("non-finite value {value}") });
        }
        acc += value * w;
    }
    Ok(acc)
}

/// `int_0^{sqrt 2} phi1(q) conj(phi2(q)) dq`.
pub fn line_inner_product<F, G>(phi1: F, phi2: G, scheme: &LineScheme) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
    G: Fn(f64) -> Result<Complex64>,
{
    line_integral(|q| Ok(phi1(q)? * phi2(q)?.conj()), scheme)
}
