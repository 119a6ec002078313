//! Quasi-periodic theta function spaces on the cylinder `C/Z`.
//!
//! For a Gaussian weight `nu > 0` and a character `m -> exp(2 i pi alpha m)`
//! this crate works with three Hilbert spaces and the maps between them:
//!
//! * [`fock`]: the holomorphic space of entire functions with
//!   `f(z + m) = exp(2 i pi alpha m) exp(nu (z + m/2) m) f(z)`, square integrable
//!   on the strip `[0, 1] x R` against `exp(-nu |z|^2)`. It has the orthonormal
//!   basis `psi_n`, a reproducing kernel expressed through a Riemann theta
//!   function, and a pointwise growth bound.
//! * [`bargmann`]: the line space of `sqrt(2) Z`-quasi-periodic functions,
//!   its basis `phi_n`, and the Bargmann transform onto the holomorphic space
//!   together with both of its kernels (Jacobi theta form and bilateral
//!   generating form).
//! * [`landau`]: the full `L^2` space spanned by the Hermite-weighted functions
//!   `psi_{m,n}`, the Landau operator, ladder operators and level projections.
//!
//! Every closed-form identity has a second, independent evaluation route:
//! the [`quadrature`] module integrates over the strip and the period line,
//! and the [`theta`] engines can be compared against direct lattice sums.

pub mod bargmann;
pub mod cli;
pub mod error;
pub mod fock;
pub mod landau;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scalar::TruncationBudget;

/// Parameters `(nu, alpha)` fixing the Gaussian weight and the character.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpaceParams {
    nu: f64,
    alpha: f64,
}

impl SpaceParams {
    pub fn new(nu: f64, alpha: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::Domain(format!("nu must be finite and > 0, got {nu}")));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { nu, alpha })
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Imaginary part of the strip point where `|psi_n|^2 exp(-nu |z|^2)` peaks.
    #[inline]
    pub fn gaussian_center(&self, n: f64) -> f64 {
        -std::f64::consts::PI * (self.alpha + n) / self.nu
    }
}
