//! Model inputs and numerical configuration shared by every engine.
//!
//! Conventions: hbar = 1, quadratures q = (a + a†)/√2 and p = (a − a†)/(i√2),
//! so the vacuum quadrature variance is 1/2. The coherent amplitude `alpha`
//! is real and nonnegative; the probe phase is carried by `theta`. All
//! reported bounds are per probe copy; rescale by 1/N externally for N
//! repetitions.

use crate::error::{Error, Result};

/// The five real model inputs: two squeezing parameters, the coherent probe
/// amplitude and phase, and the scrambler phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// First squeezing parameter (dimensionless).
    pub lambda1: f64,
    /// Second squeezing parameter (dimensionless).
    pub lambda2: f64,
    /// Coherent amplitude, real and >= 0.
    pub alpha: f64,
    /// Probe phase (radians).
    pub theta: f64,
    /// Scrambler phase (radians).
    pub phi: f64,
}

impl ModelParams {
    pub fn new(lambda1: f64, lambda2: f64, alpha: f64, theta: f64, phi: f64) -> Result<Self> {
        for (name, v) in [
            ("lambda1", lambda1),
            ("lambda2", lambda2),
            ("alpha", alpha),
            ("theta", theta),
            ("phi", phi),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        if alpha < 0.0 {
            return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
        }
        Ok(Self {
            lambda1,
            lambda2,
            alpha,
            theta,
            phi,
        })
    }
}

/// Numerical configuration for the truncated Fock-space oracle and the
/// singularity thresholds used by the closed-form bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericsConfig {
    /// Fock truncation dimension (number of number-state amplitudes).
    pub fock_dim: usize,
    /// Maximum allowed tail probability mass in the top D/8 amplitudes.
    pub tail_tol: f64,
    /// Relative determinant threshold below which a matrix is singular.
    pub sing_tol: f64,
    /// Finite-difference step used by validation paths only.
    pub fd_step: f64,
}

impl NumericsConfig {
    pub fn new(fock_dim: usize, tail_tol: f64, sing_tol: f64, fd_step: f64) -> Result<Self> {
        if fock_dim < 4 {
            return Err(Error::Domain(format!("fock_dim must be >= 4, got {fock_dim}")));
        }
        if tail_tol <= 0.0 || sing_tol <= 0.0 || fd_step <= 0.0 {
            return Err(Error::Domain(
                "tail_tol, sing_tol and fd_step must be strictly positive".into(),
            ));
        }
        Ok(Self {
            fock_dim,
            tail_tol,
            sing_tol,
            fd_step,
        })
    }
}

/// Documented defaults: fock_dim=256, tail_tol=1e-10, sing_tol=1e-12,
/// fd_step=1e-5.
pub fn default_numerics() -> NumericsConfig {
    NumericsConfig {
        fock_dim: 256,
        tail_tol: 1e-10,
        sing_tol: 1e-12,
        fd_step: 1e-5,
    }
}

impl Default for NumericsConfig {
    fn default() -> Self {
        default_numerics()
    }
}
