//! Classical Fisher information of general-dyne detection on the evolved
//! Gaussian state, the scalar bound C_g = Tr[F⁻¹], its optimization over the
//! measurement setting (θ, φ, z), and large-α asymptotics.

use nalgebra::{Matrix2, Vector2};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::gaussian::evolve_moments;
use crate::optim::NelderMead;
use crate::params::ModelParams;

/// General-dyne POVM seed: a pure Gaussian state with covariance
/// σ_m = (1/2) diag(z, 1/z). z = 1 is heterodyne; z → 0 or ∞ approach the
/// quadrature homodyne limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralDyneSetting {
    pub z: f64,
}

impl GeneralDyneSetting {
    pub fn new(z: f64) -> Result<Self> {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::Domain(format!("z must be finite and > 0, got {z}")));
        }
        Ok(Self { z })
    }

    pub fn seed_covariance(&self) -> Matrix2<f64> {
        Matrix2::new(self.z / 2.0, 0.0, 0.0, 1.0 / (2.0 * self.z))
    }
}

/// Classical Fisher information matrix of the Gaussian outcome statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CFIMatrix {
    pub f: Matrix2<f64>,
}

/// Covariance of the measured statistics, Σ = σ + σ_m.
pub fn outcome_covariance(p: &ModelParams, s: &GeneralDyneSetting) -> Matrix2<f64> {
    evolve_moments(p).cov + s.seed_covariance()
}

/// Analytic partial derivatives (∂X/∂λ_j, ∂σ/∂λ_j) of the closed-form
/// moments, j = 1, 2.
fn moment_derivatives(p: &ModelParams) -> ([Vector2<f64>; 2], [Matrix2<f64>; 2]) {
    let (l1, l2, a, th, ph) = (p.lambda1, p.lambda2, p.alpha, p.theta, p.phi);
    let (c, s) = (ph.cos(), ph.sin());
    let g = evolve_moments(p);

    let dmq1 = SQRT_2 * a * l2.exp() * (l1.exp() * th.cos() * c + (-l1).exp() * th.sin() * s);
    let dmp1 = -SQRT_2 * a * (-l2).exp() * (-(-l1).exp() * th.sin() * c + l1.exp() * th.cos() * s);
    let dx1 = Vector2::new(dmq1, dmp1);
    let dx2 = Vector2::new(g.mean[0], -g.mean[1]);

    let ddq2_1 = (2.0 * l2).exp() * ((2.0 * l1).exp() * c * c - (-2.0 * l1).exp() * s * s);
    let ddp2_1 = (-2.0 * l2).exp() * (-(-2.0 * l1).exp() * c * c + (2.0 * l1).exp() * s * s);
    let ddqp_1 = -(2.0 * ph).sin() * (2.0 * l1).cosh();
    let ds1 = Matrix2::new(ddq2_1, ddqp_1, ddqp_1, ddp2_1);
    let ds2 = Matrix2::new(
        2.0 * g.cov[(0, 0)],
        0.0,
        0.0,
        -2.0 * g.cov[(1, 1)],
    );
    ([dx1, dx2], [ds1, ds2])
}

/// F_jk = ∂_jXᵀ Σ⁻¹ ∂_kX + (1/2) Tr[Σ⁻¹ ∂_jΣ Σ⁻¹ ∂_kΣ]. The measurement
/// part of Σ carries no parameter dependence.
pub fn cfi_matrix(p: &ModelParams, s: &GeneralDyneSetting) -> CFIMatrix {
    let sigma = outcome_covariance(p, s);
    let si = sigma.try_inverse().expect("Sigma is positive definite");
    let (dx, ds) = moment_derivatives(p);
    let mut f = Matrix2::zeros();
    for j in 0..2 {
        for k in 0..2 {
            f[(j, k)] = (dx[j].transpose() * si * dx[k])[(0, 0)]
                + 0.5 * (si * ds[j] * si * ds[k]).trace();
        }
    }
    // enforce exact symmetry against rounding
    let f12 = 0.5 * (f[(0, 1)] + f[(1, 0)]);
    f[(0, 1)] = f12;
    f[(1, 0)] = f12;
    CFIMatrix { f }
}

/// Quantum Fisher information of the pure Gaussian output family in the
/// phase-space parameterization:
/// Q_jk = ∂_jXᵀ σ⁻¹ ∂_kX + (1/4) Tr[σ⁻¹ ∂_jσ σ⁻¹ ∂_kσ].
///
/// Every general-dyne CFI is dominated by this matrix (F ⪯ Q) since both
/// describe the same state family. Note that [`crate::bounds::qfim_closed`]
/// evaluates the same physical family in a different convention (the angles
/// map as θ → θ + π/4, φ → −φ, and the squeeze generator carries twice the
/// normalization, scaling the matrix by 4), so the two are not directly
/// comparable entrywise at equal nominal angles.
pub fn gaussian_qfi(p: &ModelParams) -> Matrix2<f64> {
    let sigma = evolve_moments(p).cov;
    let si = sigma.try_inverse().expect("pure-state covariance is invertible");
    let (dx, ds) = moment_derivatives(p);
    let mut q = Matrix2::zeros();
    for j in 0..2 {
        for k in 0..2 {
            q[(j, k)] = (dx[j].transpose() * si * dx[k])[(0, 0)]
                + 0.25 * (si * ds[j] * si * ds[k]).trace();
        }
    }
    let q12 = 0.5 * (q[(0, 1)] + q[(1, 0)]);
    q[(0, 1)] = q12;
    q[(1, 0)] = q12;
    q
}

/// C_g = Tr[F⁻¹].
pub fn c_g(f: &CFIMatrix, sing_tol: f64) -> Result<f64> {
    let det = f.f.determinant();
    let norm = f.f.abs().max();
    if det < sing_tol * norm * norm {
        return Err(Error::Singular);
    }
    Ok(f.f.trace() / det)
}

/// Diagonal CFI at the optimal setting (θ, φ, z) = (0, π/4, e^{2λ₂}):
/// F₁₁ = 1 + tanh²λ₁ + 2α²(1 + tanh λ₁),
/// F₂₂ = 2α² e^{3λ₁}/cosh λ₁ + cosh²(2λ₁)/cosh²λ₁.
pub fn fopt_closed(alpha: f64, lambda1: f64) -> Matrix2<f64> {
    let a2 = alpha * alpha;
    let t = lambda1.tanh();
    let ch = lambda1.cosh();
    let f11 = 1.0 + t * t + 2.0 * a2 * (1.0 + t);
    let f22 = 2.0 * a2 * (3.0 * lambda1).exp() / ch + (2.0 * lambda1).cosh().powi(2) / (ch * ch);
    Matrix2::new(f11, 0.0, 0.0, f22)
}

/// Minimizes C_g over the measurement setting (θ, φ, z): coarse grid over
/// θ ∈ [0, π), φ ∈ [0, π/2], log z ∈ [−6, 6], then simplex refinement.
/// Returns (θ*, φ*, z*, C_g). θ* is reported in (−π/2, π/2] (F is
/// π-periodic in θ).
pub fn optimize_setting(
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    sing_tol: f64,
) -> Result<(f64, f64, f64, f64)> {
    let obj = |x: &[f64]| -> f64 {
        let (th, ph, logz) = (x[0], x[1], x[2].clamp(-6.0, 6.0));
        let p = match ModelParams::new(lambda1, lambda2, alpha, th, ph) {
            Ok(p) => p,
            Err(_) => return f64::INFINITY,
        };
        let s = GeneralDyneSetting { z: logz.exp() };
        match c_g(&cfi_matrix(&p, &s), sing_tol) {
            Ok(v) => v,
            Err(_) => f64::INFINITY,
        }
    };

    let mut best = ([0.0f64; 3], f64::INFINITY);
    for i in 0..8 {
        for j in 0..=8 {
            for k in 0..=12 {
                let x = [
                    PI * i as f64 / 8.0,
                    FRAC_PI_2 * j as f64 / 8.0,
                    -6.0 + k as f64,
                ];
                let v = obj(&x);
                if v < best.1 {
                    best = (x, v);
                }
            }
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Optimization(
            "no nonsingular setting found on the coarse grid".into(),
        ));
    }

    let nm = NelderMead::default();
    let (x, fx) = nm.minimize(obj, &best.0, &[0.1, 0.05, 0.2])?;
    let mut theta = x[0].rem_euclid(PI);
    if theta > FRAC_PI_2 {
        theta -= PI;
    }
    let mut phi = x[1].rem_euclid(PI);
    if phi > FRAC_PI_2 {
        phi = PI - phi;
    }
    Ok((theta, phi, x[2].clamp(-6.0, 6.0).exp(), fx))
}

/// Large-α expansion of the optimized C_g: (1 + e^{−2λ₁})²/(4α²).
///
/// Derivation from the optimal-setting closed forms for α ≫ 1:
/// 1/F₁₁ → 1/(2α²(1+tanh λ₁)) = cosh λ₁ e^{−λ₁}/(2α²) and
/// 1/F₂₂ → cosh λ₁ e^{−3λ₁}/(2α²), whose sum factorizes as
/// (1+e^{−2λ₁})²/(4α²). The λ₁ = 0 value 1/α² and the λ₁ → ∞ limit
/// 1/(4α²) are unchanged with respect to quoting the exponent as 4λ₁.
pub fn cg_asymptotic(alpha: f64, lambda1: f64) -> f64 {
    let e = (-2.0 * lambda1).exp();
    (1.0 + e) * (1.0 + e) / (4.0 * alpha * alpha)
}

/// Asymptotic (α ≫ 1) bracketing band for the ratio C_H/C_g:
/// (1/(4(1+e^{−4λ₁})), 3/(8(1+e^{−4λ₁}))).
pub fn holevo_ratio_band(lambda1: f64) -> (f64, f64) {
    let d = 1.0 + (-4.0 * lambda1).exp();
    (1.0 / (4.0 * d), 3.0 / (8.0 * d))
}
