//! Phase-space engine: exact first moments and covariance matrix of the
//! evolved Gaussian state. The closed forms are hard-coded as the normative
//! implementation; the symplectic factor decomposition exists only as an
//! internal consistency path.

use nalgebra::{Matrix2, Vector2};
use std::f64::consts::SQRT_2;

use crate::params::ModelParams;

/// First moments X = (⟨q⟩, ⟨p⟩) and covariance σ of a single-mode Gaussian
/// state, ħ = 1, vacuum variance 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl GaussianState {
    /// det σ; equals 1/4 for every pure state.
    pub fn purity_det(&self) -> f64 {
        self.cov.determinant()
    }
}

/// Closed-form moments of the evolved probe:
/// ⟨q⟩ = √2 α e^{λ₂}(e^{λ₁}cosθ cosφ − e^{−λ₁}sinθ sinφ),
/// ⟨p⟩ = −√2 α e^{−λ₂}(e^{−λ₁}sinθ cosφ + e^{λ₁}cosθ sinφ),
/// Δq² = (e^{2λ₂}/2)(e^{2λ₁}cos²φ + e^{−2λ₁}sin²φ),
/// Δp² = (e^{−2λ₂}/2)(e^{−2λ₁}cos²φ + e^{2λ₁}sin²φ),
/// Δqp = −(1/2) sin2φ sinh2λ₁.
pub fn evolve_moments(p: &ModelParams) -> GaussianState {
    let (l1, l2, a, th, ph) = (p.lambda1, p.lambda2, p.alpha, p.theta, p.phi);
    let (c, s) = (ph.cos(), ph.sin());
    let mq = SQRT_2 * a * l2.exp() * (l1.exp() * th.cos() * c - (-l1).exp() * th.sin() * s);
    let mp = -SQRT_2 * a * (-l2).exp() * ((-l1).exp() * th.sin() * c + l1.exp() * th.cos() * s);
    let dq2 = (2.0 * l2).exp() / 2.0 * ((2.0 * l1).exp() * c * c + (-2.0 * l1).exp() * s * s);
    let dp2 = (-2.0 * l2).exp() / 2.0 * ((-2.0 * l1).exp() * c * c + (2.0 * l1).exp() * s * s);
    let dqp = -0.5 * (2.0 * ph).sin() * (2.0 * l1).sinh();
    GaussianState {
        mean: Vector2::new(mq, mp),
        cov: Matrix2::new(dq2, dqp, dqp, dp2),
    }
}

/// The three symplectic factors S(λ₂), R(φ), S(λ₁) whose composite
/// M = S(λ₂)·R(φ)·S(λ₁) maps the coherent input moments to
/// [`evolve_moments`]: X_out = M X_in, σ_out = M σ_in Mᵀ.
/// S(λ) = diag(e^λ, e^{−λ}); R(φ) rotates by −φ.
pub fn symplectic_factors(p: &ModelParams) -> (Matrix2<f64>, Matrix2<f64>, Matrix2<f64>) {
    let sq = |l: f64| Matrix2::new(l.exp(), 0.0, 0.0, (-l).exp());
    let (c, s) = (p.phi.cos(), p.phi.sin());
    let rot = Matrix2::new(c, s, -s, c);
    (sq(p.lambda2), rot, sq(p.lambda1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn mp(l1: f64, l2: f64, a: f64, th: f64, ph: f64) -> ModelParams {
        ModelParams::new(l1, l2, a, th, ph).unwrap()
    }

    #[test]
    fn identity_evolution() {
        let g = evolve_moments(&mp(0.0, 0.0, 1.0, 0.0, 0.0));
        assert_abs_diff_eq!(g.mean[0], SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(g.mean[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.cov[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.cov[(1, 1)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.cov[(0, 1)], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_zero_special_case() {
        let (l1, l2) = (0.4, 0.3);
        let g = evolve_moments(&mp(l1, l2, 0.7, 0.2, 0.0));
        assert_abs_diff_eq!(g.cov[(0, 0)], (2.0 * (l1 + l2)).exp() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.cov[(1, 1)], (-2.0 * (l1 + l2)).exp() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.cov[(0, 1)], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_half_pi_special_case() {
        let (l1, l2) = (0.4, 0.3);
        let g = evolve_moments(&mp(l1, l2, 0.7, 0.2, FRAC_PI_2));
        assert_abs_diff_eq!(g.cov[(0, 0)], (2.0 * (l2 - l1)).exp() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.cov[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn purity_everywhere() {
        for l1 in [0.0, 0.5, 1.2] {
            for l2 in [0.0, 0.7] {
                for ph in [0.0, 0.3, 1.1, FRAC_PI_2] {
                    let g = evolve_moments(&mp(l1, l2, 1.3, 0.4, ph));
                    assert_abs_diff_eq!(g.purity_det(), 0.25, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn sum_only_dependence_without_scrambler() {
        let a = evolve_moments(&mp(0.3, 0.5, 1.0, 0.2, 0.0));
        let b = evolve_moments(&mp(0.6, 0.2, 1.0, 0.2, 0.0));
        assert_abs_diff_eq!(a.cov[(0, 0)], b.cov[(0, 0)], epsilon = 1e-14);
        assert_abs_diff_eq!(a.cov[(1, 1)], b.cov[(1, 1)], epsilon = 1e-14);
        // and difference-only at phi = pi/2
        let c = evolve_moments(&mp(0.3, 0.5, 1.0, 0.2, FRAC_PI_2));
        let d = evolve_moments(&mp(0.1, 0.3, 1.0, 0.2, FRAC_PI_2));
        assert_abs_diff_eq!(c.cov[(0, 0)], d.cov[(0, 0)], epsilon = 1e-14);
    }

    #[test]
    fn cross_correlation_maximal_at_quarter_pi() {
        let l1 = 0.8;
        let peak = evolve_moments(&mp(l1, 0.0, 1.0, 0.0, std::f64::consts::FRAC_PI_4));
        for k in 0..=64 {
            let ph = FRAC_PI_2 * k as f64 / 64.0;
            let g = evolve_moments(&mp(l1, 0.0, 1.0, 0.0, ph));
            assert!(g.cov[(0, 1)].abs() <= peak.cov[(0, 1)].abs() + 1e-14);
        }
    }

    #[test]
    fn symplectic_factors_reproduce_moments() {
        let p = mp(0.4, 0.2, 0.9, 0.6, 1.1);
        let (s2, r, s1) = symplectic_factors(&p);
        let m = s2 * r * s1;
        let x_in = Vector2::new(
            SQRT_2 * p.alpha * p.theta.cos(),
            -SQRT_2 * p.alpha * p.theta.sin(),
        );
        let sig_in = Matrix2::identity() * 0.5;
        let g = evolve_moments(&p);
        let x_out = m * x_in;
        let sig_out = m * sig_in * m.transpose();
        assert_abs_diff_eq!(x_out[0], g.mean[0], epsilon = 1e-12);
        assert_abs_diff_eq!(x_out[1], g.mean[1], epsilon = 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(sig_out[(i, j)], g.cov[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn factor_identities() {
        let p = mp(0.0, 0.0, 1.0, 0.0, 0.0);
        let (s2, r, s1) = symplectic_factors(&p);
        assert_abs_diff_eq!((s2 - Matrix2::identity()).abs().max(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((r - Matrix2::identity()).abs().max(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s1 - Matrix2::identity()).abs().max(), 0.0, epsilon = 1e-15);
    }
}
