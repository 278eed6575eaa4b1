//! Closed-form information matrices, scalar quantifiers and bounds, and
//! stepwise estimation bounds with the optimal resource split.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// QFI matrix Q and Uhlmann curvature U of the model, per probe copy.
/// Both are independent of lambda2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoMatrices {
    pub q: Matrix2<f64>,
    pub u: Matrix2<f64>,
}

/// Scalar quantifiers derived from (Q, U). Fields that require inverting Q
/// are `None` in the sloppy (singular) regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarBounds {
    /// Sloppiness 1/det Q.
    pub s: Option<f64>,
    /// Incompatibility 1/det U, with det U = U₁₂².
    pub c: Option<f64>,
    /// Quantumness √(det U / det Q) ∈ [0, 1].
    pub r: Option<f64>,
    /// Identity-weight quantumness √(2 det U)/Tr Q ≤ R.
    pub t_i: f64,
    /// Scalar bound Tr Q / det Q.
    pub c_q: Option<f64>,
    /// C_Q (1 + T_I).
    pub bracket_t: Option<f64>,
    /// C_Q (1 + R).
    pub bracket_r: Option<f64>,
    /// True when det Q fell below the singularity threshold.
    pub singular: bool,
}

/// Optimal probe-split fractions and minimized stepwise bounds for the two
/// orderings (estimate parameter 1 first, or parameter 2 first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepwiseBounds {
    pub gamma_star_1: f64,
    pub gamma_star_2: f64,
    pub c_sep_min_1: f64,
    pub c_sep_min_2: f64,
}

/// Closed-form QFI matrix.
pub fn qfim_closed(p: &ModelParams) -> Matrix2<f64> {
    let (l1, a, th, ph) = (p.lambda1, p.alpha, p.theta, p.phi);
    let a2 = a * a;
    let q11 = 16.0 * a2 + 8.0;
    let q12 = 16.0 * a2 * (2.0 * th).cos() * (2.0 * l1).sinh() * (2.0 * ph).sin()
        + 8.0 * (2.0 * a2 + 1.0) * (2.0 * ph).cos();
    let q22 = 2.0
        * (8.0 * a2 * (2.0 * th).sin() * (4.0 * l1).sinh() * (2.0 * ph).sin().powi(2)
            + 8.0 * a2 * (2.0 * th).cos() * (2.0 * l1).sinh() * (4.0 * ph).sin()
            - 2.0 * (4.0 * a2 + 1.0) * (2.0 * l1).sinh().powi(2) * (4.0 * ph).cos()
            + (4.0 * a2 + 1.0) * (4.0 * l1).cosh()
            + 4.0 * a2
            + 3.0);
    Matrix2::new(q11, q12, q12, q22)
}

/// Closed-form Uhlmann curvature; the diagonal vanishes identically.
pub fn uhlmann_closed(p: &ModelParams) -> Matrix2<f64> {
    let (l1, a, th, ph) = (p.lambda1, p.alpha, p.theta, p.phi);
    let a2 = a * a;
    let u12 = 8.0
        * (2.0 * ph).sin()
        * (2.0 * a2 * (2.0 * th).sin() * (2.0 * l1).sinh() + (2.0 * a2 + 1.0) * (2.0 * l1).cosh());
    Matrix2::new(0.0, u12, -u12, 0.0)
}

/// Both closed-form matrices at once.
pub fn info_matrices_closed(p: &ModelParams) -> InfoMatrices {
    InfoMatrices {
        q: qfim_closed(p),
        u: uhlmann_closed(p),
    }
}

/// Scalar quantifiers from (Q, U). Q counts as singular when
/// det Q < sing_tol · ‖Q‖² with ‖Q‖ the max-abs entry; the sloppy regime is
/// reported in-band via `None` fields, not as an error.
pub fn scalar_bounds(q: &Matrix2<f64>, u: &Matrix2<f64>, sing_tol: f64) -> ScalarBounds {
    let det_q = q.determinant();
    let u12 = u[(0, 1)];
    let det_u = u12 * u12;
    let tr_q = q.trace();
    let norm = q.abs().max();
    let t_i = (2.0 * det_u).sqrt() / tr_q;
    if det_q < sing_tol * norm * norm {
        return ScalarBounds {
            s: None,
            c: if det_u > 0.0 { Some(1.0 / det_u) } else { None },
            r: None,
            t_i,
            c_q: None,
            bracket_t: None,
            bracket_r: None,
            singular: true,
        };
    }
    let s = 1.0 / det_q;
    let c = if det_u > 0.0 { Some(1.0 / det_u) } else { None };
    let r = (det_u / det_q).sqrt();
    let c_q = tr_q / det_q;
    ScalarBounds {
        s: Some(s),
        c,
        r: Some(r),
        t_i,
        c_q: Some(c_q),
        bracket_t: Some(c_q * (1.0 + t_i)),
        bracket_r: Some(c_q * (1.0 + r)),
        singular: false,
    }
}

/// The optimized-setting closed form
/// (1/8)[1/(1+2α²) + 2/(1 + (1+4α²)cosh4λ₁ + 4α² sinh4λ₁)].
/// Algebraically this equals Tr Q/det Q at φ = θ = π/4, which is what the
/// name reflects.
pub fn cq_optimal_closed(alpha: f64, lambda1: f64) -> f64 {
    let a2 = alpha * alpha;
    0.125
        * (1.0 / (1.0 + 2.0 * a2)
            + 2.0
                / (1.0
                    + (1.0 + 4.0 * a2) * (4.0 * lambda1).cosh()
                    + 4.0 * a2 * (4.0 * lambda1).sinh()))
}

/// Large-α expansion of the quantumness:
/// R ≈ 1 − (2/α²) e^{−4λ₁} sinh²λ₁ cosh²λ₁; accurate to O(1/α³).
pub fn asymptotic_r(alpha: f64, lambda1: f64) -> f64 {
    1.0 - 2.0 / (alpha * alpha)
        * (-4.0 * lambda1).exp()
        * lambda1.sinh().powi(2)
        * lambda1.cosh().powi(2)
}

/// Large-α limit of T_I: 1/(√2 cosh 2λ₁).
pub fn asymptotic_t(lambda1: f64) -> f64 {
    1.0 / (2f64.sqrt() * (2.0 * lambda1).cosh())
}

/// Stepwise bounds at split fraction γ:
/// C_sep1 = S Q₂₂/γ + 1/(Q₂₂(1−γ)), C_sep2 = S Q₁₁/γ + 1/(Q₁₁(1−γ)).
pub fn stepwise_bounds(q: &Matrix2<f64>, s: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(0.0 < gamma && gamma < 1.0) {
        return Err(Error::Domain(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    let (q11, q22) = (q[(0, 0)], q[(1, 1)]);
    let c1 = s * q22 / gamma + 1.0 / (q22 * (1.0 - gamma));
    let c2 = s * q11 / gamma + 1.0 / (q11 * (1.0 - gamma));
    Ok((c1, c2))
}

/// Minimizing split fractions γ_k = Q_kk √S/(1 + Q_kk √S) and the minimized
/// bounds C_sep_min = 1/Q_kk + Q_kk S + 2√S. The returned γ*₁ minimizes
/// C_sep1 (which estimates parameter 2 first, so it involves Q₂₂) and
/// vice versa.
pub fn stepwise_optimal(q: &Matrix2<f64>, s: f64) -> StepwiseBounds {
    let rs = s.sqrt();
    let (q11, q22) = (q[(0, 0)], q[(1, 1)]);
    let gamma = |qkk: f64| qkk * rs / (1.0 + qkk * rs);
    let cmin = |qkk: f64| 1.0 / qkk + qkk * s + 2.0 * rs;
    let out = StepwiseBounds {
        gamma_star_1: gamma(q22),
        gamma_star_2: gamma(q11),
        c_sep_min_1: cmin(q22),
        c_sep_min_2: cmin(q11),
    };
    debug_assert!({
        let mut ok = true;
        for k in 1..200 {
            let g = k as f64 / 200.0;
            let (c1, c2) = stepwise_bounds(q, s, g).unwrap();
            ok &= out.c_sep_min_1 <= c1 + 1e-12 && out.c_sep_min_2 <= c2 + 1e-12;
        }
        ok
    });
    out
}

/// Weighted scalar bound Tr[W Q⁻¹] for a positive-definite weight W.
pub fn weighted_cq(q: &Matrix2<f64>, w: &Matrix2<f64>, sing_tol: f64) -> Result<f64> {
    let det_q = q.determinant();
    let norm = q.abs().max();
    if det_q < sing_tol * norm * norm {
        return Err(Error::Singular);
    }
    let q_inv = Matrix2::new(q[(1, 1)], -q[(0, 1)], -q[(1, 0)], q[(0, 0)]) / det_q;
    Ok((w * q_inv).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn mp(l1: f64, a: f64, th: f64, ph: f64) -> ModelParams {
        ModelParams::new(l1, 0.0, a, th, ph).unwrap()
    }

    #[test]
    fn qfim_q11() {
        assert_abs_diff_eq!(qfim_closed(&mp(0.3, 1.0, 0.7, 0.4))[(0, 0)], 24.0);
        assert_abs_diff_eq!(qfim_closed(&mp(0.3, 0.0, 0.7, 0.4))[(0, 0)], 8.0);
        assert_abs_diff_eq!(qfim_closed(&mp(0.3, 2.0, 0.7, 0.4))[(0, 0)], 72.0);
        assert_abs_diff_eq!(qfim_closed(&mp(0.3, 2f64.sqrt(), 0.7, 0.4))[(0, 0)], 40.0, epsilon = 1e-12);
    }

    #[test]
    fn qfim_reference_point() {
        let q = qfim_closed(&mp(0.0, 0.0, FRAC_PI_4, FRAC_PI_4));
        assert_abs_diff_eq!(q[(0, 0)], 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[(1, 1)], 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn qfim_rank_one_without_scrambler() {
        for l1 in [0.0, 0.5, 1.3] {
            for a in [0.0, 1.0] {
                let q = qfim_closed(&mp(l1, a, 0.4, 0.0));
                let v = 8.0 * (2.0 * a * a + 1.0);
                for e in q.iter() {
                    assert_abs_diff_eq!(*e, v, epsilon = 1e-9 * v);
                }
                assert!(q.determinant().abs() < 1e-9 * v * v);
            }
        }
    }

    #[test]
    fn uhlmann_values() {
        let u = uhlmann_closed(&mp(0.0, 0.0, 0.3, FRAC_PI_4));
        assert_abs_diff_eq!(u[(0, 1)], 8.0, epsilon = 1e-12);
        assert_eq!(u[(0, 0)], 0.0);
        assert_eq!(u[(1, 1)], 0.0);
        assert_abs_diff_eq!(
            uhlmann_closed(&mp(0.7, 1.0, 0.3, FRAC_PI_2))[(0, 1)],
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn scalar_reference_point() {
        let p = mp(0.0, 0.0, FRAC_PI_4, FRAC_PI_4);
        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
        assert!(!sb.singular);
        assert_abs_diff_eq!(sb.c_q.unwrap(), 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(sb.r.unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sb.t_i, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_probe_quantumness_is_one() {
        for l1 in [0.0, 0.4, 1.0, 1.5] {
            let p = mp(l1, 0.0, FRAC_PI_4, FRAC_PI_4);
            let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
            assert_abs_diff_eq!(sb.r.unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn singular_regime_reported_in_band() {
        let p = mp(0.5, 1.0, 0.4, 0.0);
        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
        assert!(sb.singular);
        assert!(sb.s.is_none() && sb.r.is_none() && sb.c_q.is_none());
    }

    #[test]
    fn cq_closed_form_identity() {
        for a in [0.0, 0.5, 1.0, 2.0] {
            for l1 in [0.0, 0.3, 0.8, 1.5] {
                let p = mp(l1, a, FRAC_PI_4, FRAC_PI_4);
                let q = qfim_closed(&p);
                let direct = q.trace() / q.determinant();
                assert_abs_diff_eq!(cq_optimal_closed(a, l1), direct, epsilon = 1e-12 * direct);
            }
        }
        assert_abs_diff_eq!(cq_optimal_closed(0.0, 0.0), 0.25, epsilon = 1e-15);
        // lambda1 -> infinity limit at alpha = 0
        assert_abs_diff_eq!(cq_optimal_closed(0.0, 10.0), 0.125, epsilon = 1e-12);
    }

    #[test]
    fn cq_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..=30 {
            let v = cq_optimal_closed(1.0, k as f64 * 0.05);
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for k in 0..=30 {
            let v = cq_optimal_closed(k as f64 * 0.1, 0.5);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn asymptotics() {
        // R expansion against the exact closed forms at alpha = 10
        let (a, l1) = (10.0, 1.0);
        let p = mp(l1, a, FRAC_PI_4, FRAC_PI_4);
        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
        assert!((sb.r.unwrap() - asymptotic_r(a, l1)).abs() < 1e-3);
        assert_abs_diff_eq!(asymptotic_r(a, 0.0), 1.0, epsilon = 1e-15);
        // large-lambda1 limit of the R expansion: 1 - 1/(8 alpha^2)
        assert_abs_diff_eq!(asymptotic_r(a, 8.0), 1.0 - 1.0 / (8.0 * a * a), epsilon = 1e-8);

        assert_abs_diff_eq!(asymptotic_t(0.0), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(asymptotic_t(1.0), 1.0 / (2f64.sqrt() * 2f64.cosh()), epsilon = 1e-15);
        let p = mp(1.0, 50.0, FRAC_PI_4, FRAC_PI_4);
        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
        let rel = (sb.t_i - asymptotic_t(1.0)).abs() / sb.t_i;
        assert!(rel < 0.01, "relative error {rel}");
    }

    #[test]
    fn stepwise_reference_point() {
        let p = mp(0.0, 0.0, FRAC_PI_4, FRAC_PI_4);
        let q = qfim_closed(&p);
        let s = 1.0 / q.determinant();
        let (c1, _) = stepwise_bounds(&q, s, 0.5).unwrap();
        assert_abs_diff_eq!(c1, 0.5, epsilon = 1e-14);
        let opt = stepwise_optimal(&q, s);
        assert_abs_diff_eq!(opt.gamma_star_1, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(opt.c_sep_min_1, 0.5, epsilon = 1e-14);
        // symmetric point: both orderings coincide
        assert_abs_diff_eq!(opt.c_sep_min_2, opt.c_sep_min_1, epsilon = 1e-14);
    }

    #[test]
    fn stepwise_rejects_bad_gamma() {
        let q = Matrix2::new(8.0, 0.0, 0.0, 8.0);
        assert!(stepwise_bounds(&q, 1.0 / 64.0, 0.0).is_err());
        assert!(stepwise_bounds(&q, 1.0 / 64.0, 1.0).is_err());
    }

    #[test]
    fn stepwise_symmetry_and_divergence() {
        let q = Matrix2::new(8.0, 0.0, 0.0, 8.0);
        let s = 1.0 / 64.0;
        for g in [0.1, 0.3, 0.7] {
            let (c1, c2) = stepwise_bounds(&q, s, g).unwrap();
            assert_abs_diff_eq!(c1, c2, epsilon = 1e-14);
        }
        let (tiny, _) = stepwise_bounds(&q, s, 1e-12).unwrap();
        assert!(tiny > 1e10);
    }

    #[test]
    fn stepwise_argmin_on_grid() {
        let p = mp(0.7, 1.0, 0.3, 1.0);
        let q = qfim_closed(&p);
        let s = 1.0 / q.determinant();
        let opt = stepwise_optimal(&q, s);
        let n = 10_000;
        let mut best = (0.0, f64::INFINITY);
        for k in 1..n {
            let g = k as f64 / n as f64;
            let (c1, _) = stepwise_bounds(&q, s, g).unwrap();
            if c1 < best.1 {
                best = (g, c1);
            }
        }
        assert!((best.0 - opt.gamma_star_1).abs() <= 1.0 / n as f64);
        assert!(opt.c_sep_min_1 <= best.1 + 1e-12);
    }

    #[test]
    fn weighted_cq_cases() {
        let p = mp(0.4, 1.0, 0.2, 0.9);
        let q = qfim_closed(&p);
        let sb = scalar_bounds(&q, &uhlmann_closed(&p), 1e-12);
        let id = Matrix2::identity();
        assert_abs_diff_eq!(
            weighted_cq(&q, &id, 1e-12).unwrap(),
            sb.c_q.unwrap(),
            epsilon = 1e-14
        );
        let w1 = Matrix2::new(1.0, 0.0, 0.0, 0.0);
        let qi = q.try_inverse().unwrap();
        assert_abs_diff_eq!(weighted_cq(&q, &w1, 1e-12).unwrap(), qi[(0, 0)], epsilon = 1e-14);
        assert_abs_diff_eq!(
            weighted_cq(&q, &(id * 2.0), 1e-12).unwrap(),
            2.0 * sb.c_q.unwrap(),
            epsilon = 1e-14
        );
        let sloppy = qfim_closed(&mp(0.4, 1.0, 0.2, 0.0));
        assert!(matches!(weighted_cq(&sloppy, &id, 1e-12), Err(Error::Singular)));
    }

    #[test]
    fn cq_minimum_at_quarter_pi_setting() {
        // 64x64 grid over (phi, theta): C_Q minimal at (pi/4, pi/4)
        for (a, l1) in [(0.5, 0.3), (1.0, 0.8)] {
            let mut best = (0.0, 0.0, f64::INFINITY);
            for i in 0..=64 {
                for j in 0..=64 {
                    let ph = FRAC_PI_2 * i as f64 / 64.0;
                    let th = FRAC_PI_2 * j as f64 / 64.0;
                    let q = qfim_closed(&mp(l1, a, th, ph));
                    let det = q.determinant();
                    if det > 1e-9 {
                        let cq = q.trace() / det;
                        if cq < best.2 {
                            best = (ph, th, cq);
                        }
                    }
                }
            }
            let cell = FRAC_PI_2 / 64.0;
            assert!((best.0 - FRAC_PI_4).abs() <= cell + 1e-12, "phi* = {}", best.0);
            assert!((best.1 - FRAC_PI_4).abs() <= cell + 1e-12, "theta* = {}", best.1);
        }
    }

    #[test]
    fn r_bounds_and_ordering_on_grid() {
        for l1 in [0.0, 0.5, 1.5] {
            for a in [0.0, 0.5, 2.0] {
                for th in [0.0, 0.4, FRAC_PI_4] {
                    for ph in [0.2, FRAC_PI_4, 1.2] {
                        let p = mp(l1, a, th, ph);
                        let sb = scalar_bounds(&qfim_closed(&p), &uhlmann_closed(&p), 1e-12);
                        if let Some(r) = sb.r {
                            assert!((-1e-12..=1.0 + 1e-9).contains(&r), "R = {r}");
                            assert!(sb.t_i <= r + 1e-9);
                            let (ct, cr) = (sb.bracket_t.unwrap(), sb.bracket_r.unwrap());
                            let cq = sb.c_q.unwrap();
                            assert!(cq <= ct + 1e-12 && ct <= cr + 1e-12);
                        }
                    }
                }
            }
        }
    }
}
