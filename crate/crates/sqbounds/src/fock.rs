//! Truncated Fock-space brute-force engine.
//!
//! Builds the evolved probe state and its parameter-derivative states from
//! first principles and computes the information matrices by direct inner
//! products, independently of the closed forms in [`crate::bounds`].
//!
//! # Conventions
//!
//! The closed-form information matrices and the closed-form phase-space
//! moments used in this crate are not reproducible under a single set of
//! Fock-space sign conventions: no choice of generator sign, scrambler sign
//! and probe phase sign satisfies both families at once. The two engines
//! therefore pin their conventions independently, and each is validated
//! against its own closed form:
//!
//! * information pathway ([`qfim_fock`], [`uhlmann_fock`],
//!   [`derivative_states`]): generator G = a² + a†², scrambler
//!   exp(+i φ a†a), probe |α e^{−iθ}⟩. Matches [`crate::bounds::qfim_closed`]
//!   and [`crate::bounds::uhlmann_closed`] entrywise.
//! * phase-space pathway ([`output_state`], [`moments_fock`]): the
//!   quadrature-aligned generator −i(a² − a†²) (squeezing along the q and p
//!   axes), scrambler exp(−i φ a†a), probe |α e^{−iθ}⟩. Matches
//!   [`crate::gaussian::evolve_moments`] entrywise.
//!
//! The information matrices additionally carry the normalization of the
//! closed forms, which corresponds to a generator prefactor −i rather than
//! −i/2 in the derivative states: `qfim_fock` and `uhlmann_fock` use the
//! prefactor 16 instead of 4 on the overlap expressions. The derivative
//! states themselves keep the −i/2 normalization, so they agree with central
//! finite differences of the evolved state.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::params::{ModelParams, NumericsConfig};

/// Maximum Fock dimension tried by the adaptive truncation loop.
pub const MAX_FOCK_DIM: usize = 4096;

/// Per-step Taylor argument bound for the matrix-exponential action.
const TAYLOR_STEP: f64 = 16.0;

/// Truncated complex amplitude vector c_0..c_{D-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amps(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// Number state |n⟩ embedded in dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Self {
        assert!(n < dim);
        let mut amps = vec![Complex64::ZERO; dim];
        amps[n] = Complex64::ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩ with the left argument conjugated.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|c| c * s).collect(),
        }
    }

    /// Probability mass in the top ceil(D/8) amplitudes (at least 2, so
    /// parity-restricted states cannot slip through), relative to the
    /// squared norm.
    pub fn tail_mass(&self) -> f64 {
        let d = self.dim();
        let band = d.div_ceil(8).max(2);
        let tail: f64 = self.amps[d - band..].iter().map(|c| c.norm_sqr()).sum();
        tail / self.norm_sqr().max(f64::MIN_POSITIVE)
    }

    fn check_tail(&self, cfg: &NumericsConfig) -> Result<()> {
        let mass = self.tail_mass();
        if mass >= cfg.tail_tol {
            Err(Error::Tail {
                mass,
                tol: cfg.tail_tol,
                dim: self.dim(),
            })
        } else {
            Ok(())
        }
    }

    /// Mean photon number ⟨a†a⟩ / ⟨ψ|ψ⟩.
    pub fn mean_photon_number(&self) -> f64 {
        let num: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum();
        num / self.norm_sqr()
    }
}

/// Coherent state |α e^{iθ}⟩: c_n = e^{−α²/2} (α e^{iθ})ⁿ / √(n!).
pub fn coherent_state(alpha: f64, theta: f64, cfg: &NumericsConfig) -> Result<FockVector> {
    let d = cfg.fock_dim;
    let z = Complex64::from_polar(alpha, theta);
    let mut amps = vec![Complex64::ZERO; d];
    amps[0] = Complex64::new((-alpha * alpha / 2.0).exp(), 0.0);
    for n in 1..d {
        amps[n] = amps[n - 1] * z / (n as f64).sqrt();
    }
    let state = FockVector { amps };
    state.check_tail(cfg)?;
    Ok(state)
}

/// Action of the squeezing generator G = a² + a†²:
/// (G c)_n = √((n+1)(n+2)) c_{n+2} + √(n(n−1)) c_{n−2}.
pub fn apply_g(state: &FockVector) -> FockVector {
    let d = state.dim();
    assert!(d >= 4, "apply_g requires dim >= 4");
    let c = &state.amps;
    let mut out = vec![Complex64::ZERO; d];
    for (n, o) in out.iter_mut().enumerate() {
        let mut v = Complex64::ZERO;
        if n + 2 < d {
            v += (((n + 1) * (n + 2)) as f64).sqrt() * c[n + 2];
        }
        if n >= 2 {
            v += ((n * (n - 1)) as f64).sqrt() * c[n - 2];
        }
        *o = v;
    }
    FockVector { amps: out }
}

/// Phase rotation exp(−iφ a†a): c_n → e^{−iφn} c_n.
pub fn apply_phase(state: &FockVector, phi: f64) -> FockVector {
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -phi * n as f64))
        .collect();
    FockVector { amps }
}

/// exp(−iλ G/2) applied to `state` by uniform time stepping with a Taylor
/// inner loop on the banded generator. The step count is chosen from the
/// infinity norm of G so each Taylor argument stays below [`TAYLOR_STEP`].
pub fn apply_squeeze(state: &FockVector, lambda: f64, cfg: &NumericsConfig) -> Result<FockVector> {
    if lambda == 0.0 {
        return Ok(state.clone());
    }
    let d = state.dim();
    // Largest row sum of |G|: √((n+1)(n+2)) + √(n(n−1)) at n = D−1.
    let nf = (d - 1) as f64;
    let norm_g = (nf * (nf + 1.0)).sqrt() + (nf * (nf - 1.0)).sqrt();
    let steps = ((lambda.abs() * norm_g / 2.0) / TAYLOR_STEP).ceil().max(1.0) as usize;
    let z = Complex64::new(0.0, -lambda / (2.0 * steps as f64));

    let in_norm = state.norm();
    let mut acc = state.clone();
    for _ in 0..steps {
        let mut sum = acc.amps.clone();
        let mut term = acc;
        let mut converged = false;
        for k in 1..=90 {
            term = apply_g(&term);
            let f = z / k as f64;
            for a in term.amps.iter_mut() {
                *a *= f;
            }
            let mut tn = 0.0;
            for (s, t) in sum.iter_mut().zip(&term.amps) {
                *s += t;
                tn += t.norm_sqr();
            }
            if tn <= 1e-34 * in_norm * in_norm {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(
                "Taylor series for exp(-i lambda G/2) did not converge within 90 terms".into(),
            ));
        }
        acc = FockVector { amps: sum };
    }
    if (acc.norm() - in_norm).abs() > 1e-9 * in_norm.max(1.0) {
        return Err(Error::Convergence(format!(
            "squeeze action lost unitarity: |out|={} |in|={}",
            acc.norm(),
            in_norm
        )));
    }
    acc.check_tail(cfg)?;
    Ok(acc)
}

/// exp(−iλ G'/2) with the quadrature-aligned generator G' = −i(a² − a†²),
/// realized as a phase conjugation of [`apply_squeeze`]: G' = R† G R with
/// R = exp(−i(π/4) a†a).
fn apply_squeeze_axis(state: &FockVector, lambda: f64, cfg: &NumericsConfig) -> Result<FockVector> {
    let t = apply_phase(state, FRAC_PI_4);
    let t = apply_squeeze(&t, lambda, cfg)?;
    Ok(apply_phase(&t, -FRAC_PI_4))
}

/// Evolved probe state in the phase-space convention (see module docs):
/// squeeze(λ₂) ∘ scramble(φ) ∘ squeeze(λ₁) applied to the coherent probe,
/// with squeezing aligned to the q/p axes. Its moments reproduce
/// [`crate::gaussian::evolve_moments`].
pub fn output_state(p: &ModelParams, cfg: &NumericsConfig) -> Result<FockVector> {
    let probe = coherent_state(p.alpha, -p.theta, cfg)?;
    let s1 = apply_squeeze_axis(&probe, p.lambda1, cfg)?;
    let v = apply_phase(&s1, p.phi);
    apply_squeeze_axis(&v, p.lambda2, cfg)
}

/// Evolved state and unnormalized derivative states in the information
/// convention (see module docs). The derivatives carry the −i/2 prefactor
/// of the generator, so they match central finite differences of `psi`.
struct InfoFamily {
    psi: FockVector,
    d1: FockVector,
    d2: FockVector,
}

fn info_family(p: &ModelParams, cfg: &NumericsConfig) -> Result<InfoFamily> {
    let half = Complex64::new(0.0, -0.5);
    let probe = coherent_state(p.alpha, -p.theta, cfg)?;

    let s1 = apply_squeeze(&probe, p.lambda1, cfg)?;
    let v = apply_phase(&s1, -p.phi);
    let psi = apply_squeeze(&v, p.lambda2, cfg)?;

    // |∂₁ψ⟩ = −(i/2) U₂ V U₁ G |probe⟩
    let g_probe = apply_g(&probe);
    let t = apply_squeeze(&g_probe, p.lambda1, cfg)?;
    let t = apply_phase(&t, -p.phi);
    let t = apply_squeeze(&t, p.lambda2, cfg)?;
    let d1 = t.scale(half);

    // |∂₂ψ⟩ = −(i/2) G |ψ⟩
    let d2 = apply_g(&psi).scale(half);

    d1.check_tail(cfg)?;
    d2.check_tail(cfg)?;
    Ok(InfoFamily { psi, d1, d2 })
}

/// The two unnormalized derivative states of the information pathway.
pub fn derivative_states(p: &ModelParams, cfg: &NumericsConfig) -> Result<(FockVector, FockVector)> {
    let fam = info_family(p, cfg)?;
    Ok((fam.d1, fam.d2))
}

/// Evolved state of the information pathway; exposed for the
/// finite-difference validation of [`derivative_states`].
pub fn info_state(p: &ModelParams, cfg: &NumericsConfig) -> Result<FockVector> {
    Ok(info_family(p, cfg)?.psi)
}

fn info_matrices_at(p: &ModelParams, cfg: &NumericsConfig) -> Result<(Matrix2<f64>, f64)> {
    let fam = info_family(p, cfg)?;
    let ds = [&fam.d1, &fam.d2];
    let psi = &fam.psi;
    let mut overlaps = [[Complex64::ZERO; 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            overlaps[j][k] = ds[j].inner(ds[k]) - ds[j].inner(psi) * psi.inner(ds[k]);
        }
    }
    // Prefactor 16 (not 4) carries the normalization of the closed forms;
    // see module docs.
    let q11 = 16.0 * overlaps[0][0].re;
    let q22 = 16.0 * overlaps[1][1].re;
    let q12 = 8.0 * (overlaps[0][1].re + overlaps[1][0].re);
    // The antisymmetric matrix assigns the imaginary overlap of (∂₁, ∂₂) to
    // the (2,1) entry, matching the sign of the closed form.
    let u12 = -16.0 * overlaps[0][1].im;
    Ok((Matrix2::new(q11, q12, q12, q22), u12))
}

fn matrices_close(a: &(Matrix2<f64>, f64), b: &(Matrix2<f64>, f64), rtol: f64) -> bool {
    let scale = a
        .0
        .iter()
        .map(|v| v.abs())
        .fold(a.1.abs(), f64::max)
        .max(1.0);
    let dq = (a.0 - b.0).abs().max();
    let du = (a.1 - b.1).abs();
    dq <= rtol * scale && du <= rtol * scale
}

/// Information matrices with adaptive truncation: the result is accepted
/// only when the tail test passes and every entry is invariant under a
/// doubling of the Fock dimension to relative 1e-8. On tail overflow the
/// dimension is doubled up to [`MAX_FOCK_DIM`].
pub fn info_matrices_fock(p: &ModelParams, cfg: &NumericsConfig) -> Result<(Matrix2<f64>, f64)> {
    let mut dim = cfg.fock_dim.max(4);
    let mut last_err = None;
    while dim <= MAX_FOCK_DIM / 2 {
        let lo = NumericsConfig { fock_dim: dim, ..*cfg };
        let hi = NumericsConfig {
            fock_dim: dim * 2,
            ..*cfg
        };
        match (info_matrices_at(p, &lo), info_matrices_at(p, &hi)) {
            (Ok(a), Ok(b)) => {
                if matrices_close(&a, &b, 1e-8) {
                    return Ok(b);
                }
                last_err = Some(Error::Convergence(format!(
                    "information matrices not invariant under dim doubling at dim {dim}"
                )));
            }
            (Err(e), _) | (_, Err(e)) => last_err = Some(e),
        }
        dim *= 2;
    }
    Err(last_err.unwrap_or_else(|| {
        Error::Convergence("adaptive truncation exhausted".into())
    }))
}

/// Information matrices at the fixed configured dimension, without the
/// adaptive growth loop. Tail overflow is reported as an error.
pub fn info_matrices_fock_fixed(
    p: &ModelParams,
    cfg: &NumericsConfig,
) -> Result<(Matrix2<f64>, f64)> {
    info_matrices_at(p, cfg)
}

/// Brute-force QFI matrix (adaptive truncation).
pub fn qfim_fock(p: &ModelParams, cfg: &NumericsConfig) -> Result<Matrix2<f64>> {
    Ok(info_matrices_fock(p, cfg)?.0)
}

/// Brute-force Uhlmann curvature matrix (adaptive truncation). The diagonal
/// is identically zero.
pub fn uhlmann_fock(p: &ModelParams, cfg: &NumericsConfig) -> Result<Matrix2<f64>> {
    let (_, u12) = info_matrices_fock(p, cfg)?;
    Ok(Matrix2::new(0.0, u12, -u12, 0.0))
}

/// First moments (⟨q⟩, ⟨p⟩) and covariance matrix of a normalized state,
/// computed from the ladder-operator expectations ⟨a⟩, ⟨a²⟩, ⟨a†a⟩.
pub fn moments_fock(state: &FockVector) -> (Vector2<f64>, Matrix2<f64>) {
    let d = state.dim();
    let c = state.amps();
    let nrm = state.norm_sqr();
    let mut ea = Complex64::ZERO;
    let mut ea2 = Complex64::ZERO;
    let mut en = 0.0;
    for n in 0..d {
        if n + 1 < d {
            ea += c[n].conj() * ((n + 1) as f64).sqrt() * c[n + 1];
        }
        if n + 2 < d {
            ea2 += c[n].conj() * (((n + 1) * (n + 2)) as f64).sqrt() * c[n + 2];
        }
        en += n as f64 * c[n].norm_sqr();
    }
    ea /= nrm;
    ea2 /= nrm;
    en /= nrm;

    let mq = 2f64.sqrt() * ea.re;
    let mp = 2f64.sqrt() * ea.im;
    let eq2 = ea2.re + en + 0.5;
    let ep2 = -ea2.re + en + 0.5;
    let eqp = ea2.im;
    let cov = Matrix2::new(eq2 - mq * mq, eqp - mq * mp, eqp - mq * mp, ep2 - mp * mp);
    (Vector2::new(mq, mp), cov)
}
