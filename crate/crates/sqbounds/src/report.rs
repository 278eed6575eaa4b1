//! Aggregated per-point bound report and its CSV/JSON serialization.

use serde::{Deserialize, Serialize};

use crate::bounds::{info_matrices_closed, scalar_bounds, stepwise_optimal, weighted_cq};
use crate::error::Result;
use crate::generaldyne::{c_g, cfi_matrix, GeneralDyneSetting};
use crate::params::{ModelParams, NumericsConfig};

/// All named bounds for one parameter point. Quantities that require
/// inverting a singular information matrix are `None` (JSON `null`,
/// empty CSV cell).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub alpha: f64,
    pub theta: f64,
    pub phi: f64,
    pub q11: f64,
    pub q12: f64,
    pub q22: f64,
    pub u12: f64,
    pub s: Option<f64>,
    pub c: Option<f64>,
    pub r: Option<f64>,
    pub t_i: f64,
    pub c_q: Option<f64>,
    pub bracket_t: Option<f64>,
    pub bracket_r: Option<f64>,
    pub c_sep_min_1: Option<f64>,
    pub c_sep_min_2: Option<f64>,
    pub gamma_star_1: Option<f64>,
    pub gamma_star_2: Option<f64>,
    pub c_g: Option<f64>,
    pub c_q_weighted: Option<f64>,
    pub singular: bool,
}

/// Extra per-report inputs beyond the model point.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// General-dyne z; when set, the C_g column is filled.
    pub z: Option<f64>,
    /// Weight matrix (row-major a,b,c,d) for the weighted scalar bound.
    pub weight: Option<[f64; 4]>,
}

impl BoundReport {
    pub fn compute(p: &ModelParams, cfg: &NumericsConfig, opts: &ReportOptions) -> Result<Self> {
        let m = info_matrices_closed(p);
        let sb = scalar_bounds(&m.q, &m.u, cfg.sing_tol);
        let step = sb.s.map(|s| stepwise_optimal(&m.q, s));
        let cg = match opts.z {
            Some(z) => {
                let setting = GeneralDyneSetting::new(z)?;
                c_g(&cfi_matrix(p, &setting), cfg.sing_tol).ok()
            }
            None => None,
        };
        let cqw = match opts.weight {
            Some([a, b, c, d]) => {
                let w = nalgebra::Matrix2::new(a, b, c, d);
                weighted_cq(&m.q, &w, cfg.sing_tol).ok()
            }
            None => None,
        };
        Ok(Self {
            lambda1: p.lambda1,
            lambda2: p.lambda2,
            alpha: p.alpha,
            theta: p.theta,
            phi: p.phi,
            q11: m.q[(0, 0)],
            q12: m.q[(0, 1)],
            q22: m.q[(1, 1)],
            u12: m.u[(0, 1)],
            s: sb.s,
            c: sb.c,
            r: sb.r,
            t_i: sb.t_i,
            c_q: sb.c_q,
            bracket_t: sb.bracket_t,
            bracket_r: sb.bracket_r,
            c_sep_min_1: step.map(|s| s.c_sep_min_1),
            c_sep_min_2: step.map(|s| s.c_sep_min_2),
            gamma_star_1: step.map(|s| s.gamma_star_1),
            gamma_star_2: step.map(|s| s.gamma_star_2),
            c_g: cg,
            c_q_weighted: cqw,
            singular: sb.singular,
        })
    }

    pub const CSV_HEADER: &'static str = "lambda1,lambda2,alpha,theta,phi,q11,q12,q22,u12,s,c,r,t_i,c_q,bracket_t,bracket_r,c_sep_min_1,c_sep_min_2,gamma_star_1,gamma_star_2,c_g,c_q_weighted,singular";

    /// One RFC-4180 CSV row (LF terminated by the caller). All cells are
    /// numeric or empty, so no quoting is required.
    pub fn csv_row(&self, digits: Option<usize>) -> String {
        let f = |v: f64| fmt_f64(v, digits);
        let o = |v: Option<f64>| v.map(|x| fmt_f64(x, digits)).unwrap_or_default();
        [
            f(self.lambda1),
            f(self.lambda2),
            f(self.alpha),
            f(self.theta),
            f(self.phi),
            f(self.q11),
            f(self.q12),
            f(self.q22),
            f(self.u12),
            o(self.s),
            o(self.c),
            o(self.r),
            f(self.t_i),
            o(self.c_q),
            o(self.bracket_t),
            o(self.bracket_r),
            o(self.c_sep_min_1),
            o(self.c_sep_min_2),
            o(self.gamma_star_1),
            o(self.gamma_star_2),
            o(self.c_g),
            o(self.c_q_weighted),
            self.singular.to_string(),
        ]
        .join(",")
    }

    /// Copy with every float rounded to `digits` significant digits; used by
    /// the JSON path so `--digits` affects both formats identically.
    pub fn rounded(&self, digits: usize) -> Self {
        let f = |v: f64| round_sig(v, digits);
        let o = |v: Option<f64>| v.map(f);
        Self {
            lambda1: f(self.lambda1),
            lambda2: f(self.lambda2),
            alpha: f(self.alpha),
            theta: f(self.theta),
            phi: f(self.phi),
            q11: f(self.q11),
            q12: f(self.q12),
            q22: f(self.q22),
            u12: f(self.u12),
            s: o(self.s),
            c: o(self.c),
            r: o(self.r),
            t_i: f(self.t_i),
            c_q: o(self.c_q),
            bracket_t: o(self.bracket_t),
            bracket_r: o(self.bracket_r),
            c_sep_min_1: o(self.c_sep_min_1),
            c_sep_min_2: o(self.c_sep_min_2),
            gamma_star_1: o(self.gamma_star_1),
            gamma_star_2: o(self.gamma_star_2),
            c_g: o(self.c_g),
            c_q_weighted: o(self.c_q_weighted),
            singular: self.singular,
        }
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let d = digits.max(1) as i32;
    let mag = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(d - 1 - mag);
    (v * scale).round() / scale
}

/// Shortest round-trip representation by default; with `digits`, the value
/// is first rounded to that many significant digits.
pub fn fmt_f64(v: f64, digits: Option<usize>) -> String {
    match digits {
        None => v.to_string(),
        Some(d) => round_sig(v, d).to_string(),
    }
}
