//! Command-line front end: single-point bound reports, parameter scans,
//! oracle validation, and general-dyne optimizer runs.
//!
//! Exit codes: 0 success; 1 tolerance breach or optimization failure;
//! 2 invalid flags, malformed ranges, or bad config; 3 oracle truncation
//! overflow.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::bounds::{qfim_closed, uhlmann_closed};
use crate::error::Error;
use crate::fock;
use crate::gaussian::evolve_moments;
use crate::generaldyne::{
    c_g, cfi_matrix, cg_asymptotic, holevo_ratio_band, optimize_setting, GeneralDyneSetting,
};
use crate::params::{default_numerics, ModelParams, NumericsConfig};
use crate::report::{fmt_f64, round_sig, BoundReport, ReportOptions};
use crate::scan::{run_scan, Axis, ScanSpec};

/// Parses an angle in radians; accepts plain floats and literal fractions
/// of pi: `pi`, `-pi/2`, `3pi/8`, `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase();
    let (sign, body) = match lower.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, lower.strip_prefix('+').unwrap_or(&lower)),
    };
    let idx = body
        .find("pi")
        .ok_or_else(|| format!("invalid angle '{s}' (expected radians or a pi fraction)"))?;
    let coef_str = body[..idx].trim_end_matches('*');
    let coef: f64 = if coef_str.is_empty() {
        1.0
    } else {
        coef_str
            .parse()
            .map_err(|_| format!("invalid pi coefficient in '{s}'"))?
    };
    let after = &body[idx + 2..];
    let denom: f64 = if after.is_empty() {
        1.0
    } else {
        let d = after
            .strip_prefix('/')
            .ok_or_else(|| format!("invalid angle '{s}'"))?;
        d.parse()
            .map_err(|_| format!("invalid denominator in '{s}'"))?
    };
    if denom == 0.0 {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(sign * coef * PI / denom)
}

fn parse_weight(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("weight must be four comma-separated numbers a,b,c,d".into());
    }
    let mut w = [0.0f64; 4];
    for (slot, p) in w.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| format!("invalid weight entry '{p}'"))?;
    }
    if (w[1] - w[2]).abs() > 1e-12 {
        return Err("weight matrix must be symmetric (b = c)".into());
    }
    if w[0] <= 0.0 || w[0] * w[3] - w[1] * w[2] <= 0.0 {
        return Err("weight matrix must be positive definite".into());
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "sqbounds",
    about = "Precision bounds for two successive squeezing parameters separated by a phase scrambler",
    long_about = None,
    after_help = "CSV columns (bounds/scan): lambda1,lambda2,alpha,theta,phi,q11,q12,q22,u12,\
s,c,r,t_i,c_q,bracket_t,bracket_r,c_sep_min_1,c_sep_min_2,gamma_star_1,gamma_star_2,c_g,\
c_q_weighted,singular. Cells requiring the inverse of a singular information matrix are empty \
(CSV) or null (JSON). Angles are radians; literal pi fractions such as pi/4 are accepted."
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Full bound report for a single parameter point
    Bounds(BoundsArgs),
    /// One-axis parameter scan emitting one row per grid point
    Scan(ScanArgs),
    /// Cross-validate the closed forms against the Fock-space oracle
    Validate(ValidateArgs),
    /// General-dyne Fisher information, C_g, and setting optimization
    Generaldyne(GeneralDyneArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Round output to this many significant digits (default: shortest
    /// round-trip representation)
    #[arg(long)]
    digits: Option<usize>,
    /// key=value config file supplying defaults for any long flag
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct ParamFlags {
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Probe phase in radians (pi fractions accepted)
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    /// Scrambler phase in radians (pi fractions accepted)
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Positive-definite weight matrix a,b,c,d for Tr[W Q^-1]
    #[arg(long, value_parser = parse_weight)]
    weight: Option<[f64; 4]>,
    /// General-dyne z; fills the c_g column
    #[arg(long)]
    z: Option<f64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Scan axis: lambda1|lambda2|alpha|theta|phi|z
    #[arg(long)]
    axis: Axis,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long)]
    count: usize,
    #[command(flatten)]
    params: ParamFlags,
    #[arg(long, value_parser = parse_weight)]
    weight: Option<[f64; 4]>,
    #[arg(long)]
    z: Option<f64>,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Starting Fock truncation dimension
    #[arg(long)]
    dim: Option<usize>,
    /// Disable adaptive dimension growth on truncation overflow
    #[arg(long)]
    no_adapt: bool,
    /// Evaluate only the first N grid points
    #[arg(long)]
    grid_points: Option<usize>,
    /// Acceptance threshold on the scaled errors
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct GeneralDyneArgs {
    #[command(flatten)]
    params: ParamFlags,
    /// Measurement squeezing z of the POVM seed
    #[arg(long)]
    z: Option<f64>,
    /// Minimize C_g over (theta, phi, z) and report the optimum
    #[arg(long)]
    optimize: bool,
    /// Also report the large-alpha C_g expansion and the C_H/C_g band
    #[arg(long)]
    asymptotic: bool,
    #[command(flatten)]
    common: CommonOpts,
}

fn load_config(path: &PathBuf) -> Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

struct Resolver {
    map: HashMap<String, String>,
}

impl Resolver {
    fn new(common: &CommonOpts) -> Result<Self, String> {
        let map = match &common.config {
            Some(p) => load_config(p)?,
            None => HashMap::new(),
        };
        Ok(Self { map })
    }

    fn f64(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.map.get(key) {
            Some(s) => s.parse().map_err(|_| format!("config {key}: bad number '{s}'")),
            None => Ok(default),
        }
    }

    fn angle(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.map.get(key) {
            Some(s) => parse_angle(s),
            None => Ok(default),
        }
    }

    fn opt_f64(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.map.get(key) {
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| format!("config {key}: bad number '{s}'")),
            None => Ok(None),
        }
    }

    fn usize(&self, key: &str, flag: Option<usize>, default: usize) -> Result<usize, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.map.get(key) {
            Some(s) => s.parse().map_err(|_| format!("config {key}: bad integer '{s}'")),
            None => Ok(default),
        }
    }

    fn params(&self, flags: &ParamFlags) -> Result<ModelParams, String> {
        let p = ModelParams::new(
            self.f64("lambda1", flags.lambda1, 0.0)?,
            self.f64("lambda2", flags.lambda2, 0.0)?,
            self.f64("alpha", flags.alpha, 0.0)?,
            self.angle("theta", flags.theta, 0.0)?,
            self.angle("phi", flags.phi, 0.0)?,
        )
        .map_err(|e| e.to_string())?;
        Ok(p)
    }

    fn numerics(&self) -> Result<NumericsConfig, String> {
        let d = default_numerics();
        NumericsConfig::new(
            self.usize("fock_dim", None, d.fock_dim)?,
            self.f64("tail_tol", None, d.tail_tol)?,
            self.f64("sing_tol", None, d.sing_tol)?,
            self.f64("fd_step", None, d.fd_step)?,
        )
        .map_err(|e| e.to_string())
    }

    fn format(&self, common: &CommonOpts) -> Result<Format, String> {
        if let Some(f) = common.format {
            return Ok(f);
        }
        match self.map.get("format").map(String::as_str) {
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(format!("config format: unknown value '{other}'")),
            None => Ok(Format::Csv),
        }
    }

    fn digits(&self, common: &CommonOpts) -> Result<Option<usize>, String> {
        if common.digits.is_some() {
            return Ok(common.digits);
        }
        match self.map.get("digits") {
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| format!("config digits: bad integer '{s}'")),
            None => Ok(None),
        }
    }
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            code
        }
    }
}

struct CliError {
    code: i32,
    message: String,
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError { code: 2, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Tail { .. } => 3,
            Error::Domain(_) => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    match &cli.cmd {
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Validate(a) => cmd_validate(a),
        Cmd::Generaldyne(a) => cmd_generaldyne(a),
    }
}

fn emit_reports(rows: &[BoundReport], format: Format, digits: Option<usize>) {
    match format {
        Format::Csv => {
            println!("{}", BoundReport::CSV_HEADER);
            for r in rows {
                println!("{}", r.csv_row(digits));
            }
        }
        Format::Json => {
            let rounded: Vec<BoundReport> = rows
                .iter()
                .map(|r| match digits {
                    Some(d) => r.rounded(d),
                    None => r.clone(),
                })
                .collect();
            if rounded.len() == 1 {
                println!("{}", serde_json::to_string(&rounded[0]).unwrap());
            } else {
                println!("{}", serde_json::to_string(&rounded).unwrap());
            }
        }
    }
}

fn cmd_bounds(a: &BoundsArgs) -> Result<i32, CliError> {
    let res = Resolver::new(&a.common)?;
    let p = res.params(&a.params)?;
    let cfg = res.numerics()?;
    let opts = ReportOptions {
        z: res.opt_f64("z", a.z)?,
        weight: a.weight,
    };
    let report = BoundReport::compute(&p, &cfg, &opts)?;
    emit_reports(
        std::slice::from_ref(&report),
        res.format(&a.common)?,
        res.digits(&a.common)?,
    );
    Ok(0)
}

fn cmd_scan(a: &ScanArgs) -> Result<i32, CliError> {
    let res = Resolver::new(&a.common)?;
    let fixed = res.params(&a.params)?;
    let cfg = res.numerics()?;
    let spec = ScanSpec::new(a.axis, a.start, a.stop, a.count, fixed)?;
    let opts = ReportOptions {
        z: res.opt_f64("z", a.z)?,
        weight: a.weight,
    };
    let rows = run_scan(&spec, &cfg, &opts)?;
    emit_reports(&rows, res.format(&a.common)?, res.digits(&a.common)?);
    Ok(0)
}

/// Standard validation grid shared with the acceptance checks.
pub fn standard_grid() -> Vec<ModelParams> {
    let lambda1: Vec<f64> = (0..7).map(|i| 0.25 * i as f64).collect();
    let lambda2 = [0.0, 0.5];
    let alpha = [0.0, 0.5, 1.0, 2.0];
    let angles = [0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0];
    let mut grid = Vec::new();
    for &l1 in &lambda1 {
        for &l2 in &lambda2 {
            for &a in &alpha {
                for &th in &angles {
                    for &ph in &angles {
                        grid.push(ModelParams::new(l1, l2, a, th, ph).unwrap());
                    }
                }
            }
        }
    }
    grid
}

/// Per-entry scaled error: relative where the reference is away from zero,
/// scaled by the matrix magnitude near zeros.
fn scaled_err(a: f64, reference: f64, scale: f64) -> f64 {
    (a - reference).abs() / reference.abs().max(1e-2 * scale.max(1.0))
}

#[derive(Debug, Default, Clone, Copy)]
struct ValidationErrors {
    q: f64,
    u: f64,
    moments: f64,
}

fn validate_point(
    p: &ModelParams,
    cfg: &NumericsConfig,
    adapt: bool,
) -> crate::error::Result<ValidationErrors> {
    let (q_oracle, u12_oracle) = if adapt {
        fock::info_matrices_fock(p, cfg)?
    } else {
        fock::info_matrices_fock_fixed(p, cfg)?
    };
    let q_ref = qfim_closed(p);
    let u_ref = uhlmann_closed(p);
    let q_scale = q_ref.abs().max();
    let mut errs = ValidationErrors::default();
    for i in 0..2 {
        for j in 0..2 {
            errs.q = errs.q.max(scaled_err(q_oracle[(i, j)], q_ref[(i, j)], q_scale));
        }
    }
    errs.u = scaled_err(u12_oracle, u_ref[(0, 1)], q_scale);

    let state = if adapt {
        let mut dim = cfg.fock_dim;
        loop {
            let c = NumericsConfig { fock_dim: dim, ..*cfg };
            match fock::output_state(p, &c) {
                Ok(s) => break s,
                Err(Error::Tail { .. }) if dim < fock::MAX_FOCK_DIM => dim *= 2,
                Err(e) => return Err(e),
            }
        }
    } else {
        fock::output_state(p, cfg)?
    };
    let (mean, cov) = fock::moments_fock(&state);
    let g = evolve_moments(p);
    let m_scale = g.cov.abs().max().max(g.mean.abs().max());
    for i in 0..2 {
        errs.moments = errs.moments.max(scaled_err(mean[i], g.mean[i], m_scale));
        for j in 0..2 {
            errs.moments = errs
                .moments
                .max(scaled_err(cov[(i, j)], g.cov[(i, j)], m_scale));
        }
    }
    Ok(errs)
}

fn cmd_validate(a: &ValidateArgs) -> Result<i32, CliError> {
    let res = Resolver::new(&a.common)?;
    let mut cfg = res.numerics()?;
    if let Some(d) = a.dim {
        cfg = NumericsConfig::new(d, cfg.tail_tol, cfg.sing_tol, cfg.fd_step)
            .map_err(|e| e.to_string())?;
    }
    let mut grid = standard_grid();
    if let Some(n) = a.grid_points {
        grid.truncate(n.max(1));
    }
    let adapt = !a.no_adapt;
    let results: Vec<crate::error::Result<ValidationErrors>> =
        crate::par_map(&grid, |p| validate_point(p, &cfg, adapt));

    let mut worst = ValidationErrors::default();
    for r in results {
        let e = r?;
        worst.q = worst.q.max(e.q);
        worst.u = worst.u.max(e.u);
        worst.moments = worst.moments.max(e.moments);
    }
    println!("points: {}", grid.len());
    println!("max scaled error qfim: {:e}", round_sig(worst.q, 3));
    println!("max scaled error uhlmann: {:e}", round_sig(worst.u, 3));
    println!("max scaled error moments: {:e}", round_sig(worst.moments, 3));
    let ok = worst.q < a.tol && worst.u < a.tol && worst.moments < a.tol;
    println!("status: {}", if ok { "ok" } else { "fail" });
    Ok(if ok { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
struct GeneralDyneReport {
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    theta: f64,
    phi: f64,
    z: f64,
    f11: f64,
    f12: f64,
    f22: f64,
    c_g: Option<f64>,
    theta_star: Option<f64>,
    phi_star: Option<f64>,
    z_star: Option<f64>,
    c_g_opt: Option<f64>,
    c_g_asymptotic: Option<f64>,
    ratio_band_low: Option<f64>,
    ratio_band_high: Option<f64>,
}

fn cmd_generaldyne(a: &GeneralDyneArgs) -> Result<i32, CliError> {
    let res = Resolver::new(&a.common)?;
    let p = res.params(&a.params)?;
    let cfg = res.numerics()?;
    let z = res.f64("z", a.z, 1.0)?;
    let setting = GeneralDyneSetting::new(z)?;
    let f = cfi_matrix(&p, &setting);
    let cg = c_g(&f, cfg.sing_tol).ok();

    let mut rep = GeneralDyneReport {
        lambda1: p.lambda1,
        lambda2: p.lambda2,
        alpha: p.alpha,
        theta: p.theta,
        phi: p.phi,
        z,
        f11: f.f[(0, 0)],
        f12: f.f[(0, 1)],
        f22: f.f[(1, 1)],
        c_g: cg,
        theta_star: None,
        phi_star: None,
        z_star: None,
        c_g_opt: None,
        c_g_asymptotic: None,
        ratio_band_low: None,
        ratio_band_high: None,
    };
    if a.optimize {
        let (th, ph, zs, cgo) = optimize_setting(p.lambda1, p.lambda2, p.alpha, cfg.sing_tol)?;
        rep.theta_star = Some(th);
        rep.phi_star = Some(ph);
        rep.z_star = Some(zs);
        rep.c_g_opt = Some(cgo);
    }
    if a.asymptotic {
        if p.alpha > 0.0 {
            rep.c_g_asymptotic = Some(cg_asymptotic(p.alpha, p.lambda1));
        }
        let (lo, hi) = holevo_ratio_band(p.lambda1);
        rep.ratio_band_low = Some(lo);
        rep.ratio_band_high = Some(hi);
    }

    let digits = res.digits(&a.common)?;
    match res.format(&a.common)? {
        Format::Csv => {
            println!(
                "lambda1,lambda2,alpha,theta,phi,z,f11,f12,f22,c_g,theta_star,phi_star,z_star,c_g_opt,c_g_asymptotic,ratio_band_low,ratio_band_high"
            );
            let fv = |v: f64| fmt_f64(v, digits);
            let ov = |v: Option<f64>| v.map(|x| fmt_f64(x, digits)).unwrap_or_default();
            println!(
                "{}",
                [
                    fv(rep.lambda1),
                    fv(rep.lambda2),
                    fv(rep.alpha),
                    fv(rep.theta),
                    fv(rep.phi),
                    fv(rep.z),
                    fv(rep.f11),
                    fv(rep.f12),
                    fv(rep.f22),
                    ov(rep.c_g),
                    ov(rep.theta_star),
                    ov(rep.phi_star),
                    ov(rep.z_star),
                    ov(rep.c_g_opt),
                    ov(rep.c_g_asymptotic),
                    ov(rep.ratio_band_low),
                    ov(rep.ratio_band_high),
                ]
                .join(",")
            );
        }
        Format::Json => {
            let rep = match digits {
                Some(d) => GeneralDyneReport {
                    lambda1: round_sig(rep.lambda1, d),
                    lambda2: round_sig(rep.lambda2, d),
                    alpha: round_sig(rep.alpha, d),
                    theta: round_sig(rep.theta, d),
                    phi: round_sig(rep.phi, d),
                    z: round_sig(rep.z, d),
                    f11: round_sig(rep.f11, d),
                    f12: round_sig(rep.f12, d),
                    f22: round_sig(rep.f22, d),
                    c_g: rep.c_g.map(|v| round_sig(v, d)),
                    theta_star: rep.theta_star.map(|v| round_sig(v, d)),
                    phi_star: rep.phi_star.map(|v| round_sig(v, d)),
                    z_star: rep.z_star.map(|v| round_sig(v, d)),
                    c_g_opt: rep.c_g_opt.map(|v| round_sig(v, d)),
                    c_g_asymptotic: rep.c_g_asymptotic.map(|v| round_sig(v, d)),
                    ratio_band_low: rep.ratio_band_low.map(|v| round_sig(v, d)),
                    ratio_band_high: rep.ratio_band_high.map(|v| round_sig(v, d)),
                },
                None => rep,
            };
            println!("{}", serde_json::to_string(&rep).unwrap());
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angle_syntax() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("two").is_err());
    }

    #[test]
    fn weight_syntax() {
        assert_eq!(parse_weight("1,0,0,1").unwrap(), [1.0, 0.0, 0.0, 1.0]);
        assert!(parse_weight("1,0,0").is_err());
        assert!(parse_weight("1,1,0,1").is_err()); // asymmetric
        assert!(parse_weight("-1,0,0,1").is_err()); // not positive definite
    }

    #[test]
    fn grid_size() {
        assert_eq!(standard_grid().len(), 7 * 2 * 4 * 5 * 5);
    }

    #[test]
    fn scaled_err_behaviour() {
        assert!(scaled_err(1.0 + 1e-9, 1.0, 1.0) < 1e-6);
        assert!(scaled_err(1e-9, 0.0, 1.0) < 1e-6);
        assert!(scaled_err(1.0, 0.0, 1.0) > 1e-2);
    }
}
