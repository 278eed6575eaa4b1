//! Parameter-grid scans over one axis, evaluated in parallel with
//! deterministic ordering.

use crate::error::{Error, Result};
use crate::params::{ModelParams, NumericsConfig};
use crate::report::{BoundReport, ReportOptions};

/// Scan axis: one of the five model parameters or the general-dyne z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Lambda1,
    Lambda2,
    Alpha,
    Theta,
    Phi,
    Z,
}

impl std::str::FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lambda1" => Ok(Self::Lambda1),
            "lambda2" => Ok(Self::Lambda2),
            "alpha" => Ok(Self::Alpha),
            "theta" => Ok(Self::Theta),
            "phi" => Ok(Self::Phi),
            "z" => Ok(Self::Z),
            _ => Err(format!(
                "unknown axis '{s}' (expected lambda1|lambda2|alpha|theta|phi|z)"
            )),
        }
    }
}

/// One-axis linear scan specification.
#[derive(Debug, Clone, Copy)]
pub struct ScanSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Values of the non-scanned parameters.
    pub fixed: ModelParams,
}

impl ScanSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, count: usize, fixed: ModelParams) -> Result<Self> {
        if count < 2 {
            return Err(Error::Domain(format!("count must be >= 2, got {count}")));
        }
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(Error::Domain(format!(
                "range must satisfy start < stop, got [{start}, {stop}]"
            )));
        }
        Ok(Self {
            axis,
            start,
            stop,
            count,
            fixed,
        })
    }

    /// Evenly spaced grid values, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.stop
                } else {
                    self.start + h * i as f64
                }
            })
            .collect()
    }

    fn point(&self, v: f64, opts: &ReportOptions) -> Result<(ModelParams, ReportOptions)> {
        let mut p = self.fixed;
        let mut o = *opts;
        match self.axis {
            Axis::Lambda1 => p.lambda1 = v,
            Axis::Lambda2 => p.lambda2 = v,
            Axis::Alpha => p.alpha = v,
            Axis::Theta => p.theta = v,
            Axis::Phi => p.phi = v,
            Axis::Z => o.z = Some(v),
        }
        // revalidate (alpha scans can hit negatives)
        let p = ModelParams::new(p.lambda1, p.lambda2, p.alpha, p.theta, p.phi)?;
        Ok((p, o))
    }
}

/// Evaluates the scan; row order follows the grid order regardless of the
/// parallel schedule.
pub fn run_scan(
    spec: &ScanSpec,
    cfg: &NumericsConfig,
    opts: &ReportOptions,
) -> Result<Vec<BoundReport>> {
    let values = spec.values();
    let rows: Vec<Result<BoundReport>> = crate::par_map(&values, |&v| {
        let (p, o) = spec.point(v, opts)?;
        BoundReport::compute(&p, cfg, &o)
    });
    rows.into_iter().collect()
}
