//! Precision bounds for joint and stepwise estimation of two successive
//! squeezing parameters separated by a phase scrambler.
//!
//! The crate provides three independent computational pathways and the
//! cross-checks between them:
//!
//! * [`bounds`] — closed-form QFI/Uhlmann matrices, the scalar quantifiers
//!   (sloppiness, incompatibility, quantumness) and the joint and stepwise
//!   estimation bounds;
//! * [`fock`] — a truncated Fock-space brute-force oracle that rebuilds the
//!   evolved state and its derivative states from first principles;
//! * [`gaussian`] / [`generaldyne`] — the phase-space moments and the
//!   classical Fisher information of general-dyne detection, with the
//!   measurement-setting optimizer.
//!
//! Grid evaluation is data-parallel through [`par_map`] when the default
//! `parallel` feature is enabled; [`seq_map`] is always available and the
//! two produce identical output in identical order.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod generaldyne;
pub mod optim;
pub mod params;
pub mod report;
pub mod scan;

pub use error::{Error, Result};
pub use params::{default_numerics, ModelParams, NumericsConfig};

/// Sequential map with the same signature as [`par_map`].
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Order-preserving data-parallel map; falls back to [`seq_map`] when the
/// `parallel` feature is disabled.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    seq_map(items, f)
}
