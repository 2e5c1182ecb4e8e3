//! Floquet machinery: time-ordered one-period propagators, effective
//! Liouvillian spectra, period scans with branch tracking, exceptional-point
//! detection, and stroboscopic/micromotion evolution.

mod evolve;
mod propagator;
mod scan;
mod spectrum;

pub use evolve::{loop_distances, micromotion, stroboscopic_evolve, StroboscopicSeries};
pub use propagator::{propagate_interval, propagate_period, shifted_propagator, PropagatorResult};
pub use scan::{find_ep, find_ep_with, period_scan, EpCandidate, EpConfig, PeriodScan, ScanPoint};
pub use spectrum::{effective_spectrum, FloquetSpectrum};

use thiserror::Error;

use crate::lindblad::LindbladError;
use crate::numerics::NumericsError;

/// Hard ceiling on the slice count of the time-ordered product.
pub const MAX_SLICES: usize = 1 << 20;

/// Initial slice count for the doubling refinement.
pub const INITIAL_SLICES: usize = 64;

/// Default Frobenius tolerance for the slice-doubling convergence control.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors from propagator integration and spectral post-processing.
#[derive(Debug, Clone, Error)]
pub enum FloquetError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid initial state: {0}")]
    InvalidState(String),
    #[error(
        "time-ordered integration did not converge: {slices} slices leave a refinement \
         difference of {error_estimate:e} against a tolerance of {tol:e}"
    )]
    IntegrationFailure {
        slices: usize,
        error_estimate: f64,
        tol: f64,
    },
    #[error(
        "no steady state: nearest propagator eigenvalue is {closest:e} away from 1, \
         which signals broken trace preservation upstream"
    )]
    NoSteadyState { closest: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
}
