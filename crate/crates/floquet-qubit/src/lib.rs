//! Simulator for a periodically driven dissipative qubit.
//!
//! A qubit with spontaneous emission and pure dephasing is driven around a
//! closed loop in the (coupling, detuning) plane. The crate builds the
//! time-dependent Liouvillian superoperator, integrates the one-period
//! propagator, extracts effective Floquet generators and their complex
//! spectra, locates exceptional points along drive-period scans, evolves
//! stroboscopic and intra-period (micromotion) trajectories, and maps the
//! nonequilibrium steady states (NESS) over period, starting phase, and
//! drive direction — including the trace-distance chirality between the two
//! loop orientations.
//!
//! Module layout:
//!
//! - [`numerics`] — dense complex kernels: Kronecker products, `expm`,
//!   a general complex eigensolver, principal-branch logs, set distances.
//! - [`lindblad`] — drive waveforms, the qubit Hamiltonian, jump operators,
//!   and the vectorized Liouvillian.
//! - [`floquet`] — one-period propagators, effective spectra, period scans,
//!   exceptional-point detection, stroboscopic/micromotion evolution.
//! - [`analysis`] — Bloch conversion, entropy, trace distance, steady-state
//!   extraction, transient fitting, shot-noise tomography sampling.
//! - [`experiments`] — the scenario registry, NESS sweep engine, and
//!   chirality maps.
//! - [`cli`] — configuration files, the `spectrum`/`evolve`/`sweep`
//!   commands, and bit-stable CSV/JSON writers.
//!
//! Units: times in µs, rates in µs⁻¹, drive amplitudes in rad·µs⁻¹.
//!
//! The `examples/` directory holds one runnable example per capability; see
//! the README for the tour.

pub mod analysis;
pub mod cli;
pub mod experiments;
pub mod floquet;
pub mod lindblad;
pub mod numerics;

pub use analysis::{
    bloch_from_rho, entropy, ness_from_propagator, static_steady_state, trace_distance,
    BlochRecord, NessRecord,
};
pub use floquet::{
    effective_spectrum, find_ep, micromotion, period_scan, propagate_period, shifted_propagator,
    stroboscopic_evolve, EpCandidate, FloquetSpectrum, PeriodScan, PropagatorResult,
    StroboscopicSeries,
};
pub use lindblad::{
    drive_at, hamiltonian, liouvillian, unvectorize, vectorize, ControlPoint, Direction,
    DissipationParams, DriveWaveform, PathFamily,
};
pub use numerics::{eig, expm, kron, ComplexMatrix, EigenDecomposition, NumericsError};
