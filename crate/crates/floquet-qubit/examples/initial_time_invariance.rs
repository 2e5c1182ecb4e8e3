//! The one-period propagators launched from different starting phases t₀
//! share one spectrum, so every stroboscopic family decays with the same
//! rate and frequency — while the steady states themselves differ.
//!
//! Run with: cargo run --release --example initial_time_invariance

use floquet_qubit::analysis::{
    fit_transient_auto, ness_from_propagator, BlochComponent, FitSeeds,
};
use floquet_qubit::floquet::{effective_spectrum, shifted_propagator, stroboscopic_evolve};
use floquet_qubit::lindblad::{plus_x_state, Direction, DissipationParams, DriveWaveform};
use floquet_qubit::numerics::eigenvalue_set_distance;

fn main() {
    let period = 0.2;
    let waveform =
        DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Cw, period).unwrap();
    let rates = DissipationParams::MEASURED;

    let mut reference: Option<Vec<num_complex::Complex64>> = None;
    for frac in [0.0, 0.2, 0.5, 0.8] {
        let propagator =
            shifted_propagator(&waveform, &rates, frac * period, 1e-9).unwrap();
        let spectrum = effective_spectrum(&propagator).unwrap();
        let slow = spectrum.slow_mode();

        let distance = match &reference {
            None => {
                reference = Some(spectrum.eigenvalues.to_vec());
                0.0
            }
            Some(eigs) => eigenvalue_set_distance(eigs, &spectrum.eigenvalues).unwrap(),
        };

        let series = stroboscopic_evolve(&propagator, &plus_x_state(), 10).unwrap();
        let seeds = FitSeeds::from_spectrum(&spectrum);
        let fit = fit_transient_auto(&series, BlochComponent::X, &seeds).unwrap();
        let ness = ness_from_propagator(&propagator).unwrap();

        println!("t0 = {frac:>3}T:");
        println!(
            "  slow mode {:+.4}{:+.4}i µs⁻¹, eigenvalue-set distance to t0=0: {distance:.2e}",
            slow.re, slow.im
        );
        println!(
            "  fitted x-transient: κ = {:.4} µs⁻¹, ω = {:.4} rad/µs ({:?})",
            fit.decay_rate, fit.frequency, fit.kind
        );
        println!(
            "  NESS at this phase: ({:+.3}, {:+.3}, {:+.3})",
            ness.bloch.x, ness.bloch.y, ness.bloch.z
        );
    }
}
