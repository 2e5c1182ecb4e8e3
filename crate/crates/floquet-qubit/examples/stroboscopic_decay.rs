//! Stroboscopic relaxation towards the NESS on both sides of the EP:
//! oscillatory decay at T = 200 ns, pure decay at T = 600 ns.
//!
//! Run with: cargo run --release --example stroboscopic_decay

use floquet_qubit::analysis::ness_from_propagator;
use floquet_qubit::floquet::{effective_spectrum, propagate_period, stroboscopic_evolve};
use floquet_qubit::lindblad::{plus_x_state, Direction, DissipationParams, DriveWaveform};

fn main() {
    let rates = DissipationParams::CALCULATION;
    for period in [0.2, 0.6] {
        let waveform =
            DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Cw, period)
                .unwrap();
        let propagator = propagate_period(&waveform, &rates, 1e-9).unwrap();
        let spectrum = effective_spectrum(&propagator).unwrap();
        let slow = spectrum.slow_mode();
        let ness = ness_from_propagator(&propagator).unwrap();

        println!(
            "T = {period} µs: slow mode {:.3}{:+.3}i µs⁻¹ ({})",
            slow.re,
            slow.im,
            if slow.im.abs() > 1e-6 { "underdamped" } else { "overdamped" }
        );
        println!("  NESS Bloch vector ({:+.3}, {:+.3}, {:+.3})", ness.bloch.x, ness.bloch.y, ness.bloch.z);

        let series = stroboscopic_evolve(&propagator, &plus_x_state(), 10).unwrap();
        println!("  {:>3} {:>8} {:>8} {:>8}", "n", "x", "y", "z");
        for (n, record) in &series.records {
            println!(
                "  {n:>3} {:>8.4} {:>8.4} {:>8.4}",
                record.x, record.y, record.z
            );
        }
        println!();
    }
}
