//! Intra-period micromotion over ten drive periods: the trajectory spirals
//! onto a repeating loop as the stroboscopic state reaches the NESS.
//!
//! Run with: cargo run --release --example micromotion

use floquet_qubit::floquet::{loop_distances, micromotion};
use floquet_qubit::lindblad::{plus_x_state, Direction, DissipationParams, DriveWaveform};

fn main() {
    // fig2 conditions: T = 200 ns with the measured device rates.
    let waveform =
        DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Cw, 0.2).unwrap();
    let rates = DissipationParams::MEASURED;
    let samples_per_period = 20;

    let records =
        micromotion(&waveform, &rates, &plus_x_state(), 10, samples_per_period, 1e-8).unwrap();

    println!("dense trajectory, every 5th sample:");
    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "t (µs)", "x", "y", "z", "S");
    for record in records.iter().step_by(5) {
        println!(
            "{:>8.3} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            record.t, record.x, record.y, record.z, record.entropy
        );
    }

    println!("\nloop-to-loop RMS distances (repetition ⇒ the NESS orbit):");
    for (pair, dist) in loop_distances(&records, samples_per_period).iter().enumerate() {
        println!("  periods {}↔{}: {dist:.4}", pair + 1, pair + 2);
    }
}
