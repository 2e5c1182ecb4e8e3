//! Map the nonequilibrium steady states over drive period and starting
//! phase for both loop directions: entropy structure, the static-Liouvillian
//! reference curve, and the trace-distance chirality between directions.
//!
//! Run with: cargo run --release --example ness_sweep
//! (A coarse grid keeps this to roughly a minute; the fig3 scenario and the
//! `sweep` command run the full-resolution version.)

use floquet_qubit::experiments::{chirality_map, ness_sweep, static_reference};
use floquet_qubit::lindblad::{Direction, DissipationParams, DriveWaveform};

fn main() {
    let waveform =
        DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Ccw, 0.2).unwrap();
    let rates = DissipationParams::CALCULATION;
    let t_grid: Vec<f64> = (0..=10).map(|k| 0.15 + 0.05 * k as f64).collect();
    let t0_grid: Vec<f64> = (0..16).map(|k| k as f64 / 16.0).collect();

    println!(
        "sweeping {}×{} cells per direction ...",
        t_grid.len(),
        t0_grid.len()
    );
    let ccw = ness_sweep(&waveform, &rates, &t_grid, &t0_grid, Direction::Ccw, 1e-8).unwrap();
    let cw = ness_sweep(&waveform, &rates, &t_grid, &t0_grid, Direction::Cw, 1e-8).unwrap();
    assert!(ccw.is_complete() && cw.is_complete());

    println!("\nNESS entropy over (T, t0/T), CCW direction:");
    print!("{:>7}", "T\\t0");
    for &frac in t0_grid.iter().step_by(2) {
        print!("{frac:>6.2}");
    }
    println!();
    for (ti, &t_period) in ccw.t_grid.iter().enumerate() {
        print!("{t_period:>7.2}");
        for k in (0..t0_grid.len()).step_by(2) {
            match ccw.cell(ti, k) {
                Ok(rec) => print!("{:>6.2}", rec.bloch.entropy),
                Err(_) => print!("{:>6}", "-"),
            }
        }
        println!();
    }

    let map = chirality_map(&ccw, &cw).unwrap();
    println!("\ntrace-distance chirality C over the same grid:");
    for (ti, &t_period) in map.t_grid.iter().enumerate() {
        print!("{t_period:>7.2}");
        for k in (0..t0_grid.len()).step_by(2) {
            match map.value(ti, k) {
                Ok(c) => print!("{c:>6.2}"),
                Err(_) => print!("{:>6}", "-"),
            }
        }
        println!();
    }

    println!("\nstatic steady-state entropy along the path (period-independent):");
    for point in static_reference(&waveform, &rates, &t0_grid) {
        if let Ok(record) = point.result {
            println!("  t0/T = {:>5.2}: S = {:.3}", point.t0_fraction, record.entropy);
        }
    }
}
