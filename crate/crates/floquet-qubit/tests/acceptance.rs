//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines. Thresholds marked "reference" were frozen from
//! converged high-resolution runs of this simulator.

mod common;

use common::{
    bloch_distance, calc_rates, fig1_waveform, measured_rates, rk45_period_propagator, TestRng,
};
use num_complex::Complex64;

use floquet_qubit::analysis::{
    bloch_from_rho, entropy, fit_transient_auto, ness_from_propagator, trace_distance,
    BlochComponent, FitSeeds, TransientKind,
};
use floquet_qubit::experiments::{chirality_map, ness_sweep, run_scenario, scenario};
use floquet_qubit::floquet::{
    effective_spectrum, find_ep, period_scan, propagate_period, shifted_propagator,
    stroboscopic_evolve,
};
use floquet_qubit::lindblad::{
    dephasing_operator, drive_at, emission_operator, hamiltonian, liouvillian,
    maximally_mixed_state, plus_x_state, unvectorize, vec_identity, vectorize, ControlPoint,
    Direction, DissipationParams, DriveWaveform,
};
use floquet_qubit::numerics::{eig, eigenvalue_set_distance};

fn pass(id: &str, detail: &str) {
    println!("[PASS] {id}: {detail}");
}

fn grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|k| from + k as f64 * step).collect()
}

/// C1 — drive off: Liouvillian and effective-generator spectra both equal
/// {0, −γ_e/2, −γ_e/2, −γ_e} to 1e−9.
#[test]
fn acceptance_01_analytic_spectrum_oracle() {
    let d = calc_rates();
    let expected = [0.0, -2.0, -2.0, -4.0];

    let l = liouvillian(&ControlPoint { j: 0.0, delta: 0.0 }, &d);
    let static_eigs = eig(&l).unwrap().eigenvalues;
    for (lam, want) in static_eigs.iter().zip(expected) {
        assert!(
            (lam - Complex64::new(want, 0.0)).norm() <= 1e-9,
            "static eigenvalue {lam} vs {want}"
        );
    }

    let w = DriveWaveform::constant(0.0, 0.2).unwrap();
    let p = propagate_period(&w, &d, 1e-10).unwrap();
    let s = effective_spectrum(&p).unwrap();
    for (lam, want) in s.eigenvalues.iter().zip(expected) {
        assert!(
            (lam - Complex64::new(want, 0.0)).norm() <= 1e-9,
            "Floquet eigenvalue {lam} vs {want}"
        );
    }
    pass("C1", "drive-off spectra equal {0, -2, -2, -4} µs⁻¹ to 1e-9");
}

/// C2 — vectorized Liouvillian action matches the element-wise master
/// equation on 1000 random (ρ, J, Δ, γ_e, γ_φ) draws to 1e−12.
#[test]
fn acceptance_02_master_equation_oracle() {
    let mut rng = TestRng::new(0x02);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = ControlPoint {
            j: rng.range(-20.0, 20.0),
            delta: rng.range(-20.0, 20.0),
        };
        let d = DissipationParams::new(rng.range(0.0, 6.0), rng.range(0.0, 1.0)).unwrap();
        let rho = rng.density_matrix();

        let via_superop =
            unvectorize(&liouvillian(&p, &d).mul_vec(&vectorize(&rho).unwrap())).unwrap();

        let h = hamiltonian(&p);
        let i = Complex64::i();
        let mut direct = (&(&h * &rho) - &(&rho * &h)).scale(-i);
        for jump in [emission_operator(d.gamma_e), dephasing_operator(d.gamma_phi)] {
            let ldag = jump.dagger();
            let ldl = &ldag * &jump;
            let gain = &(&jump * &rho) * &ldag;
            let loss = &(&ldl * &rho) + &(&rho * &ldl);
            direct = &direct + &(&gain - &loss.scale_re(0.5));
        }
        worst = worst.max((&via_superop - &direct).max_abs_entry());
    }
    assert!(worst <= 1e-12, "worst deviation {worst:e}");
    pass("C2", &format!("1000 random draws, worst deviation {worst:.2e}"));
}

/// C3 — slice-product propagator vs independent adaptive Dormand–Prince
/// integration at the fig1 parameters, T ∈ {200, 600} ns, to 1e−7.
#[test]
fn acceptance_03_propagator_vs_rk_oracle() {
    let d = calc_rates();
    let mut worst: f64 = 0.0;
    for t_period in [0.2, 0.6] {
        let w = fig1_waveform(t_period);
        let p = propagate_period(&w, &d, 1e-9).unwrap();
        let reference = rk45_period_propagator(&w, &d, 0.0, 1e-11);
        let err = (&p.g - &reference).frobenius_norm();
        assert!(err <= 1e-7, "T={t_period}: ‖G − G_RK‖ = {err:e}");
        worst = worst.max(err);
    }
    pass("C3", &format!("slice product matches RK45 to {worst:.2e} ≤ 1e-7"));
}

/// C4 — regime split: |Im λ| > 1 at T=200 ns, < 1e−6 at T=600 ns, and
/// find_ep locates an EP strictly inside (200, 600) ns.
#[test]
fn acceptance_04_regime_split_and_ep() {
    let d = calc_rates();

    let under = effective_spectrum(&propagate_period(&fig1_waveform(0.2), &d, 1e-9).unwrap())
        .unwrap();
    let max_im = under
        .nontrivial_eigenvalues()
        .iter()
        .map(|l| l.im.abs())
        .fold(0.0f64, f64::max);
    assert!(max_im > 1.0, "T=200 ns: |Im| = {max_im}");

    let over = effective_spectrum(&propagate_period(&fig1_waveform(0.6), &d, 1e-9).unwrap())
        .unwrap();
    let max_im_over = over
        .nontrivial_eigenvalues()
        .iter()
        .map(|l| l.im.abs())
        .fold(0.0f64, f64::max);
    assert!(max_im_over < 1e-6, "T=600 ns: |Im| = {max_im_over:e}");

    let scan = period_scan(&fig1_waveform(0.2), &d, &grid(0.15, 0.65, 0.01), 0.0, 1e-8).unwrap();
    let eps = find_ep(&scan).unwrap();
    let inside = eps
        .iter()
        .find(|ep| ep.t_star > 0.2 && ep.t_star < 0.6)
        .unwrap_or_else(|| panic!("no EP inside (0.2, 0.6): {eps:?}"));
    pass(
        "C4",
        &format!(
            "underdamped |Im|={max_im:.2}, overdamped |Im|={max_im_over:.1e}, EP at T*={:.4} µs",
            inside.t_star
        ),
    );
}

/// C5 — spectra are t₀-invariant: eigenvalue-set distance below 1e−7 across
/// t₀ ∈ {0, 0.2, 0.5, 0.8}·T at T = 200 ns.
#[test]
fn acceptance_05_t0_invariance() {
    let d = calc_rates();
    let w = fig1_waveform(0.2);
    let base = effective_spectrum(&shifted_propagator(&w, &d, 0.0, 1e-10).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    for frac in [0.2, 0.5, 0.8] {
        let shifted =
            effective_spectrum(&shifted_propagator(&w, &d, frac * 0.2, 1e-10).unwrap()).unwrap();
        let dist = eigenvalue_set_distance(&base.eigenvalues, &shifted.eigenvalues).unwrap();
        assert!(dist < 1e-7, "t0 = {frac}T: distance {dist:e}");
        worst = worst.max(dist);
    }
    pass("C5", &format!("worst eigenvalue-set distance {worst:.2e} < 1e-7"));
}

/// C6 — CPTP invariants over 500 random propagators: trace preservation and
/// Hermiticity preservation to 1e−9, Bloch norms ≤ 1+1e−9, det G to 1e−8
/// relative, conjugate-closed spectra to 1e−8.
#[test]
fn acceptance_06_cptp_invariant_suite() {
    use rayon::prelude::*;

    let cases: Vec<u64> = (0..500).collect();
    cases.par_iter().for_each(|&k| {
        let mut rng = TestRng::new(0x0600 + k);
        let t_period = rng.range(0.1, 0.6);
        let direction = if rng.unit() < 0.5 {
            Direction::Ccw
        } else {
            Direction::Cw
        };
        let w = if rng.unit() < 0.5 {
            DriveWaveform::circle(rng.range(0.0, 20.0), rng.range(0.0, 12.0), direction, t_period)
                .unwrap()
        } else {
            let j_min = rng.range(0.0, 2.0);
            DriveWaveform::cos_squared(
                j_min + rng.range(0.0, 18.0),
                j_min,
                rng.range(0.0, 12.0),
                direction,
                t_period,
            )
            .unwrap()
        };
        let d = DissipationParams::new(rng.range(0.5, 6.0), rng.range(0.0, 0.5)).unwrap();
        let p = shifted_propagator(&w, &d, rng.range(0.0, t_period), 1e-9).unwrap();

        // Trace preservation: vec(I)† G = vec(I)†.
        let vid = vec_identity();
        for col in 0..4 {
            let dot: Complex64 = (0..4).map(|r| vid[r].conj() * p.g[(r, col)]).sum();
            assert!(
                (dot - vid[col]).norm() <= 1e-9,
                "case {k}: trace preservation violated"
            );
        }

        // Hermiticity preservation and Bloch norm on random states.
        for _ in 0..2 {
            let rho = rng.density_matrix();
            let out = unvectorize(&p.g.mul_vec(&vectorize(&rho).unwrap())).unwrap();
            assert!(
                out.hermiticity_error() <= 1e-9,
                "case {k}: Hermiticity violated"
            );
            let (x, y, z) = bloch_from_rho(&out).unwrap();
            let norm = (x * x + y * y + z * z).sqrt();
            assert!(norm <= 1.0 + 1e-9, "case {k}: Bloch norm {norm}");
        }

        // Jacobi/Liouville determinant identity.
        let expected_det = (-2.0 * (d.gamma_e + d.gamma_phi) * t_period).exp();
        let det = p.g.det().norm();
        assert!(
            (det - expected_det).abs() <= 1e-8 * expected_det,
            "case {k}: det {det} vs {expected_det}"
        );

        // Conjugation-closed spectrum.
        let eigs = eig(&p.g).unwrap().eigenvalues;
        for lam in &eigs {
            assert!(
                eigs.iter().any(|mu| (mu - lam.conj()).norm() <= 1e-8),
                "case {k}: spectrum not conjugate-closed"
            );
        }
    });
    pass("C6", "500 random propagators satisfy all CPTP invariants");
}

/// C7 — NESS fixed-point residual ≤ 1e−8; G⁵⁰ reaches the NESS within
/// trace distance 1e−6 from random states whenever |Re λ_slow|·50T > 5.
#[test]
fn acceptance_07_fixed_point_convergence() {
    let d = calc_rates();
    let mut rng = TestRng::new(0x07);
    let mut checked = 0;
    for (t_period, frac) in [(0.2, 0.0), (0.35, 0.3), (0.6, 0.0), (0.45, 0.6)] {
        let w = fig1_waveform(t_period);
        let p = shifted_propagator(&w, &d, frac * t_period, 1e-9).unwrap();
        let ness = ness_from_propagator(&p).unwrap();
        assert!(ness.residual <= 1e-8, "residual {:e}", ness.residual);

        let spectrum = effective_spectrum(&p).unwrap();
        let decay_exponent = spectrum.slow_mode().re.abs() * 50.0 * t_period;
        if decay_exponent <= 5.0 {
            continue;
        }
        for _ in 0..20 {
            let rho0 = rng.density_matrix();
            let mut v = vectorize(&rho0).unwrap().to_vec();
            for _ in 0..50 {
                v = p.g.mul_vec(&v);
            }
            let settled = unvectorize(&v).unwrap().hermitize();
            let settled = settled.scale_re(1.0 / settled.trace().re);
            let dist = trace_distance(&settled, &ness.rho);
            assert!(
                dist <= 1e-6,
                "T={t_period}, t0={frac}T: distance {dist:e} after 50 periods \
                 (exponent {decay_exponent:.1})"
            );
            checked += 1;
        }
    }
    assert!(checked >= 60, "too few convergent cases exercised: {checked}");
    pass(
        "C7",
        &format!("residuals ≤ 1e-8; {checked} random states converged within 1e-6"),
    );
}

/// C8 — transient fits: fitted decay rate and frequency of the T=200 ns
/// stroboscopic x-series within 5% of the slow Floquet mode; the T=600 ns
/// series selects the pure-decay model.
#[test]
fn acceptance_08_transient_fit_consistency() {
    let d = calc_rates();

    let w = fig1_waveform(0.2);
    let p = propagate_period(&w, &d, 1e-9).unwrap();
    let spectrum = effective_spectrum(&p).unwrap();
    let slow = spectrum.slow_mode();
    let series = stroboscopic_evolve(&p, &plus_x_state(), 10).unwrap();
    let seeds = FitSeeds::from_spectrum(&spectrum);
    let fit = fit_transient_auto(&series, BlochComponent::X, &seeds).unwrap();
    assert_eq!(fit.kind, TransientKind::Underdamped, "expected oscillation");
    let kappa_err = (fit.decay_rate - (-slow.re)).abs() / (-slow.re);
    let omega_err = (fit.frequency - slow.im.abs()).abs() / slow.im.abs();
    assert!(kappa_err <= 0.05, "decay-rate mismatch {kappa_err:.3}");
    assert!(omega_err <= 0.05, "frequency mismatch {omega_err:.3}");

    let w = fig1_waveform(0.6);
    let p = propagate_period(&w, &d, 1e-9).unwrap();
    let spectrum_over = effective_spectrum(&p).unwrap();
    let series_over = stroboscopic_evolve(&p, &plus_x_state(), 10).unwrap();
    let seeds_over = FitSeeds::from_spectrum(&spectrum_over);
    let fit_over = fit_transient_auto(&series_over, BlochComponent::X, &seeds_over).unwrap();
    assert_eq!(
        fit_over.kind,
        TransientKind::Overdamped,
        "expected pure decay at T=600 ns"
    );
    pass(
        "C8",
        &format!("κ within {kappa_err:.1e}, ω within {omega_err:.1e} of the slow mode; T=600 ns picks pure decay"),
    );
}

/// C9a — near-mixed plateau, as specified: NESS entropy ≥ 0.95 for all t₀
/// at T ≈ 350 ns.
///
/// This clause does not hold in this simulator and is left failing on
/// purpose. Converged reference runs (validated against the element-wise
/// master equation and an independent adaptive Runge–Kutta propagator) put
/// the minimum entropy over t₀ at 0.9471 (T=350 ns) and 0.9480 (T=360 ns)
/// for γ_e=4, γ_φ=0, and no sanctioned rate set or nearby period reaches
/// 0.95 — the plateau tops out ≈0.002 bits below the specified bound. The
/// states are "nearly fully mixed" (Bloch radius ≤ 0.19), but the 0.95
/// quantification overshoots slightly.
#[test]
fn acceptance_09a_near_mixed_plateau() {
    let d = calc_rates();
    let mut best_min_entropy: f64 = 0.0;
    let mut best_t = 0.0;
    for t_period in [0.34, 0.35, 0.36, 0.37] {
        let w = fig1_waveform(t_period).with_direction(Direction::Ccw);
        let min_entropy = (0..50)
            .map(|k| {
                let frac = k as f64 / 50.0;
                let p = shifted_propagator(&w, &d, frac * t_period, 1e-8).unwrap();
                ness_from_propagator(&p).unwrap().bloch.entropy
            })
            .fold(f64::INFINITY, f64::min);
        if min_entropy > best_min_entropy {
            best_min_entropy = min_entropy;
            best_t = t_period;
        }
    }
    assert!(
        best_min_entropy >= 0.95,
        "[FAIL] C9a: NESS entropy ≥ 0.95 for all t0 near T = 350 ns is not attained: \
         the converged minimum over t0 peaks at {best_min_entropy:.4} (T = {best_t} µs)"
    );
    pass(
        "C9a",
        &format!("min entropy {best_min_entropy:.4} ≥ 0.95 at T = {best_t} µs"),
    );
}

/// C9b — double-dip structure at T = 540 ns, with the dip-depth threshold
/// frozen from a converged reference run as the criterion prescribes.
/// Reference (CCW, γ_e=4, γ_φ=0): interior minima at t0/T = 0.42 and 0.92,
/// each 0.088 bits below S(t0=0); threshold frozen at 0.06.
#[test]
fn acceptance_09b_entropy_double_dip() {
    let d = calc_rates();
    let t_period = 0.54;
    let w = fig1_waveform(t_period).with_direction(Direction::Ccw);
    let profile: Vec<f64> = (0..50)
        .map(|k| {
            let frac = k as f64 / 50.0;
            let p = shifted_propagator(&w, &d, frac * t_period, 1e-8).unwrap();
            ness_from_propagator(&p).unwrap().bloch.entropy
        })
        .collect();
    let s0 = profile[0];
    let minima: Vec<(f64, f64)> = (1..49)
        .filter(|&k| profile[k] < profile[k - 1] && profile[k] <= profile[k + 1])
        .map(|k| (k as f64 / 50.0, profile[k]))
        .collect();
    assert_eq!(minima.len(), 2, "expected a double dip, got {minima:?}");
    let near = |target: f64| {
        minima
            .iter()
            .find(|(frac, _)| (frac - target).abs() <= 0.2)
            .copied()
            .unwrap_or_else(|| panic!("no dip near t0/T = {target}: {minima:?}"))
    };
    let (frac1, dip1) = near(0.25);
    let (frac2, dip2) = near(0.75);
    const DIP_DEPTH_MIN: f64 = 0.06; // frozen from the converged reference
    assert!(s0 - dip1 >= DIP_DEPTH_MIN, "dip 1 depth {}", s0 - dip1);
    assert!(s0 - dip2 >= DIP_DEPTH_MIN, "dip 2 depth {}", s0 - dip2);
    pass(
        "C9b",
        &format!(
            "double dip at t0/T = {frac1:.2} and {frac2:.2}, depths {:.3}/{:.3} ≥ {DIP_DEPTH_MIN}",
            s0 - dip1,
            s0 - dip2
        ),
    );
}

/// C10 — chirality: zero map for a direction-symmetric waveform; fig4
/// first-period transfer signs with frozen magnitudes; positive correlation
/// between (1 − S) and C over the fig3 grid.
#[test]
fn acceptance_10_chirality() {
    let d = calc_rates();

    // Direction-symmetric waveform (constant J, Δ_max = 0): C ≡ 0.
    let w = DriveWaveform::constant(8.0, 0.3).unwrap();
    let t_grid = [0.2, 0.3, 0.4];
    let t0_grid: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
    let ccw = ness_sweep(&w, &d, &t_grid, &t0_grid, Direction::Ccw, 1e-8).unwrap();
    let cw = ness_sweep(&w, &d, &t_grid, &t0_grid, Direction::Cw, 1e-8).unwrap();
    let map = chirality_map(&ccw, &cw).unwrap();
    for value in &map.values {
        let c = value.as_ref().unwrap();
        assert!(*c <= 1e-7, "direction-symmetric chirality {c:e}");
    }

    // fig4 chiral transfer from |−x⟩. Frozen reference: first-period-end
    // x = +0.765 (CW) and −0.738 (CCW).
    let bundle = run_scenario("fig4", &[]).unwrap();
    let x_end = |needle: &str| -> f64 {
        bundle
            .stroboscopic
            .iter()
            .find(|l| l.label.contains(needle))
            .expect("fig4 series")
            .series
            .records[1]
            .1
            .x
    };
    let x_cw = x_end(",cw");
    let x_ccw = x_end(",ccw");
    assert!(x_cw >= 0.6, "CW transfer x = {x_cw}");
    assert!(x_ccw <= -0.55, "CCW return x = {x_ccw}");

    // Positive grid correlation between mixedness deficit (1 − S) and C over
    // the fig3 sweep (coarsened grid; the full-resolution map behaves the
    // same but costs minutes, not seconds).
    let fig3 = scenario("fig3").unwrap();
    let t_grid = grid(0.15, 0.65, 0.025);
    let t0_grid: Vec<f64> = (0..20).map(|k| k as f64 / 20.0).collect();
    let ccw = ness_sweep(
        &fig3.waveform,
        &fig3.dissipation,
        &t_grid,
        &t0_grid,
        Direction::Ccw,
        1e-8,
    )
    .unwrap();
    let cw = ness_sweep(
        &fig3.waveform,
        &fig3.dissipation,
        &t_grid,
        &t0_grid,
        Direction::Cw,
        1e-8,
    )
    .unwrap();
    let map = chirality_map(&ccw, &cw).unwrap();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for ti in 0..t_grid.len() {
        for k in 0..t0_grid.len() {
            if let (Ok(rec), Ok(c)) = (ccw.cell(ti, k), map.value(ti, k)) {
                xs.push(1.0 - rec.bloch.entropy);
                ys.push(*c);
            }
        }
    }
    let correlation = pearson(&xs, &ys);
    assert!(correlation > 0.0, "correlation {correlation}");
    pass(
        "C10",
        &format!(
            "symmetric waveform C ≤ 1e-7; fig4 x_cw={x_cw:.3}, x_ccw={x_ccw:.3}; \
             corr(1−S, C) = {correlation:.3} > 0"
        ),
    );
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

/// C11 — determinism: identical configs and seeds produce byte-identical
/// CSV/JSON outputs regardless of worker count.
#[test]
fn acceptance_11_determinism() {
    use floquet_qubit::cli::{cmd_sweep, scenario_config};

    let base = std::env::temp_dir().join(format!("floquet-acceptance-{}", std::process::id()));
    let run = |workers: usize, label: &str| -> Vec<(String, Vec<u8>)> {
        let out_dir = base.join(label);
        std::fs::create_dir_all(&out_dir).unwrap();
        let mut cfg = scenario_config("fig3", &out_dir).unwrap();
        // Coarse grids keep the determinism check quick; the full sweep goes
        // through the identical code path.
        cfg.scenario.t_grid = Some(vec![0.2, 0.35, 0.5]);
        cfg.scenario.t0_grid = Some((0..10).map(|k| k as f64 / 10.0).collect());
        cfg.workers = workers;
        cmd_sweep(&cfg).unwrap();
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
            .unwrap()
            .map(|entry| {
                let entry = entry.unwrap();
                (
                    entry.file_name().to_string_lossy().into_owned(),
                    std::fs::read(entry.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };
    let serial = run(1, "serial");
    let parallel = run(4, "parallel");
    assert_eq!(serial.len(), parallel.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in serial.iter().zip(&parallel) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "file {name_a} differs across worker counts");
    }
    let _ = std::fs::remove_dir_all(&base);
    pass(
        "C11",
        &format!("{} output files byte-identical across 1 vs 4 workers", serial.len()),
    );
}

/// Supplementary: the measured-rate micromotion run settles onto a repeating
/// loop, and the tenth-period state approximates the exact NESS.
#[test]
fn acceptance_supplementary_micromotion_repetition() {
    use floquet_qubit::floquet::{loop_distances, micromotion};

    let w = fig1_waveform(0.2);
    let d = measured_rates();
    let records = micromotion(&w, &d, &plus_x_state(), 10, 20, 1e-8).unwrap();
    let distances = loop_distances(&records, 20);
    for window in distances.windows(2) {
        assert!(window[1] < window[0]);
    }
    // Frozen reference: 0.062, 0.033, 0.019, 0.011, 0.005 for pairs (5,6)
    // onward; below 0.02 from pair (7,8).
    for &dist in &distances[6..] {
        assert!(dist < 0.02, "late loop distance {dist}");
    }

    let p = propagate_period(&w, &d, 1e-9).unwrap();
    let exact = ness_from_propagator(&p).unwrap();
    let tenth = floquet_qubit::analysis::nth_period_state(&p, &plus_x_state(), 10).unwrap();
    let spectrum = effective_spectrum(&p).unwrap();
    if spectrum.slow_mode().re.abs() * 10.0 * 0.2 > 3.0 {
        let dist = trace_distance(&exact.rho, &tenth);
        assert!(dist <= 0.05, "tenth-period approximation off by {dist}");
    }
    pass(
        "C-supp",
        "micromotion loop distances decay; tenth-period state tracks the NESS",
    );
}

/// Supplementary: large-period NESS approaches the static steady states
/// along the path. Converged reference distances (max over t₀): 0.40 at
/// T=2 µs, 0.31 at T=5 µs, 0.13 at T=10 µs — the convergence is slow near
/// the quiet path segment where the static state swings sharply, so the
/// 0.15 bound is attained at T = 10 µs and the trend is asserted across
/// the three periods.
#[test]
fn acceptance_supplementary_adiabatic_limit() {
    use floquet_qubit::analysis::static_steady_state;

    let d = calc_rates();
    let max_dist = |t_period: f64| -> f64 {
        let w = fig1_waveform(t_period);
        (0..10)
            .map(|k| {
                let frac = k as f64 / 10.0;
                let p = shifted_propagator(&w, &d, frac * t_period, 1e-8).unwrap();
                let ness = ness_from_propagator(&p).unwrap();
                let point = drive_at(&w, frac * t_period);
                let stationary = static_steady_state(&liouvillian(&point, &d)).unwrap();
                trace_distance(&ness.rho, &stationary)
            })
            .fold(0.0f64, f64::max)
    };
    let (d2, d5, d10) = (max_dist(2.0), max_dist(5.0), max_dist(10.0));
    assert!(d10 < d5 && d5 < d2, "no adiabatic trend: {d2} {d5} {d10}");
    assert!(d10 <= 0.15, "T = 10 µs distance {d10}");
    pass(
        "C-supp",
        &format!("adiabatic approach {d2:.2} → {d5:.2} → {d10:.2}; ≤ 0.15 at T = 10 µs"),
    );
}

/// Supplementary: CCW and CW NESS x-profiles are approximately opposite
/// under the path pairing. Frozen reference: the residue
/// max |x_ccw(t0) + x_cw(1−t0)| is 0.147 ≈ 0.21 of the x-range at these
/// parameters; threshold frozen at 0.3 of the range.
#[test]
fn acceptance_supplementary_direction_opposition() {
    let d = calc_rates();
    let w = fig1_waveform(0.2);
    let t_grid = grid(0.2, 0.6, 0.05);
    let t0_grid: Vec<f64> = (0..20).map(|k| k as f64 / 20.0).collect();
    let ccw = ness_sweep(&w, &d, &t_grid, &t0_grid, Direction::Ccw, 1e-8).unwrap();
    let cw = ness_sweep(&w, &d, &t_grid, &t0_grid, Direction::Cw, 1e-8).unwrap();

    let mut max_sum: f64 = 0.0;
    let mut x_min: f64 = f64::INFINITY;
    let mut x_max: f64 = f64::NEG_INFINITY;
    for ti in 0..t_grid.len() {
        for k in 0..t0_grid.len() {
            let partner = (t0_grid.len() - k) % t0_grid.len();
            if let (Ok(a), Ok(b)) = (ccw.cell(ti, k), cw.cell(ti, partner)) {
                max_sum = max_sum.max((a.bloch.x + b.bloch.x).abs());
                x_min = x_min.min(a.bloch.x);
                x_max = x_max.max(a.bloch.x);
            }
        }
    }
    let range = x_max - x_min;
    assert!(range > 0.1, "degenerate x-range {range}");
    assert!(
        max_sum <= 0.3 * range,
        "opposition residue {max_sum} vs range {range}"
    );
    pass(
        "C-supp",
        &format!("max |x_ccw + x_cw∘reverse| = {max_sum:.3} ≤ 0.3·range ({range:.3})"),
    );
}

/// Supplementary: micromotion restricted to period multiples agrees with the
/// stroboscopic propagator powers, and entropy values sit inside [0, 1].
#[test]
fn acceptance_supplementary_micromotion_consistency() {
    use floquet_qubit::floquet::micromotion;

    let d = measured_rates();
    let w = fig1_waveform(0.2);
    let samples = 10;
    let records = micromotion(&w, &d, &plus_x_state(), 6, samples, 1e-9).unwrap();
    let p = propagate_period(&w, &d, 1e-9).unwrap();
    let series = stroboscopic_evolve(&p, &plus_x_state(), 6).unwrap();
    for (n, strobo) in &series.records {
        let dense = &records[n * samples];
        let dist = ((dense.x - strobo.x).powi(2)
            + (dense.y - strobo.y).powi(2)
            + (dense.z - strobo.z).powi(2))
        .sqrt();
        assert!(dist <= 1e-8, "period {n}: {dist:e}");
    }
    for r in &records {
        assert!((0.0..=1.0).contains(&r.entropy));
        assert!(r.bloch_norm() <= 1.0 + 1e-9);
    }
    let _ = entropy(&maximally_mixed_state()).unwrap();
    let _ = bloch_distance(&plus_x_state(), &maximally_mixed_state());
    pass("C-supp", "micromotion and stroboscopic powers agree to 1e-8");
}
