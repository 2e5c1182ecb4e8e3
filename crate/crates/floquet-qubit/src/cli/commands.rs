//! The spectrum, evolve, and sweep commands.

use std::io::Write as IoWrite;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{BlochComponent, FitSeeds, TransientFit};
use crate::experiments::{chirality_map, ness_sweep, static_reference, Scenario, SweepTable};
use crate::floquet::{
    effective_spectrum, find_ep, micromotion, period_scan, shifted_propagator,
    stroboscopic_evolve, EpCandidate, PeriodScan,
};
use crate::lindblad::Direction;

use super::config::RunConfig;
use super::output::{format_sig, sanitize_message, write_json, CsvTable};
use super::CliError;

/// Parameter echo written next to every sweep so a run can be reproduced
/// from its outputs alone. Execution resources (worker count) and timing are
/// deliberately absent: they cannot affect the result bytes.
#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'a str,
    scenario: &'a str,
    code_version: &'a str,
    waveform: &'a crate::lindblad::DriveWaveform,
    dissipation: &'a crate::lindblad::DissipationParams,
    initial_state: &'a str,
    n_periods: usize,
    samples_per_period: usize,
    t_grid: &'a [f64],
    t0_fractions: &'a [f64],
    t0_series: &'a [f64],
    integration_tol: f64,
    seed: u64,
    files: Vec<String>,
    failed_cells: Vec<FailedCell>,
}

#[derive(Debug, Serialize)]
struct FailedCell {
    direction: &'static str,
    t_us: f64,
    t0_frac: f64,
    message: String,
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", cfg.out_dir.display())))
}

/// List the registered scenarios with their headline parameters.
pub fn list_scenarios(out: &mut impl IoWrite) -> std::io::Result<()> {
    for s in crate::experiments::registry() {
        writeln!(out, "{}", s.name)?;
        writeln!(out, "    {}", s.description)?;
        writeln!(
            out,
            "    family={:?} j_max={} j_min={} delta_max={:.6} direction={} T={} µs",
            s.waveform.family,
            s.waveform.j_max,
            s.waveform.j_min,
            s.waveform.delta_max,
            s.waveform.direction.label(),
            s.waveform.period,
        )?;
        writeln!(
            out,
            "    gamma_e={} gamma_phi={} initial_state={} n_periods={}",
            s.dissipation.gamma_e,
            s.dissipation.gamma_phi,
            s.initial_state.label(),
            s.n_periods,
        )?;
    }
    Ok(())
}

/// `spectrum`: period scan of the effective Floquet eigenvalues plus EP
/// candidates. Writes spectrum.csv and eps.json.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    let s = &cfg.scenario;
    let grid = s
        .t_grid
        .clone()
        .ok_or_else(|| CliError::Config("spectrum needs a period grid (set [grids])".into()))?;

    let (scan, eps) = cfg.with_worker_pool(|| -> Result<_, CliError> {
        let scan = period_scan(&s.waveform, &s.dissipation, &grid, 0.0, s.tol)?;
        let eps = find_ep(&scan)?;
        Ok((scan, eps))
    })??;

    write_spectrum_csv(&cfg.out_dir.join("spectrum.csv"), &scan)?;
    #[derive(Serialize)]
    struct EpFile<'a> {
        candidates: &'a [EpCandidate],
    }
    write_json(&cfg.out_dir.join("eps.json"), &EpFile { candidates: &eps })?;
    eprintln!(
        "spectrum: {} grid points, {} EP candidate(s) -> {}",
        grid.len(),
        eps.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn write_spectrum_csv(path: &Path, scan: &PeriodScan) -> Result<(), CliError> {
    let mut table = CsvTable::new(&[
        "T_us",
        "branch",
        "re_lambda",
        "im_lambda",
        "min_gap",
        "eigvec_cond",
        "warnings",
    ]);
    for point in &scan.points {
        match &point.spectrum {
            Ok(spec) => {
                let branches = point
                    .branches
                    .expect("successful points always carry branch labels");
                // One row per branch label, in label order.
                for branch in 0..4 {
                    let mode = branches
                        .iter()
                        .position(|&b| b == branch)
                        .expect("branch labels are a permutation");
                    let lambda = spec.eigenvalues[mode];
                    table.push_row(&[
                        format_sig(point.period),
                        branch.to_string(),
                        format_sig(lambda.re),
                        format_sig(lambda.im),
                        format_sig(spec.min_gap),
                        format_sig(spec.eigvec_condition),
                        String::new(),
                    ]);
                }
            }
            Err(e) => {
                let msg = sanitize_message(&e.to_string());
                for branch in 0..4 {
                    table.push_row(&[
                        format_sig(point.period),
                        branch.to_string(),
                        "nan".into(),
                        "nan".into(),
                        "nan".into(),
                        "nan".into(),
                        msg.clone(),
                    ]);
                }
            }
        }
    }
    table.write_to(path)
}

/// `evolve`: dense micromotion of the configured waveform plus stroboscopic
/// series for each configured starting phase, with optional transient fits.
/// Writes micromotion.csv, stroboscopic.csv (and one file per extra t₀),
/// and fits.json when fitting is enabled.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    let s = &cfg.scenario;
    let rho0 = s.initial_state.density_matrix();

    let records = micromotion(
        &s.waveform,
        &s.dissipation,
        &rho0,
        s.n_periods,
        s.samples_per_period,
        s.tol,
    )?;
    let mut table = CsvTable::new(&["t_us", "x", "y", "z", "entropy"]);
    for r in &records {
        table.push_row(&[
            format_sig(r.t),
            format_sig(r.x),
            format_sig(r.y),
            format_sig(r.z),
            format_sig(r.entropy),
        ]);
    }
    table.write_to(&cfg.out_dir.join("micromotion.csv"))?;

    #[derive(Serialize)]
    struct FitEntry<'a> {
        series: String,
        component: &'a str,
        #[serde(flatten)]
        fit: &'a TransientFit,
    }
    let mut fits: Vec<(String, BlochComponent, TransientFit)> = Vec::new();

    for (idx, &frac) in cfg.t0_series.iter().enumerate() {
        let t0 = frac * s.waveform.period;
        let p = shifted_propagator(&s.waveform, &s.dissipation, t0, s.tol)?;
        let series = stroboscopic_evolve(&p, &rho0, s.n_periods)?;
        let mut table = CsvTable::new(&["n", "t_us", "x", "y", "z"]);
        for (n, r) in &series.records {
            table.push_row(&[
                n.to_string(),
                format_sig(r.t),
                format_sig(r.x),
                format_sig(r.y),
                format_sig(r.z),
            ]);
        }
        let filename = if idx == 0 {
            "stroboscopic.csv".to_string()
        } else {
            format!("stroboscopic_t0_{frac:.3}.csv")
        };
        table.write_to(&cfg.out_dir.join(filename))?;

        if cfg.fit {
            let spectrum = effective_spectrum(&p)?;
            let seeds = FitSeeds::from_spectrum(&spectrum);
            for component in [BlochComponent::X, BlochComponent::Y, BlochComponent::Z] {
                let fit = crate::analysis::fit_transient_auto(&series, component, &seeds)?;
                fits.push((format!("t0={frac}T"), component, fit));
            }
        }
    }

    if cfg.fit {
        let entries: Vec<FitEntry> = fits
            .iter()
            .map(|(label, component, fit)| FitEntry {
                series: label.clone(),
                component: component.label(),
                fit,
            })
            .collect();
        #[derive(Serialize)]
        struct FitsFile<'a> {
            fits: Vec<FitEntry<'a>>,
        }
        write_json(&cfg.out_dir.join("fits.json"), &FitsFile { fits: entries })?;
    }
    eprintln!(
        "evolve: {} micromotion samples, {} stroboscopic series -> {}",
        records.len(),
        cfg.t0_series.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

/// `sweep`: NESS tables for both loop directions, the chirality map, and the
/// static steady-state reference. Writes ness_ccw.csv, ness_cw.csv,
/// chirality.csv, static_reference.csv, and manifest.json. Failed cells are
/// recorded in the tables and the manifest, and flip the exit code to 4.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    ensure_out_dir(cfg)?;
    let s = &cfg.scenario;
    let t_grid = s
        .t_grid
        .clone()
        .ok_or_else(|| CliError::Config("sweep needs a period grid (set [grids])".into()))?;
    let t0_grid = s
        .t0_grid
        .clone()
        .ok_or_else(|| CliError::Config("sweep needs a t0 grid (set grids.t0_points)".into()))?;

    let (ccw, cw) = cfg.with_worker_pool(|| -> Result<_, CliError> {
        let ccw = ness_sweep(
            &s.waveform,
            &s.dissipation,
            &t_grid,
            &t0_grid,
            Direction::Ccw,
            s.tol,
        )?;
        let cw = ness_sweep(
            &s.waveform,
            &s.dissipation,
            &t_grid,
            &t0_grid,
            Direction::Cw,
            s.tol,
        )?;
        Ok((ccw, cw))
    })??;

    write_ness_csv(&cfg.out_dir.join("ness_ccw.csv"), &ccw)?;
    write_ness_csv(&cfg.out_dir.join("ness_cw.csv"), &cw)?;

    let chirality = chirality_map(&ccw, &cw)?;
    let mut table = CsvTable::new(&["T_us", "t0_frac", "C"]);
    for (ti, &t_period) in chirality.t_grid.iter().enumerate() {
        for (k, &frac) in chirality.t0_fractions.iter().enumerate() {
            let value = match chirality.value(ti, k) {
                Ok(v) => format_sig(*v),
                Err(_) => "nan".to_string(),
            };
            table.push_row(&[format_sig(t_period), format_sig(frac), value]);
        }
    }
    table.write_to(&cfg.out_dir.join("chirality.csv"))?;

    let reference = static_reference(&s.waveform, &s.dissipation, &t0_grid);
    let mut table = CsvTable::new(&["t0_frac", "x", "y", "z", "entropy"]);
    for point in &reference {
        match &point.result {
            Ok(r) => table.push_row(&[
                format_sig(point.t0_fraction),
                format_sig(r.x),
                format_sig(r.y),
                format_sig(r.z),
                format_sig(r.entropy),
            ]),
            Err(_) => table.push_row(&[
                format_sig(point.t0_fraction),
                "nan".into(),
                "nan".into(),
                "nan".into(),
                "nan".into(),
            ]),
        }
    }
    table.write_to(&cfg.out_dir.join("static_reference.csv"))?;

    let mut failed_cells = Vec::new();
    for table in [&ccw, &cw] {
        for (ti, t0i, message) in table.failed_cells() {
            failed_cells.push(FailedCell {
                direction: table.direction.label(),
                t_us: table.t_grid[ti],
                t0_frac: table.t0_fractions[t0i],
                message: sanitize_message(&message),
            });
        }
    }
    let failed = failed_cells.len();

    let manifest = Manifest {
        command: "sweep",
        scenario: s.name,
        code_version: env!("CARGO_PKG_VERSION"),
        waveform: &s.waveform,
        dissipation: &s.dissipation,
        initial_state: s.initial_state.label(),
        n_periods: s.n_periods,
        samples_per_period: s.samples_per_period,
        t_grid: &t_grid,
        t0_fractions: &t0_grid,
        t0_series: &cfg.t0_series,
        integration_tol: s.tol,
        seed: cfg.seed,
        files: vec![
            "ness_ccw.csv".into(),
            "ness_cw.csv".into(),
            "chirality.csv".into(),
            "static_reference.csv".into(),
        ],
        failed_cells,
    };
    write_json(&cfg.out_dir.join("manifest.json"), &manifest)?;

    eprintln!(
        "sweep: {}x{} cells per direction in {:.1}s + {:.1}s -> {}",
        t_grid.len(),
        t0_grid.len(),
        ccw.metadata.wall_clock_s,
        cw.metadata.wall_clock_s,
        cfg.out_dir.display()
    );
    if failed > 0 {
        return Err(CliError::PartialSweep { failed });
    }
    Ok(())
}

fn write_ness_csv(path: &Path, table: &SweepTable) -> Result<(), CliError> {
    let mut csv = CsvTable::new(&["T_us", "t0_frac", "x", "y", "z", "entropy", "residual"]);
    for (ti, &t_period) in table.t_grid.iter().enumerate() {
        for (k, &frac) in table.t0_fractions.iter().enumerate() {
            match table.cell(ti, k) {
                Ok(rec) => csv.push_row(&[
                    format_sig(t_period),
                    format_sig(frac),
                    format_sig(rec.bloch.x),
                    format_sig(rec.bloch.y),
                    format_sig(rec.bloch.z),
                    format_sig(rec.bloch.entropy),
                    format_sig(rec.residual),
                ]),
                Err(_) => csv.push_row(&[
                    format_sig(t_period),
                    format_sig(frac),
                    "nan".into(),
                    "nan".into(),
                    "nan".into(),
                    "nan".into(),
                    "nan".into(),
                ]),
            }
        }
    }
    csv.write_to(path)
}

/// Scenario-by-name config with default run extras; used by tests and
/// examples that bypass flag parsing.
pub fn scenario_config(name: &str, out_dir: &Path) -> Result<RunConfig, CliError> {
    let scenario: Scenario = crate::experiments::scenario(name).map_err(CliError::from)?;
    let fit = scenario
        .outputs
        .contains(&crate::experiments::OutputKind::Fits);
    let t0_series = if scenario.t0_fractions_series.is_empty() {
        vec![0.0]
    } else {
        scenario.t0_fractions_series.clone()
    };
    Ok(RunConfig {
        scenario,
        t0_series,
        fit,
        out_dir: out_dir.to_path_buf(),
        seed: 0,
        workers: 0,
    })
}
