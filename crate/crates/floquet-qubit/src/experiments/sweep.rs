//! The (T, t₀, direction) NESS sweep engine and chirality maps.
//!
//! Every cell is an independent pure computation; cells run on a rayon pool
//! and are gathered in deterministic grid order, so output bytes do not
//! depend on the worker count. Failed cells stay in the table with their
//! error message instead of aborting the sweep — EP-adjacent cells can hit
//! eigensolver conditioning limits.

use rayon::prelude::*;

use crate::analysis::{bloch_record, ness_from_propagator, static_steady_state, NessRecord};
use crate::analysis::BlochRecord;
use crate::floquet::shifted_propagator;
use crate::lindblad::{drive_at, liouvillian, Direction, DissipationParams, DriveWaveform};

use super::ExperimentsError;

/// Provenance carried by every sweep table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepMetadata {
    pub scenario: Option<String>,
    pub tol: f64,
    pub code_version: String,
    /// Wall-clock seconds spent filling the table. Diagnostic only; never
    /// serialized into reproducible output files.
    pub wall_clock_s: f64,
}

/// Grid of NESS records over (period, starting phase) for one direction.
/// Cells are row-major: `cells[t_index * t0_count + t0_index]`.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub direction: Direction,
    pub t_grid: Vec<f64>,
    pub t0_fractions: Vec<f64>,
    pub cells: Vec<Result<NessRecord, String>>,
    pub metadata: SweepMetadata,
}

impl SweepTable {
    pub fn cell(&self, t_index: usize, t0_index: usize) -> &Result<NessRecord, String> {
        &self.cells[t_index * self.t0_fractions.len() + t0_index]
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Result::is_ok)
    }

    /// (t_index, t0_index, message) of every failed cell.
    pub fn failed_cells(&self) -> Vec<(usize, usize, String)> {
        let n_t0 = self.t0_fractions.len();
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(flat, cell)| {
                cell.as_ref()
                    .err()
                    .map(|msg| (flat / n_t0, flat % n_t0, msg.clone()))
            })
            .collect()
    }

    /// Row of the period closest to `t_period`.
    pub fn row_nearest(&self, t_period: f64) -> (f64, Vec<&Result<NessRecord, String>>) {
        let (idx, &t) = self
            .t_grid
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - t_period).abs().total_cmp(&(*b - t_period).abs())
            })
            .expect("non-empty period grid");
        let row = (0..self.t0_fractions.len())
            .map(|k| self.cell(idx, k))
            .collect();
        (t, row)
    }
}

fn validate_axis(name: &str, grid: &[f64]) -> Result<(), ExperimentsError> {
    if grid.is_empty() {
        return Err(ExperimentsError::InvalidGrid(format!("empty {name} grid")));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(ExperimentsError::InvalidGrid(format!(
            "{name} grid must be strictly increasing"
        )));
    }
    Ok(())
}

/// Fill the NESS grid for one traversal direction: for each (T, t₀) the
/// shifted one-period propagator is integrated and its fixed point extracted.
pub fn ness_sweep(
    waveform: &DriveWaveform,
    dissipation: &DissipationParams,
    t_grid: &[f64],
    t0_fractions: &[f64],
    direction: Direction,
    tol: f64,
) -> Result<SweepTable, ExperimentsError> {
    validate_axis("period", t_grid)?;
    validate_axis("t0", t0_fractions)?;
    if t_grid[0] <= 0.0 {
        return Err(ExperimentsError::InvalidGrid(
            "periods must be positive".into(),
        ));
    }
    if t0_fractions[0] < 0.0 || *t0_fractions.last().unwrap() >= 1.0 {
        return Err(ExperimentsError::InvalidGrid(
            "t0 fractions must lie in [0, 1)".into(),
        ));
    }

    let template = waveform.with_direction(direction);
    let started = std::time::Instant::now();
    let n_t0 = t0_fractions.len();
    let cells: Vec<Result<NessRecord, String>> = (0..t_grid.len() * n_t0)
        .into_par_iter()
        .map(|flat| {
            let t_period = t_grid[flat / n_t0];
            let frac = t0_fractions[flat % n_t0];
            let cell = || -> Result<NessRecord, ExperimentsError> {
                let w = template.with_period(t_period)?;
                let p = shifted_propagator(&w, dissipation, frac * t_period, tol)?;
                Ok(ness_from_propagator(&p)?)
            };
            cell().map_err(|e| e.to_string())
        })
        .collect();

    Ok(SweepTable {
        direction,
        t_grid: t_grid.to_vec(),
        t0_fractions: t0_fractions.to_vec(),
        cells,
        metadata: SweepMetadata {
            scenario: None,
            tol,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_s: started.elapsed().as_secs_f64(),
        },
    })
}

/// Trace distance between the two directions' steady states over the grid.
#[derive(Debug, Clone)]
pub struct ChiralityMap {
    pub t_grid: Vec<f64>,
    pub t0_fractions: Vec<f64>,
    /// Row-major like [`SweepTable::cells`].
    pub values: Vec<Result<f64, String>>,
}

impl ChiralityMap {
    pub fn value(&self, t_index: usize, t0_index: usize) -> &Result<f64, String> {
        &self.values[t_index * self.t0_fractions.len() + t0_index]
    }
}

/// C(T, t₀) = trace_distance(ρ_ccw(T, t₀), ρ_cw(T, (1 − t₀) mod 1)).
///
/// Reversing the time order of one direction gives the compared states a
/// point-to-point correspondence: the drive visits the same (J, Δ) point at
/// CCW phase t₀ and CW phase T − t₀.
pub fn chirality_map(
    table_ccw: &SweepTable,
    table_cw: &SweepTable,
) -> Result<ChiralityMap, ExperimentsError> {
    if table_ccw.direction != Direction::Ccw || table_cw.direction != Direction::Cw {
        return Err(ExperimentsError::AxisMismatch(
            "chirality map expects one CCW table and one CW table, in that order".into(),
        ));
    }
    if table_ccw.t_grid != table_cw.t_grid || table_ccw.t0_fractions != table_cw.t0_fractions {
        return Err(ExperimentsError::AxisMismatch(
            "sweep tables cover different grids".into(),
        ));
    }
    let fracs = &table_ccw.t0_fractions;
    // Partner index of each t0 under frac ↦ (1 − frac) mod 1.
    let partner: Result<Vec<usize>, ExperimentsError> = fracs
        .iter()
        .map(|&f| {
            let target = (1.0 - f).rem_euclid(1.0);
            fracs
                .iter()
                .position(|&g| (g - target).abs() < 1e-12)
                .ok_or_else(|| {
                    ExperimentsError::AxisMismatch(format!(
                        "t0 grid is not closed under reversal: no partner for {f}"
                    ))
                })
        })
        .collect();
    let partner = partner?;

    let mut values = Vec::with_capacity(table_ccw.cells.len());
    for ti in 0..table_ccw.t_grid.len() {
        for (k, &partner_k) in partner.iter().enumerate() {
            let value = match (table_ccw.cell(ti, k), table_cw.cell(ti, partner_k)) {
                (Ok(a), Ok(b)) => Ok(crate::analysis::trace_distance(&a.rho, &b.rho)),
                (Err(e), _) | (_, Err(e)) => Err(e.clone()),
            };
            values.push(value);
        }
    }
    Ok(ChiralityMap {
        t_grid: table_ccw.t_grid.clone(),
        t0_fractions: fracs.clone(),
        values,
    })
}

/// Steady state of the static Liouvillian 𝓛(t₀) along the parameter path.
/// The path point depends only on the fraction t₀/T, so the curve is shared
/// by every period.
#[derive(Debug, Clone)]
pub struct StaticPoint {
    pub t0_fraction: f64,
    pub result: Result<BlochRecord, String>,
}

pub fn static_reference(
    waveform: &DriveWaveform,
    dissipation: &DissipationParams,
    t0_fractions: &[f64],
) -> Vec<StaticPoint> {
    t0_fractions
        .iter()
        .map(|&frac| {
            let point = drive_at(waveform, frac * waveform.period);
            let result = static_steady_state(&liouvillian(&point, dissipation))
                .and_then(|rho| bloch_record(frac, &rho))
                .map_err(|e| e.to_string());
            StaticPoint {
                t0_fraction: frac,
                result,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::trace_distance;
    use crate::lindblad::ground_state;

    fn small_grids() -> (Vec<f64>, Vec<f64>) {
        let t_grid = vec![0.2, 0.35, 0.5];
        let t0 = (0..8).map(|k| k as f64 / 8.0).collect();
        (t_grid, t0)
    }

    #[test]
    fn zero_drive_sweep_lands_on_ground_state() {
        let w = DriveWaveform::circle(0.0, 0.0, Direction::Ccw, 0.2).unwrap();
        let d = DissipationParams::new(4.0, 0.0).unwrap();
        let (t_grid, t0) = small_grids();
        let table = ness_sweep(&w, &d, &t_grid, &t0, Direction::Ccw, 1e-8).unwrap();
        assert!(table.is_complete());
        for cell in &table.cells {
            let rec = cell.as_ref().unwrap();
            assert!(trace_distance(&rec.rho, &ground_state()) < 1e-8);
            assert!(rec.bloch.entropy < 1e-6);
        }
    }

    #[test]
    fn chirality_vanishes_for_direction_symmetric_waveform() {
        // Δ_max = 0 with constant coupling: both traversal directions see
        // the same static generator at every phase, so the paired steady
        // states coincide exactly. (A Δ_max = 0 loop with time-varying J is
        // *not* chirality-free: the steady orbit lags the drive, and the
        // reversal pairing compares different phases of that lag.)
        let w = DriveWaveform::constant(8.0, 0.25).unwrap();
        let d = DissipationParams::new(4.0, 0.0).unwrap();
        let (t_grid, t0) = small_grids();
        let ccw = ness_sweep(&w, &d, &t_grid, &t0, Direction::Ccw, 1e-8).unwrap();
        let cw = ness_sweep(&w, &d, &t_grid, &t0, Direction::Cw, 1e-8).unwrap();
        let map = chirality_map(&ccw, &cw).unwrap();
        for v in &map.values {
            assert!(*v.as_ref().unwrap() < 1e-7);
        }
    }

    #[test]
    fn chirality_rejects_mismatched_axes() {
        let w = DriveWaveform::circle(8.0, 1.0, Direction::Ccw, 0.25).unwrap();
        let d = DissipationParams::new(4.0, 0.0).unwrap();
        let (t_grid, t0) = small_grids();
        let ccw = ness_sweep(&w, &d, &t_grid, &t0, Direction::Ccw, 1e-8).unwrap();
        let cw = ness_sweep(&w, &d, &t_grid[..2], &t0, Direction::Cw, 1e-8).unwrap();
        assert!(matches!(
            chirality_map(&ccw, &cw),
            Err(ExperimentsError::AxisMismatch(_))
        ));
        assert!(matches!(
            chirality_map(&cw, &ccw),
            Err(ExperimentsError::AxisMismatch(_))
        ));
    }

    #[test]
    fn static_reference_tracks_path_purity() {
        // At t0 = T/4 the circle drive passes J = 0, where the static steady
        // state is the pure ground state; at t0 = 0 it is resonantly driven
        // and nearly fully mixed.
        let w =
            DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Ccw, 0.2).unwrap();
        let d = DissipationParams::new(4.0, 0.0).unwrap();
        let points = static_reference(&w, &d, &[0.0, 0.25]);
        let resonant = points[0].result.as_ref().unwrap();
        let quiet = points[1].result.as_ref().unwrap();
        assert!(resonant.entropy > 0.9);
        assert!(quiet.entropy < 1e-6);
    }
}
