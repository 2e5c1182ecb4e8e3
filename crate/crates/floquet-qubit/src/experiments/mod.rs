//! Scenario registry and result-bundle assembly for the figure-level runs:
//! spectrum scans, stroboscopic/micromotion transients with fits, NESS
//! sweeps over (T, t₀, direction), and chirality maps.

mod sweep;

pub use sweep::{
    chirality_map, ness_sweep, static_reference, ChiralityMap, StaticPoint, SweepMetadata,
    SweepTable,
};

use thiserror::Error;

use crate::analysis::{
    fit_transient_auto, AnalysisError, BlochComponent, BlochRecord, FitSeeds, TransientFit,
};
use crate::floquet::{
    effective_spectrum, find_ep, micromotion, period_scan, shifted_propagator,
    stroboscopic_evolve, EpCandidate, FloquetError, PeriodScan, StroboscopicSeries, DEFAULT_TOL,
};
use crate::lindblad::{
    excited_state, ground_state, maximally_mixed_state, minus_x_state, plus_x_state, Direction,
    DissipationParams, DriveWaveform, LindbladError, PathFamily,
};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, Error)]
pub enum ExperimentsError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("invalid override: {0}")]
    InvalidOverride(String),
    #[error("axis mismatch: {0}")]
    AxisMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Floquet(#[from] FloquetError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
}

/// Tables a scenario run can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    SpectrumScan,
    Stroboscopic,
    Micromotion,
    Fits,
    NessSweeps,
    Chirality,
    StaticReference,
}

/// Named initial states understood by scenarios and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    PlusX,
    MinusX,
    Ground,
    Excited,
    Mixed,
}

impl NamedState {
    pub fn density_matrix(self) -> ComplexMatrix {
        match self {
            NamedState::PlusX => plus_x_state(),
            NamedState::MinusX => minus_x_state(),
            NamedState::Ground => ground_state(),
            NamedState::Excited => excited_state(),
            NamedState::Mixed => maximally_mixed_state(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plus_x" => Some(NamedState::PlusX),
            "minus_x" => Some(NamedState::MinusX),
            "ground" => Some(NamedState::Ground),
            "excited" => Some(NamedState::Excited),
            "mixed" => Some(NamedState::Mixed),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NamedState::PlusX => "plus_x",
            NamedState::MinusX => "minus_x",
            NamedState::Ground => "ground",
            NamedState::Excited => "excited",
            NamedState::Mixed => "mixed",
        }
    }
}

/// A registered parameter set binding one figure's runs to the simulator.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub waveform: DriveWaveform,
    pub dissipation: DissipationParams,
    pub initial_state: NamedState,
    pub n_periods: usize,
    pub samples_per_period: usize,
    /// Periods at which stroboscopic series are recorded.
    pub strobo_periods: Vec<f64>,
    /// Starting phases (fractions of T) for shifted stroboscopic series.
    pub t0_fractions_series: Vec<f64>,
    /// Period grid for spectrum scans and sweeps.
    pub t_grid: Option<Vec<f64>>,
    /// Starting-phase grid for sweeps.
    pub t0_grid: Option<Vec<f64>>,
    pub outputs: Vec<OutputKind>,
    pub tol: f64,
}

fn uniform_grid(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|k| from + k as f64 * step).collect()
}

fn fraction_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| k as f64 / points as f64).collect()
}

/// The registered scenarios.
///
/// Spectrum-style sets use the calculation rates (γ_e = 4 µs⁻¹, γ_φ = 0);
/// the experiment-matching transients use the measured device rates
/// (γ_e = 4.7 µs⁻¹, γ_φ = 0.3 µs⁻¹).
pub fn registry() -> Vec<Scenario> {
    let circle =
        DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Cw, 0.2).unwrap();
    vec![
        Scenario {
            name: "fig1",
            description: "complex spectrum vs drive period, EP candidates, and the \
                          under/overdamped stroboscopic pair at T = 200/600 ns",
            waveform: circle,
            dissipation: DissipationParams::CALCULATION,
            initial_state: NamedState::PlusX,
            n_periods: 10,
            samples_per_period: 40,
            strobo_periods: vec![0.2, 0.6],
            t0_fractions_series: vec![0.0],
            t_grid: Some(uniform_grid(0.15, 0.65, 0.01)),
            t0_grid: None,
            outputs: vec![OutputKind::SpectrumScan, OutputKind::Stroboscopic],
            tol: DEFAULT_TOL,
        },
        Scenario {
            name: "fig2",
            description: "micromotion over ten periods at T = 200 ns plus t0-shifted \
                          stroboscopic series with transient fits",
            waveform: circle,
            dissipation: DissipationParams::MEASURED,
            initial_state: NamedState::PlusX,
            n_periods: 10,
            samples_per_period: 40,
            strobo_periods: vec![0.2],
            t0_fractions_series: vec![0.2, 0.5, 0.8],
            t_grid: None,
            t0_grid: None,
            outputs: vec![
                OutputKind::Micromotion,
                OutputKind::Stroboscopic,
                OutputKind::Fits,
            ],
            tol: DEFAULT_TOL,
        },
        Scenario {
            name: "fig2_si",
            description: "overdamped companion of fig2 at T = 600 ns",
            waveform: circle.with_period(0.6).unwrap(),
            dissipation: DissipationParams::MEASURED,
            initial_state: NamedState::PlusX,
            n_periods: 10,
            samples_per_period: 40,
            strobo_periods: vec![0.6],
            t0_fractions_series: vec![0.1, 0.4, 0.7],
            t_grid: None,
            t0_grid: None,
            outputs: vec![
                OutputKind::Micromotion,
                OutputKind::Stroboscopic,
                OutputKind::Fits,
            ],
            tol: DEFAULT_TOL,
        },
        Scenario {
            name: "fig3",
            description: "NESS sweeps over period and starting phase in both loop \
                          directions, entropy, static steady-state reference, and the \
                          chirality map",
            waveform: circle,
            dissipation: DissipationParams::CALCULATION,
            initial_state: NamedState::PlusX,
            n_periods: 10,
            samples_per_period: 40,
            strobo_periods: vec![],
            t0_fractions_series: vec![],
            t_grid: Some(uniform_grid(0.15, 0.65, 0.01)),
            t0_grid: Some(fraction_grid(50)),
            outputs: vec![
                OutputKind::NessSweeps,
                OutputKind::Chirality,
                OutputKind::StaticReference,
            ],
            tol: 1e-8,
        },
        Scenario {
            name: "fig4",
            description: "six-period chiral-transfer tomography from |−x⟩ along the \
                          cos² loop, both directions",
            waveform: DriveWaveform::cos_squared(
                18.0,
                0.1,
                10.0 * std::f64::consts::PI,
                Direction::Cw,
                1.0,
            )
            .unwrap(),
            dissipation: DissipationParams::MEASURED,
            initial_state: NamedState::MinusX,
            n_periods: 6,
            samples_per_period: 60,
            strobo_periods: vec![1.0],
            t0_fractions_series: vec![0.0],
            t_grid: None,
            t0_grid: None,
            outputs: vec![OutputKind::Micromotion, OutputKind::Stroboscopic],
            tol: DEFAULT_TOL,
        },
    ]
}

/// Look up a registered scenario by name.
pub fn scenario(name: &str) -> Result<Scenario, ExperimentsError> {
    registry()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ExperimentsError::UnknownScenario(name.to_string()))
}

/// Apply `key=value` overrides to a scenario's parameters. Unknown keys are
/// a hard error.
pub fn apply_overrides(
    base: &Scenario,
    overrides: &[(String, String)],
) -> Result<Scenario, ExperimentsError> {
    let mut s = base.clone();
    let bad = |key: &str, value: &str| {
        ExperimentsError::InvalidOverride(format!("cannot parse '{value}' for key '{key}'"))
    };
    for (key, value) in overrides {
        match key.as_str() {
            "period" => s.waveform.period = value.parse().map_err(|_| bad(key, value))?,
            "j_max" => s.waveform.j_max = value.parse().map_err(|_| bad(key, value))?,
            "j_min" => s.waveform.j_min = value.parse().map_err(|_| bad(key, value))?,
            "delta_max" => s.waveform.delta_max = value.parse().map_err(|_| bad(key, value))?,
            "family" => {
                s.waveform.family = match value.as_str() {
                    "circle" => PathFamily::Circle,
                    "cos_squared" => PathFamily::CosSquared,
                    _ => return Err(bad(key, value)),
                }
            }
            "direction" => {
                s.waveform.direction = match value.as_str() {
                    "ccw" => Direction::Ccw,
                    "cw" => Direction::Cw,
                    _ => return Err(bad(key, value)),
                }
            }
            "gamma_e" => s.dissipation.gamma_e = value.parse().map_err(|_| bad(key, value))?,
            "gamma_phi" => s.dissipation.gamma_phi = value.parse().map_err(|_| bad(key, value))?,
            "n_periods" => s.n_periods = value.parse().map_err(|_| bad(key, value))?,
            "samples_per_period" => {
                s.samples_per_period = value.parse().map_err(|_| bad(key, value))?
            }
            "initial_state" => {
                s.initial_state = NamedState::parse(value).ok_or_else(|| bad(key, value))?
            }
            "tol" => s.tol = value.parse().map_err(|_| bad(key, value))?,
            _ => {
                return Err(ExperimentsError::InvalidOverride(format!(
                    "unknown override key '{key}'"
                )))
            }
        }
    }
    s.waveform = DriveWaveform::validated(s.waveform)?;
    s.dissipation = DissipationParams::new(s.dissipation.gamma_e, s.dissipation.gamma_phi)?;
    Ok(s)
}

/// A stroboscopic series tagged with its run parameters.
#[derive(Debug, Clone)]
pub struct LabeledSeries {
    pub label: String,
    pub series: StroboscopicSeries,
}

/// A dense trajectory tagged with its run parameters.
#[derive(Debug, Clone)]
pub struct LabeledTrajectory {
    pub label: String,
    pub records: Vec<BlochRecord>,
}

/// A transient fit tagged with the series and component it describes.
#[derive(Debug, Clone)]
pub struct LabeledFit {
    pub label: String,
    pub component: BlochComponent,
    pub fit: TransientFit,
}

/// Everything a scenario run produced.
#[derive(Debug)]
pub struct ResultBundle {
    pub scenario: String,
    pub spectrum_scan: Option<PeriodScan>,
    pub ep_candidates: Vec<EpCandidate>,
    pub stroboscopic: Vec<LabeledSeries>,
    pub micromotion: Vec<LabeledTrajectory>,
    pub fits: Vec<LabeledFit>,
    pub sweeps: Vec<SweepTable>,
    pub chirality: Option<ChiralityMap>,
    pub static_reference: Option<Vec<StaticPoint>>,
}

/// Run a registered scenario with `key=value` overrides applied.
pub fn run_scenario(
    name: &str,
    overrides: &[(String, String)],
) -> Result<ResultBundle, ExperimentsError> {
    let s = apply_overrides(&scenario(name)?, overrides)?;
    run(&s)
}

/// Run a fully resolved scenario.
pub fn run(s: &Scenario) -> Result<ResultBundle, ExperimentsError> {
    let rho0 = s.initial_state.density_matrix();
    let mut bundle = ResultBundle {
        scenario: s.name.to_string(),
        spectrum_scan: None,
        ep_candidates: Vec::new(),
        stroboscopic: Vec::new(),
        micromotion: Vec::new(),
        fits: Vec::new(),
        sweeps: Vec::new(),
        chirality: None,
        static_reference: None,
    };

    for output in &s.outputs {
        match output {
            OutputKind::SpectrumScan => {
                let grid = s.t_grid.as_ref().ok_or_else(|| {
                    ExperimentsError::InvalidGrid(format!(
                        "scenario '{}' requests a spectrum scan without a period grid",
                        s.name
                    ))
                })?;
                let scan = period_scan(&s.waveform, &s.dissipation, grid, 0.0, s.tol)?;
                bundle.ep_candidates = find_ep(&scan)?;
                bundle.spectrum_scan = Some(scan);
            }
            OutputKind::Stroboscopic => {
                for &t_period in &s.strobo_periods {
                    let w = s.waveform.with_period(t_period)?;
                    for &frac in &s.t0_fractions_series {
                        let p =
                            shifted_propagator(&w, &s.dissipation, frac * t_period, s.tol)?;
                        let series = stroboscopic_evolve(&p, &rho0, s.n_periods)?;
                        bundle.stroboscopic.push(LabeledSeries {
                            label: format!(
                                "T={t_period},t0={frac}T,{}",
                                w.direction.label()
                            ),
                            series,
                        });
                    }
                    // Chirality scenarios compare both traversal directions.
                    if s.name == "fig4" {
                        let reversed = w.with_direction(w.direction.reversed());
                        let p = shifted_propagator(&reversed, &s.dissipation, 0.0, s.tol)?;
                        let series = stroboscopic_evolve(&p, &rho0, s.n_periods)?;
                        bundle.stroboscopic.push(LabeledSeries {
                            label: format!("T={t_period},t0=0T,{}", reversed.direction.label()),
                            series,
                        });
                    }
                }
            }
            OutputKind::Micromotion => {
                let w = s.waveform;
                bundle.micromotion.push(LabeledTrajectory {
                    label: format!("T={},{}", w.period, w.direction.label()),
                    records: micromotion(
                        &w,
                        &s.dissipation,
                        &rho0,
                        s.n_periods,
                        s.samples_per_period,
                        s.tol,
                    )?,
                });
                if s.name == "fig4" {
                    let reversed = w.with_direction(w.direction.reversed());
                    bundle.micromotion.push(LabeledTrajectory {
                        label: format!("T={},{}", reversed.period, reversed.direction.label()),
                        records: micromotion(
                            &reversed,
                            &s.dissipation,
                            &rho0,
                            s.n_periods,
                            s.samples_per_period,
                            s.tol,
                        )?,
                    });
                }
            }
            OutputKind::Fits => {
                for labeled in &bundle.stroboscopic {
                    let p = shifted_propagator(
                        &s.waveform
                            .with_period(labeled.series.period)?,
                        &s.dissipation,
                        labeled.series.t0,
                        s.tol,
                    )?;
                    let spectrum = effective_spectrum(&p)?;
                    let seeds = FitSeeds::from_spectrum(&spectrum);
                    for component in [BlochComponent::X, BlochComponent::Y, BlochComponent::Z]
                    {
                        let fit = fit_transient_auto(&labeled.series, component, &seeds)?;
                        bundle.fits.push(LabeledFit {
                            label: labeled.label.clone(),
                            component,
                            fit,
                        });
                    }
                }
            }
            OutputKind::NessSweeps => {
                let t_grid = s.t_grid.as_ref().ok_or_else(|| {
                    ExperimentsError::InvalidGrid("NESS sweep needs a period grid".into())
                })?;
                let t0_grid = s.t0_grid.as_ref().ok_or_else(|| {
                    ExperimentsError::InvalidGrid("NESS sweep needs a t0 grid".into())
                })?;
                for direction in [Direction::Ccw, Direction::Cw] {
                    let w = s.waveform.with_direction(direction);
                    let mut table =
                        ness_sweep(&w, &s.dissipation, t_grid, t0_grid, direction, s.tol)?;
                    table.metadata.scenario = Some(s.name.to_string());
                    bundle.sweeps.push(table);
                }
            }
            OutputKind::Chirality => {
                let ccw = bundle
                    .sweeps
                    .iter()
                    .find(|t| t.direction == Direction::Ccw);
                let cw = bundle.sweeps.iter().find(|t| t.direction == Direction::Cw);
                if let (Some(ccw), Some(cw)) = (ccw, cw) {
                    bundle.chirality = Some(chirality_map(ccw, cw)?);
                }
            }
            OutputKind::StaticReference => {
                let t0_grid = s.t0_grid.as_ref().ok_or_else(|| {
                    ExperimentsError::InvalidGrid("static reference needs a t0 grid".into())
                })?;
                bundle.static_reference =
                    Some(static_reference(&s.waveform, &s.dissipation, t0_grid));
            }
        }
    }
    Ok(bundle)
}
