//! Configuration file schema and flag/file/scenario resolution.
//!
//! Precedence, lowest to highest: scenario defaults, config-file sections,
//! command-line flags, repeatable `--override key=value` pairs. Every key is
//! optional; unknown keys are a hard error so typos cannot silently fall
//! back to defaults.

use std::path::PathBuf;

use serde::Deserialize;

use crate::experiments::{apply_overrides, scenario, NamedState, OutputKind, Scenario};
use crate::lindblad::{Direction, DissipationParams, DriveWaveform, PathFamily};

use super::{CliError, RunArgs};

/// Top-level TOML schema. See the README for a commented example.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub waveform: Option<WaveformSection>,
    pub dissipation: Option<DissipationSection>,
    pub grids: Option<GridSection>,
    pub evolve: Option<EvolveSection>,
    pub run: Option<RunSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformSection {
    /// "circle" or "cos_squared".
    pub family: Option<PathFamily>,
    pub j_max: Option<f64>,
    pub j_min: Option<f64>,
    pub delta_max: Option<f64>,
    /// "ccw" or "cw".
    pub direction: Option<Direction>,
    /// Drive period in µs.
    pub period: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DissipationSection {
    pub gamma_e: Option<f64>,
    pub gamma_phi: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Period grid bounds and step, in µs.
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_step: Option<f64>,
    /// Number of equally spaced starting-phase fractions in [0, 1).
    pub t0_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    /// plus_x | minus_x | ground | excited | mixed.
    pub initial_state: Option<NamedState>,
    pub n_periods: Option<usize>,
    pub samples_per_period: Option<usize>,
    /// Starting phases (fractions of T) for stroboscopic series.
    pub t0_fractions: Option<Vec<f64>>,
    /// Fit transients and write fits.json.
    pub fit: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub seed: Option<u64>,
    /// 0 means all cores.
    pub workers: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<PathBuf>,
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Starting phases (fractions of T) for the evolve command's series.
    pub t0_series: Vec<f64>,
    pub fit: bool,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
}

impl RunConfig {
    /// Resolve flags, optional config file, and scenario defaults into an
    /// executable configuration.
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file: FileConfig = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let scenario_name = args
            .scenario
            .clone()
            .or_else(|| file.scenario.clone())
            .unwrap_or_else(|| "fig1".to_string());
        let mut s = scenario(&scenario_name).map_err(CliError::from)?;

        if let Some(w) = &file.waveform {
            if let Some(v) = w.family {
                s.waveform.family = v;
            }
            if let Some(v) = w.j_max {
                s.waveform.j_max = v;
            }
            if let Some(v) = w.j_min {
                s.waveform.j_min = v;
            }
            if let Some(v) = w.delta_max {
                s.waveform.delta_max = v;
            }
            if let Some(v) = w.direction {
                s.waveform.direction = v;
            }
            if let Some(v) = w.period {
                s.waveform.period = v;
            }
        }
        if let Some(d) = &file.dissipation {
            if let Some(v) = d.gamma_e {
                s.dissipation.gamma_e = v;
            }
            if let Some(v) = d.gamma_phi {
                s.dissipation.gamma_phi = v;
            }
        }
        if let Some(g) = &file.grids {
            let defaults = default_grid_bounds(&s);
            let t_min = g.t_min.unwrap_or(defaults.0);
            let t_max = g.t_max.unwrap_or(defaults.1);
            let t_step = g.t_step.unwrap_or(defaults.2);
            if g.t_min.is_some() || g.t_max.is_some() || g.t_step.is_some() {
                let grid_ok = t_step > 0.0 && t_min > 0.0 && t_max >= t_min;
                if !grid_ok {
                    return Err(CliError::Config(format!(
                        "invalid period grid: t_min={t_min}, t_max={t_max}, t_step={t_step}"
                    )));
                }
                let n = ((t_max - t_min) / t_step).round() as usize;
                s.t_grid = Some((0..=n).map(|k| t_min + k as f64 * t_step).collect());
            }
            if let Some(points) = g.t0_points {
                if points == 0 {
                    return Err(CliError::Config("t0_points must be positive".into()));
                }
                s.t0_grid = Some((0..points).map(|k| k as f64 / points as f64).collect());
            }
        }
        let mut t0_series = if s.t0_fractions_series.is_empty() {
            vec![0.0]
        } else {
            s.t0_fractions_series.clone()
        };
        let mut fit = s.outputs.contains(&OutputKind::Fits);
        if let Some(e) = &file.evolve {
            if let Some(v) = e.initial_state {
                s.initial_state = v;
            }
            if let Some(v) = e.n_periods {
                s.n_periods = v;
            }
            if let Some(v) = e.samples_per_period {
                s.samples_per_period = v;
            }
            if let Some(v) = &e.t0_fractions {
                if v.is_empty() {
                    return Err(CliError::Config("t0_fractions must be non-empty".into()));
                }
                t0_series = v.clone();
            }
            if let Some(v) = e.fit {
                fit = v;
            }
        }

        let mut seed = 0;
        let mut workers = 0;
        if let Some(r) = &file.run {
            if let Some(v) = r.seed {
                seed = v;
            }
            if let Some(v) = r.workers {
                workers = v;
            }
            if let Some(v) = r.tol {
                s.tol = v;
            }
        }
        let mut out_dir = file
            .output
            .and_then(|o| o.directory)
            .unwrap_or_else(|| PathBuf::from("out"));

        // Command-line flags override the file.
        if let Some(v) = &args.out {
            out_dir = v.clone();
        }
        if let Some(v) = args.workers {
            workers = v;
        }
        if let Some(v) = args.seed {
            seed = v;
        }
        if let Some(v) = args.tol {
            s.tol = v;
        }
        if s.tol.is_nan() || s.tol <= 0.0 {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {}",
                s.tol
            )));
        }

        // --override pairs apply last.
        let pairs: Result<Vec<(String, String)>, CliError> = args
            .overrides
            .iter()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| {
                        CliError::Config(format!("override '{kv}' is not of the form key=value"))
                    })
            })
            .collect();
        s = apply_overrides(&s, &pairs?).map_err(CliError::from)?;

        s.waveform = DriveWaveform::validated(s.waveform).map_err(CliError::from)?;
        s.dissipation = DissipationParams::new(s.dissipation.gamma_e, s.dissipation.gamma_phi)
            .map_err(CliError::from)?;

        Ok(RunConfig {
            scenario: s,
            t0_series,
            fit,
            out_dir,
            seed,
            workers,
        })
    }

    /// Run `f` on a rayon pool sized by the `workers` setting; results do not
    /// depend on the pool size, only wall-clock does.
    pub fn with_worker_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if self.workers > 0 {
            builder = builder.num_threads(self.workers);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn default_grid_bounds(s: &Scenario) -> (f64, f64, f64) {
    match &s.t_grid {
        Some(grid) if grid.len() >= 2 => (grid[0], *grid.last().unwrap(), grid[1] - grid[0]),
        _ => (0.15, 0.65, 0.01),
    }
}
