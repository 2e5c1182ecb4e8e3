//! Drive-period scans with eigenvalue branch tracking and exceptional-point
//! detection.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::lindblad::{DissipationParams, DriveWaveform};

use super::{effective_spectrum, shifted_propagator, FloquetError, FloquetSpectrum};

/// Spectrum evaluator at an arbitrary period, used for scan construction and
/// for refining EP locations between grid points.
pub type SpectrumEvaluator =
    Arc<dyn Fn(f64) -> Result<FloquetSpectrum, FloquetError> + Send + Sync>;

/// One grid point of a period scan. `branches[m]` is the stable branch label
/// carried by mode `m` of this point's spectrum; labels are assigned at the
/// first successful point and continued by maximal eigenvector overlap.
#[derive(Debug, Clone)]
pub struct ScanPoint {
    pub period: f64,
    pub spectrum: Result<FloquetSpectrum, FloquetError>,
    pub branches: Option<[usize; 4]>,
}

/// A spectrum-vs-period scan. Failed points stay in place (marked by their
/// error) rather than aborting the whole scan.
#[derive(Clone)]
pub struct PeriodScan {
    pub points: Vec<ScanPoint>,
    evaluator: SpectrumEvaluator,
}

impl std::fmt::Debug for PeriodScan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PeriodScan")
            .field("points", &self.points.len())
            .finish_non_exhaustive()
    }
}

impl PeriodScan {
    /// Build a scan from an arbitrary spectrum family. Grid points are
    /// evaluated in parallel and gathered in grid order; branch labels are
    /// tracked across successful points.
    pub fn from_fn(t_grid: &[f64], evaluator: SpectrumEvaluator) -> Result<Self, FloquetError> {
        validate_grid(t_grid)?;
        let spectra: Vec<Result<FloquetSpectrum, FloquetError>> = t_grid
            .par_iter()
            .map(|&t_period| evaluator(t_period))
            .collect();
        let mut points: Vec<ScanPoint> = t_grid
            .iter()
            .zip(spectra)
            .map(|(&period, spectrum)| ScanPoint {
                period,
                spectrum,
                branches: None,
            })
            .collect();
        track_branches(&mut points);
        Ok(Self { points, evaluator })
    }

    /// Evaluate the underlying spectrum family off the grid.
    pub fn evaluate(&self, t_period: f64) -> Result<FloquetSpectrum, FloquetError> {
        (self.evaluator)(t_period)
    }

    /// Successful points with their branch labels, in grid order.
    pub fn successful_points(&self) -> impl Iterator<Item = (&ScanPoint, &FloquetSpectrum)> {
        self.points
            .iter()
            .filter_map(|p| p.spectrum.as_ref().ok().map(|s| (p, s)))
    }
}

fn validate_grid(t_grid: &[f64]) -> Result<(), FloquetError> {
    if t_grid.is_empty() {
        return Err(FloquetError::InvalidInput("empty period grid".into()));
    }
    for window in t_grid.windows(2) {
        if window[0].is_nan() || window[1].is_nan() || window[0] >= window[1] {
            return Err(FloquetError::InvalidInput(
                "period grid must be strictly increasing".into(),
            ));
        }
    }
    if t_grid[0].is_nan() || t_grid[0] <= 0.0 {
        return Err(FloquetError::InvalidInput(
            "period grid values must be positive".into(),
        ));
    }
    Ok(())
}

/// Scan the effective Floquet spectrum over a grid of drive periods for one
/// waveform family, starting phase `t0` (µs), and integration tolerance.
pub fn period_scan(
    waveform: &DriveWaveform,
    dissipation: &DissipationParams,
    t_grid: &[f64],
    t0: f64,
    tol: f64,
) -> Result<PeriodScan, FloquetError> {
    let template = *waveform;
    let d = *dissipation;
    let evaluator: SpectrumEvaluator = Arc::new(move |t_period: f64| {
        let w = template.with_period(t_period)?;
        let p = shifted_propagator(&w, &d, t0, tol)?;
        effective_spectrum(&p)
    });
    PeriodScan::from_fn(t_grid, evaluator)
}

/// |⟨u|v⟩| for unit vectors stored as matrix columns.
fn overlap(a: &crate::numerics::ComplexMatrix, col_a: usize, b: &crate::numerics::ComplexMatrix, col_b: usize) -> f64 {
    let mut dot = Complex64::ZERO;
    for r in 0..a.dim() {
        dot += a[(r, col_a)].conj() * b[(r, col_b)];
    }
    dot.norm()
}

/// Continuity-track branch labels across successful scan points by maximal
/// total eigenvector overlap, solved exactly over the 4! assignments.
fn track_branches(points: &mut [ScanPoint]) {
    let mut prev: Option<(usize, [usize; 4])> = None; // (point index, branches)
    for idx in 0..points.len() {
        if points[idx].spectrum.is_err() {
            continue;
        }
        let branches = match prev {
            None => [0, 1, 2, 3],
            Some((prev_idx, prev_branches)) => {
                let prev_spec = points[prev_idx].spectrum.as_ref().unwrap();
                let cur_spec = points[idx].spectrum.as_ref().unwrap();
                // mode_of_branch[b] = previous mode carrying branch b.
                let mut mode_of_branch = [0usize; 4];
                for (mode, &b) in prev_branches.iter().enumerate() {
                    mode_of_branch[b] = mode;
                }
                let mut cost = [[0.0f64; 4]; 4];
                for (b, row) in cost.iter_mut().enumerate() {
                    for (m, c) in row.iter_mut().enumerate() {
                        *c = overlap(
                            &prev_spec.eigenvectors,
                            mode_of_branch[b],
                            &cur_spec.eigenvectors,
                            m,
                        );
                    }
                }
                let assignment = best_assignment(&cost);
                let mut branches = [0usize; 4];
                for (b, &m) in assignment.iter().enumerate() {
                    branches[m] = b;
                }
                branches
            }
        };
        points[idx].branches = Some(branches);
        prev = Some((idx, branches));
    }
}

/// Exhaustive 4×4 assignment maximizing the total score; returns mode chosen
/// for each branch.
fn best_assignment(score: &[[f64; 4]; 4]) -> [usize; 4] {
    let mut best = [0, 1, 2, 3];
    let mut best_total = f64::NEG_INFINITY;
    let mut perm = [0usize, 1, 2, 3];
    permute(&mut perm, 0, &mut |p| {
        let total: f64 = (0..4).map(|b| score[b][p[b]]).sum();
        if total > best_total {
            best_total = total;
            best = *p;
        }
    });
    best
}

fn permute(items: &mut [usize; 4], k: usize, visit: &mut impl FnMut(&[usize; 4])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Detection thresholds for exceptional-point candidates. Exact coalescence
/// is unreachable in floating point, so candidacy is a joint condition on
/// the gap minimum, eigenvector conditioning, and pair overlap.
#[derive(Debug, Clone, Copy)]
pub struct EpConfig {
    /// Eigenvector-matrix condition number that must be exceeded.
    pub min_condition: f64,
    /// |⟨v_i|v_j⟩| of the coalescing pair that must be exceeded.
    pub min_overlap: f64,
    /// Golden-section refinement tolerance on the period, in µs.
    pub refine_tol: f64,
}

impl Default for EpConfig {
    fn default() -> Self {
        Self {
            min_condition: 1e3,
            min_overlap: 0.99,
            refine_tol: 1e-4,
        }
    }
}

/// An exceptional-point candidate located along a period scan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EpCandidate {
    /// Refined period of closest approach, in µs.
    pub t_star: f64,
    /// Branch labels of the coalescing pair.
    pub branch_pair: (usize, usize),
    /// Eigenvalue gap at `t_star`.
    pub gap: f64,
    /// Eigenvector overlap |⟨v_i|v_j⟩| of the pair at `t_star`.
    pub overlap: f64,
}

/// [`find_ep_with`] at the default thresholds.
pub fn find_ep(scan: &PeriodScan) -> Result<Vec<EpCandidate>, FloquetError> {
    find_ep_with(scan, &EpConfig::default())
}

/// Locate exceptional points along a period scan.
///
/// A square-root EP on the period axis is an under/overdamped regime
/// boundary: a conjugate eigenvalue pair merges onto the real axis. Its gap
/// collapse is far narrower than any practical grid, and right next door the
/// freshly split real eigenvalues transversally cross bystander modes —
/// exact degeneracies with *distinct* eigenvectors that gap-minimization
/// mistakes for the EP. Detection therefore brackets changes in the count of
/// oscillatory modes and bisects the boundary; plain `min_gap` local minima
/// are kept as a secondary signal for scans whose spectra never change
/// count. Every candidate must then prove itself: within a few refine-tol of
/// the location, the eigenvector-matrix condition number has to exceed
/// `min_condition` and the closest pair's overlap `min_overlap` — a
/// transversal crossing shows neither.
pub fn find_ep_with(scan: &PeriodScan, cfg: &EpConfig) -> Result<Vec<EpCandidate>, FloquetError> {
    if scan.points.is_empty() {
        return Err(FloquetError::InvalidInput("empty scan".into()));
    }
    let ok_indices: Vec<usize> = scan
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.spectrum.is_ok())
        .map(|(i, _)| i)
        .collect();
    if ok_indices.len() < 3 {
        return Err(FloquetError::InvalidInput(
            "EP detection needs at least 3 successful scan points".into(),
        ));
    }

    let spec_at = |i: usize| scan.points[i].spectrum.as_ref().unwrap();
    let gap_at = |i: usize| spec_at(i).min_gap;

    // Regime boundaries, bisected on the oscillatory-mode count. The grid
    // predicate uses a conservative Im threshold to be robust against noise;
    // the boundary it finds is where Im crosses that *threshold*, biased off
    // the EP by threshold²/slope. A second bisection with a 1000× finer
    // threshold inside a small window removes the bias, so the coalescence
    // probes below actually sample the defective neighborhood.
    let bisect = |mut lo: f64, mut hi: f64, count_lo: usize, factor: f64| -> f64 {
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            match scan.evaluate(mid) {
                Ok(s) if oscillatory_count_with(&s, factor) == count_lo => lo = mid,
                Ok(_) => hi = mid,
                Err(_) => {
                    // Step the failing probe off the midpoint and retry once.
                    let nudged = mid + 0.25 * (hi - lo);
                    match scan.evaluate(nudged) {
                        Ok(s) if oscillatory_count_with(&s, factor) == count_lo => lo = nudged,
                        Ok(_) => hi = nudged,
                        Err(_) => break,
                    }
                }
            }
        }
        0.5 * (lo + hi)
    };

    let scan_lo = scan.points[ok_indices[0]].period;
    let scan_hi = scan.points[*ok_indices.last().unwrap()].period;
    // Remove the threshold bias: bisect the fine-threshold boundary inside a
    // window around `center`, widening the window a few times if needed.
    let polish = |center: f64| -> f64 {
        let mut half_width = 2.0 * cfg.refine_tol;
        for _ in 0..4 {
            let wlo = (center - half_width).max(scan_lo);
            let whi = (center + half_width).min(scan_hi);
            let counts = (
                scan.evaluate(wlo).map(|s| oscillatory_count_with(&s, 1e-6)),
                scan.evaluate(whi).map(|s| oscillatory_count_with(&s, 1e-6)),
            );
            if let (Ok(a), Ok(b)) = counts {
                if a != b {
                    return bisect(wlo, whi, a, 1e-6);
                }
            }
            half_width *= 4.0;
        }
        center
    };

    let mut locations: Vec<f64> = Vec::new();
    for w in ok_indices.windows(2) {
        let count_lo = oscillatory_mode_count(spec_at(w[0]));
        let count_hi = oscillatory_mode_count(spec_at(w[1]));
        if count_lo == count_hi {
            continue;
        }
        let lo = scan.points[w[0]].period;
        let hi = scan.points[w[1]].period;
        locations.push(polish(bisect(lo, hi, count_lo, 1e-3)));
    }

    // Secondary signal: interior local minima of min_gap, sharpened by
    // golden-section search on the product of the nontrivial pairwise gaps
    // (smooth through avoided crossings of unrelated pairs).
    let gap_product = |t: f64| -> f64 {
        match scan.evaluate(t) {
            Ok(s) => {
                let modes = s.nontrivial_eigenvalues();
                let mut product = 1.0;
                for i in 0..modes.len() {
                    for j in i + 1..modes.len() {
                        product *= (modes[i] - modes[j]).norm();
                    }
                }
                product
            }
            Err(_) => f64::INFINITY,
        }
    };
    for w in ok_indices.windows(3) {
        let (g0, g1, g2) = (gap_at(w[0]), gap_at(w[1]), gap_at(w[2]));
        if g1 < g0 && g1 <= g2 {
            let lo = scan.points[w[0]].period;
            let hi = scan.points[w[2]].period;
            locations.push(polish(golden_section_min(
                gap_product,
                lo,
                hi,
                cfg.refine_tol,
            )));
        }
    }

    locations.sort_by(f64::total_cmp);
    locations.dedup_by(|next, kept| (*next - *kept).abs() <= cfg.refine_tol);

    let mut candidates = Vec::new();
    for t_star in locations {
        // Probe the coalescence at several offsets: far enough out that the
        // eigensolver resolves the pair cleanly, close enough that a true
        // EP's condition number has already exploded.
        let mut best: Option<(f64, f64, f64)> = None; // (gap, overlap, cond)
        for offset in [0.0, 1e-8, -1e-8, 1e-6, -1e-6, cfg.refine_tol, -cfg.refine_tol] {
            let t_probe = t_star + offset;
            let Ok(spec) = scan.evaluate(t_probe) else {
                continue;
            };
            let (i, j) = min_gap_pair(&spec);
            let pair_overlap = overlap(&spec.eigenvectors, i, &spec.eigenvectors, j);
            let qualified = spec.eigvec_condition > cfg.min_condition
                && pair_overlap > cfg.min_overlap;
            if qualified
                && best
                    .map(|(gap, _, _)| spec.min_gap < gap)
                    .unwrap_or(true)
            {
                best = Some((spec.min_gap, pair_overlap, spec.eigvec_condition));
            }
        }
        let Some((gap, pair_overlap, _cond)) = best else {
            continue;
        };

        // Branch labels of the coalescing pair, read off the nearest grid
        // point that carries labels.
        let nearest = ok_indices
            .iter()
            .copied()
            .min_by(|&a, &b| {
                (scan.points[a].period - t_star)
                    .abs()
                    .total_cmp(&(scan.points[b].period - t_star).abs())
            })
            .expect("non-empty index list");
        let branches = scan.points[nearest].branches.unwrap_or([0, 1, 2, 3]);
        let near_spec = spec_at(nearest);
        let (ni, nj) = min_gap_pair(near_spec);
        let mut pair = (branches[ni], branches[nj]);
        if pair.0 > pair.1 {
            pair = (pair.1, pair.0);
        }

        candidates.push(EpCandidate {
            t_star,
            branch_pair: pair,
            gap,
            overlap: pair_overlap,
        });
    }
    candidates.sort_by(|a, b| a.t_star.total_cmp(&b.t_star));
    candidates.dedup_by(|next, kept| (next.t_star - kept.t_star).abs() <= cfg.refine_tol);
    Ok(candidates)
}

/// Number of nontrivial modes with an oscillation frequency that is
/// resolvable against the Floquet zone, |Im λ| > 10⁻³·2π/T.
fn oscillatory_mode_count(spec: &FloquetSpectrum) -> usize {
    oscillatory_count_with(spec, 1e-3)
}

fn oscillatory_count_with(spec: &FloquetSpectrum, factor: f64) -> usize {
    let threshold = factor * 2.0 * std::f64::consts::PI / spec.period;
    spec.nontrivial_eigenvalues()
        .iter()
        .filter(|l| l.im.abs() > threshold)
        .count()
}

/// Spectrum-mode indices of the closest nontrivial eigenvalue pair.
fn min_gap_pair(spec: &FloquetSpectrum) -> (usize, usize) {
    let modes: Vec<usize> = (0..4).filter(|&i| i != spec.ness_index).collect();
    let mut best = (modes[0], modes[1]);
    let mut best_gap = f64::INFINITY;
    for a in 0..modes.len() {
        for b in a + 1..modes.len() {
            let gap = (spec.eigenvalues[modes[a]] - spec.eigenvalues[modes[b]]).norm();
            if gap < best_gap {
                best_gap = gap;
                best = (modes[a], modes[b]);
            }
        }
    }
    best
}

/// Golden-section minimization of `f` on [lo, hi] to an interval of width
/// `tol`.
fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
