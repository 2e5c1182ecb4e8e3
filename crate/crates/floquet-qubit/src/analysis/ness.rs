//! Nonequilibrium steady states and static steady states.

use num_complex::Complex64;
use serde::Serialize;

use crate::floquet::PropagatorResult;
use crate::lindblad::{bloch_state, unvectorize, vec_identity, vectorize, Direction};
use crate::numerics::{eig, ComplexMatrix};

use super::{bloch_from_rho, bloch_record, hermitian_eigs_2x2, AnalysisError, BlochRecord};

/// Largest |μ − 1| at which a propagator eigenvalue still counts as the
/// steady-state mode.
const NESS_EIGENVALUE_TOL: f64 = 1e-4;

/// Fixed-point residual every returned steady state must satisfy.
const RESIDUAL_TOL: f64 = 1e-8;

/// A nonequilibrium steady state at one point of the (T, t₀, direction)
/// parameter space.
#[derive(Debug, Clone, Serialize)]
pub struct NessRecord {
    /// Drive period in µs.
    pub period: f64,
    /// Starting phase as a fraction of the period, in [0, 1).
    pub t0_fraction: f64,
    pub direction: Direction,
    /// The steady state itself: Hermitian, unit trace, positive.
    #[serde(skip)]
    pub rho: ComplexMatrix,
    pub bloch: BlochRecord,
    /// ‖G·vec(ρ) − vec(ρ)‖₂.
    pub residual: f64,
}

/// Extract the NESS of a one-period propagator: the eigenvector of G with
/// eigenvalue closest to 1, made exactly Hermitian, trace-normalized, and
/// with eigensolver-noise negative populations (within −1e−8) clipped away.
pub fn ness_from_propagator(p: &PropagatorResult) -> Result<NessRecord, AnalysisError> {
    let decomp = eig(&p.g)?;
    let (idx, distance) = decomp
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, mu)| (i, (mu - Complex64::ONE).norm()))
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("propagator spectrum is non-empty");
    if distance > NESS_EIGENVALUE_TOL {
        return Err(AnalysisError::NoSteadyState(format!(
            "nearest propagator eigenvalue sits {distance:e} away from 1"
        )));
    }

    let mut rho = normalize_steady_vector(&decomp.right_eigenvectors.column(idx))?;

    // Polish with the map itself until the fixed-point residual settles;
    // one application is usually already below 1e−12.
    let mut residual = fixed_point_residual(&p.g, &rho)?;
    for _ in 0..8 {
        if residual <= RESIDUAL_TOL * 0.01 {
            break;
        }
        let advanced = unvectorize(&p.g.mul_vec(&vectorize(&rho)?))?;
        let candidate = normalize_steady_vector(&vectorize(&advanced.hermitize())?)?;
        let candidate_residual = fixed_point_residual(&p.g, &candidate)?;
        if candidate_residual >= residual {
            break;
        }
        rho = candidate;
        residual = candidate_residual;
    }
    if residual > RESIDUAL_TOL {
        return Err(AnalysisError::NoSteadyState(format!(
            "fixed-point residual {residual:e} exceeds {RESIDUAL_TOL:e}"
        )));
    }

    let t0_fraction = (p.t0 / p.period).rem_euclid(1.0);
    let bloch = bloch_record(p.t0, &rho)?;
    Ok(NessRecord {
        period: p.period,
        t0_fraction,
        direction: p.direction,
        rho,
        bloch,
        residual,
    })
}

/// Steady state of a static Liouvillian: its null-space direction, Hermitized
/// and trace-normalized, refined by shifted inverse iteration.
pub fn static_steady_state(l: &ComplexMatrix) -> Result<ComplexMatrix, AnalysisError> {
    if l.dim() != 4 {
        return Err(AnalysisError::InvalidState(
            "static steady state expects a 4×4 Liouvillian".into(),
        ));
    }
    let scale = l.frobenius_norm().max(1e-12);
    // vec(I)† must be a left null vector, or this is not a Liouvillian.
    let vid = vec_identity();
    let left_residual: f64 = (0..4)
        .map(|col| {
            (0..4)
                .map(|r| vid[r].conj() * l[(r, col)])
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    if left_residual > 1e-6 * scale {
        return Err(AnalysisError::InvalidState(format!(
            "vec(I)† is not a left null vector (residual {left_residual:e}); \
             not a trace-preserving generator"
        )));
    }

    let decomp = eig(l)?;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[a]
            .norm()
            .total_cmp(&decomp.eigenvalues[b].norm())
    });
    let null_tol = 1e-7 * scale;
    let second = decomp.eigenvalues[order[1]].norm();
    if second < null_tol {
        return Err(AnalysisError::AmbiguousSteadyState(second));
    }
    if decomp.eigenvalues[order[0]].norm() > null_tol {
        return Err(AnalysisError::NoSteadyState(format!(
            "smallest Liouvillian eigenvalue has magnitude {:e}",
            decomp.eigenvalues[order[0]].norm()
        )));
    }

    // Inverse iteration with a tiny shift sharpens the eigensolver's null
    // vector to machine precision.
    let mut v = decomp.right_eigenvectors.column(order[0]);
    let shifted = l - &ComplexMatrix::identity(4).scale_re(1e-10 * scale);
    if let Ok(lu) = shifted.lu() {
        for _ in 0..2 {
            let w = lu.solve_vec(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                break;
            }
            v = w.into_iter().map(|z| z / norm).collect();
        }
    }

    let rho = normalize_steady_vector(&v)?;
    let residual: f64 = l
        .mul_vec(&vectorize(&rho)?)
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 * scale.max(1.0) {
        return Err(AnalysisError::NoSteadyState(format!(
            "null-space residual {residual:e}"
        )));
    }
    Ok(rho)
}

/// The n-th stroboscopic state from `rho0`, the experiment's approximation to
/// the NESS (the measured runs use n = 10).
pub fn nth_period_state(
    p: &PropagatorResult,
    rho0: &ComplexMatrix,
    n: usize,
) -> Result<ComplexMatrix, AnalysisError> {
    super::validate_state(rho0)?;
    let mut v = vectorize(rho0)?.to_vec();
    for _ in 0..n {
        v = p.g.mul_vec(&v);
    }
    let rho = unvectorize(&v)?.hermitize();
    let trace = rho.trace().re;
    Ok(rho.scale_re(1.0 / trace))
}

/// Turn a fixed-point eigenvector into a physical state: rotate the global
/// phase so the trace is real positive, Hermitize, normalize the trace, and
/// clip eigensolver-noise negatives by shrinking the Bloch vector back onto
/// the sphere.
fn normalize_steady_vector(v: &[Complex64]) -> Result<ComplexMatrix, AnalysisError> {
    let trace = v[0] + v[3];
    if trace.norm() < 1e-12 {
        return Err(AnalysisError::NoSteadyState(
            "candidate steady state is traceless".into(),
        ));
    }
    let phase = trace.conj() / trace.norm();
    let rotated: Vec<Complex64> = v.iter().map(|z| z * phase).collect();
    let rho = unvectorize(&rotated)?.hermitize();
    let rho = rho.scale_re(1.0 / rho.trace().re);

    let (p_min, _) = hermitian_eigs_2x2(&rho);
    if p_min >= 0.0 {
        return Ok(rho);
    }
    if p_min < -1e-8 {
        return Err(AnalysisError::InvalidState(format!(
            "steady state has negative population {p_min:e}"
        )));
    }
    // p_min ∈ [−1e−8, 0): Bloch norm barely above 1; clipping the negative
    // population to zero and renormalizing is exactly a radial shrink.
    let (x, y, z) = bloch_from_rho(&rho)?;
    let norm = (x * x + y * y + z * z).sqrt();
    Ok(bloch_state(x / norm, y / norm, z / norm))
}

fn fixed_point_residual(g: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64, AnalysisError> {
    let v = vectorize(rho)?;
    let gv = g.mul_vec(&v);
    Ok(gv
        .iter()
        .zip(v.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}
