//! State-level observables and post-processing: Bloch conversion, entropy,
//! purity, trace distance, steady-state extraction, transient fitting, and
//! shot-noise tomography sampling.

mod fitting;
mod ness;
mod tomography;

pub use fitting::{
    fit_transient, fit_transient_auto, BlochComponent, FitSeeds, TransientFit, TransientKind,
};
pub use ness::{ness_from_propagator, nth_period_state, static_steady_state, NessRecord};
pub use tomography::{sample_tomography, TomographyEstimate};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::lindblad::LindbladError;
use crate::numerics::{hermitian_eigenvalues, ComplexMatrix, NumericsError};

/// Errors from observables and steady-state extraction.
#[derive(Debug, Clone, Error)]
pub enum AnalysisError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("no steady state: {0}")]
    NoSteadyState(String),
    #[error(
        "ambiguous steady state: second-smallest Liouvillian eigenvalue magnitude {0:e} \
         lies inside the null-space tolerance"
    )]
    AmbiguousSteadyState(f64),
    #[error("fit failure: {0}")]
    FitFailure(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Lindblad(#[from] LindbladError),
}

/// Time-stamped Pauli expectation triple with derived entropy and purity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BlochRecord {
    /// Time in µs.
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Von Neumann entropy in bits, clamped to [0, 1].
    pub entropy: f64,
    /// Tr ρ², clamped to [½, 1].
    pub purity: f64,
}

impl BlochRecord {
    pub fn bloch_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Check that `rho` is a physical qubit state: 2×2, Hermitian, unit trace,
/// and positive semidefinite, all to 1e−10.
pub fn validate_state(rho: &ComplexMatrix) -> Result<(), AnalysisError> {
    if rho.dim() != 2 {
        return Err(AnalysisError::InvalidState(format!(
            "expected a 2×2 density matrix, got {}×{}",
            rho.dim(),
            rho.dim()
        )));
    }
    if !rho.is_finite() {
        return Err(AnalysisError::InvalidState(
            "density matrix has non-finite entries".into(),
        ));
    }
    let scale = rho.max_abs_entry().max(1.0);
    let herm = rho.hermiticity_error();
    if herm > 1e-10 * scale {
        return Err(AnalysisError::InvalidState(format!(
            "Hermiticity violated by {herm:e}"
        )));
    }
    let trace = rho.trace();
    if (trace - Complex64::ONE).norm() > 1e-10 {
        return Err(AnalysisError::InvalidState(format!(
            "trace is {trace} instead of 1"
        )));
    }
    let (p_min, _) = hermitian_eigs_2x2(rho);
    if p_min < -1e-10 {
        return Err(AnalysisError::InvalidState(format!(
            "negative population {p_min:e}"
        )));
    }
    Ok(())
}

/// Eigenvalues (ascending) of the Hermitian part of a 2×2 matrix, closed form.
pub(crate) fn hermitian_eigs_2x2(rho: &ComplexMatrix) -> (f64, f64) {
    let a = rho[(0, 0)].re;
    let d = rho[(1, 1)].re;
    let off = (rho[(0, 1)] + rho[(1, 0)].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let radius = ((0.5 * (a - d)).powi(2) + off.norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// Pauli expectation values (x, y, z) of a unit-trace Hermitian state, with
/// σ_z = |g⟩⟨g| − |e⟩⟨e| and |±x⟩ = (|g⟩ ± |e⟩)/√2.
pub fn bloch_from_rho(rho: &ComplexMatrix) -> Result<(f64, f64, f64), AnalysisError> {
    if rho.dim() != 2 {
        return Err(AnalysisError::InvalidState(
            "Bloch conversion expects a 2×2 state".into(),
        ));
    }
    let trace = rho.trace();
    if (trace - Complex64::ONE).norm() > 1e-8 {
        return Err(AnalysisError::InvalidState(format!(
            "trace is {trace} instead of 1"
        )));
    }
    let x = (rho[(0, 1)] + rho[(1, 0)]).re;
    let y = (Complex64::i() * (rho[(0, 1)] - rho[(1, 0)])).re;
    let z = (rho[(0, 0)] - rho[(1, 1)]).re;
    Ok((x, y, z))
}

/// Base-2 von Neumann entropy S = −Σ pᵢ log₂ pᵢ of the state's populations,
/// with p·log₂ p := 0 at p = 0 and the result clamped to [0, 1].
pub fn entropy(rho: &ComplexMatrix) -> Result<f64, AnalysisError> {
    if rho.dim() != 2 {
        return Err(AnalysisError::InvalidState(
            "entropy expects a 2×2 state".into(),
        ));
    }
    let (p0, p1) = hermitian_eigs_2x2(rho);
    Ok(entropy_from_populations(p0, p1))
}

pub(crate) fn entropy_from_populations(p0: f64, p1: f64) -> f64 {
    let term = |p: f64| -> f64 {
        let p = p.clamp(0.0, 1.0);
        if p <= 0.0 {
            0.0
        } else {
            -p * p.log2()
        }
    };
    (term(p0) + term(p1)).clamp(0.0, 1.0)
}

/// Tr ρ², clamped to the physical range [½, 1].
pub fn purity(rho: &ComplexMatrix) -> f64 {
    (rho * rho).trace().re.clamp(0.5, 1.0)
}

/// Trace distance ½·Tr|a − b| between two qubit states; for Hermitian inputs
/// this is half the sum of |eigenvalues| of the difference.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a - b;
    hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>() * 0.5
}

/// Full Bloch record (expectations, entropy, purity) for a state at time `t`.
pub fn bloch_record(t: f64, rho: &ComplexMatrix) -> Result<BlochRecord, AnalysisError> {
    let (x, y, z) = bloch_from_rho(rho)?;
    let (p0, p1) = hermitian_eigs_2x2(rho);
    Ok(BlochRecord {
        t,
        x,
        y,
        z,
        entropy: entropy_from_populations(p0, p1),
        purity: purity(rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{
        bloch_state, ground_state, maximally_mixed_state, minus_x_state, plus_x_state,
    };

    #[test]
    fn bloch_reference_states() {
        assert_eq!(bloch_from_rho(&maximally_mixed_state()).unwrap(), (0.0, 0.0, 0.0));
        assert_eq!(bloch_from_rho(&ground_state()).unwrap(), (0.0, 0.0, 1.0));
        assert_eq!(bloch_from_rho(&plus_x_state()).unwrap(), (1.0, 0.0, 0.0));
        let (x, y, z) = bloch_from_rho(&bloch_state(0.1, -0.6, 0.3)).unwrap();
        assert!((x - 0.1).abs() < 1e-15);
        assert!((y + 0.6).abs() < 1e-15);
        assert!((z - 0.3).abs() < 1e-15);
    }

    #[test]
    fn entropy_reference_values() {
        assert_eq!(entropy(&plus_x_state()).unwrap(), 0.0);
        assert_eq!(entropy(&maximally_mixed_state()).unwrap(), 1.0);
        // p = (0.9, 0.1): direct scalar evaluation of −Σ p log₂ p.
        let rho = bloch_state(0.0, 0.0, 0.8);
        let expected = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((entropy(&rho).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.4689955935892812).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant() {
        // Bloch rotations are unitary; entropy depends only on the Bloch norm.
        let r = 0.73;
        let reference = entropy(&bloch_state(0.0, 0.0, r)).unwrap();
        for (x, y, z) in [(0.3, 0.4, 0.5), (1.0, -0.2, 0.1), (-0.7, 0.1, -0.3)] {
            let n = f64::sqrt(x * x + y * y + z * z);
            let rho = bloch_state(r * x / n, r * y / n, r * z / n);
            assert!((entropy(&rho).unwrap() - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn trace_distance_reference_values() {
        assert_eq!(trace_distance(&plus_x_state(), &plus_x_state()), 0.0);
        assert!((trace_distance(&plus_x_state(), &minus_x_state()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_is_half_bloch_distance() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..100 {
            let (a, b) = (random_bloch(&mut next), random_bloch(&mut next));
            let d = trace_distance(&a, &b);
            let (xa, ya, za) = bloch_from_rho(&a).unwrap();
            let (xb, yb, zb) = bloch_from_rho(&b).unwrap();
            let euclid =
                ((xa - xb).powi(2) + (ya - yb).powi(2) + (za - zb).powi(2)).sqrt();
            assert!((d - euclid / 2.0).abs() < 1e-12, "{d} vs {euclid}");
        }
    }

    fn random_bloch(next: &mut impl FnMut() -> f64) -> ComplexMatrix {
        loop {
            let (x, y, z) = (next(), next(), next());
            if x * x + y * y + z * z <= 1.0 {
                return bloch_state(x, y, z);
            }
        }
    }

    #[test]
    fn trace_distance_triangle_inequality() {
        let mut state = 0x123456789abcdefu64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..100 {
            let a = random_bloch(&mut next);
            let b = random_bloch(&mut next);
            let c = random_bloch(&mut next);
            let ab = trace_distance(&a, &b);
            let bc = trace_distance(&b, &c);
            let ac = trace_distance(&a, &c);
            assert!(ac <= ab + bc + 1e-12);
            assert!((ab - trace_distance(&b, &a)).abs() < 1e-15);
        }
    }

    #[test]
    fn validation_rejects_unphysical_states() {
        let mut non_hermitian = plus_x_state();
        non_hermitian[(0, 1)] = Complex64::new(0.5, 0.3);
        assert!(validate_state(&non_hermitian).is_err());

        let overpure = bloch_state(1.2, 0.0, 0.0);
        assert!(validate_state(&overpure).is_err());

        assert!(validate_state(&bloch_state(0.6, 0.0, 0.8)).is_ok());
    }
}
