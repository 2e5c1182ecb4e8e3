//! Shot-noise tomography sampling with a seeded deterministic generator.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::numerics::ComplexMatrix;

use super::{bloch_from_rho, validate_state, AnalysisError};

/// Finite-shot estimates of the three Pauli expectation values.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TomographyEstimate {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub shots: u64,
}

/// Emulate projective single-shot readout along each Pauli axis: `shots`
/// Bernoulli draws with success probability (1 + ⟨σ⟩)/2, estimate
/// 2·(successes/shots) − 1. Axes are sampled in x, y, z order from one
/// ChaCha stream, so a fixed seed reproduces identical output.
pub fn sample_tomography(
    rho: &ComplexMatrix,
    shots: u64,
    seed: u64,
) -> Result<TomographyEstimate, AnalysisError> {
    if shots == 0 {
        return Err(AnalysisError::InvalidState(
            "tomography needs at least one shot".into(),
        ));
    }
    validate_state(rho)?;
    let (x, y, z) = bloch_from_rho(rho)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut estimate = |expectation: f64| -> f64 {
        let p = ((1.0 + expectation) / 2.0).clamp(0.0, 1.0);
        let mut successes = 0u64;
        for _ in 0..shots {
            // 53-bit uniform in [0, 1); u < p is exact at p = 0 and p = 1.
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            if u < p {
                successes += 1;
            }
        }
        2.0 * (successes as f64 / shots as f64) - 1.0
    };
    Ok(TomographyEstimate {
        x: estimate(x),
        y: estimate(y),
        z: estimate(z),
        shots,
    })
}
