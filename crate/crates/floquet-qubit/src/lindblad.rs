//! The driven dissipative qubit: drive waveforms, coherent Hamiltonian,
//! jump operators, and the vectorized Liouvillian superoperator.
//!
//! Basis order is (|g⟩, |e⟩) with σ_z = |g⟩⟨g| − |e⟩⟨e|, so the ground state
//! sits at Bloch z = +1 and decay relaxes the qubit upward in z. Density
//! matrices are vectorized by column stacking, vec(ρ) = (ρ₀₀, ρ₁₀, ρ₀₁, ρ₁₁).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{ComplexMatrix, NumericsError};

/// Errors from waveform and state construction.
#[derive(Debug, Clone, Error)]
pub enum LindbladError {
    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),
    #[error("invalid dissipation rates: {0}")]
    InvalidRates(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Spontaneous-emission and pure-dephasing rates, both in µs⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationParams {
    pub gamma_e: f64,
    pub gamma_phi: f64,
}

impl DissipationParams {
    /// Rates used for the spectrum calculations (γ_e = 4 µs⁻¹, no dephasing).
    pub const CALCULATION: Self = Self {
        gamma_e: 4.0,
        gamma_phi: 0.0,
    };

    /// Measured device rates (γ_e = 4.7 µs⁻¹, γ_φ = 0.3 µs⁻¹).
    pub const MEASURED: Self = Self {
        gamma_e: 4.7,
        gamma_phi: 0.3,
    };

    pub fn new(gamma_e: f64, gamma_phi: f64) -> Result<Self, LindbladError> {
        let valid = |g: f64| g.is_finite() && g >= 0.0;
        if !valid(gamma_e) || !valid(gamma_phi) {
            return Err(LindbladError::InvalidRates(format!(
                "rates must be finite and non-negative, got gamma_e={gamma_e}, gamma_phi={gamma_phi}"
            )));
        }
        Ok(Self { gamma_e, gamma_phi })
    }
}

/// Shape of the closed parameter-space loop traced by the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathFamily {
    /// J(t) = J_max·cos(2πt/T), Δ(t) = ±Δ_max·sin(2πt/T).
    Circle,
    /// J(t) = (J_max − J_min)·cos²(πt/T) + J_min, Δ(t) = ±Δ_max·sin(2πt/T).
    CosSquared,
}

/// Orientation of the parameter-space loop. CCW takes the + sign in Δ(t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ccw,
    Cw,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Ccw => 1.0,
            Direction::Cw => -1.0,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Ccw => Direction::Cw,
            Direction::Cw => Direction::Ccw,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Ccw => "ccw",
            Direction::Cw => "cw",
        }
    }
}

/// A T-periodic closed loop (J(t), Δ(t)) in drive parameter space.
///
/// Amplitudes are in rad·µs⁻¹ and the period in µs. `j_min` participates
/// only in the [`PathFamily::CosSquared`] family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveWaveform {
    pub family: PathFamily,
    pub j_max: f64,
    pub j_min: f64,
    pub delta_max: f64,
    pub direction: Direction,
    pub period: f64,
}

impl DriveWaveform {
    /// Circular loop: J(t) = J_max·cos(2πt/T), Δ(t) = ±Δ_max·sin(2πt/T).
    pub fn circle(
        j_max: f64,
        delta_max: f64,
        direction: Direction,
        period: f64,
    ) -> Result<Self, LindbladError> {
        Self::validated(Self {
            family: PathFamily::Circle,
            j_max,
            j_min: 0.0,
            delta_max,
            direction,
            period,
        })
    }

    /// Cos²-modulated coupling loop used for the chiral-transfer path.
    pub fn cos_squared(
        j_max: f64,
        j_min: f64,
        delta_max: f64,
        direction: Direction,
        period: f64,
    ) -> Result<Self, LindbladError> {
        Self::validated(Self {
            family: PathFamily::CosSquared,
            j_max,
            j_min,
            delta_max,
            direction,
            period,
        })
    }

    /// Degenerate waveform with constant J = j0 and Δ = 0; the time ordering
    /// collapses and the one-period propagator is exp(T·𝓛).
    pub fn constant(j0: f64, period: f64) -> Result<Self, LindbladError> {
        Self::cos_squared(j0, j0, 0.0, Direction::Ccw, period)
    }

    /// Same loop with `period` replaced.
    pub fn with_period(mut self, period: f64) -> Result<Self, LindbladError> {
        self.period = period;
        Self::validated(self)
    }

    /// Same loop traversed in `direction`.
    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn validated(w: Self) -> Result<Self, LindbladError> {
        let finite =
            w.j_max.is_finite() && w.j_min.is_finite() && w.delta_max.is_finite() && w.period.is_finite();
        if !finite {
            return Err(LindbladError::InvalidWaveform(
                "waveform parameters must be finite".into(),
            ));
        }
        if w.period <= 0.0 {
            return Err(LindbladError::InvalidWaveform(format!(
                "period must be positive, got {}",
                w.period
            )));
        }
        if w.family == PathFamily::CosSquared && (w.j_max < w.j_min || w.j_min < 0.0) {
            return Err(LindbladError::InvalidWaveform(format!(
                "cos² family needs j_max ≥ j_min ≥ 0, got j_max={}, j_min={}",
                w.j_max, w.j_min
            )));
        }
        Ok(w)
    }
}

/// Instantaneous drive parameters: coupling J and detuning Δ, rad·µs⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub j: f64,
    pub delta: f64,
}

/// Evaluate the waveform at time `t` (any real; the loop is T-periodic).
///
/// The phase is folded into [0, 1) before any trigonometry and then onto a
/// quarter wave using the parity of sin/cos, so periodicity and the
/// CCW(t₀) ↔ CW(T−t₀) pairing hold exactly whenever the phases themselves
/// carry no rounding, not merely to floating-point tolerance.
pub fn drive_at(w: &DriveWaveform, t: f64) -> ControlPoint {
    let u = t.rem_euclid(w.period) / w.period;
    // Half-wave fold: cos(2πu) is even and sin(2πu) odd about u = ½.
    let (u_half, sin_sign) = if u <= 0.5 { (u, 1.0) } else { (1.0 - u, -1.0) };
    // Quarter-wave fold for the sine: sin(2πu) is even about u = ¼, and the
    // fold sends u = ½ to an exact sin(0) = 0.
    let u_quarter = if u_half <= 0.25 { u_half } else { 0.5 - u_half };
    let sin_val = sin_sign * (2.0 * std::f64::consts::PI * u_quarter).sin();
    let delta = w.direction.sign() * w.delta_max * sin_val;
    let j = match w.family {
        PathFamily::Circle => w.j_max * (2.0 * std::f64::consts::PI * u_half).cos(),
        PathFamily::CosSquared => {
            let c = (std::f64::consts::PI * u_half).cos();
            (w.j_max - w.j_min) * c * c + w.j_min
        }
    };
    ControlPoint { j, delta }
}

/// Coherent Hamiltonian H_c = J(|g⟩⟨e| + |e⟩⟨g|) + (Δ/2)(|g⟩⟨g| − |e⟩⟨e|),
/// i.e. [[Δ/2, J], [J, −Δ/2]] in the (|g⟩, |e⟩) basis. Hermitian by
/// construction.
pub fn hamiltonian(p: &ControlPoint) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(2);
    h[(0, 0)] = Complex64::new(p.delta / 2.0, 0.0);
    h[(0, 1)] = Complex64::new(p.j, 0.0);
    h[(1, 0)] = Complex64::new(p.j, 0.0);
    h[(1, 1)] = Complex64::new(-p.delta / 2.0, 0.0);
    h
}

/// Jump operator for spontaneous emission, L_e = √γ_e·|g⟩⟨e|.
pub fn emission_operator(gamma_e: f64) -> ComplexMatrix {
    let mut l = ComplexMatrix::zeros(2);
    l[(0, 1)] = Complex64::new(gamma_e.sqrt(), 0.0);
    l
}

/// Jump operator for pure dephasing, L_φ = √(γ_φ/2)·σ_z, normalized so the
/// off-diagonal elements decay at the extra rate γ_φ.
pub fn dephasing_operator(gamma_phi: f64) -> ComplexMatrix {
    let s = (gamma_phi / 2.0).sqrt();
    ComplexMatrix::diagonal(&[Complex64::new(s, 0.0), Complex64::new(-s, 0.0)])
}

/// The 4×4 Liouvillian superoperator in column-stacking vectorization:
///
/// 𝓛 = −i(I⊗H − Hᵀ⊗I) + Σ_k [ L̄_k⊗L_k − ½·I⊗(L_k†L_k) − ½·(L_k†L_k)ᵀ⊗I ]
///
/// with L_e = √γ_e|g⟩⟨e| and L_φ = √(γ_φ/2)σ_z. Tr 𝓛 = −2(γ_e + γ_φ) and
/// vec(I)† is a left null vector (trace preservation of the generated map).
pub fn liouvillian(p: &ControlPoint, d: &DissipationParams) -> ComplexMatrix {
    ComplexMatrix::from_vec(4, liouvillian_mat4(p, d).to_vec()).expect("4×4 literal")
}

/// Same superoperator written straight into a stack array; this is the
/// propagator's per-slice hot path. The kron-assembled definition above is
/// asserted equal in the tests.
pub(crate) fn liouvillian_mat4(p: &ControlPoint, d: &DissipationParams) -> crate::numerics::mat4::Mat4 {
    let j = Complex64::new(0.0, p.j);
    let delta = Complex64::new(0.0, p.delta);
    let gamma_e = d.gamma_e;
    let coherence_decay = Complex64::new(-0.5 * gamma_e - d.gamma_phi, 0.0);
    let zero = Complex64::ZERO;
    [
        zero,
        -j,
        j,
        Complex64::new(gamma_e, 0.0),
        -j,
        delta + coherence_decay,
        zero,
        j,
        j,
        zero,
        -delta + coherence_decay,
        -j,
        zero,
        j,
        -j,
        Complex64::new(-gamma_e, 0.0),
    ]
}

/// Kron-assembled reference construction of the same generator; kept for the
/// definitional cross-check in the tests.
#[cfg(test)]
fn liouvillian_from_krons(p: &ControlPoint, d: &DissipationParams) -> ComplexMatrix {
    use crate::numerics::kron;

    let h = hamiltonian(p);
    let eye = ComplexMatrix::identity(2);
    let minus_i = Complex64::new(0.0, -1.0);
    let commutator = (&kron(&eye, &h) - &kron(&h.transpose(), &eye)).scale(minus_i);

    let mut l_total = commutator;
    for jump in [emission_operator(d.gamma_e), dephasing_operator(d.gamma_phi)] {
        let ldl = &jump.dagger() * &jump;
        let gain = kron(&jump.conj(), &jump);
        let loss = &kron(&eye, &ldl) + &kron(&ldl.transpose(), &eye);
        l_total = &l_total + &(&gain - &loss.scale_re(0.5));
    }
    l_total
}

/// Liouvillian at time `t` along the waveform.
pub fn liouvillian_at(w: &DriveWaveform, d: &DissipationParams, t: f64) -> ComplexMatrix {
    liouvillian(&drive_at(w, t), d)
}

/// Column-stacking vectorization of a 2×2 density matrix:
/// vec(ρ) = (ρ₀₀, ρ₁₀, ρ₀₁, ρ₁₁).
pub fn vectorize(rho: &ComplexMatrix) -> Result<[Complex64; 4], LindbladError> {
    if rho.dim() != 2 {
        return Err(NumericsError::InvalidInput(format!(
            "vectorize expects a 2×2 matrix, got {}×{}",
            rho.dim(),
            rho.dim()
        ))
        .into());
    }
    Ok([rho[(0, 0)], rho[(1, 0)], rho[(0, 1)], rho[(1, 1)]])
}

/// Inverse of [`vectorize`]; exact round trip.
pub fn unvectorize(v: &[Complex64]) -> Result<ComplexMatrix, LindbladError> {
    if v.len() != 4 {
        return Err(NumericsError::InvalidInput(format!(
            "unvectorize expects 4 components, got {}",
            v.len()
        ))
        .into());
    }
    let mut rho = ComplexMatrix::zeros(2);
    rho[(0, 0)] = v[0];
    rho[(1, 0)] = v[1];
    rho[(0, 1)] = v[2];
    rho[(1, 1)] = v[3];
    Ok(rho)
}

/// vec(I) as a plain array; the left fixed point of every propagator here.
pub fn vec_identity() -> [Complex64; 4] {
    [
        Complex64::ONE,
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::ONE,
    ]
}

/// Pure ground state |g⟩⟨g| (Bloch z = +1).
pub fn ground_state() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex64::ONE, Complex64::ZERO])
}

/// Pure excited state |e⟩⟨e| (Bloch z = −1).
pub fn excited_state() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[Complex64::ZERO, Complex64::ONE])
}

/// |±x⟩⟨±x| with |±x⟩ = (|g⟩ ± |e⟩)/√2.
pub fn plus_x_state() -> ComplexMatrix {
    x_eigenstate(1.0)
}

pub fn minus_x_state() -> ComplexMatrix {
    x_eigenstate(-1.0)
}

fn x_eigenstate(sign: f64) -> ComplexMatrix {
    let half = Complex64::new(0.5, 0.0);
    let off = Complex64::new(0.5 * sign, 0.0);
    ComplexMatrix::from_vec(2, vec![half, off, off, half]).expect("2×2 literal")
}

/// Maximally mixed state I/2.
pub fn maximally_mixed_state() -> ComplexMatrix {
    ComplexMatrix::identity(2).scale_re(0.5)
}

/// State with the given Bloch vector, ρ = (I + xσ_x + yσ_y + zσ_z)/2.
pub fn bloch_state(x: f64, y: f64, z: f64) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(2);
    rho[(0, 0)] = Complex64::new((1.0 + z) / 2.0, 0.0);
    rho[(1, 1)] = Complex64::new((1.0 - z) / 2.0, 0.0);
    rho[(0, 1)] = Complex64::new(x / 2.0, -y / 2.0);
    rho[(1, 0)] = Complex64::new(x / 2.0, y / 2.0);
    rho
}
