//! Shared test support: an adaptive Dormand–Prince integrator independent of
//! the slice-product path, plus deterministic random-state helpers.

#![allow(dead_code)]

use num_complex::Complex64;

use floquet_qubit::lindblad::{
    bloch_state, liouvillian_at, DissipationParams, DriveWaveform,
};
use floquet_qubit::numerics::ComplexMatrix;

/// Deterministic xorshift-style generator for test data.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn sym(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    /// Uniform in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Random density matrix drawn uniformly from the Bloch ball.
    pub fn density_matrix(&mut self) -> ComplexMatrix {
        loop {
            let (x, y, z) = (self.sym(), self.sym(), self.sym());
            if x * x + y * y + z * z <= 1.0 {
                return bloch_state(x, y, z);
            }
        }
    }
}

/// Dormand–Prince 5(4) coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate Ẏ = 𝓛(t)·Y over [t0, t0+duration] with Y(t0) given, using an
/// adaptive fourth/fifth-order Dormand–Prince pair on the 16 complex matrix
/// components. Entirely independent of the midpoint slice product.
pub fn rk45_propagate(
    w: &DriveWaveform,
    d: &DissipationParams,
    t0: f64,
    duration: f64,
    y0: &ComplexMatrix,
    tol: f64,
) -> ComplexMatrix {
    let rhs = |t: f64, y: &ComplexMatrix| -> ComplexMatrix { &liouvillian_at(w, d, t) * y };

    let mut y = y0.clone();
    let mut t = t0;
    let t_end = t0 + duration;
    let mut h = duration / 256.0;
    let mut k1 = rhs(t, &y);

    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut stages: Vec<ComplexMatrix> = Vec::with_capacity(7);
        stages.push(k1.clone());
        for (i, row) in A.iter().enumerate() {
            let mut yi = y.clone();
            for (j, &aij) in row.iter().enumerate().take(i + 1) {
                if aij != 0.0 {
                    yi = &yi + &stages[j].scale_re(aij * h);
                }
            }
            stages.push(rhs(t + C[i] * h, &yi));
        }
        // Fifth-order solution reuses the last A row (FSAL structure).
        let mut y5 = y.clone();
        for (j, &bj) in A[5].iter().enumerate() {
            if bj != 0.0 {
                y5 = &y5 + &stages[j].scale_re(bj * h);
            }
        }
        // Fourth-order embedded solution for the error estimate.
        let mut y4 = y.clone();
        for (j, &bj) in B4.iter().enumerate() {
            if bj != 0.0 {
                y4 = &y4 + &stages[j].scale_re(bj * h);
            }
        }
        let err = (&y5 - &y4).frobenius_norm();
        let scale = tol * y.frobenius_norm().max(1.0);
        if err <= scale {
            t += h;
            y = y5;
            k1 = stages[6].clone();
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * (scale / err).powf(0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h.is_nan() || h <= 1e-12 {
            panic!("RK45 step collapsed at t = {t}");
        }
    }
    y
}

/// One-period RK45 propagator from the 4×4 identity.
pub fn rk45_period_propagator(
    w: &DriveWaveform,
    d: &DissipationParams,
    t0: f64,
    tol: f64,
) -> ComplexMatrix {
    rk45_propagate(w, d, t0, w.period, &ComplexMatrix::identity(4), tol)
}

pub fn fig1_waveform(period: f64) -> DriveWaveform {
    DriveWaveform::circle(
        20.0,
        2.0 * std::f64::consts::PI,
        floquet_qubit::lindblad::Direction::Cw,
        period,
    )
    .unwrap()
}

pub fn calc_rates() -> DissipationParams {
    DissipationParams::new(4.0, 0.0).unwrap()
}

pub fn measured_rates() -> DissipationParams {
    DissipationParams::new(4.7, 0.3).unwrap()
}

/// Complex max-norm distance between two matrices.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}

/// Bloch-vector Euclidean distance between two states.
pub fn bloch_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (xa, ya, za) = floquet_qubit::analysis::bloch_from_rho(a).unwrap();
    let (xb, yb, zb) = floquet_qubit::analysis::bloch_from_rho(b).unwrap();
    ((xa - xb).powi(2) + (ya - yb).powi(2) + (za - zb).powi(2)).sqrt()
}

#[allow(unused)]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
