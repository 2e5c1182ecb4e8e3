//! Effective Floquet Liouvillian spectra from one-period propagators.

use num_complex::Complex64;

use crate::numerics::{eig, principal_log_eigenvalues, two_norm_condition, ComplexMatrix};

use super::{FloquetError, PropagatorResult};

/// A propagator eigenvalue must sit this close to 1 for the steady-state
/// mode to be identified.
pub(crate) const NESS_EIGENVALUE_TOL: f64 = 1e-4;

/// Complex spectrum of the effective Floquet Liouvillian 𝓛_eff, defined by
/// G = e^{T·𝓛_eff} on the principal branch, Im λ ∈ (−π/T, π/T].
///
/// Exactly one mode (index `ness_index`) has λ ≈ 0; its eigenvector is the
/// nonequilibrium steady state. `min_gap` is the smallest pairwise distance
/// among the three nontrivial eigenvalues, and `eigvec_condition` the 2-norm
/// condition number of the eigenvector matrix — both blow through the roof
/// at an exceptional point.
#[derive(Debug, Clone)]
pub struct FloquetSpectrum {
    pub period: f64,
    pub t0: f64,
    /// Eigenvalues of 𝓛_eff in µs⁻¹, sorted by Re descending then Im
    /// ascending.
    pub eigenvalues: [Complex64; 4],
    /// Matching right eigenvectors of G (equivalently of 𝓛_eff) as columns.
    pub eigenvectors: ComplexMatrix,
    /// Index of the steady-state mode.
    pub ness_index: usize,
    /// Smallest pairwise |λᵢ − λⱼ| among the nontrivial modes.
    pub min_gap: f64,
    /// 2-norm condition number of the eigenvector matrix.
    pub eigvec_condition: f64,
}

impl FloquetSpectrum {
    /// Eigenvalues of the nontrivial (non-steady-state) modes.
    pub fn nontrivial_eigenvalues(&self) -> Vec<Complex64> {
        (0..4)
            .filter(|&i| i != self.ness_index)
            .map(|i| self.eigenvalues[i])
            .collect()
    }

    /// Slowest nontrivial mode: the one with the largest (least negative)
    /// real part, the rate that dominates late transients.
    pub fn slow_mode(&self) -> Complex64 {
        self.nontrivial_eigenvalues()
            .into_iter()
            .max_by(|a, b| a.re.total_cmp(&b.re))
            .expect("a 4×4 spectrum always has nontrivial modes")
    }

    /// Dense 𝓛_eff = V·diag(λ)·V⁻¹, available only while the eigenvector
    /// matrix is well conditioned; near an EP the dense log is meaningless
    /// and `None` is returned.
    pub fn effective_liouvillian(&self) -> Option<ComplexMatrix> {
        if self.eigvec_condition >= 1e6 {
            return None;
        }
        let lam = ComplexMatrix::diagonal(&self.eigenvalues);
        let vinv = self.eigenvectors.inverse().ok()?;
        Some(&(&self.eigenvectors * &lam) * &vinv)
    }
}

/// Spectrum of the effective Floquet Liouvillian for a one-period map.
///
/// Eigendecomposes G, pushes the eigenvalues through the principal-branch
/// logarithm, and identifies the steady-state mode as the one whose
/// G-eigenvalue lies closest to 1.
pub fn effective_spectrum(p: &PropagatorResult) -> Result<FloquetSpectrum, FloquetError> {
    let decomp = eig(&p.g)?;
    let mu = &decomp.eigenvalues;

    let (ness_mu_index, ness_distance) = mu
        .iter()
        .enumerate()
        .map(|(i, m)| (i, (m - Complex64::ONE).norm()))
        .min_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("4×4 spectrum is non-empty");
    if ness_distance > NESS_EIGENVALUE_TOL {
        return Err(FloquetError::NoSteadyState {
            closest: ness_distance,
        });
    }

    let lambdas = principal_log_eigenvalues(mu, p.period)?;

    // Re-sort by the generator eigenvalues (Re desc, then Im asc), carrying
    // eigenvectors and the steady-state marker along.
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| {
        lambdas[b]
            .re
            .total_cmp(&lambdas[a].re)
            .then(lambdas[a].im.total_cmp(&lambdas[b].im))
    });

    let mut eigenvalues = [Complex64::ZERO; 4];
    let mut eigenvectors = ComplexMatrix::zeros(4);
    let mut ness_index = 0;
    for (new_idx, &old_idx) in order.iter().enumerate() {
        eigenvalues[new_idx] = lambdas[old_idx];
        eigenvectors.set_column(new_idx, &decomp.right_eigenvectors.column(old_idx));
        if old_idx == ness_mu_index {
            ness_index = new_idx;
        }
    }

    let nontrivial: Vec<Complex64> = (0..4)
        .filter(|&i| i != ness_index)
        .map(|i| eigenvalues[i])
        .collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..nontrivial.len() {
        for j in i + 1..nontrivial.len() {
            min_gap = min_gap.min((nontrivial[i] - nontrivial[j]).norm());
        }
    }
    let eigvec_condition = two_norm_condition(&eigenvectors);

    Ok(FloquetSpectrum {
        period: p.period,
        t0: p.t0,
        eigenvalues,
        eigenvectors,
        ness_index,
        min_gap,
        eigvec_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{propagate_period, shifted_propagator};
    use crate::lindblad::{Direction, DissipationParams, DriveWaveform};
    use crate::numerics::eigenvalue_set_distance;

    fn fig1_waveform(period: f64) -> DriveWaveform {
        DriveWaveform::circle(20.0, 2.0 * std::f64::consts::PI, Direction::Cw, period).unwrap()
    }

    fn calc_rates() -> DissipationParams {
        DissipationParams::new(4.0, 0.0).unwrap()
    }

    #[test]
    fn constant_generator_recovers_static_spectrum() {
        let w = DriveWaveform::constant(0.0, 0.2).unwrap();
        let p = propagate_period(&w, &calc_rates(), 1e-10).unwrap();
        let s = effective_spectrum(&p).unwrap();
        let expected = [0.0, -2.0, -2.0, -4.0];
        for (lam, want) in s.eigenvalues.iter().zip(expected) {
            assert!(
                (lam - Complex64::new(want, 0.0)).norm() < 1e-9,
                "{lam} vs {want}"
            );
        }
        assert_eq!(s.ness_index, 0);
    }

    #[test]
    fn regime_split_between_200ns_and_600ns() {
        let d = calc_rates();
        let under = effective_spectrum(&propagate_period(&fig1_waveform(0.2), &d, 1e-9).unwrap())
            .unwrap();
        let max_im = under
            .nontrivial_eigenvalues()
            .iter()
            .map(|l| l.im.abs())
            .fold(0.0, f64::max);
        assert!(max_im > 1.0, "expected underdamped pair at T=200 ns, Im={max_im}");

        let over = effective_spectrum(&propagate_period(&fig1_waveform(0.6), &d, 1e-9).unwrap())
            .unwrap();
        let max_im = over
            .nontrivial_eigenvalues()
            .iter()
            .map(|l| l.im.abs())
            .fold(0.0, f64::max);
        assert!(max_im < 1e-6, "expected overdamped modes at T=600 ns, Im={max_im}");
    }

    #[test]
    fn spectrum_invariants_hold_at_fig1_parameters() {
        let d = calc_rates();
        for t_period in [0.2, 0.35, 0.6] {
            let s = effective_spectrum(
                &propagate_period(&fig1_waveform(t_period), &d, 1e-9).unwrap(),
            )
            .unwrap();
            // Exactly one near-zero mode.
            let zero_modes = s
                .eigenvalues
                .iter()
                .filter(|l| l.norm() <= 1e-8)
                .count();
            assert_eq!(zero_modes, 1, "T={t_period}");
            assert!(s.eigenvalues[s.ness_index].norm() <= 1e-8);
            // Stability and first-Floquet-zone confinement.
            let zone = std::f64::consts::PI / t_period;
            for l in &s.eigenvalues {
                assert!(l.re <= 1e-8);
                assert!(l.im > -zone - 1e-12 && l.im <= zone + 1e-12);
            }
            // Conjugation closure.
            for l in &s.eigenvalues {
                assert!(s
                    .eigenvalues
                    .iter()
                    .any(|m| (m - l.conj()).norm() < 1e-8));
            }
        }
    }

    #[test]
    fn spectra_are_t0_invariant() {
        let d = calc_rates();
        let w = fig1_waveform(0.2);
        let base = effective_spectrum(&shifted_propagator(&w, &d, 0.0, 1e-10).unwrap()).unwrap();
        for frac in [0.2, 0.5, 0.8] {
            let shifted =
                effective_spectrum(&shifted_propagator(&w, &d, frac * 0.2, 1e-10).unwrap())
                    .unwrap();
            let dist =
                eigenvalue_set_distance(&base.eigenvalues, &shifted.eigenvalues).unwrap();
            assert!(dist < 1e-7, "t0 = {frac}T distance {dist:e}");
        }
    }

    #[test]
    fn broken_trace_preservation_is_a_no_steady_state_error() {
        // A map with no eigenvalue near 1 cannot hold a steady state; this
        // signals an integration failure upstream.
        let p = crate::floquet::PropagatorResult {
            g: crate::numerics::ComplexMatrix::identity(4).scale_re(0.5),
            t0: 0.0,
            period: 0.2,
            direction: Direction::Cw,
            slices: 64,
            error_estimate: 0.0,
        };
        assert!(matches!(
            effective_spectrum(&p),
            Err(crate::floquet::FloquetError::NoSteadyState { .. })
        ));
    }

    #[test]
    fn dense_effective_liouvillian_reproduces_propagator() {
        let d = calc_rates();
        let p = propagate_period(&fig1_waveform(0.2), &d, 1e-10).unwrap();
        let s = effective_spectrum(&p).unwrap();
        let l_eff = s.effective_liouvillian().expect("well conditioned away from EP");
        let g_rebuilt = crate::numerics::expm(&l_eff.scale_re(0.2)).unwrap();
        assert!((&g_rebuilt - &p.g).frobenius_norm() < 1e-7);
    }
}
