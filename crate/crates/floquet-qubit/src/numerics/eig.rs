//! General complex eigendecomposition and eigenvalue utilities.
//!
//! The solver reduces to upper Hessenberg form with Householder reflections,
//! runs an explicitly shifted QR iteration (Wilkinson shift, occasional
//! exceptional shift) down to complex Schur form, and recovers right
//! eigenvectors by guarded back-substitution on the triangular factor. No
//! normality is assumed anywhere; the Liouvillians this crate produces are
//! non-normal and pass arbitrarily close to defective at exceptional points.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::NumericsError;

/// QR sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 40;

/// Result of a general complex eigendecomposition.
///
/// Eigenvalues are sorted by real part descending, then imaginary part
/// ascending; `right_eigenvectors` holds the matching unit-norm eigenvectors
/// as columns, and `residuals[i] = ‖A·vᵢ − λᵢ·vᵢ‖₂`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub right_eigenvectors: ComplexMatrix,
    pub residuals: Vec<f64>,
}

/// Eigendecompose a general square complex matrix.
pub fn eig(a: &ComplexMatrix) -> Result<EigenDecomposition, NumericsError> {
    if !a.is_finite() {
        return Err(NumericsError::InvalidInput(
            "eigendecomposition of non-finite entries".into(),
        ));
    }
    let n = a.dim();
    if n == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![a[(0, 0)]],
            right_eigenvectors: ComplexMatrix::identity(1),
            residuals: vec![0.0],
        });
    }

    let (mut t, mut q) = hessenberg(a);
    schur(&mut t, &mut q)?;

    let mut pairs: Vec<(Complex64, Vec<Complex64>)> = Vec::with_capacity(n);
    for idx in 0..n {
        let lambda = t[(idx, idx)];
        let v = schur_eigenvector(&t, &q, idx);
        pairs.push((lambda, v));
    }
    pairs.sort_by(|(la, _), (lb, _)| {
        lb.re.total_cmp(&la.re).then(la.im.total_cmp(&lb.im))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n);
    let mut residuals = Vec::with_capacity(n);
    for (j, (lambda, v)) in pairs.into_iter().enumerate() {
        let av = a.mul_vec(&v);
        let res: f64 = av
            .iter()
            .zip(&v)
            .map(|(avi, vi)| (avi - lambda * vi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        eigenvalues.push(lambda);
        vectors.set_column(j, &v);
        residuals.push(res);
    }

    Ok(EigenDecomposition {
        eigenvalues,
        right_eigenvectors: vectors,
        residuals,
    })
}

/// Reduce `a` to upper Hessenberg form `h` with unitary `q`, `a = q·h·q†`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut u: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if u[0].norm() == 0.0 {
            Complex64::ONE
        } else {
            u[0] / u[0].norm()
        };
        let alpha = -phase * xnorm;
        u[0] -= alpha;
        let unorm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if unorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / unorm_sqr;

        // h ← P·h with P = I − β·u·u† acting on rows k+1..n.
        for j in 0..n {
            let dot: Complex64 = u
                .iter()
                .enumerate()
                .map(|(off, ui)| ui.conj() * h[(k + 1 + off, j)])
                .sum();
            let w = dot * beta;
            for (off, ui) in u.iter().enumerate() {
                h[(k + 1 + off, j)] -= ui * w;
            }
        }
        // h ← h·P on columns k+1..n.
        for i in 0..n {
            let dot: Complex64 = u
                .iter()
                .enumerate()
                .map(|(off, ui)| h[(i, k + 1 + off)] * ui)
                .sum();
            let w = dot * beta;
            for (off, ui) in u.iter().enumerate() {
                h[(i, k + 1 + off)] -= w * ui.conj();
            }
        }
        // q ← q·P, accumulating a = q·h·q†.
        for i in 0..n {
            let dot: Complex64 = u
                .iter()
                .enumerate()
                .map(|(off, ui)| q[(i, k + 1 + off)] * ui)
                .sum();
            let w = dot * beta;
            for (off, ui) in u.iter().enumerate() {
                q[(i, k + 1 + off)] -= w * ui.conj();
            }
        }
        // Entries below the subdiagonal are now zero by construction.
        for i in k + 2..n {
            h[(i, k)] = Complex64::ZERO;
        }
    }
    (h, q)
}

/// Drive an upper Hessenberg `h` to upper triangular (complex Schur) form,
/// accumulating the rotations into `q`.
fn schur(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<(), NumericsError> {
    let n = h.dim();
    let fallback = f64::EPSILON * h.frobenius_norm().max(f64::MIN_POSITIVE);
    let negligible = |h: &ComplexMatrix, i: usize| -> bool {
        let scale = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
        let bound = if scale == 0.0 {
            fallback
        } else {
            f64::EPSILON * scale
        };
        h[(i, i - 1)].norm() <= bound
    };

    let max_total = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0;
    let mut stagnant = 0;
    let mut hi = n - 1;
    loop {
        // Deflate converged 1×1 blocks off the bottom.
        while hi > 0 && negligible(h, hi) {
            h[(hi, hi - 1)] = Complex64::ZERO;
            hi -= 1;
            stagnant = 0;
        }
        if hi == 0 {
            return Ok(());
        }
        // Active block [lo, hi]: walk up to the first negligible subdiagonal.
        let mut lo = hi;
        while lo > 0 && !negligible(h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = Complex64::ZERO;
        }

        total += 1;
        stagnant += 1;
        if total > max_total {
            let residuals: Vec<f64> = (1..n).map(|i| h[(i, i - 1)].norm()).collect();
            return Err(NumericsError::ConvergenceFailure {
                iterations: total,
                residuals,
            });
        }

        let shift = if stagnant % 12 == 0 {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_step(h, q, lo, hi, shift);
    }
}

/// Eigenvalue of the trailing 2×2 block closest to the bottom-right entry.
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let mean = (a + d) * 0.5;
    let disc = ((a - d) * (a - d) * 0.25 + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the active block `[lo, hi]`.
fn qr_step(
    h: &mut ComplexMatrix,
    q: &mut ComplexMatrix,
    lo: usize,
    hi: usize,
    shift: Complex64,
) {
    let n = h.dim();
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    // Left Givens sweep: zero the subdiagonal of (h − σI) within the block.
    let mut rotations = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
        for j in i..n {
            let top = h[(i, j)];
            let bot = h[(i + 1, j)];
            h[(i, j)] = c * top + s * bot;
            h[(i + 1, j)] = -s.conj() * top + c * bot;
        }
        h[(i + 1, i)] = Complex64::ZERO;
        rotations.push((c, s));
    }
    // Right sweep h ← h·G† restores similarity; q accumulates the same.
    for (k, &(c, s)) in rotations.iter().enumerate() {
        let i = lo + k;
        let row_limit = (i + 2).min(hi + 1);
        for r in 0..row_limit {
            let left = h[(r, i)];
            let right = h[(r, i + 1)];
            h[(r, i)] = c * left + s.conj() * right;
            h[(r, i + 1)] = -s * left + c * right;
        }
        for r in 0..n {
            let left = q[(r, i)];
            let right = q[(r, i + 1)];
            q[(r, i)] = c * left + s.conj() * right;
            q[(r, i + 1)] = -s * left + c * right;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

/// Givens rotation [[c, s], [−s̄, c]] with real c ≥ 0 zeroing the second
/// component of (a, b).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let anorm = a.norm();
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return (1.0, Complex64::ZERO);
    }
    if anorm == 0.0 {
        return (0.0, b.conj() / bnorm);
    }
    let r = anorm.hypot(bnorm);
    let c = anorm / r;
    let s = (a / anorm) * b.conj() / r;
    (c, s)
}

/// Right eigenvector for the idx-th diagonal entry of the Schur factor,
/// by guarded back-substitution, rotated back through `q` and normalized.
fn schur_eigenvector(t: &ComplexMatrix, q: &ComplexMatrix, idx: usize) -> Vec<Complex64> {
    let n = t.dim();
    let lambda = t[(idx, idx)];
    let small = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut y = vec![Complex64::ZERO; n];
    y[idx] = Complex64::ONE;
    for j in (0..idx).rev() {
        let mut sum = Complex64::ZERO;
        for k in j + 1..=idx {
            sum += t[(j, k)] * y[k];
        }
        let mut den = t[(j, j)] - lambda;
        // Perturb near-zero denominators; a defective pair then simply
        // reproduces (nearly) the same eigenvector direction.
        if den.norm() < small {
            den = if den == Complex64::ZERO {
                Complex64::new(small, 0.0)
            } else {
                den / den.norm() * small
            };
        }
        y[j] = -sum / den;
    }
    let mut v = q.mul_vec(&y);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in &mut v {
            *z /= norm;
        }
    }
    v
}

/// Invert `μ = e^{Tλ}` on the principal branch, `Im λ ∈ (−π/T, π/T]`.
///
/// This maps one-period propagator eigenvalues to effective-generator
/// eigenvalues in µs⁻¹ (the first Floquet zone).
pub fn principal_log_eigenvalues(
    g_eigs: &[Complex64],
    t_period: f64,
) -> Result<Vec<Complex64>, NumericsError> {
    if t_period.is_nan() || t_period <= 0.0 {
        return Err(NumericsError::InvalidInput(format!(
            "period must be positive, got {t_period}"
        )));
    }
    g_eigs
        .iter()
        .map(|mu| {
            let mag = mu.norm();
            if mag < f64::MIN_POSITIVE {
                return Err(NumericsError::SingularMap(mag));
            }
            let mut arg = mu.arg();
            if arg <= -std::f64::consts::PI {
                arg = std::f64::consts::PI;
            }
            Ok(Complex64::new(mag.ln() / t_period, arg / t_period))
        })
        .collect()
}

/// Minimal total |aᵢ − b_{π(i)}| over perfect matchings π, found by
/// exhaustive permutation. Exact and cheap for the n ≤ 6 sets used here;
/// larger inputs are rejected.
pub fn eigenvalue_set_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64, NumericsError> {
    if a.len() != b.len() {
        return Err(NumericsError::InvalidInput(format!(
            "eigenvalue sets of different lengths: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() > 8 {
        return Err(NumericsError::InvalidInput(
            "exhaustive matching is limited to 8 eigenvalues".into(),
        ));
    }
    let n = a.len();
    let mut used = vec![false; n];
    let mut best = f64::INFINITY;
    fn recurse(
        a: &[Complex64],
        b: &[Complex64],
        used: &mut [bool],
        i: usize,
        partial: f64,
        best: &mut f64,
    ) {
        if partial >= *best {
            return;
        }
        if i == a.len() {
            *best = partial;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                recurse(a, b, used, i + 1, partial + (a[i] - b[j]).norm(), best);
                used[j] = false;
            }
        }
    }
    recurse(a, b, &mut used, 0, 0.0, &mut best);
    Ok(best)
}

/// Eigenvalues of (the Hermitian part of) `m`, ascending, by cyclic complex
/// Jacobi rotations. Eigenvalues only; no vectors are accumulated.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut b = m.hermitize();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for qq in p + 1..n {
                let w = b[(p, qq)].norm();
                let app = b[(p, p)].re;
                let aqq = b[(qq, qq)].re;
                if w <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) + f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = b[(p, qq)] / w;
                let tau = (aqq - app) / (2.0 * w);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                b[(p, p)] = Complex64::new(app - t * w, 0.0);
                b[(qq, qq)] = Complex64::new(aqq + t * w, 0.0);
                b[(p, qq)] = Complex64::ZERO;
                b[(qq, p)] = Complex64::ZERO;
                for r in 0..n {
                    if r == p || r == qq {
                        continue;
                    }
                    let brp = b[(r, p)];
                    let brq = b[(r, qq)];
                    let new_rp = c * brp - s * phase.conj() * brq;
                    let new_rq = s * phase * brp + c * brq;
                    b[(r, p)] = new_rp;
                    b[(r, qq)] = new_rq;
                    b[(p, r)] = new_rp.conj();
                    b[(qq, r)] = new_rq.conj();
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| b[(i, i)].re).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Singular values of `m`, descending, via the Hermitian eigenvalues of m†m.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = &m.dagger() * m;
    let mut sv: Vec<f64> = hermitian_eigenvalues(&gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    sv
}

/// 2-norm condition number σ_max/σ_min (infinite when σ_min vanishes).
pub fn two_norm_condition(m: &ComplexMatrix) -> f64 {
    let sv = singular_values(m);
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}
