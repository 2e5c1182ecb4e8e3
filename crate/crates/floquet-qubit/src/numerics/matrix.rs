//! Dense square complex matrix with value semantics.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use super::NumericsError;

/// Dense square complex matrix in row-major order.
///
/// The universal numeric carrier: 2×2 operators on the qubit Hilbert space
/// and 4×4 superoperators acting on column-stacked density matrices.
/// Liouvillian entries carry units of rad·µs⁻¹ or µs⁻¹; everything else is
/// dimensionless.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    /// Identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Build from row-major entries; the entry count must equal `dim²`.
    pub fn from_vec(dim: usize, entries: Vec<Complex64>) -> Result<Self, NumericsError> {
        if dim == 0 {
            return Err(NumericsError::InvalidInput(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(NumericsError::InvalidInput(format!(
                "expected {} entries for a {dim}×{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Build from a callback over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, z) in diag.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Entry-wise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum column sum of entry magnitudes.
    pub fn one_norm(&self) -> f64 {
        let mut max = 0.0f64;
        for j in 0..self.dim {
            let col: f64 = (0..self.dim).map(|i| self[(i, j)].norm()).sum();
            max = max.max(col);
        }
        max
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |A − A†|, the absolute deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                max = max.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        max
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitize(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        let mut out = vec![Complex64::ZERO; self.dim];
        for i in 0..self.dim {
            let mut acc = Complex64::ZERO;
            for j in 0..self.dim {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Extract column `j`.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Overwrite column `j`.
    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        assert_eq!(col.len(), self.dim);
        for i in 0..self.dim {
            self[(i, j)] = col[i];
        }
    }

    /// n-th matrix power by repeated multiplication.
    pub fn powi(&self, n: usize) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// LU decomposition with partial pivoting.
    pub fn lu(&self) -> Result<LuDecomposition, NumericsError> {
        LuDecomposition::new(self)
    }

    /// Determinant via LU.
    pub fn det(&self) -> Complex64 {
        match self.lu() {
            Ok(lu) => lu.det(),
            Err(_) => Complex64::ZERO,
        }
    }

    /// Solve `self · X = rhs` for the matrix `X`.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
        self.lu()?.solve_matrix(rhs)
    }

    /// Matrix inverse via LU.
    pub fn inverse(&self) -> Result<ComplexMatrix, NumericsError> {
        self.solve(&ComplexMatrix::identity(self.dim))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix addition");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix subtraction");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}×{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b` in the standard layout, so that
/// `vec(AρB) = (Bᵀ ⊗ A)·vec(ρ)` holds under column-stacking vectorization.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// LU factorization with partial pivoting, kept around for repeated solves.
pub struct LuDecomposition {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
    min_pivot: f64,
}

impl LuDecomposition {
    fn new(a: &ComplexMatrix) -> Result<Self, NumericsError> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut min_pivot = f64::INFINITY;
        for col in 0..n {
            let mut best = col;
            let mut best_mag = lu[(col, col)].norm();
            for row in col + 1..n {
                let mag = lu[(row, col)].norm();
                if mag > best_mag {
                    best = row;
                    best_mag = mag;
                }
            }
            if best != col {
                for j in 0..n {
                    let tmp = lu[(col, j)];
                    lu[(col, j)] = lu[(best, j)];
                    lu[(best, j)] = tmp;
                }
                perm.swap(col, best);
                swaps += 1;
            }
            let pivot = lu[(col, col)];
            let pmag = pivot.norm();
            min_pivot = min_pivot.min(pmag);
            if pmag == 0.0 {
                return Err(NumericsError::SingularMatrix(pmag));
            }
            for row in col + 1..n {
                let factor = lu[(row, col)] / pivot;
                lu[(row, col)] = factor;
                for j in col + 1..n {
                    let v = lu[(col, j)];
                    lu[(row, j)] -= factor * v;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            swaps,
            min_pivot,
        })
    }

    pub fn det(&self) -> Complex64 {
        let sign = if self.swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut det = Complex64::new(sign, 0.0);
        for i in 0..self.lu.dim() {
            det *= self.lu[(i, i)];
        }
        det
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n);
        // Forward substitution on the permuted right-hand side.
        let mut y: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for k in 0..i {
                let f = self.lu[(i, k)];
                let yk = y[k];
                y[i] -= f * yk;
            }
        }
        // Back substitution.
        for i in (0..n).rev() {
            for k in i + 1..n {
                let f = self.lu[(i, k)];
                let yk = y[k];
                y[i] -= f * yk;
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }

    pub fn solve_matrix(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
        let n = self.lu.dim();
        if rhs.dim() != n {
            return Err(NumericsError::InvalidInput(
                "right-hand side dimension mismatch in solve".into(),
            ));
        }
        let mut out = ComplexMatrix::zeros(n);
        for j in 0..n {
            let col = self.solve_vec(&rhs.column(j));
            out.set_column(j, &col);
        }
        Ok(out)
    }
}
