//! Allocation-free 4×4 kernel for the propagator hot loop.
//!
//! The slice product evaluates millions of small exponentials; going through
//! heap-backed matrices there costs more than the arithmetic. This module
//! mirrors the generic Padé(13) exponential on stack arrays. Row-major
//! `[Complex64; 16]` layout, identical coefficients and operation structure
//! as [`super::expm`].

use num_complex::Complex64;

pub type Mat4 = [Complex64; 16];

pub const ZERO4: Mat4 = [Complex64::ZERO; 16];

pub fn identity4() -> Mat4 {
    let mut m = ZERO4;
    m[0] = Complex64::ONE;
    m[5] = Complex64::ONE;
    m[10] = Complex64::ONE;
    m[15] = Complex64::ONE;
    m
}

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = ZERO4;
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i * 4 + k];
            if aik == Complex64::ZERO {
                continue;
            }
            for j in 0..4 {
                out[i * 4 + j] += aik * b[k * 4 + j];
            }
        }
    }
    out
}

pub fn scale4(a: &Mat4, s: f64) -> Mat4 {
    let mut out = *a;
    for z in &mut out {
        *z *= s;
    }
    out
}

fn add_scaled(acc: &mut Mat4, a: &Mat4, s: f64) {
    for (dst, src) in acc.iter_mut().zip(a) {
        *dst += src * s;
    }
}

fn one_norm4(a: &Mat4) -> f64 {
    let mut max = 0.0f64;
    for j in 0..4 {
        let col = a[j].norm() + a[4 + j].norm() + a[8 + j].norm() + a[12 + j].norm();
        max = max.max(col);
    }
    max
}

/// Solve A·X = B in place via Gaussian elimination with partial pivoting.
fn solve4(a: &mut Mat4, b: &mut Mat4) {
    for col in 0..4 {
        let mut pivot = col;
        let mut best = a[col * 4 + col].norm();
        for row in col + 1..4 {
            let mag = a[row * 4 + col].norm();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if pivot != col {
            for j in 0..4 {
                a.swap(col * 4 + j, pivot * 4 + j);
                b.swap(col * 4 + j, pivot * 4 + j);
            }
        }
        let inv = Complex64::ONE / a[col * 4 + col];
        for row in col + 1..4 {
            let factor = a[row * 4 + col] * inv;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..4 {
                let v = a[col * 4 + j];
                a[row * 4 + j] -= factor * v;
            }
            for j in 0..4 {
                let v = b[col * 4 + j];
                b[row * 4 + j] -= factor * v;
            }
        }
    }
    for col in (0..4).rev() {
        let inv = Complex64::ONE / a[col * 4 + col];
        for j in 0..4 {
            let mut sum = b[col * 4 + j];
            for k in col + 1..4 {
                sum -= a[col * 4 + k] * b[k * 4 + j];
            }
            b[col * 4 + j] = sum * inv;
        }
    }
}

/// Padé(13) coefficients, as in the generic exponential.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA_13: f64 = 5.371920351148152;

/// exp(a) for a finite 4×4; scaling-and-squaring around Padé(13).
pub fn expm4(a: &Mat4) -> Mat4 {
    let norm = one_norm4(a);
    if norm == 0.0 {
        return identity4();
    }
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = scale4(a, 0.5f64.powi(squarings as i32));

    let a2 = matmul4(&scaled, &scaled);
    let a4 = matmul4(&a2, &a2);
    let a6 = matmul4(&a2, &a4);

    let mut w1 = ZERO4;
    add_scaled(&mut w1, &a6, B[13]);
    add_scaled(&mut w1, &a4, B[11]);
    add_scaled(&mut w1, &a2, B[9]);
    let mut w2 = matmul4(&w1, &a6);
    add_scaled(&mut w2, &a6, B[7]);
    add_scaled(&mut w2, &a4, B[5]);
    add_scaled(&mut w2, &a2, B[3]);
    for i in 0..4 {
        w2[i * 4 + i] += B[1];
    }
    let u = matmul4(&scaled, &w2);

    let mut v1 = ZERO4;
    add_scaled(&mut v1, &a6, B[12]);
    add_scaled(&mut v1, &a4, B[10]);
    add_scaled(&mut v1, &a2, B[8]);
    let mut v = matmul4(&v1, &a6);
    add_scaled(&mut v, &a6, B[6]);
    add_scaled(&mut v, &a4, B[4]);
    add_scaled(&mut v, &a2, B[2]);
    for i in 0..4 {
        v[i * 4 + i] += B[0];
    }

    let mut denom = ZERO4;
    let mut numer = ZERO4;
    for i in 0..16 {
        denom[i] = v[i] - u[i];
        numer[i] = v[i] + u[i];
    }
    solve4(&mut denom, &mut numer);
    let mut result = numer;
    for _ in 0..squarings {
        result = matmul4(&result, &result);
    }
    result
}

/// Frobenius distance between two 4×4 arrays.
pub fn frobenius_distance4(a: &Mat4, b: &Mat4) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Matrix–vector product on the stack.
pub fn mul_vec4(a: &Mat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::ZERO; 4];
    for i in 0..4 {
        let mut acc = Complex64::ZERO;
        for j in 0..4 {
            acc += a[i * 4 + j] * v[j];
        }
        out[i] = acc;
    }
    out
}
