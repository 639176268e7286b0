//! Dense complex-matrix toolbox: Kronecker products, adjoints, Hermitian
//! eigendecomposition and the matrix exponential, on top of [`nalgebra`].
//!
//! Everything here is dimension-agnostic but tuned for the 4x4 / 16x16
//! matrices this crate actually produces.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Dense complex matrix in row-major logical order.
pub type CMatrix = DMatrix<C64>;

#[derive(Debug, Error)]
pub enum DenseMathError {
    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("expected {rows}x{cols} = {} entries, got {got}", rows * cols)]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: ||A - A'||_F = {deviation:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { deviation: f64, tolerance: f64 },
}

/// Build a matrix from row-major entries, rejecting `NaN`/`Inf`.
pub fn matrix(rows: usize, cols: usize, entries: &[C64]) -> Result<CMatrix, DenseMathError> {
    if entries.len() != rows * cols {
        return Err(DenseMathError::EntryCount { rows, cols, got: entries.len() });
    }
    for (k, z) in entries.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(DenseMathError::NonFinite { row: k / cols, col: k % cols });
        }
    }
    Ok(CMatrix::from_row_slice(rows, cols, entries))
}

/// Real matrix entries, row-major.
pub fn matrix_re(rows: usize, cols: usize, entries: &[f64]) -> Result<CMatrix, DenseMathError> {
    let z: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
    matrix(rows, cols, &z)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Kronecker product `a (x) b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Conjugate transpose.
pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// Frobenius norm.
pub fn fro_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Frobenius distance between two matrices of equal shape.
pub fn fro_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    fro_norm(&(a - b))
}

fn hermiticity_deviation(a: &CMatrix) -> f64 {
    fro_dist(a, &a.adjoint())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvector columns. Within degenerate clusters, columns are ordered by
/// lexicographic comparison of their entries after phase normalisation, and
/// every column is re-phased so its largest-modulus component is real
/// positive. Input must be Hermitian to within `1e-12 * ||a||_F`.
pub fn hermitian_eigensystem(a: &CMatrix) -> Result<(Vec<f64>, CMatrix), DenseMathError> {
    if a.nrows() != a.ncols() {
        return Err(DenseMathError::NonSquare { rows: a.nrows(), cols: a.ncols() });
    }
    let tolerance = 1e-12 * fro_norm(a).max(1.0);
    let deviation = hermiticity_deviation(a);
    if deviation > tolerance {
        return Err(DenseMathError::NotHermitian { deviation, tolerance });
    }
    // Symmetrise so the solver sees an exactly Hermitian input.
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();

    let n = a.nrows();
    let mut cols: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let col: Vec<C64> = eig.eigenvectors.column(j).iter().copied().collect();
            (eig.eigenvalues[j], phase_normalize(col))
        })
        .collect();
    cols.sort_by(|(la, va), (lb, vb)| {
        la.partial_cmp(lb).unwrap().then_with(|| lex_cmp(va, vb))
    });

    let values: Vec<f64> = cols.iter().map(|(l, _)| *l).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (j, (_, v)) in cols.iter().enumerate() {
        for (i, z) in v.iter().enumerate() {
            vectors[(i, j)] = *z;
        }
    }
    Ok((values, vectors))
}

/// Rotate a vector by a global phase so its largest-modulus component is
/// real positive. First index wins among equal moduli.
pub fn phase_normalize(mut v: Vec<C64>) -> Vec<C64> {
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best] / best_norm;
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
    v
}

fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Matrix exponential by scaling and squaring around a [13/13] Pade
/// approximant.
///
/// The argument is scaled by `2^-s` until its 1-norm is below the Pade-13
/// threshold, approximated, and squared back up.
pub fn expm(a: &CMatrix) -> Result<CMatrix, DenseMathError> {
    if a.nrows() != a.ncols() {
        return Err(DenseMathError::NonSquare { rows: a.nrows(), cols: a.ncols() });
    }
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(DenseMathError::NonFinite { row: i, col: j });
            }
        }
    }
    const THETA_13: f64 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(2f64.powi(-(s as i32)));
    let mut result = pade13(&scaled);
    for _ in 0..s {
        result = &result * &result;
    }
    Ok(result)
}

fn pade13(a: &CMatrix) -> CMatrix {
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
    let n = a.nrows();
    let eye = identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u = a * (&a6 * (a6.scale(B[13]) + a4.scale(B[11]) + a2.scale(B[9]))
        + a6.scale(B[7])
        + a4.scale(B[5])
        + a2.scale(B[3])
        + eye.scale(B[1]));
    let v = &a6 * (a6.scale(B[12]) + a4.scale(B[10]) + a2.scale(B[8]))
        + a6.scale(B[6])
        + a4.scale(B[4])
        + a2.scale(B[2])
        + eye.scale(B[0]);
    let numerator = &v + &u;
    nalgebra::linalg::LU::new(v - u)
        .solve(&numerator)
        .expect("Pade denominator is nonsingular below the scaling threshold")
}

fn one_norm(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
        let a = random_matrix(rng, n);
        (&a + a.adjoint()).scale(0.5)
    }

    fn sigma_z() -> CMatrix {
        matrix_re(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    fn sigma_x() -> CMatrix {
        matrix_re(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn matrix_rejects_non_finite_entries() {
        let err = matrix(1, 2, &[c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, DenseMathError::NonFinite { row: 0, col: 1 }));
        assert!(matrix(2, 2, &[c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = identity(2);
        assert_eq!(kron(&i2, &i2), identity(4));

        let sz_i = kron(&sigma_z(), &i2);
        let expect = matrix_re(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, -1.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
        ])
        .unwrap();
        assert_eq!(sz_i, expect);

        let sz_tz = kron(&sigma_z(), &sigma_z());
        let expect = matrix_re(4, 4, &[
            1.0, 0.0, 0.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
            0.0, 0.0, -1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ])
        .unwrap();
        assert_eq!(sz_tz, expect);
    }

    #[test]
    fn kron_is_associative_on_integer_matrices() {
        let a = matrix_re(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = matrix_re(2, 2, &[0.0, 1.0, -1.0, 2.0]).unwrap();
        let d = matrix_re(2, 2, &[5.0, 0.0, 0.0, -3.0]).unwrap();
        assert_eq!(kron(&kron(&a, &b), &d), kron(&a, &kron(&b, &d)));
    }

    #[test]
    fn dagger_basics() {
        assert_eq!(dagger(&identity(4)), identity(4));
        // tau_plus = |1><0|... in sigma_z = diag(1,-1) convention the raising
        // operator into the upper state |0> is |0><1|.
        let tau_minus = matrix_re(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        let tau_plus = matrix_re(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(dagger(&tau_plus), tau_minus);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 4);
        assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn eigensystem_diagonal_matrix() {
        let a = matrix_re(4, 4, &[
            -20.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 20.0,
        ])
        .unwrap();
        let (vals, vecs) = hermitian_eigensystem(&a).unwrap();
        let expect = [-20.0, 0.0, 0.0, 20.0];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12);
        }
        // Columns orthonormal.
        let gram = vecs.adjoint() * &vecs;
        assert!(fro_dist(&gram, &identity(4)) < 1e-12);
    }

    #[test]
    fn eigensystem_pauli_x_spectrum() {
        let (vals, _) = hermitian_eigensystem(&sigma_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let a = matrix(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&a),
            Err(DenseMathError::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigensystem_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 4, 8, 16] {
            let a = random_hermitian(&mut rng, n);
            let (vals, vecs) = hermitian_eigensystem(&a).unwrap();
            let lam = CMatrix::from_fn(n, n, |i, j| {
                if i == j { c(vals[i], 0.0) } else { c(0.0, 0.0) }
            });
            let rebuilt = &vecs * lam * vecs.adjoint();
            assert!(fro_dist(&a, &rebuilt) <= 1e-10 * fro_norm(&a).max(1.0));
            assert!(fro_dist(&(vecs.adjoint() * &vecs), &identity(n)) < 1e-12);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eigensystem_phase_convention_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(&mut rng, 4);
        let (_, v1) = hermitian_eigensystem(&a).unwrap();
        let (_, v2) = hermitian_eigensystem(&a).unwrap();
        assert_eq!(v1, v2);
        for j in 0..4 {
            let col: Vec<C64> = v1.column(j).iter().copied().collect();
            let (k, _) = col
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| a.norm().partial_cmp(&b.norm()).unwrap())
                .unwrap();
            assert!(col[k].im.abs() < 1e-12 && col[k].re > 0.0);
        }
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMatrix::zeros(4, 4);
        assert!(fro_dist(&expm(&z).unwrap(), &identity(4)) < 1e-15);
    }

    #[test]
    fn expm_diagonal_phases() {
        let a = matrix(2, 2, &[
            c(0.0, std::f64::consts::PI), c(0.0, 0.0),
            c(0.0, 0.0), c(0.0, 0.0),
        ])
        .unwrap();
        let e = expm(&a).unwrap();
        assert!((e[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((e[(1, 1)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn expm_rejects_non_square() {
        let a = CMatrix::zeros(2, 3);
        assert!(matches!(expm(&a), Err(DenseMathError::NonSquare { .. })));
    }

    /// Oracle: truncated Taylor sum with 200 terms at small norm.
    fn expm_taylor_oracle(a: &CMatrix) -> CMatrix {
        let n = a.nrows();
        let mut sum = identity(n);
        let mut term = identity(n);
        for k in 1..=200u32 {
            term = (&term * a) * c(1.0 / k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn expm_matches_taylor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let mut a = random_matrix(&mut rng, 4);
            let norm = fro_norm(&a);
            if norm > 1.0 {
                a *= c(1.0 / norm, 0.0);
            }
            let e = expm(&a).unwrap();
            let o = expm_taylor_oracle(&a);
            assert!(fro_dist(&e, &o) <= 1e-12 * fro_norm(&o));
        }
    }

    #[test]
    fn expm_inverse_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..6 {
            let a = random_matrix(&mut rng, 4) * c(2.5, 0.0);
            assert!(fro_norm(&a) <= 10.0 + 1e-9);
            let fwd = expm(&a).unwrap();
            let bwd = expm(&(-&a)).unwrap();
            assert!(fro_dist(&(fwd * bwd), &identity(4)) < 1e-10);
        }
    }

    #[test]
    fn expm_accuracy_on_large_norm_16x16() {
        // Eight antisymmetric 2x2 blocks with angles up to 100: the exact
        // exponential is the block-diagonal rotation matrix, so the oracle
        // carries no numerical error of its own. one-norm = max|theta| = 100.
        let thetas = [100.0, -95.3, 71.7, -48.9, 33.1, -21.4, 9.6, -3.2];
        let mut a = CMatrix::zeros(16, 16);
        let mut reference = CMatrix::zeros(16, 16);
        for (b, &theta) in thetas.iter().enumerate() {
            let (i, j) = (2 * b, 2 * b + 1);
            a[(i, j)] = c(theta, 0.0);
            a[(j, i)] = c(-theta, 0.0);
            let (s, co) = f64::sin_cos(theta);
            reference[(i, i)] = c(co, 0.0);
            reference[(i, j)] = c(s, 0.0);
            reference[(j, i)] = c(-s, 0.0);
            reference[(j, j)] = c(co, 0.0);
        }
        let e = expm(&a).unwrap();
        let rel = fro_dist(&e, &reference) / fro_norm(&reference);
        assert!(rel <= 1e-12, "relative error {rel:.3e}");
    }

    #[test]
    fn expm_rejects_non_finite_input() {
        let mut a = CMatrix::zeros(4, 4);
        a[(2, 1)] = c(f64::INFINITY, 0.0);
        assert!(matches!(expm(&a), Err(DenseMathError::NonFinite { row: 2, col: 1 })));
    }
}
