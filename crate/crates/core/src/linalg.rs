//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from real entries given row by row.
pub fn real_matrix(n: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Kronecker product `a ⊗ b`, row index `i * rows(b) + k`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// `tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest entrywise modulus of `u u† - I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let p = u * u.adjoint();
    max_abs_diff(&p, &identity(u.nrows()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `u m u†`
pub fn conjugate(m: &CMatrix, u: &CMatrix) -> CMatrix {
    u * m * u.adjoint()
}

/// Numerical rank with the cutoff `max(rows, cols) · eps · σ_max`.
///
/// Returns the rank together with the singular values in descending order.
pub fn numerical_rank(m: &DMatrix<f64>, eps: f64) -> (usize, Vec<f64>) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0, Vec::new());
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let cutoff = m.nrows().max(m.ncols()) as f64 * eps * sv[0];
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    (rank, sv)
}

/// Scales every column to unit Euclidean norm; all-zero columns are left untouched.
pub fn normalize_columns(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_ordering_is_row_major_in_the_first_factor() {
        let a = real_matrix(2, &[0.0, 1.0, 1.0, 0.0]);
        let b = real_matrix(3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let k = kron(&a, &b);
        assert_eq!(k.nrows(), 6);
        // (row 0, col 3) = a[0,1] * b[0,0]
        assert_eq!(k[(0, 3)], ONE);
        assert_eq!(k[(4, 1)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rank_of_rank_deficient_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 1.0, 1.0]);
        let (rank, sv) = numerical_rank(&m, 1e-12);
        assert_eq!(rank, 2);
        assert_eq!(sv.len(), 3);
    }

    #[test]
    fn eigenvalues_sorted() {
        let m = real_matrix(2, &[2.0, 1.0, 1.0, 2.0]);
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }
}
