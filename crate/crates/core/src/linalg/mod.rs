//! Dense complex linear algebra over labelled composite spaces.
//!
//! Everything here is small (total dimension well under a few hundred), so
//! all operators are plain dense matrices and all maps are explicit.

mod channel;
mod controlled;
mod measurement;
mod metric;
mod random;
mod space;
mod state;

pub use channel::{choi_matrix, KrausChannel};
pub use controlled::controlled_unitary;
pub use measurement::ReferenceMeasurement;
pub use metric::{hermitian_eigenvalues, trace_distance, trace_norm_distance};
pub use random::{random_cptp, random_pure_state, random_state, random_unitary, rng_from_seed, SeededRng};
pub use space::{Factor, Sector, Space, PARTICLE, VACUUM};
pub use state::{dephase, partial_trace, DensityOperator};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

pub type Matrix = DMatrix<C64>;
pub type Vector = DVector<C64>;

/// Default numerical tolerance for invariant checks on constructed objects.
pub const INVARIANT_TOL: f64 = 1e-10;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    Matrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Kronecker product: `(a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
    ops.into_iter().fold(identity(1), |acc, m| kron(&acc, m))
}

pub fn kron_vec(a: &Vector, b: &Vector) -> Vector {
    a.kronecker(b)
}

pub fn dagger(m: &Matrix) -> Matrix {
    m.adjoint()
}

/// Computational basis vector `|i>` in dimension `n`.
pub fn basis(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

/// `|i><j|` in dimension `n`.
pub fn ketbra(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = zeros(n, n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn outer(a: &Vector, b: &Vector) -> Matrix {
    a * b.adjoint()
}

pub fn pauli_x() -> Matrix {
    Matrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> Matrix {
    Matrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn hadamard() -> Matrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

/// Direct sum `a (+) b` as a block-diagonal matrix.
pub fn direct_sum(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Largest absolute entry.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `||U^dagger U - I||` in operator norm.
pub fn unitarity_deviation(u: &Matrix) -> f64 {
    operator_norm(&(u.adjoint() * u - identity(u.ncols())))
}

pub fn is_unitary(u: &Matrix, tol: f64) -> bool {
    u.is_square() && unitarity_deviation(u) <= tol
}

/// Swap of two factors of dimensions `da` and `db`: `|i>|j> -> |j>|i>`.
pub fn swap_operator(da: usize, db: usize) -> Matrix {
    let n = da * db;
    let mut s = zeros(n, n);
    for i in 0..da {
        for j in 0..db {
            s[(j * da + i, i * db + j)] = c(1.0, 0.0);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_kron(a: &Matrix, b: &Matrix) -> Matrix {
        let (ra, ca) = a.shape();
        let (rb, cb) = b.shape();
        let mut out = zeros(ra * rb, ca * cb);
        for i in 0..ra {
            for j in 0..ca {
                for k in 0..rb {
                    for l in 0..cb {
                        out[(i * rb + k, j * cb + l)] = a[(i, j)] * b[(k, l)];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let v = kron_vec(&basis(2, 1), &basis(2, 0));
        assert_eq!(v, basis(4, 2));
    }

    #[test]
    fn kron_matches_loop_oracle() {
        let mut rng = rng_from_seed(11);
        let a = random_unitary(3, &mut rng) * c(0.3, -1.2);
        let b = random_unitary(3, &mut rng);
        let diff = kron(&a, &b) - loop_kron(&a, &b);
        assert!(max_abs(&diff) == 0.0);
        let r = Matrix::from_fn(2, 3, |i, j| c(i as f64, j as f64 + 0.5));
        assert!(max_abs(&(kron(&r, &a) - loop_kron(&r, &a))) == 0.0);
    }

    #[test]
    fn swap_is_involution() {
        let s = swap_operator(2, 3);
        let t = swap_operator(3, 2);
        assert_eq!(&t * &s, identity(6));
        let a = Matrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0));
        let b = Matrix::from_fn(3, 3, |i, j| c(0.0, (i * j) as f64));
        assert!(max_abs(&(&s * kron(&a, &b) * &t - kron(&b, &a))) == 0.0);
    }
}
