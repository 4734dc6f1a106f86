use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, Matrix};

/// Eigenvalues of the Hermitian part of `m`.
pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    let h = (m + m.adjoint()) * num_complex::Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// `1/2 ||a - b||_1` for Hermitian `a`, `b`, via the eigenvalues of `a - b`.
pub fn trace_norm_distance(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|l| l.abs()).sum::<f64>())
}

/// Trace distance between two operators on the same space. Also used on
/// subnormalised branches, where it is still half the trace norm of the
/// difference.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch(format!(
            "spaces differ: {:?} vs {:?}",
            rho.space().labels(),
            sigma.space().labels()
        )));
    }
    trace_norm_distance(rho.matrix(), sigma.matrix())
}
