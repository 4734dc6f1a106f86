use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, max_abs, outer, zeros, Matrix, ReferenceMeasurement, Space, Vector};

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// A positive semidefinite operator on a labelled space. Constructed through
/// [`DensityOperator::new`] it has unit trace; intermediate results of
/// projector insertions may be subnormalised, see
/// [`DensityOperator::unnormalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    space: Space,
    matrix: Matrix,
}

impl DensityOperator {
    pub fn new(space: Space, matrix: Matrix) -> Result<Self> {
        let rho = Self::unnormalized(space, matrix)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        Ok(rho)
    }

    /// Positive semidefinite, trace unconstrained.
    pub fn unnormalized(space: Space, matrix: Matrix) -> Result<Self> {
        let n = space.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, space has dim {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let min_eig = hermitian_eigenvalues(&matrix).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { space, matrix })
    }

    /// `|psi><psi|` after normalising `psi`.
    pub fn pure(space: Space, psi: &Vector) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector has length {}, space has dim {}",
                psi.len(),
                space.dim()
            )));
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let psi = psi / num_complex::Complex64::new(norm, 0.0);
        Ok(Self {
            space,
            matrix: outer(&psi, &psi),
        })
    }

    /// Skips validation; used for results of operations that preserve the
    /// invariants by construction.
    pub(crate) fn from_parts(space: Space, matrix: Matrix) -> Self {
        Self { space, matrix }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Conjugate by an operator on the whole space: `A rho A^dagger`.
    pub fn conjugate(&self, a: &Matrix) -> Self {
        Self::from_parts(self.space.clone(), a * &self.matrix * a.adjoint())
    }

    /// Conjugate by an operator acting on the listed factors.
    pub fn conjugate_on(&self, a: &Matrix, labels: &[&str]) -> Result<Self> {
        let full = self.space.embed(a, labels)?;
        Ok(self.conjugate(&full))
    }

    /// Same state with its factors listed in another order.
    pub fn reorder(&self, order: &[&str]) -> Result<Self> {
        let (target, p) = self.space.permutation_to(order)?;
        Ok(Self::from_parts(target, &p * &self.matrix * p.adjoint()))
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<Self> {
        Ok(Self::from_parts(
            self.space.tensor(&other.space)?,
            self.matrix.kronecker(&other.matrix),
        ))
    }
}

/// Trace out every factor not listed in `keep`. The result keeps the surviving
/// factors in their original order.
pub fn partial_trace(rho: &DensityOperator, keep: &[&str]) -> Result<DensityOperator> {
    for l in keep {
        rho.space.position(l)?;
    }
    let ordered: Vec<&str> = rho.space.labels().into_iter().filter(|l| keep.contains(l)).collect();
    let kept = rho.space.subspace(&ordered)?;
    let split = rho.space.split_indices(&ordered)?;
    let k = kept.dim();
    let rest = rho.dim() / k;
    let mut by_rest = vec![vec![0usize; k]; rest];
    for (idx, &(s, r)) in split.iter().enumerate() {
        by_rest[r][s] = idx;
    }
    let mut out = zeros(k, k);
    for block in &by_rest {
        for (i, &a) in block.iter().enumerate() {
            for (j, &b) in block.iter().enumerate() {
                out[(i, j)] += rho.matrix[(a, b)];
            }
        }
    }
    Ok(DensityOperator::from_parts(kept, out))
}

/// Measure-and-forget on the reference factor: `sum_l (P_l (x) 1) rho (P_l (x) 1)`.
pub fn dephase(rho: &DensityOperator, m: &ReferenceMeasurement) -> Result<DensityOperator> {
    let f = rho.space.factor(m.factor())?;
    if f.dim != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "measurement acts on dim {}, factor `{}` has dim {}",
            m.dim(),
            f.label,
            f.dim
        )));
    }
    let n = rho.dim();
    let mut out = zeros(n, n);
    for p in m.projectors() {
        let lifted = rho.space.embed(p, &[m.factor()])?;
        out += &lifted * &rho.matrix * &lifted;
    }
    Ok(DensityOperator::from_parts(rho.space.clone(), out))
}
