use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, identity, is_unitary, ketbra, kron, operator_norm, unitarity_deviation, zeros,
    DensityOperator, Matrix, Space, INVARIANT_TOL,
};

/// A completely positive map in Kraus form between two labelled spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    input: Space,
    output: Space,
    kraus: Vec<Matrix>,
}

impl KrausChannel {
    /// Validates shapes and `sum K^dagger K <= I`. Trace-non-increasing maps
    /// are accepted; see [`KrausChannel::is_trace_preserving`].
    pub fn new(input: Space, output: Space, kraus: Vec<Matrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch("no Kraus operators".into()));
        }
        for k in &kraus {
            if k.nrows() != output.dim() || k.ncols() != input.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator is {}x{}, expected {}x{}",
                    k.nrows(),
                    k.ncols(),
                    output.dim(),
                    input.dim()
                )));
            }
        }
        let ch = Self { input, output, kraus };
        let top = hermitian_eigenvalues(&ch.effect())
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        if top > 1.0 + INVARIANT_TOL {
            return Err(Error::TraceIncreasing(top - 1.0));
        }
        Ok(ch)
    }

    /// Like [`KrausChannel::new`] but rejects trace-non-increasing maps.
    pub fn trace_preserving(input: Space, output: Space, kraus: Vec<Matrix>) -> Result<Self> {
        let ch = Self::new(input, output, kraus)?;
        let dev = ch.trace_preservation_deviation();
        if dev > INVARIANT_TOL {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(ch)
    }

    pub(crate) fn from_parts(input: Space, output: Space, kraus: Vec<Matrix>) -> Self {
        Self { input, output, kraus }
    }

    pub fn unitary(space: Space, u: Matrix) -> Result<Self> {
        if u.nrows() != space.dim() || u.ncols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary is {}x{}, space has dim {}",
                u.nrows(),
                u.ncols(),
                space.dim()
            )));
        }
        let dev = unitarity_deviation(&u);
        if dev > INVARIANT_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self {
            input: space.clone(),
            output: space,
            kraus: vec![u],
        })
    }

    pub fn identity(space: Space) -> Self {
        let n = space.dim();
        Self {
            input: space.clone(),
            output: space,
            kraus: vec![identity(n)],
        }
    }

    pub fn input(&self) -> &Space {
        &self.input
    }

    pub fn output(&self) -> &Space {
        &self.output
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    /// `sum K^dagger K`.
    pub fn effect(&self) -> Matrix {
        let n = self.input.dim();
        self.kraus.iter().fold(zeros(n, n), |acc, k| acc + k.adjoint() * k)
    }

    pub fn trace_preservation_deviation(&self) -> f64 {
        operator_norm(&(self.effect() - identity(self.input.dim())))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preservation_deviation() <= INVARIANT_TOL
    }

    /// A single square unitary Kraus operator.
    pub fn is_unitary(&self) -> bool {
        self.kraus.len() == 1 && is_unitary(&self.kraus[0], INVARIANT_TOL)
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.space() != &self.input {
            return Err(Error::DimensionMismatch(format!(
                "channel expects {:?}, state lives on {:?}",
                self.input.labels(),
                rho.space().labels()
            )));
        }
        let m = rho.matrix();
        let n = self.output.dim();
        let out = self.kraus.iter().fold(zeros(n, n), |acc, k| acc + k * m * k.adjoint());
        Ok(DensityOperator::from_parts(self.output.clone(), out))
    }

    /// Apply to the listed factors of a larger state. Input and output spaces
    /// of the channel must coincide (as factor dims) so the surrounding space
    /// is unchanged.
    pub fn apply_on(&self, rho: &DensityOperator, labels: &[&str]) -> Result<DensityOperator> {
        let local_dim: usize = labels
            .iter()
            .map(|l| rho.space().factor(l).map(|f| f.dim))
            .product::<Result<usize>>()?;
        if self.input.dim() != local_dim || self.output.dim() != local_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel {}->{} applied to factors {:?} of dim {local_dim}",
                self.input.dim(),
                self.output.dim(),
                labels
            )));
        }
        let n = rho.dim();
        let mut out = zeros(n, n);
        for k in &self.kraus {
            let full = rho.space().embed(k, labels)?;
            out += &full * rho.matrix() * full.adjoint();
        }
        Ok(DensityOperator::from_parts(rho.space().clone(), out))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &KrausChannel) -> Result<KrausChannel> {
        if self.output.dim() != next.input.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: output dim {} vs input dim {}",
                self.output.dim(),
                next.input.dim()
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for b in &next.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(Self {
            input: self.input.clone(),
            output: next.output.clone(),
            kraus,
        })
    }

    /// `self (x) other` on the concatenated spaces.
    pub fn tensor(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        Ok(Self {
            input: self.input.tensor(&other.input)?,
            output: self.output.tensor(&other.output)?,
            kraus,
        })
    }

    /// Basis change: `K -> v_out K v_in^dagger`.
    pub fn conjugated(&self, v_in: &Matrix, v_out: &Matrix) -> Self {
        Self {
            input: self.input.clone(),
            output: self.output.clone(),
            kraus: self.kraus.iter().map(|k| v_out * k * v_in.adjoint()).collect(),
        }
    }

    /// Relabel the factor order of input and output spaces.
    pub fn reorder(&self, input_order: &[&str], output_order: &[&str]) -> Result<Self> {
        let (input, p_in) = self.input.permutation_to(input_order)?;
        let (output, p_out) = self.output.permutation_to(output_order)?;
        Ok(Self {
            input,
            output,
            kraus: self.kraus.iter().map(|k| &p_out * k * p_in.adjoint()).collect(),
        })
    }

    /// Replace the spaces by others of the same dimensions.
    pub fn with_spaces(&self, input: Space, output: Space) -> Result<Self> {
        if input.dim() != self.input.dim() || output.dim() != self.output.dim() {
            return Err(Error::DimensionMismatch("relabelled spaces change dimension".into()));
        }
        Ok(Self {
            input,
            output,
            kraus: self.kraus.clone(),
        })
    }

    /// Choi matrix, see [`choi_matrix`].
    pub fn choi(&self) -> Matrix {
        choi_matrix(self)
    }
}

/// `J = sum_ij |i><j| (x) E(|i><j|)`, input factor first.
pub fn choi_matrix(ch: &KrausChannel) -> Matrix {
    let din = ch.input().dim();
    let dout = ch.output().dim();
    let mut j = zeros(din * dout, din * dout);
    for a in 0..din {
        for b in 0..din {
            let e = ketbra(din, a, b);
            let image = ch
                .kraus()
                .iter()
                .fold(zeros(dout, dout), |acc, k| acc + k * &e * k.adjoint());
            j += kron(&ketbra(din, a, b), &image);
        }
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, hadamard, max_abs, random_cptp, random_state, rng_from_seed, Vector};

    fn qubit() -> Space {
        Space::from_dims(&[("Q", 2)]).unwrap()
    }

    /// `E(rho) = Tr_in[(rho^T (x) I) J]`.
    fn choi_oracle(j: &Matrix, rho: &Matrix, din: usize, dout: usize) -> Matrix {
        let lifted = kron(&rho.transpose(), &identity(dout)) * j;
        let mut out = zeros(dout, dout);
        for a in 0..din {
            for x in 0..dout {
                for y in 0..dout {
                    out[(x, y)] += lifted[(a * dout + x, a * dout + y)];
                }
            }
        }
        out
    }

    #[test]
    fn identity_channel_is_noop() {
        let mut rng = rng_from_seed(4);
        let rho = random_state(qubit(), &mut rng);
        assert_eq!(KrausChannel::identity(qubit()).apply(&rho).unwrap(), rho);
    }

    #[test]
    fn full_dephasing_of_plus() {
        let ch = KrausChannel::trace_preserving(qubit(), qubit(), vec![ketbra(2, 0, 0), ketbra(2, 1, 1)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(qubit(), &Vector::from_vec(vec![c(h, 0.0), c(h, 0.0)])).unwrap();
        let out = ch.apply(&plus).unwrap();
        assert!(max_abs(&(out.matrix() - identity(2) * c(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn matches_choi_contraction() {
        let mut rng = rng_from_seed(12);
        for (din, dout) in [(2, 2), (2, 3), (3, 2)] {
            let ch = random_cptp(din, dout, &mut rng);
            let rho = random_state(ch.input().clone(), &mut rng);
            let ours = ch.apply(&rho).unwrap();
            let oracle = choi_oracle(&ch.choi(), rho.matrix(), din, dout);
            assert!(max_abs(&(ours.matrix() - oracle)) <= 1e-12);
        }
    }

    #[test]
    fn trace_increasing_rejected() {
        let k = identity(2) * c(1.1, 0.0);
        assert!(matches!(
            KrausChannel::new(qubit(), qubit(), vec![k]),
            Err(Error::TraceIncreasing(_))
        ));
    }

    #[test]
    fn trace_non_increasing_is_flagged() {
        let ch = KrausChannel::new(qubit(), qubit(), vec![ketbra(2, 0, 0)]).unwrap();
        assert!(!ch.is_trace_preserving());
        assert!(KrausChannel::trace_preserving(qubit(), qubit(), vec![ketbra(2, 0, 0)]).is_err());
    }

    #[test]
    fn composition_order() {
        let space = qubit();
        let h = KrausChannel::unitary(space.clone(), hadamard()).unwrap();
        let x = KrausChannel::unitary(space, crate::linalg::pauli_x()).unwrap();
        let hx = h.then(&x).unwrap();
        assert_eq!(hx.kraus()[0], crate::linalg::pauli_x() * hadamard());
    }
}
