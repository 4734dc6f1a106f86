use crate::error::{Error, Result};
use crate::linalg::{kron, unitarity_deviation, zeros, Matrix, ReferenceMeasurement, INVARIANT_TOL};

/// `sum_l P_l (x) U_l` on reference (x) target. `unitaries` pairs each outcome
/// label with the unitary applied when the reference is in that subspace.
pub fn controlled_unitary(m: &ReferenceMeasurement, unitaries: &[(&str, Matrix)]) -> Result<Matrix> {
    let first = unitaries
        .first()
        .ok_or_else(|| Error::MissingLabel(m.labels()[0].clone()))?;
    let dt = first.1.nrows();
    for (label, u) in unitaries {
        m.index_of(label)?;
        if u.nrows() != dt || u.ncols() != dt {
            return Err(Error::DimensionMismatch(format!(
                "unitary for `{label}` is {}x{}, expected {dt}x{dt}",
                u.nrows(),
                u.ncols()
            )));
        }
        let dev = unitarity_deviation(u);
        if dev > INVARIANT_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    let n = m.dim() * dt;
    let mut out = zeros(n, n);
    for (label, p) in m.iter() {
        let u = unitaries
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, u)| u)
            .ok_or_else(|| Error::MissingLabel(label.to_string()))?;
        out += kron(p, u);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs, operator_norm, pauli_x, random_unitary, rng_from_seed};

    #[test]
    fn single_label_gives_identity_tensor() {
        let mut rng = rng_from_seed(1);
        let u = random_unitary(3, &mut rng);
        let m = ReferenceMeasurement::trivial("R", 2, "only");
        let cu = controlled_unitary(&m, &[("only", u.clone())]).unwrap();
        assert_eq!(cu, kron(&identity(2), &u));
    }

    #[test]
    fn cnot_from_identity_and_x() {
        let m = ReferenceMeasurement::computational("R", &["0", "1"]);
        let cu = controlled_unitary(&m, &[("0", identity(2)), ("1", pauli_x())]).unwrap();
        let mut cnot = zeros(4, 4);
        cnot[(0, 0)] = 1.0.into();
        cnot[(1, 1)] = 1.0.into();
        cnot[(2, 3)] = 1.0.into();
        cnot[(3, 2)] = 1.0.into();
        assert_eq!(cu, cnot);
    }

    #[test]
    fn missing_label_is_an_error() {
        let m = ReferenceMeasurement::computational("R", &["0", "1"]);
        assert_eq!(
            controlled_unitary(&m, &[("0", identity(2))]),
            Err(Error::MissingLabel("1".into()))
        );
    }

    #[test]
    fn commutes_with_reference_projectors() {
        let mut rng = rng_from_seed(2);
        let m = ReferenceMeasurement::computational("R", &["a", "b", "c"]);
        let us: Vec<Matrix> = (0..3).map(|_| random_unitary(2, &mut rng)).collect();
        let pairs: Vec<(&str, Matrix)> = ["a", "b", "c"].into_iter().zip(us).collect();
        let cu = controlled_unitary(&m, &pairs).unwrap();
        for p in m.projectors() {
            let lifted = kron(p, &identity(2));
            assert!(operator_norm(&(&cu * &lifted - &lifted * &cu)) <= 1e-12);
        }
        assert!(max_abs(&(cu.adjoint() * &cu - identity(6))) <= 1e-12);
    }
}
