use crate::error::{Error, Result};
use crate::linalg::{identity, ketbra, max_abs, zeros, Matrix};

const PROJECTOR_TOL: f64 = 1e-12;

/// A complete family of orthogonal projectors `{P_l}` on one factor, with one
/// outcome label per projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMeasurement {
    factor: String,
    labels: Vec<String>,
    projectors: Vec<Matrix>,
}

impl ReferenceMeasurement {
    pub fn new(factor: impl Into<String>, labels: Vec<String>, projectors: Vec<Matrix>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidProjectors {
                invariant: "non-empty",
                deviation: 1.0,
            });
        }
        if labels.len() != projectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} projectors",
                labels.len(),
                projectors.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let n = projectors[0].nrows();
        if projectors.iter().any(|p| p.nrows() != n || p.ncols() != n) {
            return Err(Error::DimensionMismatch(
                "projectors must be square and of equal size".into(),
            ));
        }
        let mut sum = zeros(n, n);
        for (i, p) in projectors.iter().enumerate() {
            let herm = max_abs(&(p - p.adjoint()));
            if herm > PROJECTOR_TOL {
                return Err(Error::InvalidProjectors {
                    invariant: "hermiticity",
                    deviation: herm,
                });
            }
            let idem = max_abs(&(p * p - p));
            if idem > PROJECTOR_TOL {
                return Err(Error::InvalidProjectors {
                    invariant: "idempotence",
                    deviation: idem,
                });
            }
            for q in &projectors[..i] {
                let overlap = max_abs(&(p * q));
                if overlap > PROJECTOR_TOL {
                    return Err(Error::InvalidProjectors {
                        invariant: "orthogonality",
                        deviation: overlap,
                    });
                }
            }
            sum += p;
        }
        let completeness = max_abs(&(sum - identity(n)));
        if completeness > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors {
                invariant: "completeness",
                deviation: completeness,
            });
        }
        Ok(Self {
            factor: factor.into(),
            labels,
            projectors,
        })
    }

    /// Rank-one projectors onto the computational basis, labelled in order.
    pub fn computational(factor: impl Into<String>, labels: &[&str]) -> Self {
        let n = labels.len();
        Self {
            factor: factor.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            projectors: (0..n).map(|i| ketbra(n, i, i)).collect(),
        }
    }

    /// The single-outcome measurement `{I}` on a factor of dimension `dim`.
    pub fn trivial(factor: impl Into<String>, dim: usize, label: &str) -> Self {
        Self {
            factor: factor.into(),
            labels: vec![label.to_string()],
            projectors: vec![identity(dim)],
        }
    }

    pub fn factor(&self) -> &str {
        &self.factor
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projectors(&self) -> &[Matrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::MissingLabel(label.to_string()))
    }

    pub fn projector(&self, label: &str) -> Result<&Matrix> {
        Ok(&self.projectors[self.index_of(label)?])
    }

    /// Same outcome structure, with every projector conjugated by `v`.
    pub fn conjugated(&self, v: &Matrix) -> Self {
        Self {
            factor: self.factor.clone(),
            labels: self.labels.clone(),
            projectors: self.projectors.iter().map(|p| v * p * v.adjoint()).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Matrix)> {
        self.labels.iter().map(String::as_str).zip(self.projectors.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn incomplete_family_rejected() {
        let p = vec![ketbra(2, 0, 0) * c(0.9, 0.0), ketbra(2, 1, 1) * c(0.9, 0.0)];
        let err = ReferenceMeasurement::new("R", vec!["a".into(), "b".into()], p).unwrap_err();
        assert!(matches!(err, Error::InvalidProjectors { .. }));
    }

    #[test]
    fn missing_projector_detected_as_incomplete() {
        let err = ReferenceMeasurement::new("R", vec!["a".into()], vec![ketbra(2, 0, 0)]).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidProjectors {
                invariant: "completeness",
                ..
            }
        ));
    }

    #[test]
    fn overlapping_projectors_rejected() {
        let p = vec![identity(2), ketbra(2, 1, 1)];
        assert!(ReferenceMeasurement::new("R", vec!["a".into(), "b".into()], p).is_err());
    }

    #[test]
    fn computational_is_valid() {
        let m = ReferenceMeasurement::computational("R", &["t1", "t2", "t3"]);
        let again = ReferenceMeasurement::new("R", m.labels().to_vec(), m.projectors().to_vec());
        assert!(again.is_ok());
        assert_eq!(m.index_of("t3"), Ok(2));
    }
}
