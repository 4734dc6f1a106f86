use crate::error::{Error, Result};
use crate::linalg::{zeros, Matrix, Vector, C64};

/// A named block inside a factor, used to mark direct-sum structure such as
/// `C^d (+) |vacuum>`. Sectors occupy consecutive basis indices in the order
/// they are listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub label: String,
    pub dim: usize,
}

impl Sector {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
        }
    }
}

/// Label of the one-dimensional no-particle sector.
pub const VACUUM: &str = "vacuum";
/// Label of the particle sector of a vacuum-extended factor.
pub const PARTICLE: &str = "particle";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
    pub sectors: Option<Vec<Sector>>,
}

impl Factor {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
            sectors: None,
        }
    }

    /// A `C^d (+) |vacuum>` factor of dimension `d + 1`; the vacuum is the last
    /// basis index.
    pub fn vacuum_extended(label: impl Into<String>, d: usize) -> Self {
        Self {
            label: label.into(),
            dim: d + 1,
            sectors: Some(vec![Sector::new(PARTICLE, d), Sector::new(VACUUM, 1)]),
        }
    }

    pub fn with_sectors(mut self, sectors: Vec<Sector>) -> Self {
        self.sectors = Some(sectors);
        self
    }

    pub fn is_vacuum_extended(&self) -> bool {
        self.sectors
            .as_ref()
            .is_some_and(|s| s.iter().any(|sec| sec.label == VACUUM && sec.dim == 1))
    }

    /// Index range of the named sector.
    pub fn sector_range(&self, label: &str) -> Option<std::ops::Range<usize>> {
        let sectors = self.sectors.as_ref()?;
        let mut start = 0;
        for s in sectors {
            if s.label == label {
                return Some(start..start + s.dim);
            }
            start += s.dim;
        }
        None
    }

    /// Sector index of every basis vector, if sectors are declared.
    pub fn sector_of_index(&self) -> Option<Vec<usize>> {
        let sectors = self.sectors.as_ref()?;
        Some(
            sectors
                .iter()
                .enumerate()
                .flat_map(|(k, s)| std::iter::repeat_n(k, s.dim))
                .collect(),
        )
    }
}

/// Ordered tensor product of labelled factors. Index ordering is row-major:
/// the first factor is the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    factors: Vec<Factor>,
}

impl Space {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::InvalidSpace(format!("factor `{}` has dim 0", f.label)));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(Error::DuplicateLabel(f.label.clone()));
            }
            if let Some(sectors) = &f.sectors {
                let total: usize = sectors.iter().map(|s| s.dim).sum();
                if total != f.dim || sectors.iter().any(|s| s.dim == 0) {
                    return Err(Error::InvalidSpace(format!(
                        "sectors of `{}` sum to {total}, expected {}",
                        f.label, f.dim
                    )));
                }
            }
        }
        Ok(Self { factors })
    }

    /// Convenience constructor from `(label, dim)` pairs.
    pub fn from_dims(dims: &[(&str, usize)]) -> Result<Self> {
        Self::new(dims.iter().map(|(l, d)| Factor::new(*l, *d)).collect())
    }

    pub fn empty() -> Self {
        Self { factors: vec![] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn factor(&self, label: &str) -> Result<&Factor> {
        Ok(&self.factors[self.position(label)?])
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    /// The sub-space made of the listed factors, in the listed order.
    pub fn subspace(&self, labels: &[&str]) -> Result<Space> {
        let factors = labels
            .iter()
            .map(|l| self.factor(l).cloned())
            .collect::<Result<Vec<_>>>()?;
        Space::new(factors)
    }

    /// Factors not in `labels`, in original order.
    pub fn complement(&self, labels: &[&str]) -> Space {
        Space {
            factors: self
                .factors
                .iter()
                .filter(|f| !labels.contains(&f.label.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn tensor(&self, other: &Space) -> Result<Space> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Space::new(factors)
    }

    /// Multi-index of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (i, f) in self.factors.iter().enumerate().rev() {
            out[i] = index % f.dim;
            index /= f.dim;
        }
        out
    }

    pub fn flat_index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.factors).fold(0, |acc, (d, f)| acc * f.dim + d)
    }

    /// For each flat index: (index within the listed factors, index within the
    /// remaining factors).
    pub(crate) fn split_indices(&self, labels: &[&str]) -> Result<Vec<(usize, usize)>> {
        let positions = labels.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        for (i, p) in positions.iter().enumerate() {
            if positions[..i].contains(p) {
                return Err(Error::DuplicateLabel(labels[i].to_string()));
            }
        }
        let rest: Vec<usize> = (0..self.factors.len()).filter(|i| !positions.contains(i)).collect();
        Ok((0..self.dim())
            .map(|idx| {
                let digits = self.digits(idx);
                let sub = positions
                    .iter()
                    .fold(0, |acc, &p| acc * self.factors[p].dim + digits[p]);
                let other = rest.iter().fold(0, |acc, &p| acc * self.factors[p].dim + digits[p]);
                (sub, other)
            })
            .collect())
    }

    /// Lift an operator acting on the listed factors (in the listed order) to
    /// the whole space, acting as identity elsewhere.
    pub fn embed(&self, op: &Matrix, labels: &[&str]) -> Result<Matrix> {
        let sub_dim: usize = labels
            .iter()
            .map(|l| self.factor(l).map(|f| f.dim))
            .product::<Result<usize>>()?;
        if op.nrows() != sub_dim || op.ncols() != sub_dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, factors {:?} have dim {sub_dim}",
                op.nrows(),
                op.ncols(),
                labels
            )));
        }
        let split = self.split_indices(labels)?;
        let rest_dim = self.dim() / sub_dim;
        let mut by_rest = vec![vec![0usize; sub_dim]; rest_dim];
        for (idx, &(s, r)) in split.iter().enumerate() {
            by_rest[r][s] = idx;
        }
        let n = self.dim();
        let mut out = zeros(n, n);
        for block in &by_rest {
            for (si, &a) in block.iter().enumerate() {
                for (sj, &b) in block.iter().enumerate() {
                    let v = op[(si, sj)];
                    if v != C64::new(0.0, 0.0) {
                        out[(a, b)] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Apply an operator on the listed factors to a vector over the whole
    /// space without forming the lifted matrix.
    pub fn apply_to_vector(&self, op: &Matrix, labels: &[&str], v: &Vector) -> Result<Vector> {
        let sub_dim: usize = labels
            .iter()
            .map(|l| self.factor(l).map(|f| f.dim))
            .product::<Result<usize>>()?;
        if op.ncols() != sub_dim || op.nrows() != sub_dim || v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, factors {:?} have dim {sub_dim}",
                op.nrows(),
                op.ncols(),
                labels
            )));
        }
        let split = self.split_indices(labels)?;
        let mut by_rest = vec![vec![0usize; sub_dim]; self.dim() / sub_dim];
        for (idx, &(s, r)) in split.iter().enumerate() {
            by_rest[r][s] = idx;
        }
        let mut out = Vector::zeros(v.len());
        for block in &by_rest {
            for (si, &a) in block.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (sj, &b) in block.iter().enumerate() {
                    acc += op[(si, sj)] * v[b];
                }
                out[a] = acc;
            }
        }
        Ok(out)
    }

    /// Permutation matrix `P` with `P |x>_self = |x>_target`, where `target`
    /// lists the same factors in another order.
    pub fn permutation_to(&self, order: &[&str]) -> Result<(Space, Matrix)> {
        if order.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "reordering {:?} does not name every factor of {:?}",
                order,
                self.labels()
            )));
        }
        let target = self.subspace(order)?;
        let positions = order.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let n = self.dim();
        let mut p = zeros(n, n);
        for idx in 0..n {
            let digits = self.digits(idx);
            let new_digits: Vec<usize> = positions.iter().map(|&q| digits[q]).collect();
            p[(target.flat_index(&new_digits), idx)] = C64::new(1.0, 0.0);
        }
        Ok((target, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, pauli_x};

    #[test]
    fn sectors_must_cover_factor() {
        let bad = Factor::new("T", 3).with_sectors(vec![Sector::new(PARTICLE, 1), Sector::new(VACUUM, 1)]);
        assert!(Space::new(vec![bad]).is_err());
        assert!(Space::new(vec![Factor::vacuum_extended("T", 2)]).is_ok());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert_eq!(
            Space::from_dims(&[("A", 2), ("A", 3)]),
            Err(Error::DuplicateLabel("A".into()))
        );
    }

    #[test]
    fn embed_on_second_factor_matches_kron() {
        let s = Space::from_dims(&[("A", 3), ("B", 2)]).unwrap();
        let x = pauli_x();
        let lifted = s.embed(&x, &["B"]).unwrap();
        assert_eq!(lifted, kron(&Matrix::identity(3, 3), &x));
    }

    #[test]
    fn embed_respects_label_order() {
        let s = Space::from_dims(&[("A", 2), ("B", 2)]).unwrap();
        let a = crate::linalg::pauli_z();
        let op = kron(&a, &Matrix::identity(2, 2));
        // operator listed as (B, A) acts with Z on B
        let lifted = s.embed(&op, &["B", "A"]).unwrap();
        assert_eq!(lifted, kron(&Matrix::identity(2, 2), &a));
    }

    #[test]
    fn vacuum_is_last_index() {
        let f = Factor::vacuum_extended("T", 3);
        assert_eq!(f.sector_range(VACUUM), Some(3..4));
        assert_eq!(f.sector_of_index(), Some(vec![0, 0, 0, 1]));
    }

    #[test]
    fn vector_application_matches_embedding() {
        let s = Space::from_dims(&[("A", 2), ("B", 3), ("C", 2)]).unwrap();
        let op = Matrix::from_fn(6, 6, |i, j| C64::new((i * 7 + j) as f64, (i as f64) - (j as f64)));
        let v = Vector::from_fn(12, |i, _| C64::new(i as f64, 1.0));
        let direct = s.embed(&op, &["C", "B"]).unwrap() * &v;
        let local = s.apply_to_vector(&op, &["C", "B"], &v).unwrap();
        assert_eq!(direct, local);
    }
}
