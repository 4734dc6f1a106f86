use crate::error::{Error, Result};
use crate::linalg::{zeros, Matrix, Space};

const ZERO_PATTERN_TOL: f64 = 1e-12;

/// An operator certified to be block-diagonal in the sectors of some of its
/// factors: it never maps one sector of a listed factor into another.
#[derive(Debug, Clone, PartialEq)]
pub struct SectoredOperator {
    space: Space,
    matrix: Matrix,
    preserved: Vec<String>,
}

impl SectoredOperator {
    /// Fails with [`Error::OutsideSector`] if any entry coupling two
    /// different sectors of a listed factor exceeds `1e-12`.
    pub fn new(space: Space, matrix: Matrix, preserved: &[&str]) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, space has dim {}",
                matrix.nrows(),
                matrix.ncols(),
                space.dim()
            )));
        }
        for l in preserved {
            if space.factor(l)?.sectors.is_none() {
                return Err(Error::InvalidSpace(format!("factor `{l}` declares no sectors")));
            }
        }
        let op = Self {
            space,
            matrix,
            preserved: preserved.iter().map(|s| s.to_string()).collect(),
        };
        let leak = op.off_block_max();
        if leak > ZERO_PATTERN_TOL {
            return Err(Error::OutsideSector(leak));
        }
        Ok(op)
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

    pub fn preserved(&self) -> &[String] {
        &self.preserved
    }

    /// Sector indices (one per preserved factor) of a flat basis index.
    fn sector_key(&self, index: usize) -> Vec<usize> {
        let digits = self.space.digits(index);
        self.preserved
            .iter()
            .map(|l| {
                let p = self.space.position(l).expect("validated");
                let map = self.space.factors()[p].sector_of_index().expect("validated");
                map[digits[p]]
            })
            .collect()
    }

    /// Largest entry connecting different sectors.
    pub fn off_block_max(&self) -> f64 {
        let n = self.space.dim();
        let keys: Vec<Vec<usize>> = (0..n).map(|i| self.sector_key(i)).collect();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if keys[i] != keys[j] {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Restriction to the basis vectors whose preserved factor `factor` lies
    /// in `sector`, in increasing flat-index order.
    pub fn block(&self, factor: &str, sector: &str) -> Result<Matrix> {
        let p = self.space.position(factor)?;
        let range = self.space.factors()[p]
            .sector_range(sector)
            .ok_or_else(|| Error::UnknownLabel(format!("{factor}/{sector}")))?;
        let idx: Vec<usize> = (0..self.space.dim())
            .filter(|&i| range.contains(&self.space.digits(i)[p]))
            .collect();
        let mut out = zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self.matrix[(i, j)];
            }
        }
        Ok(out)
    }
}
