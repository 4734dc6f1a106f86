use crate::error::{Error, Result};
use crate::linalg::{basis, c, Factor, Matrix, Space, Vector};

/// A party's input and output wires inside a process vector. Either list may
/// be empty (a pure preparation or a final measurement).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Party {
    fn wires(&self) -> Vec<&str> {
        self.inputs
            .iter()
            .chain(self.outputs.iter())
            .map(String::as_str)
            .collect()
    }
}

/// A pure process `|w>` over the tensor product of every party's wires.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessVector {
    parties: Vec<Party>,
    space: Space,
    amplitudes: Vector,
}

impl ProcessVector {
    pub fn parties(&self) -> &[Party] {
        &self.parties
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn amplitudes(&self) -> &Vector {
        &self.amplitudes
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `W = |w><w|`. Dimension `4 d^6` for the switch, so only for small `d`.
    pub fn process_matrix(&self) -> Matrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    fn party(&self, name: &str) -> Result<&Party> {
        self.parties
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }
}

/// Process vector of the switch with parties `C` (prepares control and
/// target), `A`, `B`, and `D` (receives control and target). Wire order:
/// `C_C, C_T, A_I, A_O, B_I, B_O, D_C, D_T`.
///
/// `|w> = |0>|0> |1>>_{C_T A_I} |1>>_{A_O B_I} |1>>_{B_O D_T}
///      + |1>|1> |1>>_{C_T B_I} |1>>_{B_O A_I} |1>>_{A_O D_T}`
/// with the control kets on `C_C` and `D_C` and `|1>> = sum_i |ii>`.
pub fn qs_process_vector(d: usize) -> ProcessVector {
    assert!(d >= 1, "dimension must be positive");
    let wires = ["C_C", "C_T", "A_I", "A_O", "B_I", "B_O", "D_C", "D_T"];
    let dims = [2, d, d, d, d, d, 2, d];
    let space = Space::new(wires.iter().zip(dims).map(|(l, n)| Factor::new(*l, n)).collect()).expect("distinct labels");
    let mut w = Vector::zeros(space.dim());
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                // control 0: C -> A -> B -> D
                w[space.flat_index(&[0, i, i, j, j, k, 0, k])] += c(1.0, 0.0);
                // control 1: C -> B -> A -> D
                w[space.flat_index(&[1, i, j, k, i, j, 1, k])] += c(1.0, 0.0);
            }
        }
    }
    let party = |name: &str, inputs: &[&str], outputs: &[&str]| Party {
        name: name.to_string(),
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
        outputs: outputs.iter().map(|s| s.to_string()).collect(),
    };
    ProcessVector {
        parties: vec![
            party("C", &[], &["C_C", "C_T"]),
            party("A", &["A_I"], &["A_O"]),
            party("B", &["B_I"], &["B_O"]),
            party("D", &["D_C", "D_T"], &[]),
        ],
        space,
        amplitudes: w,
    }
}

/// Choi matrix of preparing `rho` (no input): `rho` itself.
pub fn preparation_choi(rho: &Matrix) -> Matrix {
    rho.clone()
}

/// Choi matrix of the effect `E` (no output): `E^T`.
pub fn effect_choi(e: &Matrix) -> Matrix {
    e.transpose()
}

/// `p = <w| (J_1 (x) ... (x) J_n)^T |w>`, with each `J` a party's Choi
/// matrix over its inputs then outputs (see [`crate::linalg::choi_matrix`]).
/// Evaluated party by party on the vector, never forming `W`.
pub fn born_probability(w: &ProcessVector, ops: &[(&str, &Matrix)]) -> Result<f64> {
    for p in w.parties() {
        if !ops.iter().any(|(n, _)| *n == p.name) {
            return Err(Error::MissingLabel(p.name.clone()));
        }
    }
    let mut v = w.amplitudes.clone();
    for (name, j) in ops {
        let party = w.party(name)?;
        v = w.space.apply_to_vector(&j.transpose(), &party.wires(), &v)?;
    }
    let p = w.amplitudes.dotc(&v);
    Ok(p.re)
}

/// `|1>> = sum_i |i>|i>` in dimension `d^2`.
pub fn identity_vectorisation(d: usize) -> Vector {
    (0..d).fold(Vector::zeros(d * d), |acc, i| acc + basis(d * d, i * d + i))
}
