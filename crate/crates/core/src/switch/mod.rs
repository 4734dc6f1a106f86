//! Quantum switch descriptions at several levels of detail.
//!
//! Index conventions: control `|0>` means A acts before B. A vacuum-extended
//! factor `C^d (+) |vac>` keeps the particle states at indices `0..d` and the
//! vacuum at index `d`. Two-valued pointers (clock, position, ...) use
//! index 0 for the first value (`t1`) and 1 for the second (`t2`).

mod process;
mod sectored;

pub use process::{
    born_probability, effect_choi, identity_vectorisation, preparation_choi, qs_process_vector, Party, ProcessVector,
};
pub use sectored::SectoredOperator;

use crate::error::{Error, Result};
use crate::linalg::{
    basis, c, direct_sum, identity, ketbra, kron, kron_vec, operator_norm, swap_operator, unitarity_deviation, zeros,
    Factor, KrausChannel, Matrix, Sector, Space, Vector, INVARIANT_TOL,
};

const NORM_TOL: f64 = 1e-12;

fn check_unitaries(us: &[&Matrix]) -> Result<usize> {
    let d = us[0].nrows();
    for u in us {
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} unitaries, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let dev = unitarity_deviation(u);
        if dev > INVARIANT_TOL {
            return Err(Error::NotUnitary(dev));
        }
    }
    Ok(d)
}

/// `|0><0| (x) U_B U_A + |1><1| (x) U_A U_B` on control (x) target.
pub fn qs_coarse(u_a: &Matrix, u_b: &Matrix) -> Result<Matrix> {
    check_unitaries(&[u_a, u_b])?;
    Ok(kron(&ketbra(2, 0, 0), &(u_b * u_a)) + kron(&ketbra(2, 1, 1), &(u_a * u_b)))
}

/// `U (+) 1` on a vacuum-extended factor.
pub fn vacuum_extend(u: &Matrix) -> Matrix {
    direct_sum(u, &identity(1))
}

/// Two vacuum-extended wires, `A1` first.
pub fn wire_space(d: usize) -> Space {
    Space::new(vec![Factor::vacuum_extended("A1", d), Factor::vacuum_extended("A2", d)]).expect("distinct labels")
}

/// Isometry from control (x) target into two vacuum-extended wires:
/// `|0>|psi> -> |psi>|vac>` and `|1>|psi> -> |vac>|psi>`.
pub fn w_sup(d: usize) -> Matrix {
    assert!(d >= 1, "dimension must be positive");
    let e = d + 1;
    let mut w = zeros(e * e, 2 * d);
    for i in 0..d {
        w[(i * e + d, i)] = c(1.0, 0.0);
        w[(d * e + i, d + i)] = c(1.0, 0.0);
    }
    w
}

/// `(U (+) 1) (x) |t><t|` on a vacuum-extended factor (x) a two-valued clock:
/// the component of a clock-controlled operation acting at clock value `t`.
pub fn fine_grained_op(u: &Matrix, t: usize) -> Result<SectoredOperator> {
    let d = check_unitaries(&[u])?;
    if t > 1 {
        return Err(Error::UnknownLabel(format!("clock value {t}")));
    }
    let space = Space::new(vec![Factor::vacuum_extended("A", d), Factor::new("clock", 2)])?;
    SectoredOperator::new(space, kron(&vacuum_extend(u), &ketbra(2, t, t)), &["A"])
}

/// The four clock-conditioned operations on the two wires, as one operator
/// on `A1 (x) A2` from clock `t1` to clock `t2`. At `t1` Alice acts on `A1`
/// and Bob on `A2`; at `t2` they swap wires.
pub fn fine_grained_wires(u_a1: &Matrix, u_a2: &Matrix, u_b1: &Matrix, u_b2: &Matrix) -> Result<Matrix> {
    let d = check_unitaries(&[u_a1, u_a2, u_b1, u_b2])?;
    let space = Space::new(vec![
        Factor::new("clock", 2),
        Factor::vacuum_extended("A1", d),
        Factor::vacuum_extended("A2", d),
    ])?;
    let lift = |u: &Matrix, t: usize, wire: &str| -> Result<Matrix> {
        space.embed(fine_grained_op(u, t)?.matrix(), &[wire, "clock"])
    };
    let layer = lift(u_a1, 0, "A1")? * lift(u_b1, 0, "A2")? + lift(u_a2, 1, "A2")? * lift(u_b2, 1, "A1")?;
    let tick = space.embed(&crate::linalg::pauli_x(), &["clock"])?;
    let full = &layer * tick * &layer;
    let e = (d + 1) * (d + 1);
    Ok(full.view((e, 0), (e, e)).into_owned())
}

/// Norm of the part of `op V` that leaves the one-particle sector, where `V`
/// is [`one_particle_iso`].
pub fn sector_leakage(op: &Matrix, d: usize) -> f64 {
    let v = one_particle_iso(d);
    let n = v.nrows();
    operator_norm(&((identity(n) - &v * v.adjoint()) * op * v))
}

/// The fine-grained circuit reduced to control (x) target: distribute with
/// [`w_sup`], run [`fine_grained_wires`], recombine with `W_sup^dagger`.
/// Yields `a|0> U_B2 U_A1 |psi> + b|1> U_A2 U_B1 |psi>`.
pub fn fine_grained_circuit(u_a1: &Matrix, u_a2: &Matrix, u_b1: &Matrix, u_b2: &Matrix) -> Result<KrausChannel> {
    let m = fine_grained_wires(u_a1, u_a2, u_b1, u_b2)?;
    let d = u_a1.nrows();
    let leak = sector_leakage(&m, d);
    if leak > NORM_TOL {
        return Err(Error::OutsideSector(leak));
    }
    let w = w_sup(d);
    let space = Space::from_dims(&[("C", 2), ("T", d)])?;
    KrausChannel::unitary(space, w.adjoint() * m * w)
}

/// Alice's two fine-grained operations on her wires: `(U1 (+) 1) (x) (U2 (+) 1)`.
pub fn fine_grained_alice(u1: &Matrix, u2: &Matrix) -> Result<Matrix> {
    check_unitaries(&[u1, u2])?;
    Ok(kron(&vacuum_extend(u1), &vacuum_extend(u2)))
}

/// `U1 (x) |t1><t1| + U2 (x) |t2><t2|` on target (x) pointer.
pub fn effective_op(u1: &Matrix, u2: &Matrix) -> Result<Matrix> {
    check_unitaries(&[u1, u2])?;
    Ok(kron(u1, &ketbra(2, 0, 0)) + kron(u2, &ketbra(2, 1, 1)))
}

/// `|0><0| (x) U1 + |1><1| (x) U2` on control (x) target, certified
/// block-diagonal in the control.
pub fn routed_op(u1: &Matrix, u2: &Matrix) -> Result<SectoredOperator> {
    let d = check_unitaries(&[u1, u2])?;
    let space = Space::new(vec![
        Factor::new("C", 2).with_sectors(vec![Sector::new("0", 1), Sector::new("1", 1)]),
        Factor::new("T", d),
    ])?;
    let m = kron(&ketbra(2, 0, 0), u1) + kron(&ketbra(2, 1, 1), u2);
    SectoredOperator::new(space, m, &["C"])
}

/// Relabels a control (x) target operator as target (x) pointer.
pub fn routed_to_effective(routed: &Matrix, d: usize) -> Matrix {
    let s = swap_operator(2, d);
    &s * routed * s.adjoint()
}

/// Isometry `V` from target (x) pointer onto the one-particle sector of two
/// vacuum-extended wires: `|i,t1> -> |i>|vac>`, `|j,t2> -> |vac>|j>`.
pub fn one_particle_iso(d: usize) -> Matrix {
    w_sup(d) * swap_operator(d, 2)
}

/// `V^dagger op V` for an operator on the two wires, provided it keeps the
/// one-particle sector invariant.
pub fn pull_back(op: &Matrix, d: usize) -> Result<Matrix> {
    let leak = sector_leakage(op, d);
    if leak > NORM_TOL {
        return Err(Error::OutsideSector(leak));
    }
    let v = one_particle_iso(d);
    Ok(v.adjoint() * op * v)
}

/// Coordinates of a two-wire vector in target (x) pointer, rejecting any
/// amplitude outside the one-particle sector.
pub fn to_one_particle(v: &Vector, d: usize) -> Result<Vector> {
    let iso = one_particle_iso(d);
    let coords = iso.adjoint() * v;
    let leak = (v - &iso * &coords).norm();
    if leak > NORM_TOL {
        return Err(Error::OutsideSector(leak));
    }
    Ok(coords)
}

/// `a|0>|t1>|t1> + b|1>|t2>|t2>` on control (x) `R_A` (x) `R_B`.
pub fn ref_entangled_control(alpha: crate::linalg::C64, beta: crate::linalg::C64) -> Result<Vector> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalised(n));
    }
    Ok(kron_vec(&kron_vec(&basis(2, 0), &basis(2, 0)), &basis(2, 0)) * alpha
        + kron_vec(&kron_vec(&basis(2, 1), &basis(2, 1)), &basis(2, 1)) * beta)
}

/// Channel from the two wires `A1 (x) A2` to control `C` (x) target `T` (x)
/// flag `F`. On the one-particle sector it is `W_sup^dagger` with the flag in
/// `|0>`; every other basis state is sent to `|0,0>` with the flag raised,
/// which keeps the map trace-preserving.
pub fn recombination(d: usize) -> KrausChannel {
    let w = w_sup(d);
    let e = (d + 1) * (d + 1);
    let out = 4 * d;
    let flag_down = w.adjoint().kronecker(&basis(2, 0));
    let mut kraus = vec![flag_down];
    let sector = &w * w.adjoint();
    let raised = basis(out, 1);
    for j in 0..e {
        if sector[(j, j)].re < 0.5 {
            kraus.push(&raised * basis(e, j).adjoint());
        }
    }
    let output = Space::from_dims(&[("C", 2), ("T", d), ("F", 2)]).expect("distinct labels");
    KrausChannel::trace_preserving(wire_space(d), output, kraus).expect("complete by construction")
}
