//! Finite-dimensional models behind each supported lab choice.

use crate::error::Result;
use crate::lab::{ConditionedStep, Context, Event, Lab, Step};
use crate::linalg::{
    basis, c, hadamard, identity, ketbra, kron, kron_vec, pauli_x, random_pure_state, random_unitary, rng_from_seed,
    DensityOperator, Factor, KrausChannel, Matrix, ReferenceMeasurement, Space, Vector, C64,
};
use crate::switch::{recombination, ref_entangled_control, vacuum_extend, w_sup};

/// Parameters shared by every switch model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Target dimension.
    pub d: usize,
    pub alpha: C64,
    pub beta: C64,
    /// Seed for the agents' unitaries and the target state.
    pub seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            d: 2,
            alpha: c(h, 0.0),
            beta: c(h, 0.0),
            seed: 0,
        }
    }
}

/// Alice's and Bob's operations at the two times, and the target input.
#[derive(Debug, Clone, PartialEq)]
pub struct Instruments {
    pub u_a1: Matrix,
    pub u_a2: Matrix,
    pub u_b1: Matrix,
    pub u_b2: Matrix,
    pub psi: Vector,
}

impl Instruments {
    pub fn sample(p: &ModelParams) -> Self {
        let mut rng = rng_from_seed(p.seed);
        Self {
            u_a1: random_unitary(p.d, &mut rng),
            u_a2: random_unitary(p.d, &mut rng),
            u_b1: random_unitary(p.d, &mut rng),
            u_b2: random_unitary(p.d, &mut rng),
            psi: random_pure_state(p.d, &mut rng),
        }
    }
}

/// Which part of Alice's fine-grained operation is the event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Both,
    First,
    Second,
}

fn control_state(p: &ModelParams) -> Vector {
    Vector::from_vec(vec![p.alpha, p.beta])
}

fn unitary_step(m: &ReferenceMeasurement, target: &Space, ops: Vec<(&str, Matrix)>) -> Result<Step> {
    Ok(Step::Conditioned(ConditionedStep::unitaries(m.clone(), target, &ops)?))
}

/// `|k><k| (x) U + (1 - |k><k|) (x) 1` on a qubit (x) system.
fn controlled_on(k: usize, u: &Matrix) -> Matrix {
    let n = u.nrows();
    kron(&ketbra(2, k, k), u) + kron(&ketbra(2, 1 - k, 1 - k), &identity(n))
}

fn unitary_channel(space: &Space, op: &Matrix, labels: &[&str]) -> Result<KrausChannel> {
    KrausChannel::unitary(space.clone(), space.embed(op, labels)?)
}

/// A built model: the lab, its context and the event under analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub lab: Lab,
    pub context: Context,
    pub event: Event,
}

/// Two vacuum-extended wires `A1`, `A2` carrying the photon, and a two-valued
/// reference `R`. With `clock` the reference ticks from its first to its
/// second value between Alice's two operations; otherwise it is a static
/// position pointer and Alice's whole operation happens at its first value.
pub fn fine_grained(p: &ModelParams, labels: [&str; 2], clock: bool, window: Window) -> Result<Model> {
    let d = p.d;
    let ins = Instruments::sample(p);
    let m = ReferenceMeasurement::computational("R", &labels);
    let target = Space::new(vec![Factor::vacuum_extended("A1", d), Factor::vacuum_extended("A2", d)])?;
    let space = Space::new(vec![
        Factor::new("R", 2),
        Factor::vacuum_extended("A1", d),
        Factor::vacuum_extended("A2", d),
    ])?;
    let e = d + 1;
    let id_e = identity(e);
    let id_w = identity(e * e);
    let alice1 = kron(&vacuum_extend(&ins.u_a1), &id_e);
    let alice2 = kron(&id_e, &vacuum_extend(&ins.u_a2));
    let [l1, l2] = labels;

    let (first, tick, second) = if clock {
        (
            unitary_step(&m, &target, vec![(l1, alice1.clone()), (l2, id_w.clone())])?,
            Step::ReferenceDynamics(pauli_x()),
            unitary_step(&m, &target, vec![(l1, id_w.clone()), (l2, alice2.clone())])?,
        )
    } else {
        (
            unitary_step(&m, &target, vec![(l1, alice1.clone()), (l2, id_w.clone())])?,
            Step::ReferenceDynamics(identity(2)),
            unitary_step(&m, &target, vec![(l1, alice2.clone()), (l2, id_w.clone())])?,
        )
    };

    // photon distributed, Bob's first operation already done on A2
    let wires = w_sup(d) * kron_vec(&control_state(p), &ins.psi);
    let wires = kron(&id_e, &vacuum_extend(&ins.u_b1)) * wires;
    let mut rho = DensityOperator::pure(space.clone(), &kron_vec(&basis(2, 0), &wires))?;

    let bob2 = unitary_channel(&space, &vacuum_extend(&ins.u_b2), &["A1"])?;
    let recombine = KrausChannel::identity(Space::from_dims(&[("R", 2)])?).tensor(&recombination(d))?;
    let recombine = recombine.with_spaces(space.clone(), recombine.output().clone())?;
    let local = Lab::new(m.clone(), target.clone(), vec![])?.local_space();
    let as_channel = |s: &Step| -> Result<KrausChannel> {
        let lab = Lab::new(m.clone(), target.clone(), vec![])?;
        let ch = crate::lab::event_channel(&lab, &Event::new(vec![s.clone()])?)?;
        let labels = local.labels();
        KrausChannel::unitary(space.clone(), space.embed(&ch.kraus()[0], &labels)?)
    };

    let (steps, continuation) = match window {
        Window::Both => {
            let steps = if clock {
                vec![first, tick, second]
            } else {
                let both = kron(&vacuum_extend(&ins.u_a1), &vacuum_extend(&ins.u_a2));
                vec![unitary_step(&m, &target, vec![(l1, both), (l2, id_w.clone())])?]
            };
            (steps, bob2.then(&recombine)?)
        }
        Window::First => {
            let rest = as_channel(&tick)?.then(&as_channel(&second)?)?;
            (vec![first], rest.then(&bob2)?.then(&recombine)?)
        }
        Window::Second => {
            rho = as_channel(&first)?.apply(&rho)?;
            rho = as_channel(&tick)?.apply(&rho)?;
            (vec![second], bob2.then(&recombine)?)
        }
    };
    let event = Event::new(steps)?;
    let lab = Lab::new(m, target, vec![("A".into(), event.clone())])?;
    Ok(Model {
        lab,
        context: Context::new(rho, continuation)?,
        event,
    })
}

/// Alice's reference `R_A` is entangled with the control (and with Bob's
/// reference `R_B`); the target `T` has no vacuum. After her operation Bob
/// acts in the other branch, the references are brought back to their first
/// value, and the control is interfered.
pub fn effective(p: &ModelParams, labels: [&str; 2]) -> Result<Model> {
    let d = p.d;
    let ins = Instruments::sample(p);
    let m = ReferenceMeasurement::computational("R_A", &labels);
    let target = Space::from_dims(&[("T", d)])?;
    let space = Space::from_dims(&[("C", 2), ("R_A", 2), ("R_B", 2), ("T", d)])?;
    let refs = ref_entangled_control(p.alpha, p.beta)?;
    let psi = kron_vec(&refs, &ins.psi);
    let bob1 = space.embed(&controlled_on(1, &ins.u_b1), &["C", "T"])?;
    let rho = DensityOperator::pure(space.clone(), &(bob1 * psi))?;

    let [l1, l2] = labels;
    let event = Event::new(vec![unitary_step(
        &m,
        &target,
        vec![(l1, ins.u_a1.clone()), (l2, ins.u_a2.clone())],
    )?])?;

    let bob2 = unitary_channel(&space, &controlled_on(0, &ins.u_b2), &["C", "T"])?;
    let unswap = unitary_channel(
        &space,
        &controlled_on(1, &kron(&pauli_x(), &pauli_x())),
        &["C", "R_A", "R_B"],
    )?;
    let interfere = unitary_channel(&space, &hadamard(), &["C"])?;
    let continuation = bob2.then(&unswap)?.then(&interfere)?;
    let lab = Lab::new(m, target, vec![("A".into(), event.clone())])?;
    Ok(Model {
        lab,
        context: Context::new(rho, continuation)?,
        event,
    })
}

/// The coarse switch seen through a reference `R` of dimension
/// `labels.len()` that sits at its first value in both branches. Alice acts
/// at that value and trivially elsewhere.
pub fn coarse(p: &ModelParams, labels: &[&str]) -> Result<Model> {
    let d = p.d;
    let ins = Instruments::sample(p);
    let n = labels.len();
    let m = ReferenceMeasurement::computational("R", labels);
    let target = Space::from_dims(&[("T", d)])?;
    let space = Space::from_dims(&[("C", 2), ("R", n), ("T", d)])?;
    let branches =
        kron_vec(&basis(2, 0), &ins.psi) * p.alpha + kron_vec(&basis(2, 1), &(&ins.u_b1 * &ins.psi)) * p.beta;
    // C (x) R (x) T with R at its first value
    let mut psi = Vector::zeros(space.dim());
    for ci in 0..2 {
        for ti in 0..d {
            psi[space.flat_index(&[ci, 0, ti])] = branches[ci * d + ti];
        }
    }
    let rho = DensityOperator::pure(space.clone(), &psi)?;
    let mut ops = vec![(labels[0], ins.u_a1.clone())];
    ops.extend(labels[1..].iter().map(|l| (*l, identity(d))));
    let event = Event::new(vec![unitary_step(&m, &target, ops)?])?;
    let bob = unitary_channel(&space, &controlled_on(0, &ins.u_b1), &["C", "T"])?;
    let interfere = unitary_channel(&space, &hadamard(), &["C"])?;
    let lab = Lab::new(m, target, vec![("A".into(), event.clone())])?;
    Ok(Model {
        lab,
        context: Context::new(rho, bob.then(&interfere)?)?,
        event,
    })
}
