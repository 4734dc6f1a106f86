use crate::error::Result;
use crate::lab::{
    check_localisation, check_relative_measurability, event_output, CheckMode, CheckOptions, ConditionedStep, Context,
    Event, Lab, LocalisationVerdict, MeasurabilityVerdict,
};
use crate::linalg::{
    basis, c, dephase, hadamard, identity, kron, kron_vec, partial_trace, DensityOperator, Factor, KrausChannel,
    Matrix, ReferenceMeasurement, Space, Vector,
};
use crate::switch::{one_particle_iso, recombination, vacuum_extend};

use super::Agent;

pub const SLIT_LABELS: [&str; 2] = ["x_L", "x_R"];

/// Outcome probabilities of the two interference detectors.
pub type Distribution = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleSlitReport {
    pub agent: Agent,
    pub measurability: MeasurabilityVerdict,
    pub localisation: LocalisationVerdict,
    /// No phase applied.
    pub baseline: Distribution,
    /// Phase `pi` at the agent's slit.
    pub with_phase: Distribution,
    /// Phase `pi` after the agent's reference has been measured.
    pub reference_measured: Distribution,
}

/// Path qubit as two vacuum-extended slit modes, plus the agent's position
/// pointer `R`. Claire's pointer sits at the left slit independently of the
/// path; Quinn's pointer follows the photon.
pub fn double_slit_model(agent: Agent, phase: f64) -> Result<(Lab, Context, Event)> {
    let m = ReferenceMeasurement::computational("R", &SLIT_LABELS);
    let target = Space::new(vec![
        Factor::vacuum_extended("slit_L", 1),
        Factor::vacuum_extended("slit_R", 1),
    ])?;
    let space = Space::new(vec![
        Factor::new("R", 2),
        Factor::vacuum_extended("slit_L", 1),
        Factor::vacuum_extended("slit_R", 1),
    ])?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = one_particle_iso(1);
    let left = &v * basis(2, 0);
    let right = &v * basis(2, 1);
    let psi: Vector = match agent {
        Agent::Quinn => (kron_vec(&basis(2, 0), &left) + kron_vec(&basis(2, 1), &right)) * c(h, 0.0),
        _ => kron_vec(&basis(2, 0), &((left + right) * c(h, 0.0))),
    };
    let rho = DensityOperator::pure(space.clone(), &psi)?;

    let shifter = vacuum_extend(&Matrix::from_element(1, 1, c(phase.cos(), phase.sin())));
    let id = identity(2);
    let event = Event::single(ConditionedStep::unitaries(
        m.clone(),
        &target,
        &[
            (SLIT_LABELS[0], kron(&shifter, &id)),
            (SLIT_LABELS[1], kron(&id, &shifter)),
        ],
    )?);

    let recombine = KrausChannel::identity(Space::from_dims(&[("R", 2)])?).tensor(&recombination(1))?;
    let recombine = recombine.with_spaces(space.clone(), recombine.output().clone())?;
    let readout = {
        let out = recombine.output().clone();
        KrausChannel::unitary(out.clone(), out.embed(&hadamard(), &["C"])?)?
    };
    let continuation = match agent {
        Agent::Quinn => {
            // photon in the right slit flips the pointer back to x_L
            let particle = Matrix::from_diagonal(&Vector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]));
            let vacuum = identity(2) - &particle;
            let uncompute = kron(&crate::linalg::pauli_x(), &particle) + kron(&identity(2), &vacuum);
            KrausChannel::unitary(space.clone(), space.embed(&uncompute, &["R", "slit_R"])?)?
                .then(&recombine)?
                .then(&readout)?
        }
        _ => recombine.then(&readout)?,
    };
    let lab = Lab::new(m, target, vec![("phase".into(), event.clone())])?;
    Ok((lab, Context::new(rho, continuation)?, event))
}

fn distribution(rho: &DensityOperator) -> Result<Distribution> {
    let p = partial_trace(rho, &["C"])?;
    Ok([p.matrix()[(0, 0)].re, p.matrix()[(1, 1)].re])
}

pub fn double_slit(agent: Agent, opts: &CheckOptions) -> Result<DoubleSlitReport> {
    let (lab, ctx, event) = double_slit_model(agent, std::f64::consts::PI)?;
    let measurability = check_relative_measurability(&lab, &ctx, &event, opts)?;
    let localisation = check_localisation(&lab, &ctx, &event, opts)?;
    // detector statistics are read after the interferometer in every mode
    let full = CheckOptions {
        mode: CheckMode::ContextInclusive,
        ..*opts
    };
    let with_phase = distribution(&event_output(&lab, &ctx, &event, &full)?)?;
    let (lab0, ctx0, event0) = double_slit_model(agent, 0.0)?;
    let baseline = distribution(&event_output(&lab0, &ctx0, &event0, &full)?)?;
    let measured = Context::new(dephase(ctx.initial(), lab.reference())?, ctx.continuation().clone())?;
    let reference_measured = distribution(&event_output(&lab, &measured, &event, &full)?)?;
    Ok(DoubleSlitReport {
        agent,
        measurability,
        localisation,
        baseline,
        with_phase,
        reference_measured,
    })
}
