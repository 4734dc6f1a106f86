use lablocus_core::linalg::{
    c, controlled_unitary, dephase, identity, kron, operator_norm, partial_trace, random_cptp, random_state,
    random_unitary, rng_from_seed, trace_distance, DensityOperator, KrausChannel, ReferenceMeasurement, Space,
};
use proptest::prelude::*;

fn space(dims: &[(&str, usize)]) -> Space {
    Space::from_dims(dims).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn channels_keep_states_valid(seed in any::<u64>(), din in 1usize..4, dout in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let ch = random_cptp(din, dout, &mut rng);
        let rho = random_state(ch.input().clone(), &mut rng);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() <= 1e-10);
        prop_assert!(out.min_eigenvalue() >= -1e-10);
        prop_assert!(ch.trace_preservation_deviation() <= 1e-10);
    }

    #[test]
    fn dephasing_is_idempotent(seed in any::<u64>(), dr in 2usize..4, dt in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let labels: Vec<String> = (0..dr).map(|i| format!("r{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let m = ReferenceMeasurement::computational("R", &refs);
        let rho = random_state(space(&[("R", dr), ("T", dt)]), &mut rng);
        let once = dephase(&rho, &m).unwrap();
        let twice = dephase(&once, &m).unwrap();
        prop_assert!(trace_distance(&once, &twice).unwrap() <= 1e-12);
        prop_assert!((once.trace() - 1.0).abs() <= 1e-12);
        // off-diagonal reference blocks vanish
        for i in 0..dr * dt {
            for j in 0..dr * dt {
                if i / dt != j / dt {
                    prop_assert!(once.matrix()[(i, j)].norm() == 0.0);
                }
            }
        }
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let s = space(&[("S", n)]);
        let a = random_state(s.clone(), &mut rng);
        let b = random_state(s.clone(), &mut rng);
        let m = random_state(s, &mut rng);
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, trace_distance(&b, &a).unwrap());
        prop_assert!(ab <= trace_distance(&a, &m).unwrap() + trace_distance(&m, &b).unwrap() + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(trace_distance(&a, &a).unwrap() <= 1e-12);
    }

    #[test]
    fn partial_trace_undoes_tensor(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let a = random_state(space(&[("A", da)]), &mut rng);
        let b = random_state(space(&[("B", db)]), &mut rng);
        let ab = a.tensor(&b).unwrap();
        let back_a = partial_trace(&ab, &["A"]).unwrap();
        let back_b = partial_trace(&ab, &["B"]).unwrap();
        prop_assert!(trace_distance(&back_a, &a).unwrap() <= 1e-12);
        prop_assert!(trace_distance(&back_b, &b).unwrap() <= 1e-12);
    }

    #[test]
    fn controlled_unitary_commutes_with_projectors(seed in any::<u64>(), dt in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let m = ReferenceMeasurement::computational("R", &["l0", "l1", "l2"]);
        let ops: Vec<(&str, _)> = ["l0", "l1", "l2"].iter().map(|l| (*l, random_unitary(dt, &mut rng))).collect();
        let cu = controlled_unitary(&m, &ops).unwrap();
        prop_assert!(operator_norm(&(cu.adjoint() * &cu - identity(3 * dt))) <= 1e-12);
        for (_, p) in m.iter() {
            let big = kron(p, &identity(dt));
            prop_assert!(operator_norm(&(&big * &cu - &cu * &big)) <= 1e-12);
        }
    }

    #[test]
    fn composed_channels_stay_trace_preserving(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let s = space(&[("S", n)]);
        let first = random_cptp(n, n, &mut rng).with_spaces(s.clone(), s.clone()).unwrap();
        let second = random_cptp(n, n, &mut rng).with_spaces(s.clone(), s.clone()).unwrap();
        let both = first.then(&second).unwrap();
        prop_assert!(both.trace_preservation_deviation() <= 1e-10);
        let rho = random_state(s, &mut rng);
        let stepwise = second.apply(&first.apply(&rho).unwrap()).unwrap();
        prop_assert!(trace_distance(&stepwise, &both.apply(&rho).unwrap()).unwrap() <= 1e-12);
    }
}

#[test]
fn dephasing_an_unbalanced_superposition() {
    // |psi> = sqrt(0.3)|0> + sqrt(0.7)|1> on R, tensored with a fixed target state
    let s = space(&[("R", 2), ("T", 1)]);
    let v = lablocus_core::linalg::Vector::from_vec(vec![c(0.3f64.sqrt(), 0.0), c(0.0, 0.7f64.sqrt())]);
    let rho = DensityOperator::pure(s, &v).unwrap();
    let m = ReferenceMeasurement::computational("R", &["a", "b"]);
    let out = dephase(&rho, &m).unwrap();
    assert!((out.matrix()[(0, 0)].re - 0.3).abs() <= 1e-12);
    assert!((out.matrix()[(1, 1)].re - 0.7).abs() <= 1e-12);
    assert_eq!(out.matrix()[(0, 1)], c(0.0, 0.0));
}

#[test]
fn identity_channel_on_composite_space() {
    let mut rng = rng_from_seed(9);
    let s = space(&[("A", 2), ("B", 3)]);
    let rho = random_state(s.clone(), &mut rng);
    let out = KrausChannel::identity(s).apply(&rho).unwrap();
    assert_eq!(out, rho);
}
