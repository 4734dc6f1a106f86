use lablocus_core::linalg::{
    c, choi_matrix, identity, outer, random_cptp, random_pure_state, random_state, random_unitary, rng_from_seed,
    KrausChannel, Matrix, SeededRng, Space,
};
use lablocus_core::switch::{born_probability, effect_choi, preparation_choi, qs_coarse, qs_process_vector};

fn unitary_choi(u: &Matrix) -> Matrix {
    let n = u.nrows();
    choi_matrix(&KrausChannel::unitary(Space::from_dims(&[("q", n)]).unwrap(), u.clone()).unwrap())
}

fn random_basis(n: usize, rng: &mut SeededRng) -> Vec<Matrix> {
    let u = random_unitary(n, rng);
    (0..n)
        .map(|k| {
            let col = u.column(k).into_owned();
            outer(&col, &col)
        })
        .collect()
}

#[test]
fn norm_is_twice_d_cubed() {
    for d in 2..=3 {
        let w = qs_process_vector(d);
        // count of unit amplitudes: d^3 per branch, branches on orthogonal control values
        let direct: f64 = w.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        let n = (d * d * d) as f64;
        assert!((direct - 2.0 * n).abs() <= 1e-9);
        assert!((w.norm_squared() - 2.0 * n).abs() <= 1e-9);
    }
}

#[test]
fn process_matrix_has_rank_one() {
    let w = qs_process_vector(2);
    let m = w.process_matrix();
    let sv = m.singular_values();
    let max = sv.max();
    let rank = sv.iter().filter(|s| **s > 1e-9 * max).count();
    assert_eq!(rank, 1);
    assert!((m.trace().re - 16.0).abs() <= 1e-9);
    assert!((&m - m.adjoint()).camax() == 0.0);
}

#[test]
fn born_rule_matches_the_circuit() {
    let d = 2;
    let w = qs_process_vector(d);
    let mut rng = rng_from_seed(31);
    for _ in 0..20 {
        let ua = random_unitary(d, &mut rng);
        let ub = random_unitary(d, &mut rng);
        let phi = random_pure_state(2 * d, &mut rng);
        let rho = outer(&phi, &phi);
        let out = qs_coarse(&ua, &ub).unwrap() * &phi;
        let (ja, jb, jc) = (unitary_choi(&ua), unitary_choi(&ub), preparation_choi(&rho));
        for e in random_basis(2 * d, &mut rng) {
            let jd = effect_choi(&e);
            let p = born_probability(&w, &[("C", &jc), ("A", &ja), ("B", &jb), ("D", &jd)]).unwrap();
            let oracle = (out.adjoint() * &e * &out)[(0, 0)].re;
            assert!((p - oracle).abs() <= 1e-9, "{p} vs {oracle}");
        }
    }
}

#[test]
fn plus_control_with_identity_agents() {
    let d = 2;
    let w = qs_process_vector(d);
    let mut rng = rng_from_seed(32);
    let psi = random_pure_state(d, &mut rng);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi = lablocus_core::linalg::kron_vec(
        &lablocus_core::linalg::Vector::from_vec(vec![c(h, 0.0), c(h, 0.0)]),
        &psi,
    );
    let id = unitary_choi(&identity(d));
    let jc = preparation_choi(&outer(&phi, &phi));
    let mut total = 0.0;
    for e in random_basis(2 * d, &mut rng) {
        let p = born_probability(&w, &[("C", &jc), ("A", &id), ("B", &id), ("D", &effect_choi(&e))]).unwrap();
        let oracle = (phi.adjoint() * &e * &phi)[(0, 0)].re;
        assert!((p - oracle).abs() <= 1e-9);
        total += p;
    }
    assert!((total - 1.0).abs() <= 1e-9);
}

#[test]
fn probabilities_sum_to_one_for_random_channels() {
    let d = 2;
    let w = qs_process_vector(d);
    let mut rng = rng_from_seed(33);
    for _ in 0..50 {
        let ja = choi_matrix(&random_cptp(d, d, &mut rng));
        let jb = choi_matrix(&random_cptp(d, d, &mut rng));
        let rho = random_state(Space::from_dims(&[("CT", 2 * d)]).unwrap(), &mut rng);
        let jc = preparation_choi(rho.matrix());
        let mut total = 0.0;
        for e in random_basis(2 * d, &mut rng) {
            let p = born_probability(&w, &[("C", &jc), ("A", &ja), ("B", &jb), ("D", &effect_choi(&e))]).unwrap();
            assert!((-1e-10..=1.0 + 1e-10).contains(&p));
            total += p;
        }
        assert!((total - 1.0).abs() <= 1e-9, "{total}");
    }
}

#[test]
fn depolarised_everywhere_is_uniform() {
    let d = 2;
    let w = qs_process_vector(d);
    // fully depolarising channel: J = I (x) I / d
    let dep = identity(d * d) / c(d as f64, 0.0);
    let jc = preparation_choi(&(identity(2 * d) / c(2.0 * d as f64, 0.0)));
    for k in 0..2 * d {
        let e = lablocus_core::linalg::ketbra(2 * d, k, k);
        let p = born_probability(&w, &[("C", &jc), ("A", &dep), ("B", &dep), ("D", &effect_choi(&e))]).unwrap();
        assert!((p - 1.0 / (2 * d) as f64).abs() <= 1e-9, "{p}");
    }
}
