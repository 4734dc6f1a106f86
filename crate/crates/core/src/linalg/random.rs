use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, zeros, DensityOperator, KrausChannel, Matrix, Space, Vector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let mut m = zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag(R)` moved into `Q`. Dimension 1 returns exactly `[1]`.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> Matrix {
    assert!(dim >= 1, "dimension must be positive");
    if dim == 1 {
        return Matrix::from_element(1, 1, c(1.0, 0.0));
    }
    let qr = ginibre(dim, dim, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random CPTP map via a Stinespring isometry cut from a Haar unitary on
/// output (x) environment, environment dimension `din * dout`.
pub fn random_cptp(din: usize, dout: usize, rng: &mut impl Rng) -> KrausChannel {
    assert!(din >= 1 && dout >= 1, "dimensions must be positive");
    let env = din * dout;
    let u = random_unitary(dout * env, rng);
    let kraus = (0..env)
        .map(|j| Matrix::from_fn(dout, din, |o, i| u[(o * env + j, i)]))
        .collect();
    let input = Space::from_dims(&[("in", din)]).expect("valid space");
    let output = Space::from_dims(&[("out", dout)]).expect("valid space");
    KrausChannel::from_parts(input, output, kraus)
}

pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> Vector {
    let v = Vector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v / c(n, 0.0)
}

/// Full-rank random mixed state `G G^dagger / Tr`.
pub fn random_state(space: Space, rng: &mut impl Rng) -> DensityOperator {
    let n = space.dim();
    let g = ginibre(n, n, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityOperator::from_parts(space, m / tr)
}
