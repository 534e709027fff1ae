use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{ComplexMatrix, C64};
use super::states::{DensityMatrix, PureState};

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the phase correction on R.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.to_nalgebra().qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        q[(i, j)] * d / d.norm()
    })
}

pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> PureState {
    PureState::normalized((0..dim).map(|_| gaussian(rng)).collect()).expect("nonzero")
}

/// Full-rank random state G G† / Tr(G G†).
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scale(C64::new(1.0 / tr, 0.0)))
}

/// Uniform point in the closed unit ball.
pub fn random_ball_point(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let p = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if p.iter().map(|x: &f64| x * x).sum::<f64>() <= 1.0 {
            return p;
        }
    }
}
