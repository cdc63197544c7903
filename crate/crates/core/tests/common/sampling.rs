use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use triwork::bloch::{Direction, C64};
use triwork::state::{dm_from_pure, mix, product_state, DensityMatrix};

/// Area-uniform random direction.
pub fn direction(rng: &mut ChaCha8Rng) -> Direction {
    let c: f64 = rng.gen_range(-1.0..1.0);
    Direction::new(c.acos(), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A fully separable state: a random mixture of 1 to 8 pure product states.
/// Also returns the components and weights.
pub fn separable(rng: &mut ChaCha8Rng, n: usize) -> (DensityMatrix, Vec<(f64, Vec<Direction>)>) {
    let terms = rng.gen_range(1..=8);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let parts: Vec<(f64, Vec<Direction>)> = weights
        .into_iter()
        .map(|w| (w, (0..n).map(|_| direction(rng)).collect()))
        .collect();
    let states: Vec<DensityMatrix> = parts
        .iter()
        .map(|(_, d)| dm_from_pure(&product_state(d).unwrap()))
        .collect();
    let comps: Vec<(f64, &DensityMatrix)> = parts.iter().zip(&states).map(|((w, _), s)| (*w, s)).collect();
    (mix(&comps).unwrap(), parts)
}

/// Random full-rank state G G† / Tr(G G†) with Gaussian G.
pub fn ginibre(rng: &mut ChaCha8Rng, n_qubits: usize) -> DensityMatrix {
    let d = 1 << n_qubits;
    let mut gauss = || {
        // Box–Muller
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let g = DMatrix::<C64>::from_fn(d, d, |_, _| C64::new(gauss(), gauss()));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m * C64::from(1.0 / tr)).unwrap()
}
