//! Three-party Mermin operator
//! B₃ = (σ₁σ₂′ + σ₁′σ₂)σ₃ + (σ₁σ₂ − σ₁′σ₂′)σ₃′ with σ_k = a⃗_k·σ⃗.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{kron_all, pauli_along, CMatrix, Direction};
use crate::correlation::CorrelationTensor;
use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, OptimizerConfig};
use crate::state::DensityMatrix;

/// Local bound satisfied by every separable state.
pub const MERMIN_LOCAL_BOUND: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MerminSettings {
    pub a1: Direction,
    pub a1p: Direction,
    pub a2: Direction,
    pub a2p: Direction,
    pub a3: Direction,
    pub a3p: Direction,
}

impl MerminSettings {
    /// From twelve angles (θ, φ) in the order a1, a1′, a2, a2′, a3, a3′.
    pub fn from_angles(x: &[f64]) -> Self {
        let d = |k: usize| Direction::new(x[2 * k], x[2 * k + 1]);
        Self {
            a1: d(0),
            a1p: d(1),
            a2: d(2),
            a2p: d(3),
            a3: d(4),
            a3p: d(5),
        }
    }

    pub fn angles(&self) -> [f64; 12] {
        let mut out = [0.0; 12];
        for (k, d) in self.directions().iter().enumerate() {
            out[2 * k] = d.theta();
            out[2 * k + 1] = d.phi();
        }
        out
    }

    fn directions(&self) -> [Direction; 6] {
        [self.a1, self.a1p, self.a2, self.a2p, self.a3, self.a3p]
    }

    /// Unprimed settings along ŷ, primed along −x̂: attains 4 on GHZ.
    pub fn ghz_optimal() -> Self {
        let y = Direction::y_axis();
        let mx = Direction::x_axis().flipped();
        Self {
            a1: y,
            a1p: mx,
            a2: y,
            a2p: mx,
            a3: y,
            a3p: mx,
        }
    }
}

/// B₃ as an 8×8 Hermitian matrix.
pub fn mermin_operator(s: &MerminSettings) -> CMatrix {
    let op = |d: &Direction| pauli_along(&d.vector());
    let term = |a: &Direction, b: &Direction, c: &Direction| kron_all(&[op(a), op(b), op(c)]);
    term(&s.a1, &s.a2p, &s.a3) + term(&s.a1p, &s.a2, &s.a3) + term(&s.a1, &s.a2, &s.a3p)
        - term(&s.a1p, &s.a2p, &s.a3p)
}

/// ⟨B₃⟩ = Tr(ρ B₃).
pub fn mermin_expectation(rho: &DensityMatrix, s: &MerminSettings) -> Result<f64> {
    if rho.n_qubits() != 3 {
        return Err(Error::InvalidArity(format!(
            "Mermin operator needs 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let b = mermin_operator(s);
    let tr = (rho.matrix() * b).trace();
    if tr.im.abs() >= 1e-10 {
        return Err(Error::Numerical(format!("Tr(ρB₃) has imaginary part {:e}", tr.im)));
    }
    Ok(tr.re)
}

/// ⟨B₃⟩ from the correlation tensor.
pub fn mermin_from_tensor(t: &CorrelationTensor, s: &MerminSettings) -> f64 {
    let v = |d: &Direction| d.vector();
    let (a1, a1p, a2, a2p, a3, a3p) = (v(&s.a1), v(&s.a1p), v(&s.a2), v(&s.a2p), v(&s.a3), v(&s.a3p));
    t.expect3(&a1, &a2p, &a3) + t.expect3(&a1p, &a2, &a3) + t.expect3(&a1, &a2, &a3p)
        - t.expect3(&a1p, &a2p, &a3p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MerminOptimum {
    pub value: f64,
    pub settings: MerminSettings,
    pub n_evaluations: usize,
    pub converged: bool,
}

/// Halton radical inverse in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Start points: a 12-dimensional Halton sequence shifted by a seeded
/// random offset (Cranley–Patterson rotation), mapped to area-uniform angles.
fn start_points(cfg: &OptimizerConfig) -> Vec<[f64; 12]> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shift: [f64; 12] = std::array::from_fn(|_| rng.gen::<f64>());
    (1..=cfg.n_starts as u64)
        .map(|i| {
            let mut x = [0.0; 12];
            for k in 0..6 {
                let u = (radical_inverse(i, PRIMES[2 * k]) + shift[2 * k]).fract();
                let v = (radical_inverse(i, PRIMES[2 * k + 1]) + shift[2 * k + 1]).fract();
                x[2 * k] = (1.0 - 2.0 * u).acos();
                x[2 * k + 1] = std::f64::consts::TAU * v;
            }
            x
        })
        .collect()
}

/// Maximum of ⟨B₃⟩ over all measurement settings, by multi-start simplex.
pub fn max_mermin(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<MerminOptimum> {
    max_mermin_from(rho, cfg, &[])
}

/// As [`max_mermin`], with extra starting settings.
pub fn max_mermin_from(
    rho: &DensityMatrix,
    cfg: &OptimizerConfig,
    hints: &[MerminSettings],
) -> Result<MerminOptimum> {
    if rho.n_qubits() != 3 {
        return Err(Error::InvalidArity(format!(
            "Mermin operator needs 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    if cfg.n_starts == 0 || cfg.simplex_tol.is_nan() || cfg.simplex_tol <= 0.0 {
        return Err(Error::Argument("Mermin search needs n_starts > 0 and simplex_tol > 0".into()));
    }
    let t = CorrelationTensor::new(rho);
    let objective = |x: &[f64]| -mermin_from_tensor(&t, &MerminSettings::from_angles(x));
    let mut starts = start_points(cfg);
    starts.extend(hints.iter().map(MerminSettings::angles));
    let runs: Vec<_> = starts
        .par_iter()
        .map(|x0| {
            // a restart from the first result escapes premature collapse
            let first = nelder_mead(objective, x0, &[0.4; 12], cfg.simplex_tol, cfg.max_iters);
            let second = nelder_mead(objective, &first.x, &[0.1; 12], cfg.simplex_tol, cfg.max_iters);
            let evals = first.evaluations + second.evaluations;
            (second, evals)
        })
        .collect();
    let n_evaluations = runs.iter().map(|(_, e)| e).sum();
    let (best, _) = runs
        .iter()
        .min_by(|a, b| a.0.value.total_cmp(&b.0.value))
        .expect("at least one start");
    let settings = MerminSettings::from_angles(&best.x);
    Ok(MerminOptimum {
        value: mermin_from_tensor(&t, &settings),
        settings,
        n_evaluations,
        converged: best.converged,
    })
}
