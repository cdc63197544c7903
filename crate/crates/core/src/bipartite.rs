//! Great-circle and whole-sphere work averages.
//!
//! ξ(A(a), B(b)) = 1 − [H(A|B) + H(B|A)]/2: half of the pairs are used with
//! Alice measuring and Bob extracting, the other half with the roles swapped.

use serde::{Deserialize, Serialize};

use crate::bloch::Direction;
use crate::correlation::CorrelationTensor;
use crate::entropy::h2;
use crate::error::{Error, Result};
use crate::measure::BRANCH_CUTOFF;
use crate::optimize::{optimize_sphere, Mode, OptimizerConfig};
use crate::quadrature::{
    checked_circle_average, checked_sphere_average, circle_average, QuadratureConfig,
    QuadratureEstimate,
};
use crate::state::DensityMatrix;

fn conditional_sum(joint: impl Fn(usize, usize) -> f64) -> f64 {
    // H(X|Y) with X the first index, Y the second
    let mut h = 0.0;
    for y in 0..2 {
        let py = joint(0, y) + joint(1, y);
        if py >= BRANCH_CUTOFF {
            h += py * h2(joint(0, y) / py);
        }
    }
    h
}

/// ξ evaluator for a fixed two-qubit state.
#[derive(Debug, Clone)]
pub struct BipartiteWork {
    tensor: CorrelationTensor,
}

impl BipartiteWork {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits() != 2 {
            return Err(Error::InvalidArity(format!(
                "bipartite work needs 2 qubits, got {}",
                rho.n_qubits()
            )));
        }
        Ok(Self {
            tensor: CorrelationTensor::new(rho),
        })
    }

    /// (H(A|B), H(B|A)) for Alice along `a` and Bob along `b`.
    pub fn conditional_entropies(&self, a: &[f64; 3], b: &[f64; 3]) -> (f64, f64) {
        let p = self.tensor.probs2(a, b);
        let h_a_given_b = conditional_sum(|i, j| p[2 * i + j]);
        let h_b_given_a = conditional_sum(|j, i| p[2 * i + j]);
        (h_a_given_b, h_b_given_a)
    }

    pub fn xi(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        let (hab, hba) = self.conditional_entropies(a, b);
        (1.0 - 0.5 * (hab + hba)).clamp(0.0, 1.0)
    }
}

/// Direction at angle θ on the reference great circle through the poles
/// and the x-axis.
pub fn circle_direction(theta: f64) -> Direction {
    Direction::new(theta, 0.0)
}

/// ξ for Alice at θ and Bob at θ′ on the reference great circle.
pub fn xi_bipartite(rho: &DensityMatrix, theta_a: f64, theta_b: f64) -> Result<f64> {
    let ev = BipartiteWork::new(rho)?;
    Ok(ev.xi(
        &circle_direction(theta_a).vector(),
        &circle_direction(theta_b).vector(),
    ))
}

/// ξ for arbitrary measurement directions.
pub fn xi_directions(rho: &DensityMatrix, a: &Direction, b: &Direction) -> Result<f64> {
    Ok(BipartiteWork::new(rho)?.xi(&a.vector(), &b.vector()))
}

/// Average over the best great circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatCircleAverage {
    pub value: f64,
    /// Normal of the maximizing circle.
    pub normal: Direction,
    pub estimate: QuadratureEstimate,
}

/// Settings for the search over circle orientations.
fn circle_search() -> OptimizerConfig {
    OptimizerConfig {
        coarse_theta: 8,
        coarse_phi: 16,
        n_starts: 3,
        simplex_tol: 1e-12,
        max_iters: 400,
        ..OptimizerConfig::default()
    }
}

/// Maximizes the circle average of `integrand` over circle orientations,
/// then checks the quadrature at the maximizing circle.
fn best_circle<F>(integrand: F, quad: &QuadratureConfig) -> Result<GreatCircleAverage>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    quad.validate()?;
    let opt = optimize_sphere(
        |n| circle_average(&integrand, n, quad.circle_nodes),
        Mode::Max,
        &circle_search(),
    )?;
    let normal = opt.direction();
    let estimate = checked_circle_average(&integrand, &normal, quad).into_result()?;
    Ok(GreatCircleAverage {
        value: estimate.value,
        normal,
        estimate,
    })
}

/// Ξ(ρ): ξ with θ = θ′ averaged over the maximizing great circle.
pub fn xi_capital(rho: &DensityMatrix, quad: &QuadratureConfig) -> Result<GreatCircleAverage> {
    let ev = BipartiteWork::new(rho)?;
    best_circle(
        |d| {
            let v = d.vector();
            ev.xi(&v, &v)
        },
        quad,
    )
}

/// Ξ_BS(ρ): ξ with a common direction averaged over the whole sphere.
pub fn xi_capital_sphere(rho: &DensityMatrix, quad: &QuadratureConfig) -> Result<QuadratureEstimate> {
    quad.validate()?;
    let ev = BipartiteWork::new(rho)?;
    checked_sphere_average(
        |d| {
            let v = d.vector();
            ev.xi(&v, &v)
        },
        quad,
    )
    .into_result()
}

/// Three-party analogue of Ξ: every party measures along the same
/// direction, each in turn extracts given the other two outcomes, and the
/// three works are averaged.
pub fn xi_capital_tri(rho: &DensityMatrix, quad: &QuadratureConfig) -> Result<GreatCircleAverage> {
    if rho.n_qubits() != 3 {
        return Err(Error::InvalidArity(format!(
            "tripartite average needs 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let tensor = CorrelationTensor::new(rho);
    best_circle(|d| symmetric_site_work(&tensor, &d.vector()), quad)
}

pub(crate) fn symmetric_site_work(tensor: &CorrelationTensor, u: &[f64; 3]) -> f64 {
    let p = tensor.probs3(u, u, u);
    let mut total = 0.0;
    for site in 0..3 {
        let bit = 2 - site;
        let mut h = 0.0;
        for rest in 0..8usize {
            if rest & (1 << bit) != 0 {
                continue;
            }
            let p0 = p[rest];
            let p1 = p[rest | (1 << bit)];
            let pr = p0 + p1;
            if pr >= BRANCH_CUTOFF {
                h += pr * h2(p0 / pr);
            }
        }
        total += (1.0 - h).clamp(0.0, 1.0);
    }
    total / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{dm_from_pure, singlet_state};
    use std::f64::consts::PI;

    fn zero_zero() -> DensityMatrix {
        let z = Direction::z_axis();
        dm_from_pure(&crate::state::product_state(&[z, z]).unwrap())
    }

    #[test]
    fn xi_examples() {
        let s = dm_from_pure(&singlet_state());
        for t in [0.0, 0.4, 1.9, 3.0] {
            assert!((xi_bipartite(&s, t, t).unwrap() - 1.0).abs() < 1e-12);
        }
        let zz = zero_zero();
        assert!((xi_bipartite(&zz, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(xi_bipartite(&zz, PI / 2.0, PI / 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_averages_vanish() {
        let id = DensityMatrix::maximally_mixed(2).unwrap();
        let q = QuadratureConfig::default();
        assert!(xi_capital(&id, &q).unwrap().value.abs() < 1e-12);
        assert!(xi_capital_sphere(&id, &q).unwrap().value.abs() < 1e-12);
        let id3 = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(xi_capital_tri(&id3, &q).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn singlet_averages_are_one() {
        let s = dm_from_pure(&singlet_state());
        let q = QuadratureConfig::default();
        assert!((xi_capital(&s, &q).unwrap().value - 1.0).abs() < 1e-12);
        assert!((xi_capital_sphere(&s, &q).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_resolution_reports_accuracy_error() {
        let q = QuadratureConfig {
            circle_nodes: 16,
            sphere_theta: 4,
            sphere_phi: 8,
            tol: 1e-5,
        };
        assert!(matches!(xi_capital(&zero_zero(), &q), Err(Error::Accuracy { .. })));
    }

    #[test]
    fn arity_checked() {
        let id = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(xi_bipartite(&id, 0.0, 0.0).is_err());
        let id = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(xi_capital_tri(&id, &QuadratureConfig::default()).is_err());
    }
}
