//! Joint measurement probabilities and post-measurement states.

use crate::bloch::{kron_all, Mat2, Projector, C64};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Branches with probability below this are treated as absent (p·H → 0).
pub const BRANCH_CUTOFF: f64 = 1e-14;

fn measurement_operator(n: usize, assignments: &[(usize, &Projector)]) -> Result<crate::bloch::CMatrix> {
    let mut factors = vec![Mat2::identity(); n];
    let mut seen = [false; 3];
    for (site, proj) in assignments {
        if *site >= n {
            return Err(Error::SiteOutOfRange { site: *site, n });
        }
        if seen[*site] {
            return Err(Error::Argument(format!("site {site} measured twice")));
        }
        seen[*site] = true;
        factors[*site] = *proj.matrix();
    }
    Ok(kron_all(&factors))
}

/// Tr(ρ Π_k P_k) with each projector acting on its own site, clamped to [0, 1].
pub fn joint_prob(rho: &DensityMatrix, assignments: &[(usize, &Projector)]) -> Result<f64> {
    let op = measurement_operator(rho.n_qubits(), assignments)?;
    let p = (rho.matrix() * op).trace().re;
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Numerical(format!("joint probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Projects ρ onto the given outcomes, renormalizes and traces out the
/// measured sites. Returns the branch probability and the state of the
/// remaining sites.
pub fn conditional_state(
    rho: &DensityMatrix,
    assignments: &[(usize, &Projector)],
) -> Result<(f64, DensityMatrix)> {
    let n = rho.n_qubits();
    let op = measurement_operator(n, assignments)?;
    if assignments.len() >= n {
        return Err(Error::Argument("no site left unmeasured".into()));
    }
    let projected = &op * rho.matrix() * &op;
    let p = projected.trace().re;
    if p < BRANCH_CUTOFF {
        return Err(Error::ZeroProbability(p));
    }
    let keep: Vec<usize> = (0..n)
        .filter(|s| assignments.iter().all(|(site, _)| site != s))
        .collect();
    let normalized = DensityMatrix::from_computed(projected * C64::from(1.0 / p))?;
    Ok((p.min(1.0), normalized.partial_trace(&keep)?))
}
