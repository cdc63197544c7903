//! Pauli correlation tensor of a two- or three-qubit state.
//!
//! ρ = 2^{-n} Σ T_{αβ..} σ_α ⊗ σ_β ⊗ .., with σ_0 = I. Outcome
//! probabilities of projective measurements along Bloch directions are
//! multilinear in the direction vectors, so they can be read off T
//! without forming any operator. This is the evaluation path used by the
//! work functionals and optimizers.
#![allow(clippy::needless_range_loop)]


use crate::bloch::{kron_all, pauli, Mat2};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    n_qubits: usize,
    coeffs: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(rho: &DensityMatrix) -> Self {
        let n = rho.n_qubits();
        let [sx, sy, sz] = pauli();
        let basis = [Mat2::identity(), sx, sy, sz];
        let len = 1usize << (2 * n);
        let coeffs = (0..len)
            .map(|flat| {
                let factors: Vec<Mat2> = (0..n)
                    .map(|s| basis[(flat >> (2 * (n - 1 - s))) & 3])
                    .collect();
                let op = kron_all(&factors);
                // Tr(ρ O) for Hermitian O is real
                rho.matrix()
                    .iter()
                    .zip(op.transpose().iter())
                    .map(|(a, b)| (a * b).re)
                    .sum()
            })
            .collect();
        Self { n_qubits: n, coeffs }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// T_{αβγ} for a three-qubit tensor (α, β, γ ∈ 0..4).
    pub fn get3(&self, a: usize, b: usize, c: usize) -> f64 {
        self.coeffs[a * 16 + b * 4 + c]
    }

    /// ⟨(a·σ) ⊗ (b·σ) ⊗ (c·σ)⟩ for a three-qubit state.
    pub fn expect3(&self, a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let ab = a[i] * b[j];
                let base = (i + 1) * 16 + (j + 1) * 4 + 1;
                acc += ab * (c[0] * self.coeffs[base] + c[1] * self.coeffs[base + 1] + c[2] * self.coeffs[base + 2]);
            }
        }
        acc
    }

    /// Joint outcome probabilities for site directions (A, B, C); entry
    /// `4i + 2j + k` is P(A = i, B = j, C = k), outcome 0 along +n.
    pub fn probs3(&self, a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> [f64; 8] {
        debug_assert_eq!(self.n_qubits, 3);
        // contract slot A with e0 and with a
        let mut m1 = [[0.0; 16]; 2];
        for rest in 0..16 {
            m1[0][rest] = self.coeffs[rest];
            m1[1][rest] = a[0] * self.coeffs[16 + rest]
                + a[1] * self.coeffs[32 + rest]
                + a[2] * self.coeffs[48 + rest];
        }
        let mut m2 = [[[0.0; 4]; 2]; 2];
        for x in 0..2 {
            for g in 0..4 {
                m2[x][0][g] = m1[x][g];
                m2[x][1][g] = b[0] * m1[x][4 + g] + b[1] * m1[x][8 + g] + b[2] * m1[x][12 + g];
            }
        }
        let mut m = [[[0.0; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let v = &m2[x][y];
                m[x][y][0] = v[0];
                m[x][y][1] = c[0] * v[1] + c[1] * v[2] + c[2] * v[3];
            }
        }
        let mut out = [0.0; 8];
        for i in 0..2 {
            let si = if i == 0 { 1.0 } else { -1.0 };
            for j in 0..2 {
                let sj = if j == 0 { 1.0 } else { -1.0 };
                for k in 0..2 {
                    let sk = if k == 0 { 1.0 } else { -1.0 };
                    let p = m[0][0][0]
                        + sk * m[0][0][1]
                        + sj * (m[0][1][0] + sk * m[0][1][1])
                        + si * (m[1][0][0] + sk * m[1][0][1] + sj * (m[1][1][0] + sk * m[1][1][1]));
                    out[4 * i + 2 * j + k] = (p / 8.0).max(0.0);
                }
            }
        }
        out
    }

    /// Joint outcome probabilities for a two-qubit state; entry `2i + j`.
    pub fn probs2(&self, a: &[f64; 3], b: &[f64; 3]) -> [f64; 4] {
        debug_assert_eq!(self.n_qubits, 2);
        let t = &self.coeffs;
        let ta = |beta: usize| a[0] * t[4 + beta] + a[1] * t[8 + beta] + a[2] * t[12 + beta];
        let m00 = t[0];
        let m01 = b[0] * t[1] + b[1] * t[2] + b[2] * t[3];
        let m10 = ta(0);
        let m11 = b[0] * ta(1) + b[1] * ta(2) + b[2] * ta(3);
        let mut out = [0.0; 4];
        for i in 0..2 {
            let si = if i == 0 { 1.0 } else { -1.0 };
            for j in 0..2 {
                let sj = if j == 0 { 1.0 } else { -1.0 };
                out[2 * i + j] = ((m00 + sj * m01 + si * (m10 + sj * m11)) / 4.0).max(0.0);
            }
        }
        out
    }
}

/// Builds the tensor, rejecting single-qubit states.
pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    match rho.n_qubits() {
        2 | 3 => Ok(CorrelationTensor::new(rho)),
        n => Err(Error::InvalidArity(format!(
            "correlation tensor needs 2 or 3 qubits, got {n}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{projector, Direction};
    use crate::measure::joint_prob;
    use crate::state::{dm_from_pure, ghz_state, w_state};

    #[test]
    fn probs3_match_dense_traces() {
        for rho in [dm_from_pure(&ghz_state()), dm_from_pure(&w_state())] {
            let t = CorrelationTensor::new(&rho);
            let dirs = [
                Direction::new(0.3, 1.2),
                Direction::new(2.2, 4.0),
                Direction::new(1.4, 0.1),
            ];
            let p = t.probs3(&dirs[0].vector(), &dirs[1].vector(), &dirs[2].vector());
            for idx in 0..8 {
                let pa = projector(dirs[0], (idx >> 2) as u8 & 1).unwrap();
                let pb = projector(dirs[1], (idx >> 1) as u8 & 1).unwrap();
                let pc = projector(dirs[2], idx as u8 & 1).unwrap();
                let dense = joint_prob(&rho, &[(0, &pa), (1, &pb), (2, &pc)]).unwrap();
                assert!((p[idx] - dense).abs() < 1e-13, "{idx}: {} vs {dense}", p[idx]);
            }
        }
    }

    #[test]
    fn ghz_xxx_correlator() {
        let t = CorrelationTensor::new(&dm_from_pure(&ghz_state()));
        let x = [1.0, 0.0, 0.0];
        let y = [0.0, 1.0, 0.0];
        assert!((t.expect3(&x, &x, &x) - 1.0).abs() < 1e-15);
        assert!((t.expect3(&x, &y, &y) + 1.0).abs() < 1e-15);
        assert!((t.get3(0, 0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_qubit_rejected() {
        let rho = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(correlation_tensor(&rho).is_err());
    }
}
