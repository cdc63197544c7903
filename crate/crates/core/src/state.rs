//! Pure and mixed states of one to three qubits.
//!
//! Basis index of |abc⟩ is 4a + 2b + c: site A is the most significant
//! tensor factor.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bloch::{CMatrix, Direction, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below `-PSD_TOL` are a hard invariant failure.
pub const PSD_TOL: f64 = 1e-10;

fn check_arity(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArity(format!(
            "{n} qubits (supported: 1 to 3)"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        let n = match len {
            2 => 1,
            4 => 2,
            8 => 3,
            _ => {
                return Err(Error::InvalidArity(format!(
                    "amplitude vector of length {len}"
                )))
            }
        };
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!(
                "squared norm {norm2} differs from 1"
            )));
        }
        Ok(Self {
            n_qubits: n,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// Same state times a global phase e^{iα}.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amplitudes: &self.amplitudes * C64::from_polar(1.0, alpha),
        }
    }
}

/// (|000⟩ + |111⟩)/√2
pub fn ghz_state() -> PureState {
    let mut a = vec![ZERO; 8];
    a[0] = C64::from(FRAC_1_SQRT_2);
    a[7] = C64::from(FRAC_1_SQRT_2);
    PureState::new(a).expect("GHZ amplitudes are normalized")
}

/// (|001⟩ + |010⟩ + |100⟩)/√3
pub fn w_state() -> PureState {
    let amp = C64::from(1.0 / 3f64.sqrt());
    let mut a = vec![ZERO; 8];
    a[1] = amp;
    a[2] = amp;
    a[4] = amp;
    PureState::new(a).expect("W amplitudes are normalized")
}

/// Tensor product of single-qubit states pointing along `dirs`.
pub fn product_state(dirs: &[Direction]) -> Result<PureState> {
    check_arity(dirs.len())?;
    let mut amps = vec![ONE];
    for d in dirs {
        let k = d.ket();
        amps = amps
            .iter()
            .flat_map(|a| [a * k[0], a * k[1]])
            .collect();
    }
    // renormalize away rounding in the half-angle products
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::new(amps.into_iter().map(|a| a / norm).collect())
}

/// The singlet (|01⟩ − |10⟩)/√2.
pub fn singlet_state() -> PureState {
    let h = C64::from(FRAC_1_SQRT_2);
    PureState::new(vec![ZERO, h, -h, ZERO]).expect("normalized")
}

/// Density operator of `n_qubits` qubits, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = Self::qubits_for_dim(matrix.nrows(), matrix.ncols())?;
        let herm = max_abs(&(&matrix - matrix.adjoint()));
        if herm > HERMITIAN_TOL {
            return Err(Error::Invariant(format!(
                "not Hermitian: max |M - M†| = {herm:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Invariant(format!("trace {tr} differs from 1")));
        }
        let rho = Self {
            n_qubits: n,
            matrix,
        };
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::Invariant(format!(
                "not positive semidefinite: eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    /// Hermitian-symmetrizes before validating; for matrices produced by
    /// arithmetic that may carry rounding-level asymmetry.
    pub(crate) fn from_computed(matrix: CMatrix) -> Result<Self> {
        let sym = (&matrix + matrix.adjoint()) * C64::from(0.5);
        Self::new(sym)
    }

    fn qubits_for_dim(rows: usize, cols: usize) -> Result<usize> {
        if rows != cols {
            return Err(Error::Shape(format!("{rows}x{cols} matrix is not square")));
        }
        match rows {
            2 => Ok(1),
            4 => Ok(2),
            8 => Ok(3),
            _ => Err(Error::InvalidArity(format!("{rows}x{rows} matrix"))),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let a = psi.amplitudes();
        let m = a * a.adjoint();
        Self {
            n_qubits: psi.n_qubits(),
            matrix: m,
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_arity(n_qubits)?;
        let d = 1usize << n_qubits;
        Ok(Self {
            n_qubits,
            matrix: CMatrix::identity(d, d) * C64::from(1.0 / d as f64),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Reduced state on the sites in `keep` (kept in ascending site order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(Error::Argument("keep set is empty".into()));
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::Argument(format!("duplicate sites in {keep:?}")));
        }
        if let Some(&s) = kept.iter().find(|&&s| s >= n) {
            return Err(Error::SiteOutOfRange { site: s, n });
        }
        if kept.len() == n {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..n).filter(|s| !kept.contains(s)).collect();
        let k = kept.len();
        let dk = 1usize << k;
        let dt = 1usize << traced.len();
        let bit = |site: usize| n - 1 - site;
        // full index from (kept bits, traced bits)
        let compose = |kb: usize, tb: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &s) in kept.iter().enumerate() {
                if (kb >> (k - 1 - pos)) & 1 == 1 {
                    idx |= 1 << bit(s);
                }
            }
            for (pos, &s) in traced.iter().enumerate() {
                if (tb >> (traced.len() - 1 - pos)) & 1 == 1 {
                    idx |= 1 << bit(s);
                }
            }
            idx
        };
        let mut out = CMatrix::zeros(dk, dk);
        for r in 0..dk {
            for c in 0..dk {
                let mut acc = ZERO;
                for t in 0..dt {
                    acc += self.matrix[(compose(r, t), compose(c, t))];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DensityMatrix {
            n_qubits: k,
            matrix: out,
        })
    }

    /// Tensor product ρ ⊗ σ.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        check_arity(self.n_qubits + other.n_qubits)?;
        Ok(DensityMatrix {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_density_matrix()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateFile::from(self)).expect("state serializes")
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        DensityMatrix::from_pure(psi)
    }
}

/// Shorthand for [`DensityMatrix::from_pure`].
pub fn dm_from_pure(psi: &PureState) -> DensityMatrix {
    DensityMatrix::from_pure(psi)
}

/// Convex combination Σ w_k ρ_k.
pub fn mix(components: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
    let first = components
        .first()
        .ok_or_else(|| Error::Argument("empty mixture".into()))?;
    let n = first.1.n_qubits();
    let mut total = 0.0;
    let mut acc = CMatrix::zeros(first.1.dim(), first.1.dim());
    for (w, rho) in components {
        if *w < 0.0 || !w.is_finite() {
            return Err(Error::Domain {
                value: *w,
                domain: "mixture weight >= 0",
            });
        }
        if rho.n_qubits() != n {
            return Err(Error::Shape(format!(
                "cannot mix {}-qubit and {n}-qubit states",
                rho.n_qubits()
            )));
        }
        total += w;
        acc += rho.matrix() * C64::from(*w);
    }
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(total));
    }
    DensityMatrix::from_computed(acc)
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComplexEntry {
    pub re: f64,
    pub im: f64,
}

/// On-disk state format: `{"n_qubits": n, "matrix": [[{"re": .., "im": ..}, ..], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub matrix: Vec<Vec<ComplexEntry>>,
}

impl StateFile {
    pub fn into_density_matrix(self) -> Result<DensityMatrix> {
        check_arity(self.n_qubits)?;
        let d = 1usize << self.n_qubits;
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(Error::Shape(format!(
                "n_qubits = {} requires a {d}x{d} matrix",
                self.n_qubits
            )));
        }
        let m = CMatrix::from_fn(d, d, |r, c| {
            let e = self.matrix[r][c];
            C64::new(e.re, e.im)
        });
        DensityMatrix::new(m)
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        StateFile {
            n_qubits: rho.n_qubits(),
            matrix: (0..d)
                .map(|r| {
                    (0..d)
                        .map(|c| {
                            let z = rho.matrix()[(r, c)];
                            ComplexEntry { re: z.re, im: z.im }
                        })
                        .collect()
                })
                .collect(),
        }
    }
}
