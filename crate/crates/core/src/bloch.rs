//! Bloch-sphere directions, single-qubit projectors and site embedding.
//!
//! Convention: |0⟩ sits at θ = 0, a direction (θ, φ) corresponds to the
//! ket cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩, and the projector for outcome `s`
//! is (I ± n·σ)/2 with `+` for outcome 0.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// Dense complex matrix used for operators on up to three qubits.
pub type CMatrix = DMatrix<C64>;
pub type Mat2 = Matrix2<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "Angles", from = "Angles")]
pub struct Direction {
    theta: f64,
    phi: f64,
    vector: [f64; 3],
}

/// Serialized form of a [`Direction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl From<Angles> for Direction {
    fn from(a: Angles) -> Self {
        Direction::new(a.theta, a.phi)
    }
}

impl From<Direction> for Angles {
    fn from(d: Direction) -> Self {
        Angles {
            theta: d.theta,
            phi: d.phi,
        }
    }
}

impl Direction {
    /// Builds a direction from polar angles. Angles are canonicalized to
    /// θ ∈ [0, π] and φ ∈ [0, 2π); at the poles φ is reported as 0.
    pub fn new(theta: f64, phi: f64) -> Self {
        let (theta, phi) = canonical_angles(theta, phi);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            theta,
            phi,
            vector: [st * cp, st * sp, ct],
        }
    }

    /// Direction of an arbitrary nonzero 3-vector.
    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm.is_nan() || norm <= 1e-300 || !norm.is_finite() {
            return Err(Error::Argument(format!("cannot normalize vector {v:?}")));
        }
        let z = (v[2] / norm).clamp(-1.0, 1.0);
        Ok(Self::new(z.acos(), v[1].atan2(v[0])))
    }

    pub fn x_axis() -> Self {
        Self::new(PI / 2.0, 0.0)
    }

    pub fn y_axis() -> Self {
        Self::new(PI / 2.0, PI / 2.0)
    }

    pub fn z_axis() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn vector(&self) -> [f64; 3] {
        self.vector
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        dot(&self.vector, &other.vector)
    }

    /// Single-qubit ket cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn ket(&self) -> [C64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [C64::new(c, 0.0), C64::from_polar(s, self.phi)]
    }

    /// The antipodal direction.
    pub fn flipped(&self) -> Self {
        Self::new(PI - self.theta, self.phi + PI)
    }
}

/// Maps arbitrary (θ, φ) onto θ ∈ [0, π], φ ∈ [0, 2π) describing the same point.
pub fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let mut theta = theta.rem_euclid(TAU);
    let mut phi = phi;
    if theta > PI {
        theta = TAU - theta;
        phi += PI;
    }
    let mut phi = phi.rem_euclid(TAU);
    if phi >= TAU {
        phi = 0.0;
    }
    if theta == 0.0 || theta == PI {
        phi = 0.0;
    }
    (theta, phi)
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// The Pauli matrices (σx, σy, σz).
pub fn pauli() -> [Mat2; 3] {
    let i = C64::new(0.0, 1.0);
    [
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, -i, i, ZERO),
        Mat2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// n·σ for a real 3-vector `n`.
pub fn pauli_along(n: &[f64; 3]) -> Mat2 {
    let [sx, sy, sz] = pauli();
    sx * C64::from(n[0]) + sy * C64::from(n[1]) + sz * C64::from(n[2])
}

/// Rank-one projector onto outcome `outcome` of a measurement along `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    direction: Direction,
    outcome: u8,
    matrix: Mat2,
}

impl Projector {
    pub fn new(direction: Direction, outcome: u8) -> Result<Self> {
        let sign = match outcome {
            0 => 1.0,
            1 => -1.0,
            other => {
                return Err(Error::Argument(format!("outcome must be 0 or 1, got {other}")))
            }
        };
        let matrix =
            (Mat2::identity() + pauli_along(&direction.vector()) * C64::from(sign)) * C64::from(0.5);
        Ok(Self {
            direction,
            outcome,
            matrix,
        })
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn outcome(&self) -> u8 {
        self.outcome
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }
}

/// Shorthand for [`Projector::new`].
pub fn projector(direction: Direction, outcome: u8) -> Result<Projector> {
    Projector::new(direction, outcome)
}

/// Kronecker product of 2×2 factors, site 0 most significant.
pub(crate) fn kron_all(factors: &[Mat2]) -> CMatrix {
    let mut out = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        let fd = CMatrix::from_fn(2, 2, |r, c| f[(r, c)]);
        out = out.kronecker(&fd);
    }
    out
}

/// Places a single-qubit operator on `site` of an `n`-qubit register with
/// identities elsewhere. Site ordering is A = 0, B = 1, C = 2.
pub fn embed(op: &Mat2, site: usize, n: usize) -> Result<CMatrix> {
    if n == 0 || n > 3 {
        return Err(Error::InvalidArity(format!("{n} qubits")));
    }
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let factors: Vec<Mat2> = (0..n)
        .map(|s| if s == site { *op } else { Mat2::identity() })
        .collect();
    Ok(kron_all(&factors))
}
