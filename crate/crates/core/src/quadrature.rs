//! Uniform averages over a great circle and over the Bloch sphere.
//!
//! Every rule is evaluated in parallel over nodes and reduced in node
//! order, so results do not depend on the worker count.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::Direction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Trapezoid nodes on a great circle.
    pub circle_nodes: usize,
    /// Gauss–Legendre nodes in cos θ.
    pub sphere_theta: usize,
    /// Uniform nodes in φ.
    pub sphere_phi: usize,
    /// Maximum allowed difference between base and doubled resolution.
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            circle_nodes: 720,
            sphere_theta: 64,
            sphere_phi: 128,
            tol: 1e-5,
        }
    }
}

impl QuadratureConfig {
    /// The same rule with every resolution doubled.
    pub fn doubled(&self) -> Self {
        Self {
            circle_nodes: 2 * self.circle_nodes,
            sphere_theta: 2 * self.sphere_theta,
            sphere_phi: 2 * self.sphere_phi,
            tol: self.tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.circle_nodes < 4 || self.sphere_theta < 2 || self.sphere_phi < 4 {
            return Err(Error::Argument(format!("quadrature resolution too small: {self:?}")));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Argument("quadrature tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A quadrature value together with its resolution check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    /// Value at doubled resolution.
    pub value: f64,
    /// Value at base resolution.
    pub coarse: f64,
    pub abs_diff: f64,
    pub tol: f64,
}

impl QuadratureEstimate {
    pub fn new(coarse: f64, fine: f64, tol: f64) -> Self {
        Self {
            value: fine,
            coarse,
            abs_diff: (fine - coarse).abs(),
            tol,
        }
    }

    pub fn converged(&self) -> bool {
        self.abs_diff <= self.tol
    }

    pub fn into_result(self) -> Result<Self> {
        if self.converged() {
            Ok(self)
        } else {
            Err(Error::Accuracy {
                coarse: self.coarse,
                fine: self.value,
                tol: self.tol,
            })
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Orthonormal pair spanning the plane perpendicular to `normal`.
pub fn circle_basis(normal: &Direction) -> ([f64; 3], [f64; 3]) {
    let n = normal.vector();
    let r = if n[2].abs() > 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let d = crate::bloch::dot(&r, &n);
    let mut e1 = [r[0] - d * n[0], r[1] - d * n[1], r[2] - d * n[2]];
    let norm = crate::bloch::dot(&e1, &e1).sqrt();
    e1.iter_mut().for_each(|v| *v /= norm);
    let e2 = crate::bloch::cross(&n, &e1);
    (e1, e2)
}

/// Trapezoid average of `f` over the great circle perpendicular to `normal`.
pub fn circle_average<F>(f: F, normal: &Direction, nodes: usize) -> f64
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let (e1, e2) = circle_basis(normal);
    let values: Vec<f64> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let t = TAU * k as f64 / nodes as f64;
            let (s, c) = t.sin_cos();
            let v = [
                c * e1[0] + s * e2[0],
                c * e1[1] + s * e2[1],
                c * e1[2] + s * e2[2],
            ];
            f(&Direction::from_vector(v).expect("unit vector"))
        })
        .collect();
    values.iter().sum::<f64>() / nodes as f64
}

/// Area-uniform average over the sphere: Gauss–Legendre in cos θ times a
/// uniform rule in φ.
pub fn sphere_average<F>(f: F, n_theta: usize, n_phi: usize) -> f64
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let (nodes, weights) = gauss_legendre(n_theta);
    let rows: Vec<f64> = nodes
        .par_iter()
        .zip(weights.par_iter())
        .map(|(&c, &w)| {
            let theta = c.clamp(-1.0, 1.0).acos();
            let row: f64 = (0..n_phi)
                .map(|k| f(&Direction::new(theta, TAU * (k as f64 + 0.5) / n_phi as f64)))
                .sum();
            w * row / n_phi as f64
        })
        .collect();
    rows.iter().sum::<f64>() / 2.0
}

/// Circle average at base and doubled resolution.
pub fn checked_circle_average<F>(f: F, normal: &Direction, cfg: &QuadratureConfig) -> QuadratureEstimate
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let coarse = circle_average(&f, normal, cfg.circle_nodes);
    let fine = circle_average(&f, normal, 2 * cfg.circle_nodes);
    QuadratureEstimate::new(coarse, fine, cfg.tol)
}

/// Sphere average at base and doubled resolution.
pub fn checked_sphere_average<F>(f: F, cfg: &QuadratureConfig) -> QuadratureEstimate
where
    F: Fn(&Direction) -> f64 + Sync,
{
    let coarse = sphere_average(&f, cfg.sphere_theta, cfg.sphere_phi);
    let fine = sphere_average(&f, 2 * cfg.sphere_theta, 2 * cfg.sphere_phi);
    QuadratureEstimate::new(coarse, fine, cfg.tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact up to degree 15
        for deg in 0..16 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "degree {deg}");
        }
    }

    #[test]
    fn sphere_average_of_low_harmonics() {
        let avg = sphere_average(|d| d.vector()[2].powi(2), 8, 16);
        assert!((avg - 1.0 / 3.0).abs() < 1e-14);
        let avg = sphere_average(|d| d.vector()[0] * d.vector()[1], 8, 16);
        assert!(avg.abs() < 1e-14);
        let avg = sphere_average(|_| 1.0, 4, 8);
        assert!((avg - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circle_average_of_squared_coordinate() {
        // on a great circle through the poles, ⟨z²⟩ = 1/2
        let normal = Direction::y_axis();
        let avg = circle_average(|d| d.vector()[2].powi(2), &normal, 64);
        assert!((avg - 0.5).abs() < 1e-14);
        let (e1, e2) = circle_basis(&Direction::new(0.4, 2.0));
        assert!(crate::bloch::dot(&e1, &e2).abs() < 1e-15);
        assert!(crate::bloch::dot(&e1, &Direction::new(0.4, 2.0).vector()).abs() < 1e-15);
    }

    #[test]
    fn estimate_flags_disagreement() {
        let e = QuadratureEstimate::new(1.0, 1.1, 1e-5);
        assert!(!e.converged());
        assert!(matches!(e.into_result(), Err(Error::Accuracy { .. })));
    }
}
