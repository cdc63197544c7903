//! Extractable work from tripartite states.
//!
//! One party extracts work along u⃗ after learning the outcomes of the other
//! two, one of whom measured along ẑ and the other along u⃗. Work is
//! 1 − H(extractor | outcomes) in bits (kT ln 2 = 1).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::bloch::{cross, dot, Direction};
use crate::correlation::CorrelationTensor;
use crate::entropy::h2;
use crate::error::{Error, Result};
use crate::measure::BRANCH_CUTOFF;
use crate::optimize::{maximize_scalar, OptimizerConfig};
use crate::quadrature::{checked_sphere_average, sphere_average, QuadratureConfig, QuadratureEstimate};
use crate::state::DensityMatrix;

/// Party index: A = 0, B = 1, C = 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    A,
    B,
    C,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::A, Site::B, Site::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Site> {
        Site::ALL
            .get(i)
            .copied()
            .ok_or(Error::SiteOutOfRange { site: i, n: 3 })
    }
}

/// Right-handed orthonormal frame whose third axis is ẑ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementTriad {
    pub x_axis: Direction,
    pub y_axis: Direction,
    pub z_axis: Direction,
    pub frame_angle_phi: f64,
}

/// Frame vectors (x̂, ŷ) for axis `z` and frame angle `phi`.
///
/// x̂(0) is the global z-axis projected onto the plane normal to ẑ (global
/// x-axis when ẑ is within 1e-9 of a pole); x̂(φ) is x̂(0) turned by φ about ẑ.
pub fn frame_vectors(z: &[f64; 3], phi: f64) -> ([f64; 3], [f64; 3]) {
    let r = if z[2].abs() > 1.0 - 1e-9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = dot(&r, z);
    let mut x0 = [r[0] - d * z[0], r[1] - d * z[1], r[2] - d * z[2]];
    let norm = dot(&x0, &x0).sqrt();
    x0.iter_mut().for_each(|v| *v /= norm);
    let y0 = cross(z, &x0);
    let (s, c) = phi.sin_cos();
    let x = [
        c * x0[0] + s * y0[0],
        c * x0[1] + s * y0[1],
        c * x0[2] + s * y0[2],
    ];
    let y = cross(z, &x);
    (x, y)
}

pub fn build_triad(z: &Direction, phi: f64) -> MeasurementTriad {
    let (x, y) = frame_vectors(&z.vector(), phi);
    MeasurementTriad {
        x_axis: Direction::from_vector(x).expect("unit vector"),
        y_axis: Direction::from_vector(y).expect("unit vector"),
        z_axis: *z,
        frame_angle_phi: phi,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisWork {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AxisWork {
    pub fn mean(&self) -> f64 {
        (self.x + self.y + self.z) / 3.0
    }
}

/// Work along the three triad axes at the best frame angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkReport {
    #[serde(rename = "z")]
    pub z_direction: Direction,
    pub per_axis_work: AxisWork,
    pub w_phi: f64,
    pub w_max: f64,
    pub argmax_phi: f64,
}

/// Work evaluator for a fixed three-qubit state and fixed party roles.
#[derive(Debug, Clone)]
pub struct TripartiteWork {
    tensor: CorrelationTensor,
    extractor: Site,
    z_site: Site,
    u_site: Site,
}

impl TripartiteWork {
    /// Charlie extracts, Alice measures along ẑ, Bob along u⃗.
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        Self::with_roles(rho, Site::C, Site::A)
    }

    /// `extractor` extracts, `z_site` measures along ẑ and the remaining
    /// party along u⃗.
    pub fn with_roles(rho: &DensityMatrix, extractor: Site, z_site: Site) -> Result<Self> {
        if rho.n_qubits() != 3 {
            return Err(Error::InvalidArity(format!(
                "tripartite work needs 3 qubits, got {}",
                rho.n_qubits()
            )));
        }
        if extractor == z_site {
            return Err(Error::Argument("extractor cannot also measure along z".into()));
        }
        let u_site = Site::ALL
            .into_iter()
            .find(|s| *s != extractor && *s != z_site)
            .expect("three sites");
        Ok(Self {
            tensor: CorrelationTensor::new(rho),
            extractor,
            z_site,
            u_site,
        })
    }

    pub fn extractor(&self) -> Site {
        self.extractor
    }

    /// H(extractor(u) | z_site(z), u_site(u)) in bits.
    pub fn cond_entropy(&self, z: &[f64; 3], u: &[f64; 3]) -> f64 {
        let mut dirs = [[0.0; 3]; 3];
        dirs[self.extractor.index()] = *u;
        dirs[self.z_site.index()] = *z;
        dirs[self.u_site.index()] = *u;
        let p = self.tensor.probs3(&dirs[0], &dirs[1], &dirs[2]);
        let bit = |s: Site| 2 - s.index();
        let mut h = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let base = (i << bit(self.z_site)) | (j << bit(self.u_site));
                let p0 = p[base];
                let p1 = p[base | (1 << bit(self.extractor))];
                let pij = p0 + p1;
                if pij >= BRANCH_CUTOFF {
                    h += pij * h2(p0 / pij);
                }
            }
        }
        h
    }

    /// w_{z,u} = 1 − H, clamped to [0, 1].
    pub fn work(&self, z: &[f64; 3], u: &[f64; 3]) -> f64 {
        (1.0 - self.cond_entropy(z, u)).clamp(0.0, 1.0)
    }

    pub fn per_axis(&self, z: &Direction, phi: f64) -> AxisWork {
        let zv = z.vector();
        let (x, y) = frame_vectors(&zv, phi);
        AxisWork {
            x: self.work(&zv, &x),
            y: self.work(&zv, &y),
            z: self.work(&zv, &zv),
        }
    }

    /// Three-axis average W_φ.
    pub fn w_phi(&self, z: &Direction, phi: f64) -> f64 {
        self.per_axis(z, phi).mean()
    }

    /// W = max over the frame angle of W_φ. W_φ has period π/2 in φ, so
    /// the search runs over [0, π/2).
    pub fn work_w(&self, z: &Direction, cfg: &OptimizerConfig) -> WorkReport {
        let (_, argmax) = maximize_scalar(|phi| self.w_phi(z, phi), 0.0, FRAC_PI_2, cfg);
        let per_axis = self.per_axis(z, argmax);
        let w = per_axis.mean();
        WorkReport {
            z_direction: *z,
            per_axis_work: per_axis,
            w_phi: w,
            w_max: w,
            argmax_phi: argmax,
        }
    }

    /// W_φ with the frame angle tied to the azimuth of ẑ: the direction
    /// (θ, φ) fixes both the measurement axis and the frame. Extremes of
    /// this objective over the sphere are the reported min/max work values.
    pub fn coupled(&self, z: &Direction) -> f64 {
        self.w_phi(z, z.phi())
    }

    /// Average of w_{z,u} over u⃗ uniform on the sphere at a fixed rule.
    pub fn sphere_average(&self, z: &Direction, n_theta: usize, n_phi: usize) -> f64 {
        let zv = z.vector();
        sphere_average(|u| self.work(&zv, &u.vector()), n_theta, n_phi)
    }

    pub fn checked_sphere_average(&self, z: &Direction, quad: &QuadratureConfig) -> QuadratureEstimate {
        let zv = z.vector();
        checked_sphere_average(|u| self.work(&zv, &u.vector()), quad)
    }
}

fn require_three(rho: &DensityMatrix) -> Result<TripartiteWork> {
    TripartiteWork::new(rho)
}

/// H(C(u)|A(z), B(u)) in bits.
pub fn cond_entropy_tri(rho: &DensityMatrix, z: &Direction, u: &Direction) -> Result<f64> {
    Ok(require_three(rho)?.cond_entropy(&z.vector(), &u.vector()))
}

/// w_{z,u}(ρ) = 1 − H(C(u)|A(z), B(u)).
pub fn work_zu(rho: &DensityMatrix, z: &Direction, u: &Direction) -> Result<f64> {
    Ok(require_three(rho)?.work(&z.vector(), &u.vector()))
}

pub fn w_phi(rho: &DensityMatrix, z: &Direction, phi: f64) -> Result<f64> {
    Ok(require_three(rho)?.w_phi(z, phi))
}

#[allow(non_snake_case)]
pub fn work_W(rho: &DensityMatrix, z: &Direction, cfg: &OptimizerConfig) -> Result<WorkReport> {
    cfg.validate()?;
    Ok(require_three(rho)?.work_w(z, cfg))
}

/// W_φ(ρ, ẑ(θ, φ)) with the frame angle equal to the azimuth φ.
pub fn coupled_frame_work(rho: &DensityMatrix, theta: f64, phi: f64) -> Result<f64> {
    Ok(require_three(rho)?.coupled(&Direction::new(theta, phi)))
}

/// Sphere average of w_{z,u} over u⃗, checked at doubled resolution.
#[allow(non_snake_case)]
pub fn work_W_sphere(rho: &DensityMatrix, z: &Direction, quad: &QuadratureConfig) -> Result<QuadratureEstimate> {
    quad.validate()?;
    require_three(rho)?.checked_sphere_average(z, quad).into_result()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteWork {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SiteWork {
    pub fn get(&self, s: Site) -> f64 {
        match s {
            Site::A => self.a,
            Site::B => self.b,
            Site::C => self.c,
        }
    }
}

/// W for each party acting as extractor. The other two parties may take
/// either measurement role; the better assignment is reported.
pub fn site_work_profile(rho: &DensityMatrix, z: &Direction, cfg: &OptimizerConfig) -> Result<SiteWork> {
    cfg.validate()?;
    let mut out = [0.0; 3];
    for s in Site::ALL {
        let mut best = f64::NEG_INFINITY;
        for z_site in Site::ALL.into_iter().filter(|t| *t != s) {
            let w = TripartiteWork::with_roles(rho, s, z_site)?.work_w(z, cfg).w_max;
            best = best.max(w);
        }
        out[s.index()] = best;
    }
    Ok(SiteWork {
        a: out[0],
        b: out[1],
        c: out[2],
    })
}
