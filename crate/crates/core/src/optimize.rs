//! Derivative-free search over the Bloch sphere and over scalar intervals.
//!
//! Sphere search: a coarse grid uniform in (cos θ, φ), followed by
//! Nelder–Mead refinement in (θ, φ) from the best few grid cells.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::Direction;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;
use crate::work::TripartiteWork;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub coarse_theta: usize,
    pub coarse_phi: usize,
    pub n_starts: usize,
    /// Simplex stops once the spread of objective values is below this and
    /// the spread of vertices is below its square root.
    pub simplex_tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Grid points for scalar maximization before golden-section refinement.
    pub scalar_grid: usize,
    /// Golden-section bracket width at termination.
    pub scalar_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_theta: 32,
            coarse_phi: 64,
            n_starts: 5,
            simplex_tol: 1e-12,
            max_iters: 2000,
            seed: 0,
            scalar_grid: 64,
            scalar_tol: 1e-6,
        }
    }
}

impl OptimizerConfig {
    /// Defaults for the twelve-angle Mermin search.
    pub fn mermin() -> Self {
        Self {
            n_starts: 20,
            max_iters: 20_000,
            simplex_tol: 1e-13,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.coarse_theta < 8 || self.coarse_phi < 8 {
            return Err(Error::Argument(format!(
                "coarse grid {}x{} below the 8x8 minimum",
                self.coarse_theta, self.coarse_phi
            )));
        }
        if [self.simplex_tol, self.scalar_tol].iter().any(|t| t.is_nan() || *t <= 0.0) {
            return Err(Error::Argument("tolerances must be positive".into()));
        }
        if self.n_starts == 0 || self.scalar_grid < 2 || self.max_iters == 0 {
            return Err(Error::Argument(
                "n_starts, scalar_grid and max_iters must be nonzero".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    /// Maps an objective value onto a quantity to minimize.
    fn score(self, v: f64) -> f64 {
        match self {
            Mode::Max => -v,
            Mode::Min => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereOptimum {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub mode: Mode,
    pub n_evaluations: usize,
    /// False when the best simplex ran out of iterations before converging.
    pub converged: bool,
}

impl SphereOptimum {
    pub fn direction(&self) -> Direction {
        Direction::new(self.theta, self.phi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead minimization with standard coefficients.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], steps: &[f64], tol: f64, max_iters: usize) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    let xtol = tol.sqrt();
    let mut converged = false;
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_spread = simplex[n].1 - simplex[0].1;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= tol && x_spread <= xtol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + 0.5 * (v - b))
                .collect();
            let v = eval(&x, &mut evals);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    SimplexResult {
        x,
        value,
        evaluations: evals,
        converged,
    }
}

/// Coarse grid cell centres, uniform in cos θ and φ.
pub fn coarse_grid(cfg: &OptimizerConfig) -> Vec<(f64, f64)> {
    let mut cells = Vec::with_capacity(cfg.coarse_theta * cfg.coarse_phi);
    for i in 0..cfg.coarse_theta {
        let c = 1.0 - (2.0 * i as f64 + 1.0) / cfg.coarse_theta as f64;
        let theta = c.acos();
        for k in 0..cfg.coarse_phi {
            cells.push((theta, TAU * (k as f64 + 0.5) / cfg.coarse_phi as f64));
        }
    }
    cells
}

/// Global max or min of `objective` over the sphere.
pub fn optimize_sphere<F>(objective: F, mode: Mode, cfg: &OptimizerConfig) -> Result<SphereOptimum>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    optimize_sphere_from(objective, mode, cfg, &[])
}

/// As [`optimize_sphere`], with extra simplex starts (e.g. a previous argmax).
pub fn optimize_sphere_from<F>(
    objective: F,
    mode: Mode,
    cfg: &OptimizerConfig,
    hints: &[Direction],
) -> Result<SphereOptimum>
where
    F: Fn(&Direction) -> f64 + Sync,
{
    cfg.validate()?;
    let grid = coarse_grid(cfg);
    let scored: Vec<f64> = grid
        .par_iter()
        .map(|&(t, p)| mode.score(objective(&Direction::new(t, p))))
        .collect();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| scored[a].total_cmp(&scored[b]).then(a.cmp(&b)));

    let mut starts: Vec<(f64, f64)> = order.iter().take(cfg.n_starts).map(|&i| grid[i]).collect();
    starts.extend(hints.iter().map(|d| (d.theta(), d.phi())));

    let steps = [
        0.5 * PI / cfg.coarse_theta as f64,
        0.5 * TAU / cfg.coarse_phi as f64,
    ];
    let refined: Vec<SimplexResult> = starts
        .par_iter()
        .map(|&(t, p)| {
            nelder_mead(
                |x| mode.score(objective(&Direction::new(x[0], x[1]))),
                &[t, p],
                &steps,
                cfg.simplex_tol,
                cfg.max_iters,
            )
        })
        .collect();

    let mut n_evaluations = grid.len();
    let mut best: Option<&SimplexResult> = None;
    for r in &refined {
        n_evaluations += r.evaluations;
        if best.is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    let dir = Direction::new(best.x[0], best.x[1]);
    let value = objective(&dir);
    Ok(SphereOptimum {
        value,
        theta: dir.theta(),
        phi: dir.phi(),
        mode,
        n_evaluations: n_evaluations + 1,
        converged: best.converged,
    })
}

/// Maximum of a scalar function on [lo, hi): grid scan, then golden-section
/// search on the bracket around the best grid point.
pub fn maximize_scalar<F>(objective: F, lo: f64, hi: f64, cfg: &OptimizerConfig) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = cfg.scalar_grid.max(2);
    let h = (hi - lo) / n as f64;
    let (mut best_k, mut best_v) = (0usize, f64::NEG_INFINITY);
    for k in 0..n {
        let v = objective(lo + h * k as f64);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let center = lo + h * best_k as f64;
    let mut a = (center - h).max(lo);
    let mut b = (center + h).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while b - a > cfg.scalar_tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = objective(x);
    if v >= best_v {
        (v, x)
    } else {
        (best_v, center)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum StateClass {
    SeparableConsistent,
    WConsistent,
    GhzConsistent,
}

impl std::fmt::Display for StateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StateClass::SeparableConsistent => "SEPARABLE-CONSISTENT",
            StateClass::WConsistent => "W-CONSISTENT",
            StateClass::GhzConsistent => "GHZ-CONSISTENT",
        })
    }
}

/// Reference extremes of the coupled-frame work over ẑ.
pub const GHZ_MAX_WORK: f64 = 1.0;
pub const GHZ_MIN_WORK: f64 = 0.1619;
pub const W_MAX_WORK: f64 = 7.0 / 9.0;
pub const W_MIN_WORK: f64 = 0.1696;
/// Separable states never exceed this.
pub const SEPARABLE_BOUND: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: StateClass,
    pub max: SphereOptimum,
    pub min: SphereOptimum,
}

/// Extremes of the coupled-frame work over ẑ.
pub fn work_range(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<(SphereOptimum, SphereOptimum)> {
    let ev = TripartiteWork::new(rho)?;
    let max = optimize_sphere(|d| ev.coupled(d), Mode::Max, cfg)?;
    let min = optimize_sphere(|d| ev.coupled(d), Mode::Min, cfg)?;
    Ok((max, min))
}

/// Decides which of the separable / W / GHZ hypotheses the work range fits,
/// assuming the state is one of the three.
pub fn classify_state(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<Classification> {
    let (max, min) = work_range(rho, cfg)?;
    let class = if max.value <= SEPARABLE_BOUND + 1e-6 {
        StateClass::SeparableConsistent
    } else {
        let mid_max = 0.5 * (GHZ_MAX_WORK + W_MAX_WORK);
        if (max.value - mid_max).abs() > 1e-3 {
            if max.value > mid_max {
                StateClass::GhzConsistent
            } else {
                StateClass::WConsistent
            }
        } else if min.value < 0.5 * (GHZ_MIN_WORK + W_MIN_WORK) {
            StateClass::GhzConsistent
        } else {
            StateClass::WConsistent
        }
    };
    Ok(Classification { class, max, min })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_rosenbrock() {
        let r = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &[0.1, 0.1],
            1e-14,
            10_000,
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn scalar_examples() {
        let cfg = OptimizerConfig::default();
        let (v, _) = maximize_scalar(|_| 0.25, 0.0, 1.0, &cfg);
        assert_eq!(v, 0.25);
        let (v, x) = maximize_scalar(f64::cos, 0.0, PI / 2.0, &cfg);
        assert!((v - 1.0).abs() < 1e-12);
        assert!(x.abs() <= cfg.scalar_tol);
        let (v, x) = maximize_scalar(|t| -(t - 0.7).powi(2), 0.0, 2.0, &cfg);
        assert!(v.abs() < 1e-12 && (x - 0.7).abs() <= cfg.scalar_tol);
    }

    #[test]
    fn sphere_finds_a_known_pole() {
        let target = Direction::new(1.0, 2.0);
        let cfg = OptimizerConfig {
            coarse_theta: 8,
            coarse_phi: 16,
            ..Default::default()
        };
        let opt = optimize_sphere(|d| d.dot(&target), Mode::Max, &cfg).unwrap();
        assert!((opt.value - 1.0).abs() < 1e-10);
        let opt = optimize_sphere(|d| d.dot(&target), Mode::Min, &cfg).unwrap();
        assert!((opt.value + 1.0).abs() < 1e-10);
        assert!(opt.direction().dot(&target) < -1.0 + 1e-9);
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            coarse_theta: 4,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            simplex_tol: 0.0,
            ..Default::default()
        };
        assert!(optimize_sphere(|_| 0.0, Mode::Max, &bad).is_err());
    }
}
