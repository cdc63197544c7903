//! Shot-level simulation of the work-extraction protocols.
//!
//! Tripartite: the ẑ-party and the u⃗-party measure and announce; the
//! extractor then measures along u⃗. Bipartite: pairs come in groups of two;
//! in the first pair Alice measures and Bob extracts, in the second the
//! roles are exchanged.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartite::xi_directions;
use crate::bloch::{projector, Direction};
use crate::correlation::CorrelationTensor;
use crate::entropy::EntropyEstimator;
use crate::error::{Error, Result};
use crate::measure::{conditional_state, joint_prob, BRANCH_CUTOFF};
use crate::state::DensityMatrix;
use crate::work::{Site, TripartiteWork};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub shots: u64,
    pub seed: u64,
    pub estimator: EntropyEstimator,
    /// Sample measurement by measurement from post-measurement states
    /// instead of from the joint outcome distribution.
    pub sequential_collapse: bool,
    /// Party extracting work in the tripartite protocol.
    pub extractor: Site,
    /// Party measuring along ẑ in the tripartite protocol.
    pub z_site: Site,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            shots: 100_000,
            seed: 0,
            estimator: EntropyEstimator::PlugIn,
            sequential_collapse: false,
            extractor: Site::C,
            z_site: Site::A,
        }
    }
}

/// Outcomes of one shot. For the tripartite protocol `i`, `j`, `k` are the
/// ẑ-party, u⃗-party and extractor outcomes; for the bipartite protocol `i`
/// is the measuring party and `j` the extracting party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub shot: u64,
    pub i: u8,
    pub j: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolEstimate {
    pub empirical_work: f64,
    pub analytic_work: f64,
    pub abs_error: f64,
    pub shots: u64,
    /// Counts of the announced outcome pair, keyed "ij".
    pub branch_counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub estimate: ProtocolEstimate,
    pub transcript: Vec<ShotRecord>,
}

impl Simulation {
    /// Writes the transcript as JSON lines.
    pub fn write_transcript<W: Write>(&self, mut out: W) -> Result<()> {
        for r in &self.transcript {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Index of the branch selected by `u` under the cumulative distribution.
fn inverse_cdf(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if target < acc {
            return k;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Sampling plan for three outcomes (ẑ-party, u⃗-party, extractor).
enum Sampler {
    Joint([f64; 8]),
    Sequential {
        first: [f64; 2],
        second: [[f64; 2]; 2],
        third: [[[f64; 2]; 2]; 2],
    },
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> [u8; 3] {
        match self {
            Sampler::Joint(p) => {
                let b = inverse_cdf(p, rng.gen());
                [(b >> 2) as u8 & 1, (b >> 1) as u8 & 1, b as u8 & 1]
            }
            Sampler::Sequential { first, second, third } => {
                let i = inverse_cdf(first, rng.gen());
                let j = inverse_cdf(&second[i], rng.gen());
                let k = inverse_cdf(&third[i][j], rng.gen());
                [i as u8, j as u8, k as u8]
            }
        }
    }
}

fn single_outcome_probs(rho: &DensityMatrix, d: Direction) -> Result<[f64; 2]> {
    let p0 = joint_prob(rho, &[(0, &projector(d, 0)?)])?;
    Ok([p0, 1.0 - p0])
}

/// Builds the collapse tree: measure `order[0]`, then `order[1]`, then
/// `order[2]`, each along its own direction.
fn sequential_sampler(rho: &DensityMatrix, order: [(usize, Direction); 3]) -> Result<Sampler> {
    let [(s0, d0), (s1, d1), (_, d2)] = order;
    let p_first = {
        let q = joint_prob(rho, &[(s0, &projector(d0, 0)?)])?;
        [q, 1.0 - q]
    };
    let mut second = [[0.5; 2]; 2];
    let mut third = [[[0.5; 2]; 2]; 2];
    for i in 0..2 {
        if p_first[i] < BRANCH_CUTOFF {
            continue;
        }
        let pi = projector(d0, i as u8)?;
        let (_, rest) = conditional_state(rho, &[(s0, &pi)])?;
        // remaining sites keep their relative order
        let local = |s: usize| if s > s0 { s - 1 } else { s };
        let q = joint_prob(&rest, &[(local(s1), &projector(d1, 0)?)])?;
        second[i] = [q, 1.0 - q];
        for j in 0..2 {
            if second[i][j] < BRANCH_CUTOFF {
                continue;
            }
            let pj = projector(d1, j as u8)?;
            let (_, last) = conditional_state(&rest, &[(local(s1), &pj)])?;
            third[i][j] = single_outcome_probs(&last, d2)?;
        }
    }
    Ok(Sampler::Sequential {
        first: p_first,
        second,
        third,
    })
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    Ok(())
}

fn draw_all(sampler: &Sampler, cfg: &SimulationConfig) -> Vec<[u8; 3]> {
    (0..cfg.shots)
        .into_par_iter()
        .map(|s| sampler.draw(&mut shot_rng(cfg.seed, s)))
        .collect()
}

fn branch_key(i: u8, j: u8) -> String {
    format!("{i}{j}")
}

/// 1 − Σ_ij f̂_ij Ĥ(k | ij) from counts indexed [i][j][k].
fn empirical_work(counts: &[[[u64; 2]; 2]; 2], total: u64, est: EntropyEstimator) -> f64 {
    let mut h = 0.0;
    for row in counts {
        for c in row {
            let n = c[0] + c[1];
            if n > 0 {
                h += n as f64 / total as f64 * est.binary(c[0], c[1]).min(1.0);
            }
        }
    }
    1.0 - h
}

/// Simulates the three-party protocol with the ẑ-party measuring along `z`
/// and the other two parties along `u`.
pub fn simulate_tripartite(
    rho: &DensityMatrix,
    z: &Direction,
    u: &Direction,
    cfg: &SimulationConfig,
) -> Result<Simulation> {
    check_shots(cfg.shots)?;
    let ev = TripartiteWork::with_roles(rho, cfg.extractor, cfg.z_site)?;
    let u_site = Site::ALL
        .into_iter()
        .find(|s| *s != cfg.extractor && *s != cfg.z_site)
        .expect("three sites");
    let roles = [cfg.z_site, u_site, cfg.extractor];

    let sampler = if cfg.sequential_collapse {
        sequential_sampler(
            rho,
            [(roles[0].index(), *z), (roles[1].index(), *u), (roles[2].index(), *u)],
        )?
    } else {
        let mut dirs = [[0.0; 3]; 3];
        dirs[roles[0].index()] = z.vector();
        dirs[roles[1].index()] = u.vector();
        dirs[roles[2].index()] = u.vector();
        let by_site = CorrelationTensor::new(rho).probs3(&dirs[0], &dirs[1], &dirs[2]);
        // reorder from site order (A, B, C) to role order
        let mut by_role = [0.0; 8];
        for (b, &p) in by_site.iter().enumerate() {
            let bit = |s: Site| (b >> (2 - s.index())) & 1;
            by_role[(bit(roles[0]) << 2) | (bit(roles[1]) << 1) | bit(roles[2])] += p.max(0.0);
        }
        Sampler::Joint(by_role)
    };

    let outcomes = draw_all(&sampler, cfg);
    let mut counts = [[[0u64; 2]; 2]; 2];
    for o in &outcomes {
        counts[o[0] as usize][o[1] as usize][o[2] as usize] += 1;
    }
    let empirical = empirical_work(&counts, cfg.shots, cfg.estimator);
    let analytic = ev.work(&z.vector(), &u.vector());
    let mut branch_counts = BTreeMap::new();
    for i in 0..2u8 {
        for j in 0..2u8 {
            let c = counts[i as usize][j as usize];
            branch_counts.insert(branch_key(i, j), c[0] + c[1]);
        }
    }
    let transcript = outcomes
        .iter()
        .enumerate()
        .map(|(s, o)| ShotRecord {
            shot: s as u64,
            i: o[0],
            j: o[1],
            k: Some(o[2]),
        })
        .collect();
    Ok(Simulation {
        estimate: ProtocolEstimate {
            empirical_work: empirical,
            analytic_work: analytic,
            abs_error: (empirical - analytic).abs(),
            shots: cfg.shots,
            branch_counts,
        },
        transcript,
    })
}

/// Simulates the two-party protocol with Alice along `a` and Bob along `b`.
/// Even shots have Alice measuring and Bob extracting, odd shots the reverse.
pub fn simulate_bipartite(
    rho: &DensityMatrix,
    a: &Direction,
    b: &Direction,
    cfg: &SimulationConfig,
) -> Result<Simulation> {
    check_shots(cfg.shots)?;
    if !cfg.shots.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "role exchange needs an even number of shots, got {}",
            cfg.shots
        )));
    }
    let analytic = xi_directions(rho, a, b)?;
    let probs = if cfg.sequential_collapse {
        // two measurements: treat the pair as sites (0, 1) and pad with a
        // deterministic third outcome
        let mut p = [0.0; 4];
        let pa = single_outcome_probs(&rho.partial_trace(&[0])?, *a)?;
        for i in 0..2 {
            if pa[i] < BRANCH_CUTOFF {
                continue;
            }
            let (_, rest) = conditional_state(rho, &[(0, &projector(*a, i as u8)?)])?;
            let pb = single_outcome_probs(&rest, *b)?;
            p[2 * i] = pa[i] * pb[0];
            p[2 * i + 1] = pa[i] * pb[1];
        }
        p
    } else {
        CorrelationTensor::new(rho).probs2(&a.vector(), &b.vector())
    };
    let sampler = Sampler::Joint([
        probs[0].max(0.0),
        0.0,
        probs[1].max(0.0),
        0.0,
        probs[2].max(0.0),
        0.0,
        probs[3].max(0.0),
        0.0,
    ]);
    let outcomes = draw_all(&sampler, cfg);

    // counts[role][measurer][extractor]
    let mut counts = [[[0u64; 2]; 2]; 2];
    let mut transcript = Vec::with_capacity(outcomes.len());
    for (s, o) in outcomes.iter().enumerate() {
        let (alice, bob) = (o[0], o[1]);
        let role = s % 2;
        let (m, e) = if role == 0 { (alice, bob) } else { (bob, alice) };
        counts[role][m as usize][e as usize] += 1;
        transcript.push(ShotRecord {
            shot: s as u64,
            i: m,
            j: e,
            k: None,
        });
    }
    let half = cfg.shots / 2;
    let work_of = |c: &[[u64; 2]; 2]| {
        let mut h = 0.0;
        for row in c {
            let n = row[0] + row[1];
            if n > 0 {
                h += n as f64 / half as f64 * cfg.estimator.binary(row[0], row[1]).min(1.0);
            }
        }
        1.0 - h
    };
    let empirical = 0.5 * (work_of(&counts[0]) + work_of(&counts[1]));
    let mut branch_counts = BTreeMap::new();
    for i in 0..2u8 {
        for j in 0..2u8 {
            let n = counts[0][i as usize][j as usize] + counts[1][j as usize][i as usize];
            branch_counts.insert(branch_key(i, j), n);
        }
    }
    Ok(Simulation {
        estimate: ProtocolEstimate {
            empirical_work: empirical,
            analytic_work: analytic,
            abs_error: (empirical - analytic).abs(),
            shots: cfg.shots,
            branch_counts,
        },
        transcript,
    })
}
