use triwork::bloch::Direction;
use triwork::correlation::CorrelationTensor;
use triwork::entropy::EntropyEstimator;
use triwork::protocol::{simulate_tripartite, SimulationConfig};
use triwork::state::{dm_from_pure, ghz_state, w_state, DensityMatrix};

fn cfg(shots: u64, seed: u64) -> SimulationConfig {
    SimulationConfig {
        shots,
        seed,
        ..SimulationConfig::default()
    }
}

#[test]
fn branch_frequencies_within_five_sigma() {
    let w = dm_from_pure(&w_state());
    let z = Direction::new(0.6, 0.4);
    let u = Direction::new(2.0, 1.0);
    let p = CorrelationTensor::new(&w).probs3(&z.vector(), &u.vector(), &u.vector());
    let shots = 20_000;
    let mut good = 0;
    for seed in 0..100 {
        let est = simulate_tripartite(&w, &z, &u, &cfg(shots, seed)).unwrap().estimate;
        let ok = (0..4).all(|ij| {
            let pij = p[2 * ij] + p[2 * ij + 1];
            let f = est.branch_counts[&format!("{}{}", ij >> 1, ij & 1)] as f64 / shots as f64;
            (f - pij).abs() <= 5.0 * (pij * (1.0 - pij) / shots as f64).sqrt() + 1e-12
        });
        good += ok as usize;
    }
    assert!(good >= 99, "{good}/100");
}

#[test]
fn error_shrinks_with_more_shots_at_the_median() {
    let g = dm_from_pure(&ghz_state());
    let z = Direction::new(1.0, 0.2);
    let u = Direction::new(0.7, 2.0);
    let median = |shots: u64| {
        let mut e: Vec<f64> = (0..20)
            .map(|s| simulate_tripartite(&g, &z, &u, &cfg(shots, s)).unwrap().estimate.abs_error)
            .collect();
        e.sort_by(f64::total_cmp);
        0.5 * (e[9] + e[10])
    };
    assert!(median(8000) <= median(2000));
}

#[test]
fn mixed_state_bias_is_small_and_positive() {
    let mixed = DensityMatrix::maximally_mixed(3).unwrap();
    let z = Direction::z_axis();
    let shots = 100_000u64;
    for seed in 0..5 {
        let est = simulate_tripartite(&mixed, &z, &z, &cfg(shots, seed)).unwrap().estimate;
        assert!(est.empirical_work >= 0.0);
        assert!(est.empirical_work <= 0.01);
        assert_eq!(est.analytic_work, 0.0);
    }
}

#[test]
fn miller_madow_reduces_plug_in_bias() {
    let mixed = DensityMatrix::maximally_mixed(3).unwrap();
    let z = Direction::z_axis();
    let mut plug = 0.0;
    let mut mm = 0.0;
    for seed in 0..20 {
        plug += simulate_tripartite(&mixed, &z, &z, &cfg(2000, seed)).unwrap().estimate.abs_error;
        let c = SimulationConfig {
            estimator: EntropyEstimator::MillerMadow,
            ..cfg(2000, seed)
        };
        mm += simulate_tripartite(&mixed, &z, &z, &c).unwrap().estimate.abs_error;
    }
    assert!(mm < plug, "{mm} vs {plug}");
}

#[test]
fn json_is_reproducible() {
    let g = dm_from_pure(&ghz_state());
    let x = Direction::x_axis();
    let a = serde_json::to_string(&simulate_tripartite(&g, &x, &x, &cfg(10_000, 42)).unwrap().estimate).unwrap();
    let b = serde_json::to_string(&simulate_tripartite(&g, &x, &x, &cfg(10_000, 42)).unwrap().estimate).unwrap();
    assert_eq!(a, b);
}
