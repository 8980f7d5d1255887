//! Desk-scale sweep behavior: the small case-1 grid, heterogeneous draw
//! scatter, and summary serialization.

use badlands::experiment::{
    compute_bads, run_sweep, NoiseAxis, PointNoise, SweepConfig, SweepSummary, POOLED_DRAW,
};

#[test]
fn small_case1_grid_shows_suppression_at_low_p() {
    let config = SweepConfig {
        distances: vec![3, 5],
        noise: NoiseAxis::Homogeneous {
            ps: vec![0.001, 0.003, 0.01],
        },
        defects: vec![],
        rounds: 3,
        shots: 100_000,
        epsilon_thr: 0.0057,
        seed: 21,
    };
    let points = run_sweep(&config).unwrap();
    assert_eq!(points.len(), 6);
    assert!(points.iter().all(|p| p.ci_lo <= p.eps_round && p.eps_round <= p.ci_hi));
    let eps = |d: u32, p: f64| {
        points
            .iter()
            .find(|q| q.d == d && q.noise_value() == p)
            .unwrap()
    };
    // Below threshold the larger code wins, with CI separation.
    let (d3, d5) = (eps(3, 0.001), eps(5, 0.001));
    assert!(
        d5.ci_hi < d3.ci_lo,
        "no suppression at p=0.001: d=3 {:?} vs d=5 {:?}",
        (d3.ci_lo, d3.ci_hi),
        (d5.ci_lo, d5.ci_hi)
    );
}

#[test]
fn heterogeneous_draws_scatter() {
    let config = SweepConfig {
        distances: vec![3],
        noise: NoiseAxis::Heterogeneous {
            p_mus: vec![0.004],
            p_sigmas: vec![0.006],
            draws: 10,
        },
        defects: vec![],
        rounds: 3,
        shots: 20_000,
        epsilon_thr: 0.0057,
        seed: 33,
    };
    let points = run_sweep(&config).unwrap();
    assert_eq!(points.len(), 11); // 10 draws + pooled
    let draws: Vec<u64> = points
        .iter()
        .filter(|p| p.draw() != POOLED_DRAW)
        .map(|p| p.errors)
        .collect();
    assert_eq!(draws.len(), 10);
    // Fresh profile per draw: the per-draw error counts spread beyond what
    // a single shared profile would show (all-equal counts would be
    // astronomically unlikely here, and the draw-to-draw noise is the
    // point of the repetition).
    let min = draws.iter().min().unwrap();
    let max = draws.iter().max().unwrap();
    assert!(max > min, "all 10 draws produced identical error counts");
    for p in &points {
        if let PointNoise::Heterogeneous { p_mu, p_sigma, .. } = p.noise {
            assert_eq!((p_mu, p_sigma), (0.004, 0.006));
        }
    }
}

#[test]
fn summary_json_is_deterministic() {
    let config = SweepConfig {
        distances: vec![3],
        noise: NoiseAxis::Homogeneous {
            ps: vec![0.002, 0.02],
        },
        defects: vec![],
        rounds: 2,
        shots: 50_000,
        epsilon_thr: 0.0057,
        seed: 3,
    };
    let points = run_sweep(&config).unwrap();
    let summary = SweepSummary {
        epsilon_thr: 0.0057,
        boundaries: compute_bads(&points, 0.0057).unwrap(),
    };
    let a = summary.to_json();
    let again = SweepSummary {
        epsilon_thr: 0.0057,
        boundaries: compute_bads(&run_sweep(&config).unwrap(), 0.0057).unwrap(),
    };
    assert_eq!(a, again.to_json());
    assert!(a.contains("\"epsilon_thr\": 0.0057"));
}
