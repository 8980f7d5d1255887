//! Shared oracles for integration tests: a CHP tableau simulator, a
//! brute-force matching enumerator, and quadrature helpers.

#![allow(dead_code)]

pub mod tableau;

use badlands::circuit::{build_memory_circuit, Circuit};
use badlands::lattice::build_lattice;
use badlands::noise::homogeneous_profile;

pub fn homogeneous_circuit(d: u32, p: f64, rounds: u32) -> Circuit {
    let lat = build_lattice(d).unwrap();
    let prof = homogeneous_profile(&lat, p).unwrap();
    build_memory_circuit(&lat, &prof, rounds).unwrap()
}

/// Brute-force minimum matching weight over "pair up or go to boundary"
/// assignments, enumerated exhaustively on integer weights. `pair[i][j]`
/// and `bound[i]` are None when unreachable.
pub fn brute_force_min_weight(
    pair: &[Vec<Option<i64>>],
    bound: &[Option<i64>],
) -> Option<i64> {
    fn go(pair: &[Vec<Option<i64>>], bound: &[Option<i64>], used: &mut Vec<bool>) -> Option<i64> {
        let i = match used.iter().position(|&u| !u) {
            Some(i) => i,
            None => return Some(0),
        };
        used[i] = true;
        let mut best: Option<i64> = None;
        let mut consider = |cost: Option<i64>, used: &mut Vec<bool>| {
            if let Some(c) = cost {
                if let Some(rest) = go(pair, bound, used) {
                    let total = c + rest;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
            }
        };
        consider(bound[i], used);
        for j in i + 1..used.len() {
            if !used[j] {
                used[j] = true;
                consider(pair[i][j], used);
                used[j] = false;
            }
        }
        used[i] = false;
        best
    }
    go(pair, bound, &mut vec![false; bound.len()])
}

/// Mean of a normal distribution truncated to [0, 1], by Simpson quadrature.
/// Independent of the sampling path under test.
pub fn truncated_normal_mean(mu: f64, sigma: f64) -> f64 {
    let pdf = |x: f64| {
        let z = (x - mu) / sigma;
        (-0.5 * z * z).exp()
    };
    let steps = 200_001; // odd number of samples for Simpson's rule
    let h = 1.0 / (steps - 1) as f64;
    let mut mass = 0.0;
    let mut moment = 0.0;
    for i in 0..steps {
        let x = i as f64 * h;
        let w = if i == 0 || i == steps - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        mass += w * pdf(x);
        moment += w * x * pdf(x);
    }
    moment / mass
}
