//! Helpers shared by the acceptance suite.

#![allow(dead_code)]

use badlands::circuit::{build_memory_circuit, detector_is_z_family, Circuit};
use badlands::lattice::build_lattice;
use badlands::noise::homogeneous_profile;

pub fn homogeneous_circuit(d: u32, p: f64, rounds: u32) -> Circuit {
    let lat = build_lattice(d).unwrap();
    let prof = homogeneous_profile(&lat, p).unwrap();
    build_memory_circuit(&lat, &prof, rounds).unwrap()
}

/// Restrict a full detector symptom to the Z-check family.
pub fn restrict_to_z(circuit: &Circuit, fired: &[u32]) -> Vec<u32> {
    let coords = circuit.detector_coords();
    fired
        .iter()
        .copied()
        .filter(|&d| detector_is_z_family(&coords[d as usize].unwrap()))
        .collect()
}

/// Exhaustive minimum over all pair-or-boundary assignments.
pub fn brute_force_min_weight(pair: &[Vec<Option<i64>>], bound: &[Option<i64>]) -> Option<i64> {
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

/// Two-proportion z statistic for "rate 1 exceeds rate 2".
pub fn one_sided_z(k1: u64, n1: u64, k2: u64, n2: u64) -> f64 {
    let p1 = k1 as f64 / n1 as f64;
    let p2 = k2 as f64 / n2 as f64;
    let pooled = (k1 + k2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    (p1 - p2) / se
}

/// |p1 - p2| in units of the pooled binomial sigma.
pub fn binomial_sigma_distance(k1: u64, n1: u64, k2: u64, n2: u64) -> f64 {
    one_sided_z(k1, n1, k2, n2).abs()
}
