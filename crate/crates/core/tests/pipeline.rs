//! End-to-end checks of the extract → graph → match pipeline: fault
//! distance, single- and double-fault decoding, matching optimality against
//! brute-force enumeration, and batch determinism.

mod common;

use badlands::circuit::detector_is_z_family;
use badlands::dem::{build_matching_graph, extract_dem};
use badlands::matcher::{decode, decode_batch, matching_weight, Syndrome};
use badlands::sampler::{propagate_faults, sample};
use common::{brute_force_min_weight, homogeneous_circuit};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Restrict a full symptom to Z-family detector ids.
fn restrict(circuit: &badlands::Circuit, fired: &[u32]) -> Vec<u32> {
    let coords = circuit.detector_coords();
    fired
        .iter()
        .copied()
        .filter(|&d| detector_is_z_family(&coords[d as usize].unwrap()))
        .collect()
}

#[test]
fn every_single_fault_is_detected_and_corrected_at_d3() {
    let circuit = homogeneous_circuit(3, 0.001, 3);
    let faults = circuit.fault_locations();
    let symptoms = propagate_faults(&circuit, &faults).unwrap();
    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    for (fault, (fired, flips_obs)) in faults.iter().zip(symptoms.iter()) {
        assert!(
            !fired.is_empty() || !flips_obs,
            "undetected observable flip from {fault:?}"
        );
        let syndrome = Syndrome::new(restrict(&circuit, fired));
        let predicted = decode(&graph, &syndrome).unwrap();
        assert_eq!(predicted, *flips_obs, "misdecoded single fault {fault:?}");
    }
}

#[test]
fn some_two_fault_combination_defeats_matching_at_d3() {
    // d = 3 corrects only single faults; exhaustively search fault pairs for
    // one that flips the observable without being decodable.
    let circuit = homogeneous_circuit(3, 0.001, 3);
    let faults = circuit.fault_locations();
    let symptoms = propagate_faults(&circuit, &faults).unwrap();
    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    let restricted: Vec<(Vec<u32>, bool)> = symptoms
        .iter()
        .map(|(fired, obs)| (restrict(&circuit, fired), *obs))
        .collect();
    let mut found = false;
    'outer: for i in 0..restricted.len() {
        // Pairs on the same data column defeat d=3 fastest; full scan is
        // still cheap enough at this size.
        for j in i + 1..restricted.len() {
            let mut dets: Vec<u32> = restricted[i]
                .0
                .iter()
                .chain(restricted[j].0.iter())
                .copied()
                .collect();
            dets.sort_unstable();
            let mut xor = Vec::new();
            let mut k = 0;
            while k < dets.len() {
                if k + 1 < dets.len() && dets[k] == dets[k + 1] {
                    k += 2;
                } else {
                    xor.push(dets[k]);
                    k += 1;
                }
            }
            let truth = restricted[i].1 ^ restricted[j].1;
            let predicted = decode(&graph, &Syndrome::new(xor)).unwrap();
            if predicted != truth {
                found = true;
                break 'outer;
            }
        }
    }
    assert!(found, "d = 3 unexpectedly corrected every fault pair");
}

#[test]
fn random_fault_pairs_are_corrected_at_d5() {
    let circuit = homogeneous_circuit(5, 0.001, 3);
    let faults = circuit.fault_locations();
    let symptoms = propagate_faults(&circuit, &faults).unwrap();
    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    let restricted: Vec<(Vec<u32>, bool)> = symptoms
        .iter()
        .map(|(fired, obs)| (restrict(&circuit, fired), *obs))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10_000 {
        let i = rng.gen_range(0..restricted.len());
        let j = rng.gen_range(0..restricted.len());
        if i == j {
            continue;
        }
        let mut dets: Vec<u32> = restricted[i]
            .0
            .iter()
            .chain(restricted[j].0.iter())
            .copied()
            .collect();
        dets.sort_unstable();
        let mut xor = Vec::new();
        let mut k = 0;
        while k < dets.len() {
            if k + 1 < dets.len() && dets[k] == dets[k + 1] {
                k += 2;
            } else {
                xor.push(dets[k]);
                k += 1;
            }
        }
        let truth = restricted[i].1 ^ restricted[j].1;
        let predicted = decode(&graph, &Syndrome::new(xor)).unwrap();
        assert_eq!(predicted, truth, "pair ({i}, {j}) misdecoded at d=5");
    }
}

#[test]
fn matching_weight_equals_brute_force_on_random_syndromes() {
    let circuit = homogeneous_circuit(3, 0.002, 3);
    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    let nodes: Vec<u32> = graph.node_ids().to_vec();
    let scale = (1u64 << 26) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for trial in 0..200 {
        let k = rng.gen_range(1..=8usize.min(nodes.len()));
        let fired: Vec<u32> = nodes.choose_multiple(&mut rng, k).copied().collect();
        let syndrome = Syndrome::new(fired.clone());
        let got = matching_weight(&graph, &syndrome).unwrap();

        // Independent enumeration over all pair-or-boundary assignments on
        // the same integer path weights.
        let idx: Vec<u32> = syndrome.fired.clone();
        let pairw: Vec<Vec<Option<i64>>> = idx
            .iter()
            .map(|&u| {
                idx.iter()
                    .map(|&v| {
                        if u == v {
                            None
                        } else {
                            path_weight(&graph, u, v).map(|w| (w * scale).round() as i64)
                        }
                    })
                    .collect()
            })
            .collect();
        let boundw: Vec<Option<i64>> = idx
            .iter()
            .map(|&u| boundary_path_weight(&graph, u).map(|w| (w * scale).round() as i64))
            .collect();
        let want = brute_force_min_weight(&pairw, &boundw).unwrap();
        assert_eq!(got, want, "trial {trial}: syndrome {:?}", syndrome.fired);
    }
}

/// Dijkstra reimplemented locally so the oracle does not share the decoder's
/// path tables.
fn path_weight(graph: &badlands::MatchingGraph, u: u32, v: u32) -> Option<f64> {
    let ids = graph.node_ids();
    let dist = local_dijkstra(graph, u);
    let vi = ids.iter().position(|&id| id == v).unwrap();
    dist[vi].is_finite().then_some(dist[vi])
}

fn boundary_path_weight(graph: &badlands::MatchingGraph, u: u32) -> Option<f64> {
    let ids = graph.node_ids();
    let dist = local_dijkstra(graph, u);
    let mut best = f64::INFINITY;
    for (i, &id) in ids.iter().enumerate() {
        if let Some(bw) = graph.boundary_weight(id) {
            best = best.min(dist[i] + bw);
        }
    }
    best.is_finite().then_some(best)
}

fn local_dijkstra(graph: &badlands::MatchingGraph, src: u32) -> Vec<f64> {
    let ids = graph.node_ids();
    let n = ids.len();
    let src_i = ids.iter().position(|&id| id == src).unwrap();
    let mut dist = vec![f64::INFINITY; n];
    dist[src_i] = 0.0;
    let mut done = vec![false; n];
    for _ in 0..n {
        let mut best = None;
        for i in 0..n {
            if !done[i] && dist[i].is_finite()
                && best.is_none_or(|b: usize| dist[i] < dist[b]) {
                    best = Some(i);
                }
        }
        let Some(u) = best else { break };
        done[u] = true;
        for (j, &vid) in ids.iter().enumerate() {
            if let Some(w) = graph.edge_weight(ids[u], vid) {
                if dist[u] + w < dist[j] {
                    dist[j] = dist[u] + w;
                }
            }
        }
    }
    dist
}

#[test]
fn zero_noise_batch_decodes_cleanly() {
    let circuit = homogeneous_circuit(3, 0.0, 3);
    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    let samples = sample(&circuit, 5_000, 3).unwrap();
    let (errors, shots) = decode_batch(&graph, &samples).unwrap();
    assert_eq!((errors, shots), (0, 5_000));
}

#[test]
fn sampling_is_thread_count_independent() {
    let circuit = homogeneous_circuit(3, 0.01, 3);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| sample(&circuit, 10_000, 5).unwrap());
    let b = many.install(|| sample(&circuit, 10_000, 5).unwrap());
    assert_eq!(a.detectors_to_b8(), b.detectors_to_b8());
    assert_eq!(a.observables_to_b8(), b.observables_to_b8());

    let graph = build_matching_graph(&extract_dem(&circuit).unwrap());
    let ea = one.install(|| decode_batch(&graph, &a).unwrap());
    let eb = many.install(|| decode_batch(&graph, &b).unwrap());
    assert_eq!(ea, eb);
}

#[test]
fn every_mechanism_symptom_arises_from_some_fault() {
    let circuit = homogeneous_circuit(3, 0.003, 2);
    let dem = extract_dem(&circuit).unwrap();
    let faults = circuit.fault_locations();
    let symptoms = propagate_faults(&circuit, &faults).unwrap();
    let seen: std::collections::HashSet<(Vec<u32>, bool)> = symptoms
        .iter()
        .map(|(fired, obs)| (restrict(&circuit, fired), *obs))
        .collect();
    for m in &dem.mechanisms {
        assert!(
            seen.contains(&(m.detectors.clone(), m.observable)),
            "mechanism {m:?} does not correspond to any elementary fault"
        );
    }
}
