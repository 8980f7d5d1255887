//! Detector error model extraction and matching-graph construction.
//!
//! Every elementary fault of a circuit is propagated to its detector
//! symptom, restricted to the Z-check detector family (the family that
//! carries information about the tracked Z observable), decomposed into
//! graph-like pieces when it touches more than two detectors, and merged
//! with same-symptom mechanisms. Mechanisms then become the weighted edges
//! of the matching graph handed to the decoder.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::circuit::{detector_is_z_family, Circuit};
use crate::error::{Error, Result};
use crate::sampler::propagate_faults;

/// Probability cap applied before edge weighting; `ln((1-p)/p)` must stay
/// positive for the matcher.
pub const WEIGHT_PROBABILITY_CAP: f64 = 0.5 - 1e-9;

/// One elementary error mechanism: fires one or two Z-family detectors and
/// possibly flips the observable.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMechanism {
    /// Combined firing probability of all faults with this symptom.
    pub p: f64,
    /// Fired Z-family detector ids (global detector numbering), sorted;
    /// length 1 or 2.
    pub detectors: Vec<u32>,
    /// Whether firing flips the logical observable.
    pub observable: bool,
}

/// A circuit's full detector error model.
#[derive(Clone, Debug)]
pub struct DetectorErrorModel {
    pub mechanisms: Vec<ErrorMechanism>,
    /// All Z-family detector ids of the circuit, sorted (isolated ones too).
    pub z_detectors: Vec<u32>,
    pub num_detectors: u32,
}

/// XOR-combined probability of two independent mechanisms: the chance that
/// exactly one of them fires.
pub fn combine_probabilities(p1: f64, p2: f64) -> f64 {
    p1 * (1.0 - p2) + p2 * (1.0 - p1)
}

/// Extract the detector error model of a circuit.
pub fn extract_dem(circuit: &Circuit) -> Result<DetectorErrorModel> {
    let coords = circuit.detector_coords();
    let mut z_family = vec![false; coords.len()];
    let mut z_detectors = Vec::new();
    for (id, coord) in coords.iter().enumerate() {
        let coord = coord.ok_or_else(|| {
            Error::InvalidConfig(format!("detector {id} has no coordinate tag"))
        })?;
        if detector_is_z_family(&coord) {
            z_family[id] = true;
            z_detectors.push(id as u32);
        }
    }

    let faults = circuit.fault_locations();
    let symptoms = propagate_faults(circuit, &faults)?;

    // Keyed accumulation: (restricted detectors, observable) -> probabilities.
    let mut graphlike: HashMap<(Vec<u32>, bool), Vec<f64>> = HashMap::new();
    let mut composites: Vec<(Vec<u32>, bool, f64)> = Vec::new();
    for (fault, (fired, obs_flip)) in faults.iter().zip(symptoms.iter()) {
        let mut p = fault.probability(circuit);
        if p <= 0.0 {
            continue;
        }
        if p >= 1.0 {
            log::warn!(
                "clamping deterministic noise component (p = {p}) at instruction {}",
                fault.instruction
            );
            p = 1.0 - 1e-9;
        }
        let restricted: Vec<u32> = fired
            .iter()
            .copied()
            .filter(|&d| z_family[d as usize])
            .collect();
        if restricted.is_empty() {
            if *obs_flip {
                return Err(Error::UndetectableLogicalFault {
                    instruction: fault.instruction,
                    component: fault.component,
                });
            }
            continue;
        }
        if restricted.len() <= 2 {
            graphlike
                .entry((restricted, *obs_flip))
                .or_default()
                .push(p);
        } else {
            composites.push((restricted, *obs_flip, p));
        }
    }

    // Decompose composite symptoms into existing graph-like pieces, then
    // fold the parts into the same accumulation map.
    let keys: HashMap<Vec<u32>, Vec<bool>> = {
        let mut m: HashMap<Vec<u32>, Vec<bool>> = HashMap::new();
        for (dets, obs) in graphlike.keys() {
            let e = m.entry(dets.clone()).or_default();
            if !e.contains(obs) {
                e.push(*obs);
            }
        }
        m.values_mut().for_each(|v| v.sort_unstable());
        m
    };
    for (dets, obs, p) in composites {
        let parts = decompose(&dets, obs, &keys).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "symptom {dets:?} (observable {obs}) cannot be decomposed into graph-like mechanisms"
            ))
        })?;
        for (part_dets, part_obs) in parts {
            graphlike.entry((part_dets, part_obs)).or_default().push(p);
        }
    }

    // Deterministic, order-independent merge: sort the probability list of
    // every symptom before folding.
    let mut mechanisms: Vec<ErrorMechanism> = graphlike
        .into_iter()
        .map(|((detectors, observable), mut ps)| {
            ps.sort_by(f64::total_cmp);
            let p = ps.into_iter().fold(0.0, combine_probabilities);
            ErrorMechanism {
                p,
                detectors,
                observable,
            }
        })
        .filter(|m| m.p > 0.0)
        .collect();
    mechanisms.sort_by(|a, b| {
        a.detectors
            .cmp(&b.detectors)
            .then(a.observable.cmp(&b.observable))
    });
    Ok(DetectorErrorModel {
        mechanisms,
        z_detectors,
        num_detectors: circuit.num_detectors(),
    })
}

/// Split a >2-detector symptom into blocks of existing graph-like symptoms
/// whose observable masks XOR to `obs`. Pair decompositions are preferred;
/// candidate partitions are tried in a fixed lexicographic order.
fn decompose(
    dets: &[u32],
    obs: bool,
    keys: &HashMap<Vec<u32>, Vec<bool>>,
) -> Option<Vec<(Vec<u32>, bool)>> {
    let partitions: Vec<Vec<Vec<u32>>> = match dets.len() {
        3 => {
            let d = dets;
            vec![
                vec![vec![d[0], d[1]], vec![d[2]]],
                vec![vec![d[0], d[2]], vec![d[1]]],
                vec![vec![d[1], d[2]], vec![d[0]]],
                vec![vec![d[0]], vec![d[1]], vec![d[2]]],
            ]
        }
        4 => {
            let d = dets;
            let mut parts = vec![
                vec![vec![d[0], d[1]], vec![d[2], d[3]]],
                vec![vec![d[0], d[2]], vec![d[1], d[3]]],
                vec![vec![d[0], d[3]], vec![d[1], d[2]]],
            ];
            for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                let pair = vec![dets[i], dets[j]];
                let singles: Vec<Vec<u32>> = (0..4)
                    .filter(|k| *k != i && *k != j)
                    .map(|k| vec![dets[k]])
                    .collect();
                let mut blocks = vec![pair];
                blocks.extend(singles);
                parts.push(blocks);
            }
            parts.push((0..4).map(|k| vec![dets[k]]).collect());
            parts
        }
        _ => return None,
    };
    'partition: for blocks in partitions {
        let mut masks: Vec<Vec<bool>> = Vec::with_capacity(blocks.len());
        for block in &blocks {
            match keys.get(block) {
                Some(available) => masks.push(available.clone()),
                None => continue 'partition,
            }
        }
        // Pick one mask per block so the XOR equals `obs`; blocks offering
        // both masks give a free parity bit.
        let forced: bool = masks
            .iter()
            .filter(|m| m.len() == 1)
            .fold(false, |acc, m| acc ^ m[0]);
        let flexible: Vec<usize> = (0..masks.len()).filter(|&i| masks[i].len() == 2).collect();
        let need = forced != obs;
        if need && flexible.is_empty() {
            continue 'partition;
        }
        let mut chosen: Vec<(Vec<u32>, bool)> = Vec::with_capacity(blocks.len());
        let mut fix_done = false;
        for (i, block) in blocks.into_iter().enumerate() {
            let mask = if masks[i].len() == 1 {
                masks[i][0]
            } else if need && !fix_done && flexible.first() == Some(&i) {
                fix_done = true;
                true
            } else {
                false
            };
            chosen.push((block, mask));
        }
        return Some(chosen);
    }
    None
}

impl DetectorErrorModel {
    /// Text form, one `error(p) D.. [L0]` line per mechanism.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.mechanisms {
            let _ = write!(out, "error({})", m.p);
            for d in &m.detectors {
                let _ = write!(out, " D{d}");
            }
            if m.observable {
                out.push_str(" L0");
            }
            out.push('\n');
        }
        out
    }
}

/// Weighted decoding graph over Z-family detectors plus a virtual boundary.
#[derive(Clone, Debug)]
pub struct MatchingGraph {
    /// Global detector ids of the nodes, sorted ascending.
    node_ids: Vec<u32>,
    node_of: HashMap<u32, usize>,
    /// Internal adjacency: `(neighbor node, weight, observable mask)`.
    adj: Vec<Vec<(usize, f64, bool)>>,
    /// Boundary edge per node, if any: `(weight, observable mask)`.
    boundary: Vec<Option<(f64, bool)>>,
    num_detectors: u32,
    num_edges: usize,
    /// Lazily computed all-pairs shortest paths, shared across shots.
    paths: std::sync::OnceLock<crate::matcher::PathTables>,
}

/// Turn mechanisms into the weighted matching graph. Parallel edges (same
/// endpoints and mask) were already merged at the mechanism level; a
/// same-endpoint mask conflict keeps the more probable edge.
pub fn build_matching_graph(dem: &DetectorErrorModel) -> MatchingGraph {
    let node_ids = dem.z_detectors.clone();
    let node_of: HashMap<u32, usize> = node_ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, i))
        .collect();
    let n = node_ids.len();

    // endpoint key -> (p, mask); None endpoint = boundary.
    let mut best: HashMap<(usize, Option<usize>), (f64, bool)> = HashMap::new();
    for m in &dem.mechanisms {
        let (u, v) = match m.detectors.len() {
            1 => (node_of[&m.detectors[0]], None),
            2 => {
                let a = node_of[&m.detectors[0]];
                let b = node_of[&m.detectors[1]];
                (a.min(b), Some(a.max(b)))
            }
            len => unreachable!("mechanism with {len} detectors"),
        };
        match best.get_mut(&(u, v)) {
            Some((p, mask)) => {
                if *mask == m.observable {
                    *p = combine_probabilities(*p, m.p);
                } else if m.p > *p {
                    log::warn!(
                        "conflicting observable masks on edge ({u}, {v:?}); keeping the more probable mechanism"
                    );
                    *p = m.p;
                    *mask = m.observable;
                }
            }
            None => {
                best.insert((u, v), (m.p, m.observable));
            }
        }
    }

    let mut adj: Vec<Vec<(usize, f64, bool)>> = vec![Vec::new(); n];
    let mut boundary: Vec<Option<(f64, bool)>> = vec![None; n];
    let mut keys: Vec<_> = best.keys().copied().collect();
    keys.sort_unstable();
    let mut num_edges = 0;
    let mut clamped: usize = 0;
    let mut clamped_max = 0.0f64;
    for key in keys {
        let (mut p, mask) = best[&key];
        if p >= WEIGHT_PROBABILITY_CAP {
            clamped += 1;
            clamped_max = clamped_max.max(p);
            p = WEIGHT_PROBABILITY_CAP;
        }
        let w = ((1.0 - p) / p).ln();
        num_edges += 1;
        match key {
            (u, Some(v)) => {
                adj[u].push((v, w, mask));
                adj[v].push((u, w, mask));
            }
            (u, None) => boundary[u] = Some((w, mask)),
        }
    }
    if clamped > 0 {
        log::warn!(
            "clamped {clamped} edge probabilities >= 1/2 (max {clamped_max:.4}) to keep matching weights positive"
        );
    }
    MatchingGraph {
        node_ids,
        node_of,
        adj,
        boundary,
        num_detectors: dem.num_detectors,
        num_edges,
        paths: std::sync::OnceLock::new(),
    }
}

impl MatchingGraph {
    pub fn node_ids(&self) -> &[u32] {
        &self.node_ids
    }

    pub fn num_nodes(&self) -> usize {
        self.node_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_detectors(&self) -> u32 {
        self.num_detectors
    }

    pub(crate) fn node_index(&self, detector: u32) -> Option<usize> {
        self.node_of.get(&detector).copied()
    }

    pub(crate) fn neighbors(&self, node: usize) -> &[(usize, f64, bool)] {
        &self.adj[node]
    }

    pub(crate) fn boundary_edge(&self, node: usize) -> Option<(f64, bool)> {
        self.boundary[node]
    }

    /// Shortest-path tables, computed on first use.
    pub(crate) fn path_tables(&self) -> &crate::matcher::PathTables {
        self.paths
            .get_or_init(|| crate::matcher::compute_path_tables(self))
    }

    /// Edge weight between two nodes, if present (testing hook).
    pub fn edge_weight(&self, det_u: u32, det_v: u32) -> Option<f64> {
        let u = self.node_index(det_u)?;
        let v = self.node_index(det_v)?;
        self.adj[u]
            .iter()
            .find(|(n, _, _)| *n == v)
            .map(|(_, w, _)| *w)
    }

    pub fn boundary_weight(&self, det: u32) -> Option<f64> {
        self.boundary_edge(self.node_index(det)?).map(|(w, _)| w)
    }
}
