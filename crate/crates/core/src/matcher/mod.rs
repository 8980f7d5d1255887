//! Minimum-weight perfect matching decoder.
//!
//! Fired Z-family detectors are matched pairwise or to the virtual boundary
//! along minimum-weight paths of the matching graph; the predicted
//! observable flip is the XOR of the observable masks along all matched
//! paths. Pairwise path weights come from all-pairs Dijkstra tables that
//! are computed once per graph and shared across shots.

pub mod blossom;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::dem::MatchingGraph;
use crate::error::{Error, Result};
use crate::sampler::{DetectionSample, LANES};

/// Fixed-point scale for converting path weights to matcher integers.
const WEIGHT_SCALE: f64 = (1u64 << 26) as f64;

/// The set of fired Z-family detectors for one shot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Syndrome {
    pub fired: Vec<u32>,
}

impl Syndrome {
    pub fn new(mut fired: Vec<u32>) -> Syndrome {
        fired.sort_unstable();
        fired.dedup();
        Syndrome { fired }
    }
}

/// All-pairs shortest paths among graph nodes plus per-node boundary paths.
#[derive(Clone, Debug)]
pub struct PathTables {
    n: usize,
    dist: Vec<f64>,
    mask: Vec<bool>,
    boundary_dist: Vec<f64>,
    boundary_mask: Vec<bool>,
}

impl PathTables {
    #[inline]
    fn pair(&self, u: usize, v: usize) -> (f64, bool) {
        (self.dist[u * self.n + v], self.mask[u * self.n + v])
    }

    #[inline]
    fn boundary(&self, u: usize) -> (f64, bool) {
        (self.boundary_dist[u], self.boundary_mask[u])
    }
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Inverted so BinaryHeap pops the smallest distance; ties break
        // toward the lowest node id for determinism.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compute the path tables for a graph (used through the graph's cache).
pub fn compute_path_tables(graph: &MatchingGraph) -> PathTables {
    let n = graph.num_nodes();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut mask = vec![false; n * n];
    let rows: Vec<(Vec<f64>, Vec<bool>)> = (0..n)
        .into_par_iter()
        .map(|src| dijkstra(graph, src))
        .collect();
    for (src, (drow, mrow)) in rows.into_iter().enumerate() {
        dist[src * n..(src + 1) * n].copy_from_slice(&drow);
        mask[src * n..(src + 1) * n].copy_from_slice(&mrow);
    }
    // Boundary path from u: shortest real path to any node v carrying a
    // boundary edge, plus that edge.
    let mut boundary_dist = vec![f64::INFINITY; n];
    let mut boundary_mask = vec![false; n];
    for u in 0..n {
        for v in 0..n {
            if let Some((bw, bm)) = graph.boundary_edge(v) {
                let d = dist[u * n + v] + bw;
                if d < boundary_dist[u] {
                    boundary_dist[u] = d;
                    boundary_mask[u] = mask[u * n + v] ^ bm;
                }
            }
        }
    }
    PathTables {
        n,
        dist,
        mask,
        boundary_dist,
        boundary_mask,
    }
}

fn dijkstra(graph: &MatchingGraph, src: usize) -> (Vec<f64>, Vec<bool>) {
    let n = graph.num_nodes();
    let mut dist = vec![f64::INFINITY; n];
    let mut mask = vec![false; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(HeapItem {
        dist: 0.0,
        node: src,
    });
    while let Some(HeapItem { dist: d, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        for &(next, w, m) in graph.neighbors(node) {
            let nd = d + w;
            if nd < dist[next] {
                dist[next] = nd;
                mask[next] = mask[node] ^ m;
                heap.push(HeapItem {
                    dist: nd,
                    node: next,
                });
            }
        }
    }
    (dist, mask)
}

/// Decode one syndrome: predict whether the logical observable flipped.
pub fn decode(graph: &MatchingGraph, syndrome: &Syndrome) -> Result<bool> {
    let mut nodes = Vec::with_capacity(syndrome.fired.len());
    for &id in &syndrome.fired {
        nodes.push(graph.node_index(id).ok_or(Error::NotAGraphNode(id))?);
    }
    nodes.sort_unstable();
    nodes.dedup();
    match_fired(graph, &nodes)
}

/// Core matcher over already-validated node indices (sorted, deduped).
fn match_fired(graph: &MatchingGraph, fired: &[usize]) -> Result<bool> {
    if fired.is_empty() {
        return Ok(false);
    }
    let tables = graph.path_tables();
    let k = fired.len();

    // Every fired node needs some finite way out.
    for (i, &u) in fired.iter().enumerate() {
        let has_boundary = tables.boundary(u).0.is_finite();
        let has_pair = fired
            .iter()
            .enumerate()
            .any(|(j, &v)| j != i && tables.pair(u, v).0.is_finite());
        if !has_boundary && !has_pair {
            return Err(Error::DisconnectedDetector(graph.node_ids()[u]));
        }
    }

    if k == 1 {
        return Ok(tables.boundary(fired[0]).1);
    }

    let scale = |w: f64| -> i64 { (w * WEIGHT_SCALE).round() as i64 };
    let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(k * k + k);
    for i in 0..k {
        for j in i + 1..k {
            let (d, _) = tables.pair(fired[i], fired[j]);
            if d.is_finite() {
                edges.push((i, j, scale(d)));
            }
        }
    }
    for (i, &u) in fired.iter().enumerate() {
        let (d, _) = tables.boundary(u);
        if d.is_finite() {
            edges.push((i, k + i, scale(d)));
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            edges.push((k + i, k + j, 0));
        }
    }

    let mate = blossom::min_weight_perfect_matching(2 * k, &edges)
        .ok_or(Error::DisconnectedDetector(graph.node_ids()[fired[0]]))?;

    let mut flip = false;
    for i in 0..k {
        let m = mate[i];
        if m < k {
            if m > i {
                flip ^= tables.pair(fired[i], fired[m]).1;
            }
        } else {
            debug_assert_eq!(m, k + i, "real node matched to a foreign virtual");
            flip ^= tables.boundary(fired[i]).1;
        }
    }
    Ok(flip)
}

/// Total matched weight for a syndrome, for optimality checks against
/// brute-force enumeration. Uses the same integer weights as [`decode`].
pub fn matching_weight(graph: &MatchingGraph, syndrome: &Syndrome) -> Result<i64> {
    let mut nodes = Vec::with_capacity(syndrome.fired.len());
    for &id in &syndrome.fired {
        nodes.push(graph.node_index(id).ok_or(Error::NotAGraphNode(id))?);
    }
    nodes.sort_unstable();
    nodes.dedup();
    let tables = graph.path_tables();
    let k = nodes.len();
    if k == 0 {
        return Ok(0);
    }
    let scale = |w: f64| -> i64 { (w * WEIGHT_SCALE).round() as i64 };
    if k == 1 {
        let (d, _) = tables.boundary(nodes[0]);
        if !d.is_finite() {
            return Err(Error::DisconnectedDetector(graph.node_ids()[nodes[0]]));
        }
        return Ok(scale(d));
    }
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (d, _) = tables.pair(nodes[i], nodes[j]);
            if d.is_finite() {
                edges.push((i, j, scale(d)));
            }
        }
        let (d, _) = tables.boundary(nodes[i]);
        if d.is_finite() {
            edges.push((i, k + i, scale(d)));
        }
        for j in i + 1..k {
            edges.push((k + i, k + j, 0));
        }
    }
    let mate = blossom::min_weight_perfect_matching(2 * k, &edges)
        .ok_or(Error::DisconnectedDetector(graph.node_ids()[nodes[0]]))?;
    let mut total = 0i64;
    for i in 0..k {
        let m = mate[i];
        if m < k {
            if m > i {
                total += scale(tables.pair(nodes[i], nodes[m]).0);
            }
        } else {
            total += scale(tables.boundary(nodes[i]).0);
        }
    }
    Ok(total)
}

/// Decode every shot of a sample; returns `(logical error count, shots)`.
///
/// A logical error is a shot whose predicted flip disagrees with the actual
/// observable bit.
pub fn decode_batch(graph: &MatchingGraph, samples: &DetectionSample) -> Result<(u64, u64)> {
    if samples.num_detectors() != graph.num_detectors() {
        return Err(Error::DimensionMismatch {
            sample: samples.num_detectors(),
            graph: graph.num_detectors(),
        });
    }
    graph.path_tables(); // materialize once before the parallel loop
    let shots = samples.shots();
    let blocks = samples.num_blocks();
    let errors = (0..blocks)
        .into_par_iter()
        .map(|block| -> Result<u64> {
            let base = block as u64 * LANES;
            let lanes = (shots - base).min(LANES) as u32;
            let node_ids = graph.node_ids();
            let words: Vec<u64> = node_ids
                .iter()
                .map(|&id| samples.detector_word(block, id))
                .collect();
            let fired_any = words.iter().fold(0u64, |a, w| a | w);
            let obs_word = if samples.num_observables() > 0 {
                samples.observable_word(block, 0)
            } else {
                0
            };
            let mut errors = 0u64;
            for lane in 0..lanes {
                let actual = obs_word >> lane & 1 == 1;
                let predicted = if fired_any >> lane & 1 == 0 {
                    false
                } else {
                    let fired: Vec<usize> = (0..node_ids.len())
                        .filter(|&n| words[n] >> lane & 1 == 1)
                        .collect();
                    match_fired(graph, &fired)?
                };
                if predicted != actual {
                    errors += 1;
                }
            }
            Ok(errors)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok((errors, shots))
}
