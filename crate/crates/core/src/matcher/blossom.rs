//! Exact maximum-weight matching on general graphs (Edmonds' blossom
//! algorithm, primal-dual formulation), plus a minimum-weight perfect
//! matching wrapper used by the decoder.
//!
//! Vertices are `0..n`; non-trivial blossoms are numbered `n..2n`. Vertex
//! dual variables are stored premultiplied by two so every quantity stays
//! integral for integer edge weights.

pub const UNMATCHED: usize = usize::MAX;

const NONE: usize = usize::MAX;

/// Minimum-weight perfect matching over non-negative integer weights.
///
/// Returns `mate` with `mate[v]` the partner of `v`, or `None` when the
/// graph admits no perfect matching. Implemented as maximum-weight matching
/// on complemented weights, with the complement constant chosen large
/// enough that higher-cardinality matchings always win.
pub fn min_weight_perfect_matching(
    num_vertices: usize,
    edges: &[(usize, usize, i64)],
) -> Option<Vec<usize>> {
    if num_vertices == 0 {
        return Some(Vec::new());
    }
    if !num_vertices.is_multiple_of(2) {
        return None;
    }
    let max_w = edges.iter().map(|e| e.2).max().unwrap_or(0);
    assert!(
        edges.iter().all(|e| e.2 >= 0),
        "perfect matching weights must be non-negative"
    );
    let shift = max_w
        .checked_mul(num_vertices as i64 / 2 + 1)
        .and_then(|c| c.checked_add(1))
        .expect("edge weights too large");
    let complemented: Vec<(usize, usize, i64)> =
        edges.iter().map(|&(u, v, w)| (u, v, shift - w)).collect();
    let mate = maximum_weight_matching(num_vertices, &complemented);
    if mate.contains(&UNMATCHED) {
        return None;
    }
    Some(mate)
}

/// Maximum-weight matching. Returns `mate[v]` = partner vertex or
/// [`UNMATCHED`]. Deterministic for a fixed edge order.
pub fn maximum_weight_matching(num_vertices: usize, edges: &[(usize, usize, i64)]) -> Vec<usize> {
    if edges.is_empty() {
        return vec![UNMATCHED; num_vertices];
    }
    let mut solver = Solver::new(num_vertices, edges);
    solver.solve();
    #[cfg(debug_assertions)]
    solver.verify_optimum();
    solver.mate_vertices()
}

struct Solver<'a> {
    n: usize,
    edges: &'a [(usize, usize, i64)],
    /// endpoint[p]: vertex attached to endpoint p; endpoints 2k and 2k+1
    /// belong to edge k.
    endpoint: Vec<usize>,
    /// neighbor_ends[v]: remote endpoints of edges incident to v.
    neighbor_ends: Vec<Vec<usize>>,
    /// mate[v]: remote endpoint of v's matched edge, NONE if single.
    mate: Vec<usize>,
    /// label[b]: 0 free, 1 S, 2 T (top-level blossoms; 5 is a breadcrumb).
    label: Vec<usize>,
    /// label_end[b]: remote endpoint through which the label was assigned.
    label_end: Vec<usize>,
    /// in_blossom[v]: top-level blossom containing vertex v.
    in_blossom: Vec<usize>,
    blossom_parent: Vec<usize>,
    blossom_children: Vec<Vec<usize>>,
    /// blossom_base[b]: base vertex of blossom b.
    blossom_base: Vec<usize>,
    /// blossom_ends[b][i]: endpoint of the edge joining child i to child i+1.
    blossom_ends: Vec<Vec<usize>>,
    best_edge: Vec<usize>,
    blossom_best_edges: Vec<Vec<usize>>,
    unused_blossoms: Vec<usize>,
    /// dual[v] = 2u(v) for vertices, z(b) for blossoms.
    dual: Vec<i64>,
    allow_edge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(num_vertices: usize, edges: &'a [(usize, usize, i64)]) -> Solver<'a> {
        let mut n = num_vertices;
        for &(i, j, _) in edges {
            assert_ne!(i, j, "self-loop edge");
            n = n.max(i + 1).max(j + 1);
        }
        let max_weight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let endpoint = (0..2 * edges.len())
            .map(|p| {
                if p % 2 == 0 {
                    edges[p / 2].0
                } else {
                    edges[p / 2].1
                }
            })
            .collect();
        let mut neighbor_ends = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbor_ends[i].push(2 * k + 1);
            neighbor_ends[j].push(2 * k);
        }
        let mut dual = vec![max_weight; n];
        dual.extend(std::iter::repeat_n(0, n));
        Solver {
            n,
            edges,
            endpoint,
            neighbor_ends,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            label_end: vec![NONE; 2 * n],
            in_blossom: (0..n).collect(),
            blossom_parent: vec![NONE; 2 * n],
            blossom_children: vec![Vec::new(); 2 * n],
            blossom_base: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
            blossom_ends: vec![Vec::new(); 2 * n],
            best_edge: vec![NONE; 2 * n],
            blossom_best_edges: vec![Vec::new(); 2 * n],
            unused_blossoms: (n..2 * n).collect(),
            dual,
            allow_edge: vec![false; edges.len()],
            queue: Vec::new(),
        }
    }

    /// 2 * slack of edge k (valid only across top-level blossoms).
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dual[i] + self.dual[j] - 2 * w
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
        } else {
            for &child in &self.blossom_children[b] {
                self.blossom_leaves(child, out);
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.blossom_leaves(b, &mut out);
        out
    }

    fn assign_label(&mut self, w: usize, t: usize, p: usize) {
        let b = self.in_blossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.label_end[w] = p;
        self.label_end[b] = p;
        self.best_edge[w] = NONE;
        self.best_edge[b] = NONE;
        if t == 1 {
            let leaves = self.leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            let base = self.blossom_base[b];
            let mate_base = self.mate[base];
            assert!(mate_base != NONE);
            let v = self.endpoint[mate_base];
            self.assign_label(v, 1, mate_base ^ 1);
        }
    }

    /// Trace back from v and w; return the base of a new blossom, or NONE
    /// if the paths join at two distinct single vertices (augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            if v == NONE {
                std::mem::swap(&mut v, &mut w);
            }
            let b = self.in_blossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossom_base[b];
                break;
            }
            assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            assert_eq!(self.label_end[b], self.mate[self.blossom_base[b]]);
            if self.label_end[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.label_end[b]];
                let bt = self.in_blossom[v];
                assert_eq!(self.label[bt], 2);
                assert!(self.label_end[bt] != NONE);
                v = self.endpoint[self.label_end[bt]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Construct a new S-blossom with the given base, closed by edge k.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (v, w, _) = self.edges[k];
        let bb = self.in_blossom[base];
        let mut bv = self.in_blossom[v];
        let mut bw = self.in_blossom[w];
        let b = self.unused_blossoms.pop().expect("blossom numbers exhausted");
        self.blossom_base[b] = base;
        self.blossom_parent[b] = NONE;
        self.blossom_parent[bb] = b;

        let mut children = Vec::new();
        let mut ends = Vec::new();
        while bv != bb {
            self.blossom_parent[bv] = b;
            children.push(bv);
            ends.push(self.label_end[bv]);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.label_end[bv] == self.mate[self.blossom_base[bv]])
            );
            assert!(self.label_end[bv] != NONE);
            let step = self.endpoint[self.label_end[bv]];
            bv = self.in_blossom[step];
        }
        children.push(bb);
        children.reverse();
        ends.reverse();
        ends.push(2 * k);
        while bw != bb {
            self.blossom_parent[bw] = b;
            children.push(bw);
            ends.push(self.label_end[bw] ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.label_end[bw] == self.mate[self.blossom_base[bw]])
            );
            assert!(self.label_end[bw] != NONE);
            let step = self.endpoint[self.label_end[bw]];
            bw = self.in_blossom[step];
        }
        self.blossom_children[b] = children;
        self.blossom_ends[b] = ends;

        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.label_end[b] = self.label_end[bb];
        self.dual[b] = 0;

        for leaf in self.leaves(b) {
            if self.label[self.in_blossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.in_blossom[leaf] = b;
        }

        // Recompute least-slack edges to neighboring S-blossoms.
        let mut best_edge_to = vec![NONE; 2 * self.n];
        let children = self.blossom_children[b].clone();
        for bv in children {
            let edge_lists: Vec<Vec<usize>> = if self.blossom_best_edges[bv].is_empty() {
                self.leaves(bv)
                    .iter()
                    .map(|&v| self.neighbor_ends[v].iter().map(|p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossom_best_edges[bv].clone()]
            };
            for list in edge_lists {
                for k in list {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.in_blossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.in_blossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (best_edge_to[bj] == NONE
                            || self.slack(k) < self.slack(best_edge_to[bj]))
                    {
                        best_edge_to[bj] = k;
                    }
                }
            }
            self.blossom_best_edges[bv] = Vec::new();
            self.best_edge[bv] = NONE;
        }
        self.blossom_best_edges[b] = best_edge_to.into_iter().filter(|&k| k != NONE).collect();
        self.best_edge[b] = NONE;
        for idx in 0..self.blossom_best_edges[b].len() {
            let k = self.blossom_best_edges[b][idx];
            if self.best_edge[b] == NONE || self.slack(k) < self.slack(self.best_edge[b]) {
                self.best_edge[b] = k;
            }
        }
    }

    /// Expand and discard a top-level blossom.
    fn expand_blossom(&mut self, b: usize, end_stage: bool) {
        for s in self.blossom_children[b].clone() {
            self.blossom_parent[s] = NONE;
            if s < self.n {
                self.in_blossom[s] = s;
            } else if end_stage && self.dual[s] == 0 {
                self.expand_blossom(s, end_stage);
            } else {
                for leaf in self.leaves(s) {
                    self.in_blossom[leaf] = s;
                }
            }
        }
        if !end_stage && self.label[b] == 2 {
            // Relabel sub-blossoms from the entry child around to the base.
            assert!(self.label_end[b] != NONE);
            let entry_child = self.in_blossom[self.endpoint[self.label_end[b] ^ 1]];
            let len = self.blossom_children[b].len() as i64;
            let mut j = self.blossom_children[b]
                .iter()
                .position(|&c| c == entry_child)
                .expect("entry child in blossom") as i64;
            let (j_step, end_trick): (i64, usize) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.label_end[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = self.wrapped_end(b, j - end_trick as i64) ^ end_trick;
                self.label[self.endpoint[q ^ 1]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                let allow = self.wrapped_end(b, j - end_trick as i64) / 2;
                self.allow_edge[allow] = true;
                j += j_step;
                p = self.wrapped_end(b, j - end_trick as i64) ^ end_trick;
                self.allow_edge[p / 2] = true;
                j += j_step;
            }
            let bv = self.wrapped_child(b, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.label_end[self.endpoint[p ^ 1]] = p;
            self.label_end[bv] = p;
            self.best_edge[bv] = NONE;
            j += j_step;
            while self.wrapped_child(b, j) != entry_child {
                let bv = self.wrapped_child(b, j);
                if self.label[bv] == 1 {
                    j += j_step;
                    continue;
                }
                let mut reached = NONE;
                for leaf in self.leaves(bv) {
                    reached = leaf;
                    if self.label[leaf] != 0 {
                        break;
                    }
                }
                if reached != NONE && self.label[reached] != 0 {
                    assert_eq!(self.label[reached], 2);
                    assert_eq!(self.in_blossom[reached], bv);
                    self.label[reached] = 0;
                    self.label[self.endpoint[self.mate[self.blossom_base[bv]]]] = 0;
                    let le = self.label_end[reached];
                    self.assign_label(reached, 2, le);
                }
                j += j_step;
            }
        }
        self.label[b] = NONE;
        self.label_end[b] = NONE;
        self.blossom_base[b] = NONE;
        self.best_edge[b] = NONE;
        self.blossom_children[b] = Vec::new();
        self.blossom_ends[b] = Vec::new();
        self.blossom_best_edges[b] = Vec::new();
        self.unused_blossoms.push(b);
    }

    fn wrapped_child(&self, b: usize, j: i64) -> usize {
        let list = &self.blossom_children[b];
        let idx = if j < 0 { list.len() as i64 + j } else { j } as usize;
        list[idx]
    }

    fn wrapped_end(&self, b: usize, j: i64) -> usize {
        let list = &self.blossom_ends[b];
        let idx = if j < 0 { list.len() as i64 + j } else { j } as usize;
        list[idx]
    }

    /// Swap matched/unmatched edges along the path from v to the base of b.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossom_parent[t] != b {
            t = self.blossom_parent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.blossom_children[b]
            .iter()
            .position(|&c| c == t)
            .expect("vertex in blossom");
        let len = self.blossom_children[b].len() as i64;
        let mut j = i as i64;
        let (j_step, end_trick): (i64, usize) = if i & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += j_step;
            let t = self.wrapped_child(b, j);
            let p = self.wrapped_end(b, j - end_trick as i64) ^ end_trick;
            if t >= self.n {
                let ep = self.endpoint[p];
                self.augment_blossom(t, ep);
            }
            j += j_step;
            let t = self.wrapped_child(b, j);
            if t >= self.n {
                let ep = self.endpoint[p ^ 1];
                self.augment_blossom(t, ep);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossom_children[b].rotate_left(i);
        self.blossom_ends[b].rotate_left(i);
        self.blossom_base[b] = self.blossom_base[self.blossom_children[b][0]];
        assert_eq!(self.blossom_base[b], v);
    }

    /// Swap matched/unmatched edges along the augmenting path through edge k.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (start, start_p) in [(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = start;
            let mut p = start_p;
            loop {
                let bs = self.in_blossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.label_end[bs], self.mate[self.blossom_base[bs]]);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.label_end[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.label_end[bs]];
                let bt = self.in_blossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.label_end[bt] != NONE);
                s = self.endpoint[self.label_end[bt]];
                let j = self.endpoint[self.label_end[bt] ^ 1];
                assert_eq!(self.blossom_base[bt], t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.label_end[bt];
                p = self.label_end[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _stage in 0..self.n {
            self.label = vec![0; 2 * self.n];
            self.best_edge = vec![NONE; 2 * self.n];
            for b in self.n..2 * self.n {
                self.blossom_best_edges[b] = Vec::new();
            }
            self.allow_edge = vec![false; self.edges.len()];
            self.queue.clear();
            for v in 0..self.n {
                if self.mate[v] == NONE && self.label[self.in_blossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    assert_eq!(self.label[self.in_blossom[v]], 1);
                    let ends = self.neighbor_ends[v].clone();
                    for p in ends {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.in_blossom[v] == self.in_blossom[w] {
                            continue;
                        }
                        let mut k_slack = 0;
                        if !self.allow_edge[k] {
                            k_slack = self.slack(k);
                            if k_slack <= 0 {
                                self.allow_edge[k] = true;
                            }
                        }
                        if self.allow_edge[k] {
                            if self.label[self.in_blossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.in_blossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                assert_eq!(self.label[self.in_blossom[w]], 2);
                                self.label[w] = 2;
                                self.label_end[w] = p ^ 1;
                            }
                        } else if self.label[self.in_blossom[w]] == 1 {
                            let b = self.in_blossom[v];
                            if self.best_edge[b] == NONE
                                || k_slack < self.slack(self.best_edge[b])
                            {
                                self.best_edge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.best_edge[w] == NONE
                                || k_slack < self.slack(self.best_edge[w]))
                        {
                            self.best_edge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path; pump slack out of the duals.
                let mut delta_type = 1;
                let mut delta = *self.dual[..self.n].iter().min().expect("nonempty");
                let mut delta_edge = NONE;
                let mut delta_blossom = NONE;

                for v in 0..self.n {
                    if self.label[self.in_blossom[v]] == 0 && self.best_edge[v] != NONE {
                        let d = self.slack(self.best_edge[v]);
                        if d < delta {
                            delta = d;
                            delta_type = 2;
                            delta_edge = self.best_edge[v];
                        }
                    }
                }
                for b in 0..2 * self.n {
                    if self.blossom_parent[b] == NONE
                        && self.label[b] == 1
                        && self.best_edge[b] != NONE
                    {
                        let d = self.slack(self.best_edge[b]) / 2;
                        if d < delta {
                            delta = d;
                            delta_type = 3;
                            delta_edge = self.best_edge[b];
                        }
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE
                        && self.blossom_parent[b] == NONE
                        && self.label[b] == 2
                        && self.dual[b] < delta
                    {
                        delta = self.dual[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }

                for v in 0..self.n {
                    match self.label[self.in_blossom[v]] {
                        0 => {}
                        1 => self.dual[v] -= delta,
                        2 => self.dual[v] += delta,
                        l => panic!("unexpected vertex label {l}"),
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE && self.blossom_parent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dual[b] += delta,
                            2 => self.dual[b] -= delta,
                            l => panic!("unexpected blossom label {l}"),
                        }
                    }
                }

                match delta_type {
                    1 => break,
                    2 => {
                        self.allow_edge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.in_blossom[i]] == 0 {
                            i = j;
                        }
                        assert_eq!(self.label[self.in_blossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allow_edge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        assert_eq!(self.label[self.in_blossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(delta_blossom, false),
                    t => panic!("unexpected delta type {t}"),
                }
            }

            if !augmented {
                break;
            }

            for b in self.n..2 * self.n {
                if self.blossom_parent[b] == NONE
                    && self.blossom_base[b] != NONE
                    && self.label[b] == 1
                    && self.dual[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    fn mate_vertices(&self) -> Vec<usize> {
        let mate: Vec<usize> = self
            .mate
            .iter()
            .map(|&p| if p == NONE { UNMATCHED } else { self.endpoint[p] })
            .collect();
        for (v, &m) in mate.iter().enumerate() {
            assert!(m == UNMATCHED || mate[m] == v);
        }
        mate
    }

    /// Complementary-slackness check of the final primal/dual solution.
    #[cfg(debug_assertions)]
    fn verify_optimum(&self) {
        for (k, &(i, j, w)) in self.edges.iter().enumerate() {
            let mut s = self.dual[i] + self.dual[j] - 2 * w;
            let mut i_chain = vec![i];
            let mut j_chain = vec![j];
            while self.blossom_parent[*i_chain.last().unwrap()] != NONE {
                i_chain.push(self.blossom_parent[*i_chain.last().unwrap()]);
            }
            while self.blossom_parent[*j_chain.last().unwrap()] != NONE {
                j_chain.push(self.blossom_parent[*j_chain.last().unwrap()]);
            }
            i_chain.reverse();
            j_chain.reverse();
            for (&bi, &bj) in i_chain.iter().zip(j_chain.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dual[bi];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert_eq!(s, 0, "matched edge {k} has nonzero slack");
            }
        }
        for v in 0..self.n {
            assert!(self.mate[v] != NONE || self.dual[v] == 0);
        }
        for b in self.n..2 * self.n {
            if self.blossom_base[b] != NONE && self.dual[b] > 0 {
                assert_eq!(self.blossom_ends[b].len() % 2, 1);
                for (ix, &p) in self.blossom_ends[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }
}
