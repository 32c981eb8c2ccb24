//! How one edge event changes the population of connected `k`-subgraphs.
//!
//! An insertion of `(u, v)` creates every set `H ⊇ {u, v}` that is connected
//! with the edge and disconnected without it; a deletion destroys exactly the
//! same family, evaluated on the graph after the edge is gone. So `W` on the
//! graph before an insertion and `D` on the graph after a deletion are one
//! computation.

use alloc::vec::Vec;

use libm::round;
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DynamicLabeledGraph, EdgeLabel, SubgraphInstance, VertexId};
use crate::sketch::{BottomKSketch, VertexHasher};
use crate::{FxHashMap, FxHashSet};

/// Whether the set `h` (which contains `u` and `v`) is connected in `g`
/// once the pair `(u, v)` is ignored.
pub fn connected_without_pair(g: &DynamicLabeledGraph, h: &[VertexId], u: VertexId, v: VertexId) -> bool {
    let k = h.len();
    debug_assert!(k <= 64);
    let mut adj = [0u64; 64];
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (h[i], h[j]);
            if (a == u && b == v) || (a == v && b == u) {
                continue;
            }
            if g.has_edge(a, b) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[i] & !seen;
        seen |= new;
        frontier |= new;
    }
    seen == full
}

/// Third vertices `w` for which `{u, v, w}` needs the edge `(u, v)` to be
/// connected: neighbors of exactly one endpoint.
fn k3_new_thirds(g: &DynamicLabeledGraph, u: VertexId, v: VertexId) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = k3_thirds_unordered(g, u, v).collect();
    out.sort_unstable();
    out
}

/// [`k3_new_thirds`] in adjacency order.
fn k3_thirds_unordered(g: &DynamicLabeledGraph, u: VertexId, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
    g.neighbor_ids(u)
        .filter(move |&w| w != v && !g.has_edge(v, w))
        .chain(g.neighbor_ids(v).filter(move |&w| w != u && !g.has_edge(u, w)))
}

fn k3_new_count(g: &DynamicLabeledGraph, u: VertexId, v: VertexId) -> u64 {
    let (small, large) = if g.degree(u) <= g.degree(v) { (u, v) } else { (v, u) };
    let common = g
        .neighbor_ids(small)
        .filter(|&w| w != large && g.has_edge(large, w))
        .count();
    let du = g.degree(u) - usize::from(g.has_edge(u, v));
    let dv = g.degree(v) - usize::from(g.has_edge(u, v));
    (du + dv - 2 * common) as u64
}

/// Vertex sets that `(u, v)` makes connected, sorted lexicographically.
pub fn new_subgraph_sets(g: &DynamicLabeledGraph, u: VertexId, v: VertexId, k: usize) -> Vec<Vec<VertexId>> {
    if k < 2 || u == v {
        return Vec::new();
    }
    if k == 3 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        return k3_new_thirds(g, u, v)
            .into_iter()
            .map(|w| {
                let mut s = alloc::vec![a, b, w];
                s.sort_unstable();
                s
            })
            .collect();
    }
    let mut out = Vec::new();
    g.for_each_candidate(u, v, k, |h| {
        if !connected_without_pair(g, h, u, v) {
            out.push(h.to_vec());
        }
    });
    out
}

/// Number of connected `k`-subgraphs created by inserting `(u, v)` into `g`,
/// which must not yet contain the edge.
pub fn compute_w_exact(g: &DynamicLabeledGraph, u: VertexId, v: VertexId, k: usize) -> u64 {
    match k {
        0 | 1 => 0,
        _ if u == v => 0,
        2 => 1,
        3 => k3_new_count(g, u, v),
        _ => {
            let mut n = 0;
            g.for_each_candidate(u, v, k, |h| {
                if !connected_without_pair(g, h, u, v) {
                    n += 1;
                }
            });
            n
        }
    }
}

/// Number of connected `k`-subgraphs destroyed by deleting `(u, v)`; `g` is
/// the graph after the deletion.
pub fn compute_d_exact(g: &DynamicLabeledGraph, u: VertexId, v: VertexId, k: usize) -> u64 {
    compute_w_exact(g, u, v, k)
}

/// Draws `count` of the subgraphs created by inserting `(u, v)` with label
/// `label_e`, uniformly without replacement and in random order, each with its
/// post-insertion edges. `g` is the graph before the insertion.
pub fn sample_new_subgraph<R: Rng + ?Sized>(
    g: &DynamicLabeledGraph,
    u: VertexId,
    v: VertexId,
    k: usize,
    label_e: EdgeLabel,
    count: usize,
    rng: &mut R,
) -> Result<Vec<SubgraphInstance>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if k == 3 && u != v {
        // pick positions in the list of third vertices, then walk it once
        let available = k3_new_count(g, u, v) as usize;
        if count > available {
            return Err(Error::NotEnoughSubgraphs {
                requested: count,
                available,
            });
        }
        let mut wanted: Vec<(usize, usize)> = index::sample(rng, available, count)
            .into_iter()
            .enumerate()
            .map(|(slot, pos)| (pos, slot))
            .collect();
        wanted.sort_unstable();
        let mut chosen = alloc::vec![0; count];
        let mut next = wanted.iter().peekable();
        for (pos, w) in k3_thirds_unordered(g, u, v).enumerate() {
            match next.peek() {
                None => break,
                Some(&&(p, slot)) if p == pos => {
                    chosen[slot] = w;
                    next.next();
                }
                Some(_) => {}
            }
        }
        return chosen
            .iter()
            .map(|&w| g.induced_subgraph(&[u, v, w]).map(|inst| inst.with_edge(u, v, label_e)))
            .collect();
    }
    let mut sets = new_subgraph_sets(g, u, v, k);
    if count > sets.len() {
        return Err(Error::NotEnoughSubgraphs {
            requested: count,
            available: sets.len(),
        });
    }
    let (chosen, _) = sets.partial_shuffle(rng, count);
    chosen
        .iter()
        .map(|h| g.induced_subgraph(h).map(|inst| inst.with_edge(u, v, label_e)))
        .collect()
}

/// Bottom-k sketches of every vertex's neighborhood, kept in step with the graph.
#[derive(Debug, Clone)]
pub struct SketchStore {
    size: usize,
    hasher: VertexHasher,
    sketches: FxHashMap<VertexId, BottomKSketch>,
}

impl SketchStore {
    pub fn new(size: usize, hasher: VertexHasher) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidConfig("sketch size must be at least 2"));
        }
        Ok(SketchStore {
            size,
            hasher,
            sketches: FxHashMap::default(),
        })
    }

    pub fn sketch_size(&self) -> usize {
        self.size
    }

    pub fn hasher(&self) -> VertexHasher {
        self.hasher
    }

    pub fn get(&self, v: VertexId) -> Option<&BottomKSketch> {
        self.sketches.get(&v)
    }

    fn entry(&mut self, v: VertexId) -> &mut BottomKSketch {
        let (size, hasher) = (self.size, self.hasher);
        self.sketches
            .entry(v)
            .or_insert_with(|| BottomKSketch::new(size, hasher))
    }

    pub fn edge_added(&mut self, u: VertexId, v: VertexId) {
        let (hu, hv) = (self.hasher.hash(u), self.hasher.hash(v));
        self.entry(u).insert(hv);
        self.entry(v).insert(hu);
    }

    pub fn edge_deleted(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let (hu, hv) = (self.hasher.hash(u), self.hasher.hash(v));
        self.entry(u).delete(hv)?;
        self.entry(v).delete(hu)
    }

    /// Each sketch equals the one built from scratch from the graph.
    pub fn matches(&self, g: &DynamicLabeledGraph) -> bool {
        g.vertex_ids().all(|x| {
            let mut fresh = BottomKSketch::new(self.size, self.hasher);
            for w in g.neighbor_ids(x) {
                fresh.insert(self.hasher.hash(w));
            }
            match self.sketches.get(&x) {
                Some(sk) => sk.check_invariants() && sk.bottom().eq(fresh.bottom()) && sk.len() == fresh.len(),
                None => fresh.is_empty(),
            }
        })
    }

    fn empty(&self) -> BottomKSketch {
        BottomKSketch::new(self.size, self.hasher)
    }
}

/// Estimated `|N(a) ∪ N(b)|` from the sketches, never below the larger degree
/// nor above the sum.
fn union_of_neighborhoods(store: &SketchStore, g: &DynamicLabeledGraph, a: VertexId, b: VertexId) -> f64 {
    let (da, db) = (g.degree(a) as f64, g.degree(b) as f64);
    let empty;
    let sa = match store.get(a) {
        Some(s) => s,
        None => {
            empty = store.empty();
            &empty
        }
    };
    let est = match store.get(b) {
        Some(sb) => sa.union_estimate(sb).unwrap_or(da + db),
        None => return da + db,
    };
    est.clamp(da.max(db), da + db)
}

/// Sketch estimate of [`compute_w_exact`], on the graph before the insertion.
///
/// For `k = 3`, `W = deg(u) + deg(v) - 2|N(u) ∩ N(v)|`; the degrees are read
/// from the graph and the intersection is estimated from the merged sketches,
/// which gives `2|N(u) ∪ N(v)|^ - deg(u) - deg(v)`. For larger `k` the count
/// is split by how many of the other vertices hang off each endpoint: the
/// one-hop factors come from sketches and the deeper ones are counted in the
/// local neighborhood. The exact count is returned instead when it is no
/// more work than the estimate: for `k = 3` when the smaller degree is at
/// most `s`, otherwise when both are.
pub fn compute_w_approx(store: &SketchStore, g: &DynamicLabeledGraph, u: VertexId, v: VertexId, k: usize) -> f64 {
    if k <= 2 || u == v {
        return compute_w_exact(g, u, v, k) as f64;
    }
    let s = store.sketch_size();
    let (small, large) = (g.degree(u).min(g.degree(v)), g.degree(u).max(g.degree(v)));
    if small <= s && (k == 3 || large <= s) {
        return compute_w_exact(g, u, v, k) as f64;
    }
    // the pair itself is excluded from both neighborhoods
    let adjacent = if g.has_edge(u, v) { 1.0 } else { 0.0 };
    let (du, dv) = (g.degree(u) as f64 - adjacent, g.degree(v) as f64 - adjacent);
    if k == 3 {
        let union = union_of_neighborhoods(store, g, u, v) - 2.0 * adjacent;
        return (2.0 * union - du - dv).clamp(0.0, du + dv);
    }
    let mut total = 0.0;
    for h in 0..=k - 2 {
        let j = k - 2 - h;
        let x = side_factor(store, g, u, v, h, j);
        if x == 0.0 {
            continue;
        }
        total += x * side_factor(store, g, v, u, j, h);
    }
    total.max(0.0)
}

/// Sketch estimate of [`compute_d_exact`], on the graph after the deletion.
pub fn compute_d_approx(store: &SketchStore, g: &DynamicLabeledGraph, u: VertexId, v: VertexId, k: usize) -> f64 {
    compute_w_approx(store, g, u, v, k)
}

/// Rounds a non-negative estimate to an arrival count.
pub fn round_estimate(x: f64) -> u64 {
    if x.is_finite() && x > 0.0 {
        round(x) as u64
    } else {
        0
    }
}

/// Connected sets of `h + 1` vertices containing `a` inside the `h`-hop
/// neighborhood of `a` minus the `j`-hop neighborhood of `b`.
fn side_factor(store: &SketchStore, g: &DynamicLabeledGraph, a: VertexId, b: VertexId, h: usize, j: usize) -> f64 {
    match h {
        0 => 1.0,
        1 => {
            let da = g.degree(a) as f64 - if g.has_edge(a, b) { 1.0 } else { 0.0 };
            let common = if j == 0 {
                0.0
            } else {
                let sa = store.get(a).cloned().unwrap_or_else(|| store.empty());
                let region = hop_region_sketch(store, g, b, j);
                sa.intersection_estimate(&region).unwrap_or(0.0)
            };
            (da - common).max(0.0)
        }
        _ => {
            let far: FxHashSet<VertexId> = if j == 0 {
                FxHashSet::default()
            } else {
                g.h_hop_neighborhood(b, j).unwrap_or_default().into_iter().collect()
            };
            let near = g.h_hop_neighborhood(a, h).unwrap_or_default();
            let allowed: FxHashSet<VertexId> = near.into_iter().filter(|x| *x != b && !far.contains(x)).collect();
            count_rooted_connected(g, a, h + 1, &allowed) as f64
        }
    }
}

/// Sketch of the `j`-hop neighborhood of `b`, merged from neighbor sketches.
fn hop_region_sketch(store: &SketchStore, g: &DynamicLabeledGraph, b: VertexId, j: usize) -> BottomKSketch {
    let mut members = alloc::vec![b];
    if j >= 2 {
        members.extend(g.h_hop_neighborhood(b, j - 1).unwrap_or_default());
    }
    BottomKSketch::merged(
        members.iter().filter_map(|x| store.get(*x)),
        store.sketch_size(),
        store.hasher(),
    )
}

/// Connected vertex sets of size `size` containing `root`, all other members
/// drawn from `allowed`.
fn count_rooted_connected(g: &DynamicLabeledGraph, root: VertexId, size: usize, allowed: &FxHashSet<VertexId>) -> u64 {
    fn grow(
        g: &DynamicLabeledGraph,
        current: &mut Vec<VertexId>,
        ext: &[VertexId],
        excluded: &mut Vec<VertexId>,
        size: usize,
        allowed: &FxHashSet<VertexId>,
    ) -> u64 {
        if current.len() == size {
            return 1;
        }
        let mut n = 0;
        let mark = excluded.len();
        for (i, &w) in ext.iter().enumerate() {
            current.push(w);
            let mut next: Vec<VertexId> = ext[i + 1..].to_vec();
            for x in g.neighbor_ids(w) {
                if allowed.contains(&x)
                    && !current.contains(&x)
                    && !excluded.contains(&x)
                    && !ext.contains(&x)
                    && !next.contains(&x)
                {
                    next.push(x);
                }
            }
            n += grow(g, current, &next, excluded, size, allowed);
            current.pop();
            excluded.push(w);
        }
        excluded.truncate(mark);
        n
    }
    let ext: Vec<VertexId> = g.neighbor_ids(root).filter(|x| allowed.contains(x)).collect();
    grow(g, &mut alloc::vec![root], &ext, &mut Vec::new(), size, allowed)
}
