//! The evolving labeled graph and the subgraph instances cut out of it.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::cell::OnceCell;

use crate::error::{Error, Result};
use crate::pattern::{canonical_key, PatternKey};
use crate::{FxHashMap, FxHashSet};

pub type VertexId = u64;
pub type VertexLabel = u32;
pub type EdgeLabel = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Added,
    /// The edge was already present; the graph is unchanged.
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteOutcome {
    Deleted(EdgeLabel),
    /// The edge was not present; the graph is unchanged.
    Missing,
}

#[derive(Debug, Clone, Default)]
struct VertexEntry {
    label: VertexLabel,
    adj: FxHashMap<VertexId, EdgeLabel>,
}

/// Simple undirected graph with immutable vertex labels and labeled edges.
///
/// Vertices are created by the first edge that touches them and are kept
/// (with their label) after their last edge is deleted.
#[derive(Debug, Clone, Default)]
pub struct DynamicLabeledGraph {
    vertices: FxHashMap<VertexId, VertexEntry>,
    edges: usize,
}

impl DynamicLabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn contains_vertex(&self, u: VertexId) -> bool {
        self.vertices.contains_key(&u)
    }

    pub fn vertex_label(&self, u: VertexId) -> Option<VertexLabel> {
        self.vertices.get(&u).map(|e| e.label)
    }

    pub fn edge_label(&self, u: VertexId, v: VertexId) -> Option<EdgeLabel> {
        self.vertices.get(&u)?.adj.get(&v).copied()
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.vertices
            .get(&u)
            .is_some_and(|e| e.adj.contains_key(&v))
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.vertices.get(&u).map_or(0, |e| e.adj.len())
    }

    /// Neighbors of `u` with the label of the connecting edge, in unspecified order.
    pub fn neighbors(&self, u: VertexId) -> impl Iterator<Item = (VertexId, EdgeLabel)> + '_ {
        self.vertices
            .get(&u)
            .into_iter()
            .flat_map(|e| e.adj.iter().map(|(&w, &l)| (w, l)))
    }

    pub fn neighbor_ids(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors(u).map(|(w, _)| w)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    /// Every edge once, as `(min, max, label)`, sorted.
    pub fn sorted_edges(&self) -> Vec<(VertexId, VertexId, EdgeLabel)> {
        let mut out: Vec<_> = self
            .vertices
            .iter()
            .flat_map(|(&u, e)| e.adj.iter().map(move |(&v, &l)| (u, v, l)))
            .filter(|&(u, v, _)| u < v)
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted `(vertex, label)` pairs, including isolated vertices.
    pub fn sorted_vertices(&self) -> Vec<(VertexId, VertexLabel)> {
        let mut out: Vec<_> = self.vertices.iter().map(|(&u, e)| (u, e.label)).collect();
        out.sort_unstable();
        out
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        label_u: VertexLabel,
        v: VertexId,
        label_v: VertexLabel,
        label_e: EdgeLabel,
    ) -> Result<AddOutcome> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.check_label(u, label_u)?;
        self.check_label(v, label_v)?;
        if self.has_edge(u, v) {
            return Ok(AddOutcome::Duplicate);
        }
        self.vertices
            .entry(u)
            .or_insert_with(|| VertexEntry {
                label: label_u,
                adj: FxHashMap::default(),
            })
            .adj
            .insert(v, label_e);
        self.vertices
            .entry(v)
            .or_insert_with(|| VertexEntry {
                label: label_v,
                adj: FxHashMap::default(),
            })
            .adj
            .insert(u, label_e);
        self.edges += 1;
        Ok(AddOutcome::Added)
    }

    /// Adds `u` without edges if it is new; checks its label otherwise.
    pub fn add_vertex(&mut self, u: VertexId, label: VertexLabel) -> Result<()> {
        self.check_label(u, label)?;
        self.vertices.entry(u).or_insert_with(|| VertexEntry {
            label,
            adj: FxHashMap::default(),
        });
        Ok(())
    }

    fn check_label(&self, u: VertexId, label: VertexLabel) -> Result<()> {
        match self.vertices.get(&u) {
            Some(e) if e.label != label => Err(Error::LabelConflict {
                vertex: u,
                existing: e.label,
                given: label,
            }),
            _ => Ok(()),
        }
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> DeleteOutcome {
        let Some(label) = self.vertices.get_mut(&u).and_then(|e| e.adj.remove(&v)) else {
            return DeleteOutcome::Missing;
        };
        if let Some(e) = self.vertices.get_mut(&v) {
            e.adj.remove(&u);
        }
        self.edges -= 1;
        DeleteOutcome::Deleted(label)
    }

    /// Vertices at shortest-path distance `1..=h` from `u`, sorted.
    pub fn h_hop_neighborhood(&self, u: VertexId, h: usize) -> Result<Vec<VertexId>> {
        if !self.contains_vertex(u) {
            return Err(Error::UnknownVertex(u));
        }
        let mut seen = FxHashSet::default();
        seen.insert(u);
        let mut frontier = alloc::vec![u];
        for _ in 0..h {
            let mut next = Vec::new();
            for &x in &frontier {
                for w in self.neighbor_ids(x) {
                    if seen.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen.remove(&u);
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Every vertex set `H` with `|H| = k` and `{u, v} ⊆ H` whose induced
    /// subgraph, together with the edge `(u, v)`, is connected.
    ///
    /// Sets are sorted internally and yielded in lexicographic order. Whether
    /// `(u, v)` is currently an edge does not matter.
    pub fn candidate_vertex_sets(&self, u: VertexId, v: VertexId, k: usize) -> Vec<Vec<VertexId>> {
        let mut out = Vec::new();
        self.for_each_candidate(u, v, k, |h| out.push(h.to_vec()));
        out
    }

    /// Callback form of [`candidate_vertex_sets`](Self::candidate_vertex_sets),
    /// same sets in the same order.
    pub fn for_each_candidate<F: FnMut(&[VertexId])>(&self, u: VertexId, v: VertexId, k: usize, mut f: F) {
        if k < 2 || u == v {
            return;
        }
        if k == 2 {
            f(&sorted_pair(u, v));
            return;
        }
        let mut ext: Vec<VertexId> = self
            .neighbor_ids(u)
            .chain(self.neighbor_ids(v))
            .filter(|&w| w != u && w != v)
            .collect();
        ext.sort_unstable();
        ext.dedup();
        if k == 3 {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            for w in ext {
                let set = if w < a {
                    [w, a, b]
                } else if w < b {
                    [a, w, b]
                } else {
                    [a, b, w]
                };
                f(&set);
            }
            return;
        }
        let mut found: Vec<Vec<VertexId>> = Vec::new();
        let mut current = alloc::vec![u, v];
        let mut excluded = FxHashSet::default();
        self.extend_connected(&mut current, &ext, &mut excluded, k, &mut |set| {
            let mut s = set.to_vec();
            s.sort_unstable();
            found.push(s);
        });
        found.sort_unstable();
        for s in &found {
            f(s);
        }
    }

    /// Enumerates connected supersets of `current` of size `k`, each exactly
    /// once: every frontier vertex is either taken or excluded for the rest of
    /// the branch.
    fn extend_connected(
        &self,
        current: &mut Vec<VertexId>,
        ext: &[VertexId],
        excluded: &mut FxHashSet<VertexId>,
        k: usize,
        emit: &mut dyn FnMut(&[VertexId]),
    ) {
        if current.len() == k {
            emit(current);
            return;
        }
        let last_level = current.len() + 1 == k;
        let mut newly_excluded = Vec::new();
        for (i, &w) in ext.iter().enumerate() {
            current.push(w);
            if last_level {
                emit(current);
            } else {
                let rest = &ext[i + 1..];
                let mut next: Vec<VertexId> = rest.to_vec();
                for x in self.neighbor_ids(w) {
                    if !current.contains(&x)
                        && !excluded.contains(&x)
                        && !ext[..=i].contains(&x)
                        && !rest.contains(&x)
                        && !next.contains(&x)
                    {
                        next.push(x);
                    }
                }
                self.extend_connected(current, &next, excluded, k, emit);
            }
            current.pop();
            if excluded.insert(w) {
                newly_excluded.push(w);
            }
        }
        for w in newly_excluded {
            excluded.remove(&w);
        }
    }

    /// Every connected induced `k`-vertex set of the graph, once each (sorted
    /// ids, unspecified set order).
    pub fn for_each_connected_set<F: FnMut(&[VertexId])>(&self, k: usize, mut f: F) {
        if k == 0 {
            return;
        }
        let mut roots: Vec<VertexId> = self.vertex_ids().collect();
        roots.sort_unstable();
        let mut current = Vec::with_capacity(k);
        let mut sorted = Vec::with_capacity(k);
        for &root in &roots {
            current.push(root);
            // sets whose smallest vertex is `root`
            let ext: Vec<VertexId> = self.neighbor_ids(root).filter(|&w| w > root).collect();
            self.esu(root, &mut current, ext, k, &mut |set| {
                sorted.clear();
                sorted.extend_from_slice(set);
                sorted.sort_unstable();
                f(&sorted);
            });
            current.pop();
        }
    }

    fn esu(
        &self,
        root: VertexId,
        current: &mut Vec<VertexId>,
        mut ext: Vec<VertexId>,
        k: usize,
        emit: &mut dyn FnMut(&[VertexId]),
    ) {
        if current.len() == k {
            emit(current);
            return;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for x in self.neighbor_ids(w) {
                if x > root
                    && !current.contains(&x)
                    && !ext.contains(&x)
                    && !next.contains(&x)
                    && !current.iter().any(|&c| self.has_edge(c, x))
                {
                    next.push(x);
                }
            }
            current.push(w);
            self.esu(root, current, next, k, emit);
            current.pop();
        }
    }

    /// Number of connected induced `k`-vertex subgraphs, from scratch.
    pub fn count_connected_sets(&self, k: usize) -> u64 {
        let mut n = 0;
        self.for_each_connected_set(k, |_| n += 1);
        n
    }

    /// The subgraph induced by `vertices` (any order, no duplicates).
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<SubgraphInstance> {
        let mut ids: Vec<VertexId> = vertices.to_vec();
        ids.sort_unstable();
        let mut labels = Vec::with_capacity(ids.len());
        for &x in &ids {
            labels.push(self.vertex_label(x).ok_or(Error::UnknownVertex(x))?);
        }
        let mut edges = Vec::new();
        for i in 0..ids.len() {
            let Some(entry) = self.vertices.get(&ids[i]) else {
                continue;
            };
            for j in i + 1..ids.len() {
                if let Some(&l) = entry.adj.get(&ids[j]) {
                    edges.push((i as u8, j as u8, l));
                }
            }
        }
        Ok(SubgraphInstance::from_sorted(ids, labels, edges))
    }
}

#[inline]
fn sorted_pair(u: VertexId, v: VertexId) -> [VertexId; 2] {
    if u < v {
        [u, v]
    } else {
        [v, u]
    }
}

/// A `k`-vertex induced subgraph: sorted vertex ids, their labels, and the
/// labeled edges between them by position. Its pattern key is computed on
/// first use and cached.
#[derive(Debug, Clone)]
pub struct SubgraphInstance {
    vertices: Vec<VertexId>,
    labels: Vec<VertexLabel>,
    edges: Vec<(u8, u8, EdgeLabel)>,
    key: OnceCell<PatternKey>,
}

impl PartialEq for SubgraphInstance {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.labels == other.labels && self.edges == other.edges
    }
}

impl Eq for SubgraphInstance {}

impl SubgraphInstance {
    /// Builds an instance from arbitrary vertex ids and edges between them.
    pub fn new(
        vertices: &[(VertexId, VertexLabel)],
        edges: &[(VertexId, VertexId, EdgeLabel)],
    ) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable_by_key(|&(id, _)| id);
        if vs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidConfig("duplicate vertex in subgraph"));
        }
        let ids: Vec<VertexId> = vs.iter().map(|&(id, _)| id).collect();
        let labels = vs.iter().map(|&(_, l)| l).collect();
        let pos = |x: VertexId| ids.binary_search(&x).map_err(|_| Error::UnknownVertex(x));
        let mut es = Vec::with_capacity(edges.len());
        for &(a, b, l) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let (i, j) = (pos(a)?, pos(b)?);
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            es.push((i as u8, j as u8, l));
        }
        es.sort_unstable();
        if es.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidConfig("multi-edge in subgraph"));
        }
        Ok(Self::from_sorted(ids, labels, es))
    }

    pub(crate) fn from_sorted(
        vertices: Vec<VertexId>,
        labels: Vec<VertexLabel>,
        edges: Vec<(u8, u8, EdgeLabel)>,
    ) -> Self {
        SubgraphInstance {
            vertices,
            labels,
            edges,
            key: OnceCell::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    /// Sorted vertex ids; this is the instance's identity in a sample.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    /// Edges as `(i, j, label)` with `i < j` positions into [`vertices`](Self::vertices).
    pub fn edges(&self) -> &[(u8, u8, EdgeLabel)] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn key(&self) -> &PatternKey {
        self.key.get_or_init(|| canonical_key(self).expect("instance size within canonical bound"))
    }

    pub fn is_connected(&self) -> bool {
        let k = self.vertices.len();
        if k <= 1 {
            return true;
        }
        if k <= 64 {
            let mut adj = [0u64; 64];
            for &(i, j, _) in &self.edges {
                adj[i as usize] |= 1 << j;
                adj[j as usize] |= 1 << i;
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
            return seen == full;
        }
        let mut adj = alloc::vec![Vec::new(); k];
        for &(i, j, _) in &self.edges {
            adj[i as usize].push(j as usize);
            adj[j as usize].push(i as usize);
        }
        let mut seen = alloc::vec![false; k];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == k
    }

    /// Copy of this instance with the edge `(u, v)` added.
    pub fn with_edge(&self, u: VertexId, v: VertexId, label: EdgeLabel) -> Self {
        let (i, j) = self.pair_positions(u, v);
        let mut edges = self.edges.clone();
        if let Err(at) = edges.binary_search_by(|e| (e.0, e.1).cmp(&(i, j))) {
            edges.insert(at, (i, j, label));
        }
        Self::from_sorted(self.vertices.clone(), self.labels.clone(), edges)
    }

    /// Copy of this instance with the edge `(u, v)` removed.
    pub fn without_edge(&self, u: VertexId, v: VertexId) -> Self {
        let (i, j) = self.pair_positions(u, v);
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| (e.0, e.1) != (i, j))
            .collect();
        Self::from_sorted(self.vertices.clone(), self.labels.clone(), edges)
    }

    fn pair_positions(&self, u: VertexId, v: VertexId) -> (u8, u8) {
        let i = self.position(u).expect("endpoint in instance") as u8;
        let j = self.position(v).expect("endpoint in instance") as u8;
        if i < j {
            (i, j)
        } else {
            (j, i)
        }
    }
}
