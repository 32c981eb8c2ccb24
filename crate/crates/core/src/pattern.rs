//! Canonical pattern keys for small labeled subgraphs.
//!
//! A key is the lexicographically smallest code over all vertex orderings,
//! where the code of an ordering is
//!
//! ```text
//! [k, label(v0), .., label(vk-1), a(0,1), a(0,2), a(1,2), a(0,3), a(1,3), a(2,3), ..]
//! ```
//!
//! and `a(i,j)` is `0` when `vi` and `vj` are not adjacent, otherwise the edge
//! label plus one. Pairs are listed by their larger endpoint first so that a
//! partial ordering of the first `p` vertices fixes a prefix of the code,
//! which lets the search prune. Any minimal ordering lists vertex labels in
//! non-decreasing order, so only orderings that permute equal-label vertices
//! are searched.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeLabel, SubgraphInstance, VertexLabel};
use crate::FxHashSet;

/// Largest subgraph size accepted by [`canonical_key`].
pub const MAX_CANONICAL_K: usize = 8;
/// Largest subgraph size accepted by [`count_patterns`].
pub const MAX_COUNT_K: usize = 5;
/// Default cap on the number of labeled graphs [`count_patterns`] will canonicalize.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternKey(Vec<u32>);

impl PatternKey {
    pub fn k(&self) -> usize {
        self.0[0] as usize
    }

    pub fn vertex_labels(&self) -> &[u32] {
        &self.0[1..1 + self.k()]
    }

    /// Edges of the canonical representative as `(i, j, label)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize, EdgeLabel)> {
        let k = self.k();
        let adj = &self.0[1 + k..];
        let mut out = Vec::new();
        let mut idx = 0;
        for j in 1..k {
            for i in 0..j {
                if adj[idx] != 0 {
                    out.push((i, j, adj[idx] - 1));
                }
                idx += 1;
            }
        }
        out.sort_unstable();
        out
    }

    pub fn code(&self) -> &[u32] {
        &self.0
    }

    /// Stable text form, e.g. `k=3;V=0,0,1;E=(0,1,0),(1,2,0)`.
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for PatternKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};V=", self.k())?;
        for (i, l) in self.vertex_labels().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(";E=")?;
        for (n, (i, j, l)) in self.edges().into_iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "({i},{j},{l})")?;
        }
        Ok(())
    }
}

/// Canonical key of an instance; connectivity is not required.
pub fn canonical_key(inst: &SubgraphInstance) -> Result<PatternKey> {
    let k = inst.k();
    if k == 0 || k > MAX_CANONICAL_K {
        return Err(Error::UnsupportedK {
            k,
            min: 1,
            max: MAX_CANONICAL_K,
        });
    }
    if k == 3 {
        return Ok(canonical_key_k3(inst));
    }
    Ok(canonical_key_generic(inst))
}

fn adjacency_matrix(inst: &SubgraphInstance) -> [[u32; MAX_CANONICAL_K]; MAX_CANONICAL_K] {
    let mut adj = [[0u32; MAX_CANONICAL_K]; MAX_CANONICAL_K];
    for &(i, j, l) in inst.edges() {
        adj[i as usize][j as usize] = l + 1;
        adj[j as usize][i as usize] = l + 1;
    }
    adj
}

/// Allocation-free search over the six orderings of a 3-vertex instance.
fn canonical_key_k3(inst: &SubgraphInstance) -> PatternKey {
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let adj = adjacency_matrix(inst);
    let labels = inst.labels();
    let mut best = [u32::MAX; 7];
    for o in ORDERS {
        let code = [
            3,
            labels[o[0]],
            labels[o[1]],
            labels[o[2]],
            adj[o[0]][o[1]],
            adj[o[0]][o[2]],
            adj[o[1]][o[2]],
        ];
        if code < best {
            best = code;
        }
    }
    PatternKey(best.to_vec())
}

struct Search<'a> {
    k: usize,
    adj: [[u32; MAX_CANONICAL_K]; MAX_CANONICAL_K],
    labels: &'a [VertexLabel],
    sorted_labels: Vec<VertexLabel>,
    order: Vec<usize>,
    used: [bool; MAX_CANONICAL_K],
    current: Vec<u32>,
    best: Option<Vec<u32>>,
}

impl Search<'_> {
    /// `current` holds the adjacency code for positions `0..order.len()`.
    fn place(&mut self, p: usize) {
        if p == self.k {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        for x in 0..self.k {
            if self.used[x] || self.labels[x] != self.sorted_labels[p] {
                continue;
            }
            let mark = self.current.len();
            for i in 0..p {
                self.current.push(self.adj[self.order[i]][x]);
            }
            let prefix_ok = match &self.best {
                Some(b) => self.current[..] <= b[..self.current.len()],
                None => true,
            };
            if prefix_ok {
                self.used[x] = true;
                self.order.push(x);
                self.place(p + 1);
                self.order.pop();
                self.used[x] = false;
            }
            self.current.truncate(mark);
        }
    }
}

fn canonical_key_generic(inst: &SubgraphInstance) -> PatternKey {
    let k = inst.k();
    let mut sorted_labels = inst.labels().to_vec();
    sorted_labels.sort_unstable();
    let mut search = Search {
        k,
        adj: adjacency_matrix(inst),
        labels: inst.labels(),
        sorted_labels,
        order: Vec::with_capacity(k),
        used: [false; MAX_CANONICAL_K],
        current: Vec::with_capacity(k * (k - 1) / 2),
        best: None,
    };
    search.place(0);
    let mut code = Vec::with_capacity(1 + k + k * (k - 1) / 2);
    code.push(k as u32);
    code.extend_from_slice(&search.sorted_labels);
    code.extend(search.best.expect("at least one ordering"));
    PatternKey(code)
}

/// Class count `T_k` together with the parameters it was computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternUniverse {
    pub k: usize,
    pub num_vertex_labels: u32,
    pub num_edge_labels: u32,
    pub t_k: u64,
}

impl PatternUniverse {
    pub fn enumerate(k: usize, num_vertex_labels: u32, num_edge_labels: u32) -> Result<Self> {
        let t_k = count_patterns(k, num_vertex_labels, num_edge_labels, DEFAULT_ENUMERATION_BUDGET)?;
        Ok(PatternUniverse {
            k,
            num_vertex_labels,
            num_edge_labels,
            t_k,
        })
    }

    /// A universe with a caller-supplied class count.
    pub fn with_t_k(k: usize, num_vertex_labels: u32, num_edge_labels: u32, t_k: u64) -> Self {
        PatternUniverse {
            k,
            num_vertex_labels,
            num_edge_labels,
            t_k: t_k.max(1),
        }
    }
}

/// Number of connected `k`-vertex patterns over `num_vertex_labels` vertex
/// labels and `num_edge_labels` edge labels, by exhaustive enumeration.
///
/// Only non-decreasing vertex-label sequences are enumerated (every class has
/// such a representative). `budget` caps the number of labeled graphs
/// examined.
pub fn count_patterns(k: usize, num_vertex_labels: u32, num_edge_labels: u32, budget: u128) -> Result<u64> {
    if k == 0 || k > MAX_COUNT_K {
        return Err(Error::UnsupportedK {
            k,
            min: 1,
            max: MAX_COUNT_K,
        });
    }
    if num_vertex_labels == 0 || num_edge_labels == 0 {
        return Ok(0);
    }
    let pairs = k * (k - 1) / 2;
    let label_multisets = multiset_count(num_vertex_labels as u128, k as u128);
    let needed = (num_edge_labels as u128 + 1)
        .checked_pow(pairs as u32)
        .and_then(|a| a.checked_mul(label_multisets))
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::EnumerationBudget { needed, budget });
    }

    let pair_list: Vec<(u64, u64)> = (0..k as u64)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut seen = FxHashSet::default();
    let mut labels = alloc::vec![0u32; k];
    loop {
        let vertices: Vec<(u64, VertexLabel)> = labels.iter().enumerate().map(|(i, &l)| (i as u64, l)).collect();
        let mut adj = alloc::vec![0u32; pairs];
        loop {
            let edges: Vec<_> = pair_list
                .iter()
                .zip(&adj)
                .filter(|(_, &a)| a != 0)
                .map(|(&(i, j), &a)| (i, j, a - 1))
                .collect();
            let inst = SubgraphInstance::new(&vertices, &edges)?;
            if inst.is_connected() {
                seen.insert(canonical_key(&inst)?);
            }
            if !odometer(&mut adj, num_edge_labels + 1) {
                break;
            }
        }
        if !next_multiset(&mut labels, num_vertex_labels) {
            break;
        }
    }
    Ok(seen.len() as u64)
}

fn multiset_count(n: u128, k: u128) -> u128 {
    // C(n + k - 1, k)
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n + i) / (i + 1);
    }
    acc
}

fn odometer(digits: &mut [u32], base: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Next non-decreasing sequence over `0..n`, in lexicographic order.
fn next_multiset(seq: &mut [u32], n: u32) -> bool {
    let Some(i) = seq.iter().rposition(|&x| x + 1 < n) else {
        return false;
    };
    let v = seq[i] + 1;
    for x in &mut seq[i..] {
        *x = v;
    }
    true
}
