//! Independent reference implementations used as test oracles.
//!
//! Nothing here calls the enumeration or canonicalization code under test:
//! connected sets come from plain combinations plus BFS and classes from a
//! minimum over all vertex permutations.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};

use evofreq_core::{EventOp, PatternKey, StreamEvent};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Plain mirror of the evolving graph: dense adjacency over vertices in
/// order of first appearance, `0` for no edge, else edge label + 1.
#[derive(Debug, Clone, Default)]
pub struct Mirror {
    pub index: HashMap<u64, usize>,
    pub ids: Vec<u64>,
    pub labels: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
    pub degree: Vec<usize>,
    memo: HashMap<Vec<u32>, Vec<u32>>,
}

impl Mirror {
    fn slot(&mut self, v: u64, label: u32) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.ids.len();
        self.index.insert(v, i);
        self.ids.push(v);
        self.labels.push(label);
        self.degree.push(0);
        for row in &mut self.adj {
            row.push(0);
        }
        self.adj.push(vec![0; i + 1]);
        i
    }

    /// Registers `v` without edges.
    pub fn add_vertex(&mut self, v: u64, label: u32) {
        self.slot(v, label);
    }

    pub fn apply(&mut self, e: &StreamEvent) {
        match e.op {
            EventOp::Add {
                label_u,
                label_v,
                label_e,
            } => {
                let (a, b) = (self.slot(e.u, label_u), self.slot(e.v, label_v));
                if self.adj[a][b] == 0 {
                    self.adj[a][b] = label_e + 1;
                    self.adj[b][a] = label_e + 1;
                    self.degree[a] += 1;
                    self.degree[b] += 1;
                }
            }
            EventOp::Delete => {
                if let (Some(&a), Some(&b)) = (self.index.get(&e.u), self.index.get(&e.v)) {
                    if self.adj[a][b] != 0 {
                        self.adj[a][b] = 0;
                        self.adj[b][a] = 0;
                        self.degree[a] -= 1;
                        self.degree[b] -= 1;
                    }
                }
            }
        }
    }

    pub fn has_edge(&self, u: u64, v: u64) -> bool {
        match (self.index.get(&u), self.index.get(&v)) {
            (Some(&a), Some(&b)) => self.adj[a][b] != 0,
            _ => false,
        }
    }

    fn connected_idx(&self, set: &[usize]) -> bool {
        let mut seen = vec![false; set.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut n = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..set.len() {
                if !seen[j] && self.adj[set[i]][set[j]] != 0 {
                    seen[j] = true;
                    n += 1;
                    queue.push_back(j);
                }
            }
        }
        n == set.len()
    }

    fn for_each_connected(&self, k: usize, f: &mut dyn FnMut(&[usize])) {
        // isolated vertices cannot be part of a connected set of two or more
        let live: Vec<usize> = (0..self.ids.len()).filter(|&i| k == 1 || self.degree[i] > 0).collect();
        let mut pick = Vec::with_capacity(k);
        combos(&live, k, 0, &mut pick, &mut |s| {
            if self.connected_idx(s) {
                f(s);
            }
        });
    }

    /// Whether the subgraph induced by `set`, plus the pair `extra` if given,
    /// is connected.
    pub fn connected_with(&self, set: &[u64], extra: Option<(u64, u64)>) -> bool {
        let mut seen = vec![false; set.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..set.len() {
                let linked = self.has_edge(set[i], set[j])
                    || extra.is_some_and(|(a, b)| (a, b) == (set[i], set[j]) || (b, a) == (set[i], set[j]));
                if !seen[j] && linked {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&x| x)
    }

    /// Vertices at distance `1..=h` from `u`, by breadth-first search.
    pub fn within_hops(&self, u: u64, h: usize) -> Vec<u64> {
        let start = self.index[&u];
        let mut dist = vec![usize::MAX; self.ids.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..self.ids.len() {
                if self.adj[i][j] != 0 && dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        let mut out: Vec<u64> = (0..self.ids.len())
            .filter(|&j| dist[j] >= 1 && dist[j] <= h)
            .map(|j| self.ids[j])
            .collect();
        out.sort_unstable();
        out
    }

    /// All `k`-subsets of known vertices, as sorted ids.
    pub fn subsets(&self, k: usize) -> Vec<Vec<u64>> {
        let all: Vec<usize> = (0..self.ids.len()).collect();
        let mut out = Vec::new();
        let mut pick = Vec::new();
        combos(&all, k, 0, &mut pick, &mut |s| {
            let mut ids: Vec<u64> = s.iter().map(|&i| self.ids[i]).collect();
            ids.sort_unstable();
            out.push(ids);
        });
        out.sort();
        out
    }

    /// Every connected induced `k`-set as sorted vertex ids, by trying all combinations.
    pub fn connected_sets(&self, k: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        self.for_each_connected(k, &mut |s| {
            let mut ids: Vec<u64> = s.iter().map(|&i| self.ids[i]).collect();
            ids.sort_unstable();
            out.push(ids);
        });
        out.sort();
        out
    }

    pub fn count_connected(&self, k: usize) -> u64 {
        let mut n = 0;
        self.for_each_connected(k, &mut |_| n += 1);
        n
    }

    /// Connected vertex triples, as sorted ids: every vertex with every pair
    /// of its neighbors, deduplicated.
    pub fn connected_triples(&self) -> std::collections::BTreeSet<[u64; 3]> {
        let mut out = std::collections::BTreeSet::new();
        for c in 0..self.ids.len() {
            let nbrs: Vec<usize> = (0..self.ids.len()).filter(|&j| self.adj[c][j] != 0).collect();
            for (x, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[x + 1..] {
                    let mut t = [self.ids[c], self.ids[a], self.ids[b]];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
        out
    }

    /// Class counts of all connected `k`-subgraphs.
    pub fn class_counts(&mut self, k: usize) -> BTreeMap<Vec<u32>, u64> {
        let mut raw: HashMap<Vec<u32>, u64> = HashMap::new();
        self.for_each_connected(k, &mut |s| {
            let mut code: Vec<u32> = s.iter().map(|&i| self.labels[i]).collect();
            for i in 0..k {
                for j in i + 1..k {
                    code.push(self.adj[s[i]][s[j]]);
                }
            }
            *raw.entry(code).or_insert(0) += 1;
        });
        let mut out = BTreeMap::new();
        for (code, c) in raw {
            let class = self
                .memo
                .entry(code.clone())
                .or_insert_with(|| canonical_from_code(&code, k))
                .clone();
            *out.entry(class).or_insert(0) += c;
        }
        out
    }

    /// Oracle class of the subgraph induced by `set` (vertex ids).
    pub fn class_of(&self, set: &[u64]) -> Vec<u32> {
        let idx: Vec<usize> = set.iter().map(|v| self.index[v]).collect();
        let labels: Vec<u32> = idx.iter().map(|&i| self.labels[i]).collect();
        let adj: Vec<Vec<u32>> = idx.iter().map(|&i| idx.iter().map(|&j| self.adj[i][j]).collect()).collect();
        brute_canonical(&labels, &adj)
    }
}

fn canonical_from_code(code: &[u32], k: usize) -> Vec<u32> {
    let labels = code[..k].to_vec();
    let mut adj = vec![vec![0u32; k]; k];
    let mut at = k;
    for i in 0..k {
        for j in i + 1..k {
            adj[i][j] = code[at];
            adj[j][i] = code[at];
            at += 1;
        }
    }
    brute_canonical(&labels, &adj)
}

fn combos(ids: &[usize], k: usize, start: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for i in start..ids.len() {
        if ids.len() - i < k - pick.len() {
            break;
        }
        pick.push(ids[i]);
        combos(ids, k, i + 1, pick, f);
        pick.pop();
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum of `labels ++ adjacency` over all relabelings; `adj[i][j]` is 0
/// for no edge, else edge label + 1.
pub fn brute_canonical(labels: &[u32], adj: &[Vec<u32>]) -> Vec<u32> {
    let k = labels.len();
    permutations(k)
        .into_iter()
        .map(|p| {
            let mut code: Vec<u32> = p.iter().map(|&i| labels[i]).collect();
            for i in 0..k {
                for j in i + 1..k {
                    code.push(adj[p[i]][p[j]]);
                }
            }
            code
        })
        .min()
        .unwrap()
}

/// The oracle class of a library pattern key.
pub fn class_of_key(key: &PatternKey) -> Vec<u32> {
    let labels = key.vertex_labels().to_vec();
    let k = labels.len();
    let mut adj = vec![vec![0u32; k]; k];
    for (i, j, l) in key.edges() {
        adj[i][j] = l + 1;
        adj[j][i] = l + 1;
    }
    brute_canonical(&labels, &adj)
}

/// Library class counts translated into oracle classes.
pub fn translate(counts: &BTreeMap<PatternKey, u64>) -> BTreeMap<Vec<u32>, u64> {
    let mut out = BTreeMap::new();
    for (k, &c) in counts {
        *out.entry(class_of_key(k)).or_insert(0) += c;
    }
    out
}

/// Pearson statistic over bins, merging adjacent bins until each expects at
/// least `min_expected`; returns `(statistic, degrees of freedom, p-value)`.
pub fn chi_square(observed: &[f64], expected: &[f64], min_expected: f64) -> (f64, usize, f64) {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob;
        e += ex;
        if e >= min_expected {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    let stat: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let df = bins.len().saturating_sub(1).max(1);
    let p = ChiSquared::new(df as f64).unwrap().sf(stat);
    (stat, df, p)
}

/// Upper tail of a chi-square statistic with `df` degrees of freedom.
pub fn chi_square_sf(stat: f64, df: usize) -> f64 {
    ChiSquared::new(df as f64).unwrap().sf(stat)
}

/// Reservoir skip pmf after `n` arrivals with capacity `m`, up to `max_z`.
pub fn rs_pmf(n: u64, m: u64, max_z: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_z + 1);
    let mut survive = 1.0;
    for z in 0..=max_z {
        let accept = if n < m { 1.0 } else { m as f64 / (n + z as u64 + 1) as f64 };
        out.push(survive * accept);
        survive *= 1.0 - accept;
    }
    out
}

/// Random-pairing skip pmf with `c1` of `d` pending deletions on the sample side.
pub fn rp_pmf(c1: u64, d: u64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut survive = 1.0;
    for z in 0..=(d - c1) {
        let accept = c1 as f64 / (d - z) as f64;
        out.push(survive * accept);
        survive *= 1.0 - accept;
    }
    out
}
