//! Synthetic labeled edge streams.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evofreq_core::{StreamEvent, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegreeModel {
    /// Every vertex pair equally likely.
    Uniform,
    /// Endpoints drawn with weight `(i + 1)^(-1 / (exponent - 1))`, giving a
    /// degree distribution with tail exponent about `exponent`.
    PowerLaw { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub vertices: u64,
    pub edges: u64,
    pub vertex_labels: u32,
    pub edge_labels: u32,
    pub model: DegreeModel,
    /// Fraction of all events that are deletions, in `[0, 0.5]`.
    pub delete_fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("{edges} edges do not fit on {vertices} vertices")]
    TooManyEdges { vertices: u64, edges: u64 },
    #[error("label alphabets must be non-empty")]
    NoLabels,
    #[error("delete fraction must lie in [0, 0.5]")]
    DeleteFraction,
    #[error("power-law exponent must exceed 1")]
    Exponent,
    #[error("could not place {edges} distinct edges under the power-law weights")]
    Saturated { edges: u64 },
}

/// Generates a stream: `edges` distinct insertions in random order, with
/// deletions of uniformly chosen live edges interleaved at random points.
/// The same parameters always give the same stream.
pub fn generate_stream(p: &GenParams) -> Result<Vec<StreamEvent>, GenError> {
    let max_edges = p.vertices.saturating_mul(p.vertices.saturating_sub(1)) / 2;
    if p.edges > max_edges {
        return Err(GenError::TooManyEdges {
            vertices: p.vertices,
            edges: p.edges,
        });
    }
    if p.vertex_labels == 0 || p.edge_labels == 0 {
        return Err(GenError::NoLabels);
    }
    if !(0.0..=0.5).contains(&p.delete_fraction) {
        return Err(GenError::DeleteFraction);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let labels: Vec<u32> = (0..p.vertices).map(|_| rng.random_range(0..p.vertex_labels)).collect();
    let mut pairs = match p.model {
        DegreeModel::Uniform => uniform_pairs(p.vertices, p.edges, max_edges, &mut rng),
        DegreeModel::PowerLaw { exponent } => {
            if !(exponent > 1.0) {
                return Err(GenError::Exponent);
            }
            power_law_pairs(p.vertices, p.edges, exponent, &mut rng)?
        }
    };
    pairs.shuffle(&mut rng);

    let deletes = if p.delete_fraction == 0.0 {
        0
    } else {
        ((p.delete_fraction * p.edges as f64) / (1.0 - p.delete_fraction)).round() as u64
    }
    .min(p.edges);
    let mut events = Vec::with_capacity((p.edges + deletes) as usize);
    let mut live: Vec<(VertexId, VertexId)> = Vec::new();
    let mut next_add = 0usize;
    let mut deletes_left = deletes;
    while next_add < pairs.len() || deletes_left > 0 {
        let adds_left = (pairs.len() - next_add) as u64;
        let delete = !live.is_empty() && deletes_left > 0 && rng.random_range(0..adds_left + deletes_left) < deletes_left;
        let seq = events.len() as u64;
        if delete {
            let i = rng.random_range(0..live.len());
            let (u, v) = live.swap_remove(i);
            events.push(StreamEvent::delete(seq, u, v));
            deletes_left -= 1;
        } else {
            let (u, v) = pairs[next_add];
            next_add += 1;
            let le = rng.random_range(0..p.edge_labels);
            events.push(StreamEvent::add(seq, u, labels[u as usize], v, labels[v as usize], le));
            live.push((u, v));
        }
    }
    Ok(events)
}

fn uniform_pairs(n: u64, m: u64, max_edges: u64, rng: &mut ChaCha8Rng) -> Vec<(VertexId, VertexId)> {
    if m * 2 > max_edges {
        let mut all: Vec<(VertexId, VertexId)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let (chosen, _) = all.partial_shuffle(rng, m as usize);
        return chosen.to_vec();
    }
    let mut seen = HashSet::with_capacity(m as usize);
    let mut out = Vec::with_capacity(m as usize);
    while (out.len() as u64) < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            out.push(e);
        }
    }
    out
}

fn power_law_pairs(n: u64, m: u64, exponent: f64, rng: &mut ChaCha8Rng) -> Result<Vec<(VertexId, VertexId)>, GenError> {
    if m == 0 {
        return Ok(Vec::new());
    }
    let alpha = 1.0 / (exponent - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-alpha)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    // vertex ids are shuffled so hubs are not simply the small ids
    let mut ids: Vec<VertexId> = (0..n).collect();
    ids.shuffle(rng);
    let mut seen = HashSet::with_capacity(m as usize);
    let mut out = Vec::with_capacity(m as usize);
    let budget = m.saturating_mul(200).max(10_000);
    let mut attempts = 0u64;
    while (out.len() as u64) < m {
        attempts += 1;
        if attempts > budget {
            return Err(GenError::Saturated { edges: m });
        }
        let u = ids[dist.sample(rng)];
        let v = ids[dist.sample(rng)];
        if u == v {
            continue;
        }
        let e = (u.min(v), u.max(v));
        if seen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}
