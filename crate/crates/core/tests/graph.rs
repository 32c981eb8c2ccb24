mod common;

use common::Mirror;
use evofreq_core::{DynamicLabeledGraph, StreamEvent};
use proptest::prelude::*;

const VERTICES: u64 = 10;

fn label(v: u64) -> u32 {
    (v % 3) as u32
}

/// Random add/delete operations over a small vertex range, applied to both
/// the graph and the mirror.
fn ops() -> impl Strategy<Value = Vec<(bool, u64, u64, u32)>> {
    prop::collection::vec((prop::bool::weighted(0.7), 0..VERTICES, 0..VERTICES, 0..2u32), 1..60)
}

fn build(ops: &[(bool, u64, u64, u32)]) -> (DynamicLabeledGraph, Mirror) {
    let mut g = DynamicLabeledGraph::new();
    let mut m = Mirror::default();
    for (i, &(add, u, v, le)) in ops.iter().enumerate() {
        if u == v {
            continue;
        }
        let ev = if add {
            g.add_edge(u, label(u), v, label(v), le).unwrap();
            StreamEvent::add(i as u64, u, label(u), v, label(v), le)
        } else {
            g.delete_edge(u, v);
            StreamEvent::delete(i as u64, u, v)
        };
        m.apply(&ev);
    }
    (g, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjacency_matches_mirror(ops in ops()) {
        let (g, m) = build(&ops);
        let mut edges = 0;
        for a in 0..VERTICES {
            for b in 0..VERTICES {
                prop_assert_eq!(g.has_edge(a, b), g.has_edge(b, a));
                prop_assert_eq!(g.edge_label(a, b), g.edge_label(b, a));
                prop_assert_eq!(g.has_edge(a, b), m.has_edge(a, b));
                if a < b && g.has_edge(a, b) {
                    edges += 1;
                }
            }
            if let Some(&i) = m.index.get(&a) {
                prop_assert_eq!(g.degree(a), m.degree[i]);
                prop_assert_eq!(g.vertex_label(a), Some(label(a)));
            }
        }
        prop_assert_eq!(g.edge_count(), edges);
        prop_assert_eq!(g.sorted_edges().len(), edges);
    }

    #[test]
    fn hop_neighborhoods_match_bfs(ops in ops(), h in 0usize..5) {
        let (g, m) = build(&ops);
        for &u in &m.ids {
            prop_assert_eq!(g.h_hop_neighborhood(u, h).unwrap(), m.within_hops(u, h));
        }
    }

    #[test]
    fn candidates_match_brute_force(ops in ops(), k in 2usize..5, a in 0..VERTICES, b in 0..VERTICES) {
        let (g, m) = build(&ops);
        prop_assume!(a != b && m.index.contains_key(&a) && m.index.contains_key(&b));
        let expected: Vec<Vec<u64>> = m
            .subsets(k)
            .into_iter()
            .filter(|s| s.contains(&a) && s.contains(&b) && m.connected_with(s, Some((a, b))))
            .collect();
        prop_assert_eq!(g.candidate_vertex_sets(a, b, k), expected);
    }

    #[test]
    fn connected_sets_match_brute_force(ops in ops(), k in 1usize..5) {
        let (g, m) = build(&ops);
        let mut got = Vec::new();
        g.for_each_connected_set(k, |s| got.push(s.to_vec()));
        got.sort();
        let expected: Vec<Vec<u64>> = m.subsets(k).into_iter().filter(|s| m.connected_with(s, None)).collect();
        prop_assert_eq!(g.count_connected_sets(k), expected.len() as u64);
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn induced_subgraphs_carry_graph_edges(ops in ops()) {
        let (g, m) = build(&ops);
        for set in m.subsets(3) {
            let inst = g.induced_subgraph(&set).unwrap();
            prop_assert_eq!(inst.vertices(), &set[..]);
            prop_assert_eq!(inst.is_connected(), m.connected_with(&set, None));
            for &(i, j, l) in inst.edges() {
                prop_assert_eq!(g.edge_label(set[i as usize], set[j as usize]), Some(l));
            }
            let pairs = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j)));
            prop_assert_eq!(inst.edges().len(), pairs.filter(|&(i, j)| g.has_edge(set[i], set[j])).count());
        }
    }
}

#[test]
fn label_conflicts_and_self_loops_are_rejected() {
    let mut g = DynamicLabeledGraph::new();
    g.add_edge(1, 0, 2, 1, 0).unwrap();
    assert!(g.add_edge(1, 5, 3, 0, 0).is_err());
    assert!(g.add_edge(4, 0, 4, 0, 0).is_err());
    assert!(g.add_vertex(2, 0).is_err());
    assert_eq!(g.edge_count(), 1);
}
