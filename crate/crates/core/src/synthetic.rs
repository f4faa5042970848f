//! Deterministic generators of small graphs, super-graphs, and datasets.
//!
//! These exist so the full pipeline — and its invariants — can be exercised
//! without any external data: random super-graphs for algebraic checks,
//! random complexes for spectral oracles, and a two-family labeled dataset
//! whose classes differ structurally enough for a classifier to separate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{clique_complex, SimplicialComplex};
use crate::supergraph::SuperGraph;
use crate::tudata::{LabeledGraph, LabeledGraphDataset};

/// A random super-graph with 1 to `max_nodes` super-nodes: ascending
/// distinct labels, positive node and edge weights, and an edge set drawn
/// with a random density. Satisfies every `SuperGraph` invariant by
/// construction, so it is fit for algebraic invariant sweeps.
pub fn random_supergraph(rng: &mut ChaCha8Rng, max_nodes: usize) -> SuperGraph {
    let n = rng.gen_range(1..=max_nodes);
    let mut super_nodes = Vec::with_capacity(n);
    let mut label = -1i64;
    for _ in 0..n {
        label += rng.gen_range(1..=3);
        super_nodes.push(label);
    }
    let node_weights = (0..n).map(|_| rng.gen_range(1..=9u64)).collect();

    let density = rng.gen_range(0.15..0.9);
    let mut super_edges = Vec::new();
    let mut edge_weights = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                super_edges.push((super_nodes[i], super_nodes[j]));
                edge_weights.push(rng.gen_range(1..=9u64));
            }
        }
    }
    SuperGraph {
        super_nodes,
        node_weights,
        super_edges,
        edge_weights,
        dropped_selfloop_count: 0,
    }
}

/// A random clique complex whose dimensions all hold at most `max_simplices`
/// simplices, built by resampling small super-graphs until one fits.
pub fn random_small_complex(rng: &mut ChaCha8Rng, max_simplices: usize) -> SimplicialComplex {
    for _ in 0..10_000 {
        let sg = random_supergraph(rng, 6);
        let complex = clique_complex(&sg, 2);
        if (0..=2).all(|p| complex.len(p) <= max_simplices) {
            return complex;
        }
    }
    unreachable!("a 6-node super-graph under cap {max_simplices} must appear quickly");
}

/// Builds a labeled graph from an edge list, normalizing edges to the
/// `u < v`, sorted, deduplicated form the parser guarantees.
fn graph_from_edges(
    graph_id: usize,
    num_vertices: usize,
    raw_edges: &[(u32, u32)],
    vertex_labels: Vec<i64>,
    class_label: i64,
) -> LabeledGraph {
    let mut edges: Vec<(u32, u32)> = raw_edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    LabeledGraph {
        graph_id,
        num_vertices,
        edges,
        vertex_labels,
        class_label,
    }
}

/// A dataset of two structural families over one label alphabet.
///
/// Class `1` graphs are labeled cycles — their super-graphs are label
/// cycles, sparse and triangle-free. Class `-1` graphs are complete —
/// their super-graphs are complete over the same labels, dense and
/// triangle-rich. Sizes and alphabet widths vary per graph, so rows are
/// not literal duplicates, but the families stay cleanly separable.
pub fn two_family_dataset(num_per_class: usize, seed: u64) -> LabeledGraphDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graphs = Vec::with_capacity(2 * num_per_class);
    for index in 0..2 * num_per_class {
        let class_label = if index % 2 == 0 { 1 } else { -1 };
        let alphabet = rng.gen_range(4..=6) as i64;
        // A vertex count that is a multiple of the alphabet keeps the cycle
        // family's label graph an exact cycle (no chord from the wrap edge),
        // hence triangle-free.
        let n = alphabet as usize * rng.gen_range(2..=3);
        let vertex_labels: Vec<i64> = (0..n).map(|v| v as i64 % alphabet).collect();
        let raw_edges: Vec<(u32, u32)> = if class_label == 1 {
            (0..n as u32).map(|v| (v, (v + 1) % n as u32)).collect()
        } else {
            (0..n as u32)
                .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
                .collect()
        };
        graphs.push(graph_from_edges(
            index + 1,
            n,
            &raw_edges,
            vertex_labels,
            class_label,
        ));
    }

    let mut label_universe: Vec<i64> = graphs
        .iter()
        .flat_map(|g| g.vertex_labels.iter().copied())
        .collect();
    label_universe.sort_unstable();
    label_universe.dedup();
    let mut class_universe: Vec<i64> = graphs.iter().map(|g| g.class_label).collect();
    class_universe.sort_unstable();
    class_universe.dedup();
    LabeledGraphDataset {
        name: "two-family".to_string(),
        graphs,
        label_universe,
        class_universe,
    }
}
