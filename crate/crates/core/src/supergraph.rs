//! Compression of a labeled graph into a simplex-weighted super-graph.
//!
//! Super-nodes are the distinct vertex labels of the input graph, weighted by
//! how many vertices carry each label. A super-edge joins two distinct labels
//! whenever some original edge joins vertices with those labels, weighted by
//! the co-occurrence count. Original edges whose endpoints share a label would
//! form self-loops, which a 1-skeleton cannot hold; they are dropped and
//! counted.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

/// A labeled graph compressed over its distinct vertex labels.
///
/// All lists are sorted by label id, making downstream simplex enumeration
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuperGraph {
    /// Distinct vertex labels present in the graph, ascending.
    pub super_nodes: Vec<i64>,
    /// Occurrence count of each label, parallel to `super_nodes`.
    pub node_weights: Vec<u64>,
    /// Unordered label pairs `(a, b)` with `a < b`, lexicographically sorted.
    pub super_edges: Vec<(i64, i64)>,
    /// Co-occurrence count of each label pair, parallel to `super_edges`.
    pub edge_weights: Vec<u64>,
    /// Original edges whose endpoints shared a label, excluded from the edges.
    pub dropped_selfloop_count: usize,
}

/// Weights for the simplices of one dimension, in lexicographic simplex order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexWeights {
    pub dimension: usize,
    /// One positive weight per simplex: label frequency at dimension 0,
    /// co-occurrence count at dimension 1, minimum edge weight above that.
    pub weights: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum SuperGraphError {
    #[error("simplex {simplex:?} is not a clique: {a} and {b} share no super-edge")]
    NotAClique { simplex: Vec<i64>, a: i64, b: i64 },
    #[error("simplex {simplex:?} has {len} vertices but dimension {p} needs {expected}")]
    WrongArity {
        simplex: Vec<i64>,
        len: usize,
        p: usize,
        expected: usize,
    },
    #[error("label {0} is not a super-node of this graph")]
    UnknownLabel(i64),
}

impl SuperGraph {
    /// Index of `label` in `super_nodes`, if present.
    pub fn node_index(&self, label: i64) -> Option<usize> {
        self.super_nodes.binary_search(&label).ok()
    }

    /// Co-occurrence weight of the unordered pair `{a, b}`, if it is an edge.
    pub fn edge_weight(&self, a: i64, b: i64) -> Option<u64> {
        let key = (a.min(b), a.max(b));
        self.super_edges
            .binary_search(&key)
            .ok()
            .map(|k| self.edge_weights[k])
    }

    pub fn num_nodes(&self) -> usize {
        self.super_nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.super_edges.len()
    }
}

/// Compresses `graph` into its simplex-weighted super-graph.
///
/// An empty graph yields an empty super-graph.
pub fn compress(graph: &crate::tudata::LabeledGraph) -> SuperGraph {
    let mut node_counts: BTreeMap<i64, u64> = BTreeMap::new();
    for &label in &graph.vertex_labels {
        *node_counts.entry(label).or_insert(0) += 1;
    }

    let mut edge_counts: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    let mut dropped_selfloop_count = 0usize;
    for &(u, v) in &graph.edges {
        let (a, b) = (
            graph.vertex_labels[u as usize],
            graph.vertex_labels[v as usize],
        );
        if a == b {
            dropped_selfloop_count += 1;
        } else {
            *edge_counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }

    let (super_nodes, node_weights) = node_counts.into_iter().unzip();
    let (super_edges, edge_weights) = edge_counts.into_iter().unzip();
    SuperGraph {
        super_nodes,
        node_weights,
        super_edges,
        edge_weights,
        dropped_selfloop_count,
    }
}

/// Computes the weight of each listed `p`-simplex.
///
/// Every tuple must hold `p + 1` ascending label ids forming a clique in `sg`.
/// Dimension 0 takes the label frequency, dimension 1 the co-occurrence
/// count, and higher dimensions the minimum over the simplex's edge weights.
pub fn simplex_weights(
    sg: &SuperGraph,
    simplices: &[Vec<i64>],
    p: usize,
) -> Result<SimplexWeights, SuperGraphError> {
    let mut weights = Vec::with_capacity(simplices.len());
    for simplex in simplices {
        if simplex.len() != p + 1 {
            return Err(SuperGraphError::WrongArity {
                simplex: simplex.clone(),
                len: simplex.len(),
                p,
                expected: p + 1,
            });
        }
        let w = match p {
            0 => {
                let idx = sg
                    .node_index(simplex[0])
                    .ok_or(SuperGraphError::UnknownLabel(simplex[0]))?;
                sg.node_weights[idx]
            }
            _ => {
                let mut min_weight = u64::MAX;
                for i in 0..simplex.len() {
                    for j in (i + 1)..simplex.len() {
                        let w = sg.edge_weight(simplex[i], simplex[j]).ok_or_else(|| {
                            SuperGraphError::NotAClique {
                                simplex: simplex.clone(),
                                a: simplex[i],
                                b: simplex[j],
                            }
                        })?;
                        min_weight = min_weight.min(w);
                    }
                }
                min_weight
            }
        };
        weights.push(w as f64);
    }
    Ok(SimplexWeights {
        dimension: p,
        weights,
    })
}
