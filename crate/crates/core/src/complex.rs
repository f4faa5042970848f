//! Clique complexes of super-graphs up to dimension 2, with signed boundary
//! incidence matrices.
//!
//! Simplices are stored as strictly increasing tuples of super-node label
//! ids, each dimension lexicographically sorted, so every index into the
//! complex is deterministic. Incidence matrices carry the orientation induced
//! by ascending label order: the face omitting the `j`-th vertex of a simplex
//! gets sign `(-1)^j`. That choice makes the dimension-0 up Laplacian equal
//! the classical degree-minus-adjacency graph Laplacian.

use thiserror::Error;

use crate::supergraph::{self, SimplexWeights, SuperGraph};

/// Clique complex of a super-graph, with per-dimension simplex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    pub max_dim: usize,
    /// `simplices[p]` lists the `p`-simplices as sorted `(p+1)`-tuples of
    /// label ids, lexicographically ordered and duplicate-free.
    pub simplices: Vec<Vec<Vec<i64>>>,
    /// `weights[p]` holds one weight per simplex of `simplices[p]`.
    pub weights: Vec<SimplexWeights>,
}

impl SimplicialComplex {
    /// Number of `p`-simplices, zero for dimensions beyond `max_dim`.
    pub fn len(&self, p: usize) -> usize {
        self.simplices.get(p).map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len(0) == 0
    }

    /// Position of `simplex` in the lexicographic ordering of dimension `p`.
    pub fn index_of(&self, p: usize, simplex: &[i64]) -> Option<usize> {
        self.simplices
            .get(p)?
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }
}

/// Signed incidence matrix between dimensions `p+1` (rows) and `p` (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    /// Source dimension: rows are `(p+1)`-simplices, columns `p`-simplices.
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, sign)` triples with sign in `{-1, +1}`, sorted by row
    /// then column.
    pub triples: Vec<(usize, usize, i8)>,
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("incidence between dimensions {} and {p} needs max_dim ≥ {}, complex has {max_dim}", p + 1, p + 1)]
    DimensionUnavailable { p: usize, max_dim: usize },
}

/// Builds the clique complex of `sg` up to `max_dim` (at most 2): vertices,
/// edges, and all pairwise-adjacent label triples, with weights attached.
pub fn clique_complex(sg: &SuperGraph, max_dim: usize) -> SimplicialComplex {
    assert!(max_dim <= 2, "complexes are only built up to dimension 2");
    let mut simplices: Vec<Vec<Vec<i64>>> = Vec::with_capacity(max_dim + 1);

    simplices.push(sg.super_nodes.iter().map(|&v| vec![v]).collect());
    if max_dim >= 1 {
        simplices.push(sg.super_edges.iter().map(|&(a, b)| vec![a, b]).collect());
    }
    if max_dim >= 2 {
        simplices.push(enumerate_triangles(sg));
    }

    let weights = simplices
        .iter()
        .enumerate()
        .map(|(p, list)| {
            supergraph::simplex_weights(sg, list, p)
                .expect("enumerated simplices are cliques over known labels")
        })
        .collect();

    SimplicialComplex {
        max_dim,
        simplices,
        weights,
    }
}

/// All pairwise-adjacent label triples, lexicographically sorted: for each
/// edge `(u, v)` the sorted neighbor lists of `u` and `v` are intersected,
/// keeping only third vertices above `v`.
fn enumerate_triangles(sg: &SuperGraph) -> Vec<Vec<i64>> {
    let n = sg.num_nodes();
    let mut neighbors: Vec<Vec<i64>> = vec![Vec::new(); n];
    for &(a, b) in &sg.super_edges {
        let (ia, ib) = (
            sg.node_index(a).expect("edge endpoint is a super-node"),
            sg.node_index(b).expect("edge endpoint is a super-node"),
        );
        neighbors[ia].push(b);
        neighbors[ib].push(a);
    }
    // BTreeMap construction already yields ascending adjacency, but sorting
    // keeps this robust to hand-built SuperGraph values in tests.
    for list in &mut neighbors {
        list.sort_unstable();
    }

    let mut triangles = Vec::new();
    for &(u, v) in &sg.super_edges {
        let (iu, iv) = (sg.node_index(u).unwrap(), sg.node_index(v).unwrap());
        let (mut a, mut b) = (0, 0);
        let (nu, nv) = (&neighbors[iu], &neighbors[iv]);
        while a < nu.len() && b < nv.len() {
            match nu[a].cmp(&nv[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    if nu[a] > v {
                        triangles.push(vec![u, v, nu[a]]);
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
    }
    triangles
}

/// Builds the signed incidence matrix `D_p` between dimensions `p+1` and `p`.
///
/// Row `i` holds one `(-1)^j` entry per face of the `i`-th `(p+1)`-simplex,
/// where `j` is the position of the omitted vertex.
pub fn incidence_matrix(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<IncidenceMatrix, ComplexError> {
    if p + 1 > complex.max_dim {
        return Err(ComplexError::DimensionUnavailable {
            p,
            max_dim: complex.max_dim,
        });
    }
    let rows = complex.len(p + 1);
    let cols = complex.len(p);
    let mut triples = Vec::with_capacity(rows * (p + 2));
    let mut face = Vec::with_capacity(p + 1);
    for (row, simplex) in complex.simplices[p + 1].iter().enumerate() {
        let mut row_entries = Vec::with_capacity(p + 2);
        for j in 0..simplex.len() {
            face.clear();
            face.extend(simplex.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v));
            let col = complex
                .index_of(p, &face)
                .expect("closure: every face of a listed simplex is listed");
            let sign = if j % 2 == 0 { 1 } else { -1 };
            row_entries.push((row, col, sign));
        }
        row_entries.sort_unstable_by_key(|&(_, col, _)| col);
        triples.extend(row_entries);
    }
    Ok(IncidenceMatrix {
        p,
        rows,
        cols,
        triples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supergraph::compress;
    use crate::tudata::LabeledGraph;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Super-graph that is a plain unweighted graph on labels `0..n`.
    fn unit_supergraph(n: usize, edges: &[(i64, i64)]) -> SuperGraph {
        let mut sorted: Vec<(i64, i64)> = edges
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        sorted.dedup();
        SuperGraph {
            super_nodes: (0..n as i64).collect(),
            node_weights: vec![1; n],
            super_edges: sorted.clone(),
            edge_weights: vec![1; sorted.len()],
            dropped_selfloop_count: 0,
        }
    }

    #[test]
    fn single_edge_has_no_triangles() {
        let sg = unit_supergraph(2, &[(0, 1)]);
        let c = clique_complex(&sg, 2);
        assert_eq!((c.len(0), c.len(1), c.len(2)), (2, 1, 0));
    }

    #[test]
    fn complete_graph_on_four_nodes() {
        let sg = unit_supergraph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let c = clique_complex(&sg, 2);
        assert_eq!((c.len(0), c.len(1), c.len(2)), (4, 6, 4));
        assert_eq!(
            c.simplices[2],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
    }

    #[test]
    fn weights_are_attached_per_dimension() {
        let g = LabeledGraph {
            graph_id: 1,
            num_vertices: 4,
            edges: vec![(0, 1), (0, 2), (1, 2), (2, 3)],
            vertex_labels: vec![5, 6, 7, 5],
            class_label: 0,
        };
        let c = clique_complex(&compress(&g), 2);
        assert_eq!(c.weights[0].weights, vec![2.0, 1.0, 1.0]);
        assert_eq!(c.len(2), 1);
        assert_eq!(c.simplices[2][0], vec![5, 6, 7]);
        assert_eq!(c.weights[2].weights, vec![1.0]);
    }

    #[test]
    fn single_edge_incidence_signs() {
        let sg = unit_supergraph(2, &[(0, 1)]);
        let c = clique_complex(&sg, 1);
        let d0 = incidence_matrix(&c, 0).unwrap();
        assert_eq!((d0.rows, d0.cols), (1, 2));
        assert_eq!(d0.triples, vec![(0, 0, -1), (0, 1, 1)]);
    }

    #[test]
    fn single_triangle_incidence_signs() {
        let sg = unit_supergraph(3, &[(0, 1), (0, 2), (1, 2)]);
        let c = clique_complex(&sg, 2);
        let d1 = incidence_matrix(&c, 1).unwrap();
        assert_eq!((d1.rows, d1.cols), (1, 3));
        // Columns are [0,1], [0,2], [1,2]: omitted vertices 2, 1, 0.
        assert_eq!(d1.triples, vec![(0, 0, 1), (0, 1, -1), (0, 2, 1)]);
    }

    #[test]
    fn dimension_unavailable_is_reported() {
        let sg = unit_supergraph(3, &[(0, 1), (0, 2), (1, 2)]);
        let c = clique_complex(&sg, 1);
        match incidence_matrix(&c, 1) {
            Err(ComplexError::DimensionUnavailable { p: 1, max_dim: 1 }) => {}
            other => panic!("expected DimensionUnavailable, got {other:?}"),
        }
    }

    #[test]
    fn row_nonzero_counts_match_face_counts() {
        let sg = unit_supergraph(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]);
        let c = clique_complex(&sg, 2);
        for p in 0..=1 {
            let d = incidence_matrix(&c, p).unwrap();
            let mut per_row = vec![0usize; d.rows];
            for &(r, _, _) in &d.triples {
                per_row[r] += 1;
            }
            assert!(per_row.iter().all(|&k| k == p + 2));
        }
    }

    fn sparse_product(a: &IncidenceMatrix, b: &IncidenceMatrix) -> Vec<Vec<i64>> {
        assert_eq!(a.cols, b.rows);
        let mut out = vec![vec![0i64; b.cols]; a.rows];
        for &(i, k, s) in &a.triples {
            for &(k2, j, s2) in &b.triples {
                if k2 == k {
                    out[i][j] += s as i64 * s2 as i64;
                }
            }
        }
        out
    }

    #[test]
    fn boundary_of_boundary_vanishes_on_k4() {
        let sg = unit_supergraph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let c = clique_complex(&sg, 2);
        let d0 = incidence_matrix(&c, 0).unwrap();
        let d1 = incidence_matrix(&c, 1).unwrap();
        let product = sparse_product(&d1, &d0);
        assert!(product.iter().flatten().all(|&x| x == 0));
    }

    fn brute_force_triangles(sg: &SuperGraph) -> Vec<Vec<i64>> {
        let nodes = &sg.super_nodes;
        let mut out = Vec::new();
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                for k in (j + 1)..nodes.len() {
                    let (a, b, c) = (nodes[i], nodes[j], nodes[k]);
                    if sg.edge_weight(a, b).is_some()
                        && sg.edge_weight(a, c).is_some()
                        && sg.edge_weight(b, c).is_some()
                    {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn triangles_match_brute_force(
            n in 3usize..10,
            edge_seed in proptest::collection::vec((0usize..10, 0usize..10), 0..30),
        ) {
            let edges: Vec<(i64, i64)> = edge_seed
                .iter()
                .map(|&(a, b)| ((a % n) as i64, (b % n) as i64))
                .filter(|&(a, b)| a != b)
                .collect();
            let sg = unit_supergraph(n, &edges);
            let c = clique_complex(&sg, 2);
            prop_assert_eq!(&c.simplices[2], &brute_force_triangles(&sg));
        }

        #[test]
        fn boundary_of_boundary_vanishes(
            n in 3usize..9,
            edge_seed in proptest::collection::vec((0usize..9, 0usize..9), 0..24),
        ) {
            let edges: Vec<(i64, i64)> = edge_seed
                .iter()
                .map(|&(a, b)| ((a % n) as i64, (b % n) as i64))
                .filter(|&(a, b)| a != b)
                .collect();
            let sg = unit_supergraph(n, &edges);
            let c = clique_complex(&sg, 2);
            let d0 = incidence_matrix(&c, 0).unwrap();
            let d1 = incidence_matrix(&c, 1).unwrap();
            let product = sparse_product(&d1, &d0);
            prop_assert!(product.iter().flatten().all(|&x| x == 0));
        }

        #[test]
        fn closure_every_face_is_listed(
            n in 2usize..9,
            edge_seed in proptest::collection::vec((0usize..9, 0usize..9), 0..24),
        ) {
            let edges: Vec<(i64, i64)> = edge_seed
                .iter()
                .map(|&(a, b)| ((a % n) as i64, (b % n) as i64))
                .filter(|&(a, b)| a != b)
                .collect();
            let c = clique_complex(&unit_supergraph(n, &edges), 2);
            for p in 1..=2 {
                for simplex in &c.simplices[p] {
                    for j in 0..simplex.len() {
                        let face: Vec<i64> = simplex
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &v)| v)
                            .collect();
                        prop_assert!(c.index_of(p - 1, &face).is_some());
                    }
                }
            }
        }
    }
}
