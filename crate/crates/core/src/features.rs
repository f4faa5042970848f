//! Dataset-wide feature vocabularies and reciprocal-DFF feature vectors.
//!
//! Because super-nodes are labels, every simplex of a super-complex is a set
//! of labels, and a given label-set occurs at most once per graph. The
//! vocabulary of a dimension is the union of label-sets seen in any graph's
//! complex; each graph's feature vector has one slot per vocabulary entry,
//! holding the reciprocal of the simplex's diffusion Fréchet value when the
//! label-set is present and zero when it is absent. Reciprocals flip the
//! scale so that structurally central simplices (small DFF) score high.
//!
//! The pipeline is two-pass — vocabularies first, vectors second — so every
//! graph's columns line up exactly.

use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::diffusion::{DffValues, Variant};

/// Values at or below this floor vectorize to the cap `1/EPSILON`, keeping
/// "smaller DFF ⇒ larger feature" monotone when a dimension has one simplex
/// (its DFF is exactly zero).
pub const EPSILON: f64 = 1e-12;

/// Sorted union of the simplex label-sets of one dimension across a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVocabulary {
    pub dimension: usize,
    /// Distinct sorted `(dimension+1)`-tuples of label ids, lexicographic.
    pub entries: Vec<Vec<i64>>,
}

impl FeatureVocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, label_set: &[i64]) -> Option<usize> {
        self.entries
            .binary_search_by(|e| e.as_slice().cmp(label_set))
            .ok()
    }

    /// Column names for export: label ids prefixed with `L`, joined by `-`
    /// (`L3`, `L3-L7`, `L1-L4-L9`).
    pub fn column_names(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| {
                e.iter()
                    .map(|id| format!("L{id}"))
                    .collect::<Vec<_>>()
                    .join("-")
            })
            .collect()
    }
}

/// One graph's feature vector plus its identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub graph_id: usize,
    pub class_label: i64,
    pub values: Vec<f64>,
}

/// Feature vectors of a whole dataset for one `(variant, t)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub dataset: String,
    pub variant: Variant,
    pub t: f64,
    pub vocabulary: FeatureVocabulary,
    pub rows: Vec<FeatureRow>,
}

#[derive(Debug, Error)]
pub enum FeaturesError {
    #[error(
        "label-set {label_set:?} of graph {graph_id} is missing from the dimension-{dimension} \
         vocabulary; it was built from a different dataset pass"
    )]
    VocabularyMismatch {
        graph_id: usize,
        label_set: Vec<i64>,
        dimension: usize,
    },
}

/// Unions the dimension-`p` label-sets of every complex into a vocabulary.
pub fn build_vocabulary<'a, I>(complexes: I, p: usize) -> FeatureVocabulary
where
    I: IntoIterator<Item = &'a SimplicialComplex>,
{
    let mut entries: Vec<Vec<i64>> = complexes
        .into_iter()
        .flat_map(|c| c.simplices.get(p).into_iter().flatten().cloned())
        .collect();
    entries.sort();
    entries.dedup();
    FeatureVocabulary {
        dimension: p,
        entries,
    }
}

/// Turns one graph's DFF values into a feature row over `vocab`.
///
/// Present label-sets map to `1/F` (capped at `1/EPSILON` when `F ≤ EPSILON`);
/// absent ones stay zero.
pub fn vectorize(
    dff: &DffValues,
    complex: &SimplicialComplex,
    vocab: &FeatureVocabulary,
    graph_id: usize,
) -> Result<Vec<f64>, FeaturesError> {
    let p = vocab.dimension;
    let simplices = complex.simplices.get(p).map_or(&[][..], Vec::as_slice);
    assert_eq!(
        dff.values.len(),
        simplices.len(),
        "DFF values must cover dimension {p} of the same complex"
    );
    let mut row = vec![0.0; vocab.len()];
    for (idx, label_set) in simplices.iter().enumerate() {
        let slot =
            vocab
                .index_of(label_set)
                .ok_or_else(|| FeaturesError::VocabularyMismatch {
                    graph_id,
                    label_set: label_set.clone(),
                    dimension: p,
                })?;
        let f = dff.values[idx];
        row[slot] = if f > EPSILON { 1.0 / f } else { 1.0 / EPSILON };
    }
    Ok(row)
}

/// Serializes a feature matrix as CSV: `graph_id,class,<columns>` header and
/// one row per graph, floats in shortest round-trip form.
pub fn to_csv(matrix: &FeatureMatrix) -> String {
    let mut out = String::from("graph_id,class");
    for name in matrix.vocabulary.column_names() {
        out.push(',');
        out.push_str(&name);
    }
    out.push('\n');
    for row in &matrix.rows {
        out.push_str(&format!("{},{}", row.graph_id, row.class_label));
        for v in &row.values {
            out.push(',');
            out.push_str(&format!("{v}"));
        }
        out.push('\n');
    }
    out
}
