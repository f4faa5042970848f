//! End-to-end orchestration: dataset → super-graphs → complexes → spectra →
//! diffusion Fréchet values → feature matrices → cross-validated accuracy.
//!
//! Per-graph work is pure and runs in parallel; results are collected in
//! dataset order, and each eigendecomposition is computed once per graph and
//! reused across every diffusion scale. Outputs are bitwise identical for a
//! given input regardless of thread count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::clique_complex;
use crate::diffusion::{
    decompose, dff, probability_distribution, DffValues, DiffusionError, ProbabilityDistribution,
    SpectralDecomposition, Variant,
};
use crate::features::{build_vocabulary, vectorize, FeatureMatrix, FeatureRow, FeaturesError};
use crate::forest::{cross_validate, derive_seed, CvReport, ForestConfig, ForestError};
use crate::laplacian::{
    down_laplacian, full_laplacian, up_laplacian, LaplacianError, LaplacianKind,
};
use crate::supergraph::compress;
use crate::tudata::{LabeledGraph, LabeledGraphDataset};

/// RNG stream domain for CV repetitions; the forest module claims 1–3.
const DOMAIN_REPEAT: u64 = 4;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("graph {graph_id}: {source}")]
    Laplacian {
        graph_id: usize,
        #[source]
        source: LaplacianError,
    },
    #[error("graph {graph_id}: {source}")]
    Diffusion {
        graph_id: usize,
        #[source]
        source: DiffusionError,
    },
    #[error("graph {graph_id}: {source}")]
    Features {
        graph_id: usize,
        #[source]
        source: FeaturesError,
    },
    #[error(transparent)]
    Forest(#[from] ForestError),
}

/// One graph, fully prepared for any diffusion scale: its clique complex
/// plus the spectrum and simplex distribution of the variant's dimension
/// (absent when that dimension holds no simplices).
struct PreparedGraph {
    graph_id: usize,
    class_label: i64,
    complex: crate::complex::SimplicialComplex,
    spectral: Option<(SpectralDecomposition, ProbabilityDistribution)>,
}

fn prepare(graph: &LabeledGraph, variant: Variant) -> Result<PreparedGraph, PipelineError> {
    let graph_id = graph.graph_id;
    let complex = clique_complex(&compress(graph), 2);
    let p = variant.dimension();
    let spectral = if complex.len(p) == 0 {
        None
    } else {
        let laplacian = match variant.kind() {
            LaplacianKind::Up => up_laplacian(&complex, p),
            LaplacianKind::Down => down_laplacian(&complex, p),
            LaplacianKind::Full => full_laplacian(&complex, p),
        }
        .map_err(|source| PipelineError::Laplacian { graph_id, source })?;
        let spectrum =
            decompose(&laplacian).map_err(|source| PipelineError::Diffusion { graph_id, source })?;
        let rho = probability_distribution(&complex.weights[p])
            .map_err(|source| PipelineError::Diffusion { graph_id, source })?;
        Some((spectrum, rho))
    };
    Ok(PreparedGraph {
        graph_id,
        class_label: graph.class_label,
        complex,
        spectral,
    })
}

/// Extracts one feature matrix per scale in `t_values` for `variant`.
///
/// Two passes: the dimension-`p` vocabulary is unioned over the whole
/// dataset first, then every graph is vectorized against it, so all
/// matrices share identical columns. Graphs without dimension-`p`
/// simplices become all-zero rows (with one warning per extraction).
pub fn extract_features(
    dataset: &LabeledGraphDataset,
    variant: Variant,
    t_values: &[f64],
) -> Result<Vec<FeatureMatrix>, PipelineError> {
    assert!(
        t_values.iter().all(|&t| t > 0.0 && t.is_finite()),
        "diffusion scales must be positive and finite"
    );
    let prepared: Vec<PreparedGraph> = dataset
        .graphs
        .par_iter()
        .map(|g| prepare(g, variant))
        .collect::<Result<_, _>>()?;

    let p = variant.dimension();
    let empty = prepared.iter().filter(|g| g.complex.len(p) == 0).count();
    if empty > 0 {
        log::warn!(
            "{empty} of {} graphs in {} have no dimension-{p} simplices; \
             their {variant} feature rows are all zeros",
            prepared.len(),
            dataset.name
        );
    }
    let vocabulary = build_vocabulary(prepared.iter().map(|g| &g.complex), p);

    let mut matrices = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let rows: Vec<FeatureRow> = prepared
            .iter()
            .map(|g| {
                let values = match &g.spectral {
                    Some((spectrum, rho)) => dff(spectrum, rho, t, variant),
                    None => DffValues {
                        t,
                        variant,
                        values: Vec::new(),
                    },
                };
                let row = vectorize(&values, &g.complex, &vocabulary, g.graph_id).map_err(
                    |source| PipelineError::Features {
                        graph_id: g.graph_id,
                        source,
                    },
                )?;
                Ok(FeatureRow {
                    graph_id: g.graph_id,
                    class_label: g.class_label,
                    values: row,
                })
            })
            .collect::<Result<_, PipelineError>>()?;
        matrices.push(FeatureMatrix {
            dataset: dataset.name.clone(),
            variant,
            t,
            vocabulary: vocabulary.clone(),
            rows,
        });
    }
    Ok(matrices)
}

/// Accuracy of one (variant, t) grid cell, averaged over seeded
/// cross-validation repetitions.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub dataset: String,
    pub variant: Variant,
    pub t: f64,
    pub k: usize,
    pub seed: u64,
    pub repeats: usize,
    /// Mean of the repetitions' mean accuracies.
    pub mean_accuracy: f64,
    /// Spread: the fold std for a single repetition, else the population
    /// std of the repetition means.
    pub std_accuracy: f64,
    pub reports: Vec<CvReport>,
}

/// Cross-validates one feature matrix `repeats` times, reseeding folds and
/// forests per repetition from `(base.seed, repetition index)`.
pub fn classify_cell(
    matrix: &FeatureMatrix,
    k: usize,
    base: &ForestConfig,
    repeats: usize,
) -> Result<CellResult, PipelineError> {
    assert!(repeats >= 1, "at least one repetition required");
    let reports: Vec<CvReport> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let cfg = ForestConfig {
                seed: derive_seed(base.seed, DOMAIN_REPEAT, r as u64),
                ..base.clone()
            };
            cross_validate(matrix, k, &cfg)
        })
        .collect::<Result<_, _>>()?;

    let means: Vec<f64> = reports.iter().map(|r| r.mean_accuracy).collect();
    let mean_accuracy = means.iter().sum::<f64>() / means.len() as f64;
    let std_accuracy = if repeats == 1 {
        reports[0].std_accuracy
    } else {
        (means
            .iter()
            .map(|m| (m - mean_accuracy).powi(2))
            .sum::<f64>()
            / means.len() as f64)
            .sqrt()
    };
    Ok(CellResult {
        dataset: matrix.dataset.clone(),
        variant: matrix.variant,
        t: matrix.t,
        k,
        seed: base.seed,
        repeats,
        mean_accuracy,
        std_accuracy,
        reports,
    })
}

/// Size of one graph's super-graph clique complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexSummary {
    pub graph_id: usize,
    pub class_label: i64,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub dropped_selfloops: usize,
}

/// Summarizes every graph's super-graph complex, in dataset order.
pub fn summarize_complexes(dataset: &LabeledGraphDataset) -> Vec<ComplexSummary> {
    dataset
        .graphs
        .par_iter()
        .map(|g| {
            let sg = compress(g);
            let complex = clique_complex(&sg, 2);
            ComplexSummary {
                graph_id: g.graph_id,
                class_label: g.class_label,
                vertices: complex.len(0),
                edges: complex.len(1),
                triangles: complex.len(2),
                dropped_selfloops: sg.dropped_selfloop_count,
            }
        })
        .collect()
}
