//! Graph classification via heat diffusion on simplex-weighted super-graphs.
//!
//! The pipeline has five stages:
//!
//! 1. [`tudata`] parses vertex-labeled benchmark graphs from the common
//!    four-file text layout.
//! 2. [`supergraph`] compresses each graph into a super-graph over its
//!    distinct vertex labels, with label counts as vertex weights and
//!    co-occurrence counts as edge weights.
//! 3. [`complex`] builds the clique complex of the super-graph up to
//!    triangles, with signed boundary incidence matrices.
//! 4. [`laplacian`] assembles combinatorial simplicial Laplacians, and
//!    [`diffusion`] runs heat diffusion on their spectra to produce a
//!    diffusion Fréchet value per simplex.
//! 5. [`features`] turns those values into fixed-width feature vectors over
//!    a dataset-wide simplex vocabulary, and [`forest`] classifies them with
//!    a seeded random forest under stratified cross-validation.
//!
//! [`pipeline`] wires the stages together; [`synthetic`] generates small
//! labeled graph families for exercising the full path without external data.

pub mod complex;
pub mod diffusion;
pub mod features;
pub mod forest;
pub mod laplacian;
pub mod pipeline;
pub mod supergraph;
pub mod synthetic;
pub mod tudata;

pub use complex::{IncidenceMatrix, SimplicialComplex};
pub use diffusion::{DffValues, ProbabilityDistribution, SpectralDecomposition, Variant};
pub use features::{FeatureMatrix, FeatureVocabulary};
pub use forest::{CvReport, Forest, ForestConfig};
pub use laplacian::{LaplacianKind, LaplacianMatrix};
pub use pipeline::{CellResult, ComplexSummary};
pub use supergraph::{SimplexWeights, SuperGraph};
pub use tudata::{LabeledGraph, LabeledGraphDataset};
