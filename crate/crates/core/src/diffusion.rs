//! Heat diffusion on Laplacian spectra: squared diffusion distances and the
//! diffusion Fréchet value of every simplex.
//!
//! For a Laplacian with eigenpairs `(λ_k, φ_k)` the squared diffusion
//! distance between simplices `i` and `j` at scale `t` is
//! `Σ_k e^{-2 λ_k t} (φ_k(i) - φ_k(j))²`, and the diffusion Fréchet value of
//! simplex `i` is the ρ-weighted mean of its squared distances to all
//! simplices. The evaluation here expands the square, so one spectrum serves
//! every `t` at `O(n²)` per scale, and clamps each per-mode contribution at
//! zero. Since `e^{-2λt}` never increases in `t` and the clamped
//! contributions are shared across scales, computed values are non-increasing
//! in `t` term by term — not merely up to round-off.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use thiserror::Error;

use crate::laplacian::{LaplacianKind, LaplacianMatrix};
use crate::supergraph::SimplexWeights;

/// The five (dimension, Laplacian kind) combinations the pipeline evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    VertexUp,
    EdgeDown,
    EdgeUp,
    EdgeBoth,
    TriangleDown,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::VertexUp,
        Variant::EdgeDown,
        Variant::EdgeUp,
        Variant::EdgeBoth,
        Variant::TriangleDown,
    ];

    /// Simplex dimension the variant diffuses over.
    pub fn dimension(self) -> usize {
        match self {
            Variant::VertexUp => 0,
            Variant::EdgeDown | Variant::EdgeUp | Variant::EdgeBoth => 1,
            Variant::TriangleDown => 2,
        }
    }

    /// Which Laplacian the variant uses at its dimension.
    pub fn kind(self) -> LaplacianKind {
        match self {
            Variant::VertexUp | Variant::EdgeUp => LaplacianKind::Up,
            Variant::EdgeDown | Variant::TriangleDown => LaplacianKind::Down,
            Variant::EdgeBoth => LaplacianKind::Full,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::VertexUp => "vertex-up",
            Variant::EdgeDown => "edge-down",
            Variant::EdgeUp => "edge-up",
            Variant::EdgeBoth => "edge-both",
            Variant::TriangleDown => "triangle-down",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for Variant {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown variant {s:?}; expected one of {}",
                    Variant::ALL.map(Variant::name).join(", ")
                )
            })
    }
}

/// Full eigendecomposition of a symmetric Laplacian, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Non-negative eigenvalues, ascending; round-off negatives clamped to 0.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: Array2<f64>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Normalized simplex weights: the chance of drawing each simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    pub rho: Vec<f64>,
}

/// Diffusion Fréchet values of every simplex of one dimension at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DffValues {
    pub t: f64,
    pub variant: Variant,
    /// One non-negative value per simplex, in complex order.
    pub values: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum DiffusionError {
    #[error("eigensolver failed to converge on a {n}×{n} {kind} Laplacian at dimension {p}")]
    ConvergenceFailure {
        n: usize,
        p: usize,
        kind: LaplacianKind,
    },
    #[error(
        "eigenvalue {value:.3e} below tolerance {tol:.3e} on a {kind} Laplacian at dimension {p}; \
         the operator is not positive semi-definite"
    )]
    NegativeSpectrum {
        value: f64,
        tol: f64,
        p: usize,
        kind: LaplacianKind,
    },
    #[error("cannot normalize weights of an empty dimension")]
    EmptyDimension,
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

/// Eigendecomposes a Laplacian into an ascending spectrum with orthonormal
/// eigenvectors.
///
/// The matrix is symmetrized as `(L + L') / 2` first (asymmetry beyond 1e-12
/// is a bug and panics). Tiny negative eigenvalues from round-off are clamped
/// to zero; anything below `-1e-10 · max(1, ‖L‖)` reports `NegativeSpectrum`.
pub fn decompose(l: &LaplacianMatrix) -> Result<SpectralDecomposition, DiffusionError> {
    let n = l.matrix.nrows();
    if n == 0 {
        return Ok(SpectralDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: Array2::zeros((0, 0)),
        });
    }

    let asymmetry = max_abs(&(&l.matrix - &l.matrix.t()));
    assert!(
        asymmetry < 1e-12,
        "Laplacian asymmetry {asymmetry:.3e} exceeds 1e-12; assembly is broken"
    );
    let symmetrized = (&l.matrix + &l.matrix.t()) * 0.5;
    let norm = symmetrized
        .outer_iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);

    let (raw_values, raw_vectors) =
        symmetrized
            .eigh(UPLO::Lower)
            .map_err(|_| DiffusionError::ConvergenceFailure {
                n,
                p: l.p,
                kind: l.kind,
            })?;

    // The backend already returns ascending eigenvalues; sorting again costs
    // nothing and removes the reliance on that contract.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw_values[a].total_cmp(&raw_values[b]));

    let tol = -1e-10 * norm.max(1.0);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Array2::zeros((n, n));
    for (slot, &k) in order.iter().enumerate() {
        let lambda = raw_values[k];
        if lambda < tol {
            return Err(DiffusionError::NegativeSpectrum {
                value: lambda,
                tol,
                p: l.p,
                kind: l.kind,
            });
        }
        eigenvalues.push(lambda.max(0.0));
        eigenvectors.column_mut(slot).assign(&raw_vectors.column(k));
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Normalizes simplex weights into a probability distribution.
pub fn probability_distribution(
    w: &SimplexWeights,
) -> Result<ProbabilityDistribution, DiffusionError> {
    if w.weights.is_empty() {
        return Err(DiffusionError::EmptyDimension);
    }
    let total: f64 = w.weights.iter().sum();
    Ok(ProbabilityDistribution {
        rho: w.weights.iter().map(|&z| z / total).collect(),
    })
}

/// Squared diffusion distance between simplices `i` and `j` at scale `t`.
pub fn diffusion_distance_sq(spec: &SpectralDecomposition, i: usize, j: usize, t: f64) -> f64 {
    let mut sum = 0.0;
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let diff = spec.eigenvectors[[i, k]] - spec.eigenvectors[[j, k]];
        sum += (-2.0 * lambda * t).exp() * diff * diff;
    }
    sum
}

/// Diffusion Fréchet value of every simplex: `F(i) = Σ_j d_t²(i, j) ρ_j`.
///
/// Expanding the square turns this into per-mode moments: with
/// `m_k = Σ_j ρ_j φ_k(j)` and `s_k = Σ_j ρ_j φ_k(j)²`,
/// `F(i) = Σ_k e^{-2 λ_k t} · max(0, φ_k(i)² - 2 φ_k(i) m_k + s_k)`.
/// Summation order is fixed, so repeated calls are bitwise identical.
pub fn dff(
    spec: &SpectralDecomposition,
    dist: &ProbabilityDistribution,
    t: f64,
    variant: Variant,
) -> DffValues {
    let n = spec.len();
    assert_eq!(dist.rho.len(), n, "distribution length must match spectrum");
    if n <= 1 {
        return DffValues {
            t,
            variant,
            values: vec![0.0; n],
        };
    }

    let decay: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&lambda| (-2.0 * lambda * t).exp())
        .collect();

    let mut first_moment = vec![0.0; n];
    let mut second_moment = vec![0.0; n];
    for (k, (m, s)) in first_moment.iter_mut().zip(&mut second_moment).enumerate() {
        for (j, &rho) in dist.rho.iter().enumerate() {
            let phi = spec.eigenvectors[[j, k]];
            *m += rho * phi;
            *s += rho * phi * phi;
        }
    }

    let values = (0..n)
        .map(|i| {
            let mut f = 0.0;
            for (k, &w) in decay.iter().enumerate() {
                let phi = spec.eigenvectors[[i, k]];
                let contribution =
                    (phi * phi - 2.0 * phi * first_moment[k] + second_moment[k]).max(0.0);
                f += w * contribution;
            }
            f
        })
        .collect();

    DffValues { t, variant, values }
}
