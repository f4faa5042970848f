//! Up, down, and full combinatorial Laplacians of a simplicial complex.
//!
//! All simplex weight matrices are the identity here: weights influence only
//! the probability distribution used by the diffusion stage, never the
//! operator itself. That keeps every Laplacian exactly symmetric and positive
//! semi-definite, with integer entries assembled straight from the signed
//! incidence triples:
//!
//! * up Laplacian at dimension `p`: `D_p' · D_p` (boundary from above),
//! * down Laplacian at dimension `p`: `D_{p-1} · D_{p-1}'` (boundary below),
//! * full Laplacian: their sum.

use ndarray::Array2;
use thiserror::Error;

use crate::complex::{incidence_matrix, IncidenceMatrix, SimplicialComplex};

/// Which of the three operators a matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaplacianKind {
    Up,
    Down,
    Full,
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LaplacianKind::Up => "up",
            LaplacianKind::Down => "down",
            LaplacianKind::Full => "full",
        })
    }
}

/// A dense symmetric Laplacian over the `p`-simplices of one complex.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub p: usize,
    pub kind: LaplacianKind,
    /// Symmetric `n_p × n_p` matrix; entries are exact small integers.
    pub matrix: Array2<f64>,
}

#[derive(Debug, Error)]
pub enum LaplacianError {
    #[error("{kind} Laplacian at dimension {p} is undefined: {reason}")]
    DimensionUnavailable {
        p: usize,
        kind: LaplacianKind,
        reason: String,
    },
}

/// `D_p' · D_p`, accumulated column-against-column within each incidence row.
fn gram_of_rows(d: &IncidenceMatrix) -> Array2<f64> {
    let n = d.cols;
    let mut m = Array2::zeros((n, n));
    let mut row_start = 0;
    while row_start < d.triples.len() {
        let row = d.triples[row_start].0;
        let mut row_end = row_start;
        while row_end < d.triples.len() && d.triples[row_end].0 == row {
            row_end += 1;
        }
        let entries = &d.triples[row_start..row_end];
        for &(_, ci, si) in entries {
            for &(_, cj, sj) in entries {
                m[[ci, cj]] += (si as i32 * sj as i32) as f64;
            }
        }
        row_start = row_end;
    }
    m
}

/// `D_{p-1} · D_{p-1}'`, accumulated row-against-row within each column.
fn gram_of_cols(d: &IncidenceMatrix) -> Array2<f64> {
    let n = d.rows;
    let mut m = Array2::zeros((n, n));
    let mut by_col: Vec<Vec<(usize, i8)>> = vec![Vec::new(); d.cols];
    for &(r, c, s) in &d.triples {
        by_col[c].push((r, s));
    }
    for entries in &by_col {
        for &(ri, si) in entries {
            for &(rj, sj) in entries {
                m[[ri, rj]] += (si as i32 * sj as i32) as f64;
            }
        }
    }
    m
}

/// The up Laplacian at dimension `p`, built from the simplices one dimension
/// above. An empty dimension above yields the zero matrix.
pub fn up_laplacian(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<LaplacianMatrix, LaplacianError> {
    let d = incidence_matrix(complex, p).map_err(|_| LaplacianError::DimensionUnavailable {
        p,
        kind: LaplacianKind::Up,
        reason: format!(
            "needs dimension {} but the complex stops at {}",
            p + 1,
            complex.max_dim
        ),
    })?;
    Ok(LaplacianMatrix {
        p,
        kind: LaplacianKind::Up,
        matrix: gram_of_rows(&d),
    })
}

/// The down Laplacian at dimension `p ≥ 1`, built from the boundary into
/// dimension `p - 1`. Vertices (`p = 0`) have no down Laplacian.
pub fn down_laplacian(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<LaplacianMatrix, LaplacianError> {
    if p == 0 {
        return Err(LaplacianError::DimensionUnavailable {
            p,
            kind: LaplacianKind::Down,
            reason: "vertices have no boundary".to_string(),
        });
    }
    let d =
        incidence_matrix(complex, p - 1).map_err(|_| LaplacianError::DimensionUnavailable {
            p,
            kind: LaplacianKind::Down,
            reason: format!("the complex stops below dimension {p}"),
        })?;
    Ok(LaplacianMatrix {
        p,
        kind: LaplacianKind::Down,
        matrix: gram_of_cols(&d),
    })
}

/// The full Laplacian at dimension `p ≥ 1`: up plus down, element-wise.
pub fn full_laplacian(
    complex: &SimplicialComplex,
    p: usize,
) -> Result<LaplacianMatrix, LaplacianError> {
    let up = up_laplacian(complex, p).map_err(|e| retag(e, LaplacianKind::Full))?;
    let down = down_laplacian(complex, p).map_err(|e| retag(e, LaplacianKind::Full))?;
    Ok(LaplacianMatrix {
        p,
        kind: LaplacianKind::Full,
        matrix: up.matrix + down.matrix,
    })
}

fn retag(e: LaplacianError, kind: LaplacianKind) -> LaplacianError {
    match e {
        LaplacianError::DimensionUnavailable { p, reason, .. } => {
            LaplacianError::DimensionUnavailable { p, kind, reason }
        }
    }
}
