use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NORM_TOL;
use crate::error::{invalid, Result};

/// A validated density operator: Hermitian, unit trace, positive semidefinite
/// (all within `1e-10`).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {dim}×{dim} entries, got {}",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, &entries))
    }

    /// Diagonal (classical) mixture over the computational basis.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let d = weights.len();
        let diag = nalgebra::DVector::from_iterator(
            d,
            weights.iter().map(|&w| Complex64::new(w, 0.0)),
        );
        Self::from_matrix(DMatrix::from_diagonal(&diag))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(invalid("density matrix must be square and nonempty"));
        }
        let herm_err = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > NORM_TOL {
            return Err(invalid(format!("matrix is not Hermitian (deviation {herm_err:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(invalid(format!("trace {tr} is not 1")));
        }
        let min_eig = hermitian_eigenvalues(&m)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -NORM_TOL {
            return Err(invalid(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// `½·‖ρ − σ‖₁`, via the eigenvalues of the Hermitian difference.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(invalid(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let diff = &self.m - &other.m;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>())
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}
