//! The affine constraint set `B = {x : Mx = p}`.

use thiserror::Error;

use crate::linalg::{
    kernel_basis, pseudoinverse, range_transpose_basis, DenseMatrix, DenseVector, LinalgError, OrthonormalBasis,
};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AffineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("inconsistent system: ||M M^+ p - p|| = {residual:e}")]
    InconsistentSystem { residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `B = {x : Mx = p}` with the pseudoinverse, kernel basis, row-space basis,
/// rank and minimum-norm solution `M^+ p` cached at construction.
#[derive(Debug, Clone)]
pub struct AffineSet<T: Scalar> {
    matrix: DenseMatrix<T>,
    rhs: DenseVector<T>,
    pinv: DenseMatrix<T>,
    kernel: OrthonormalBasis<T>,
    row_space: OrthonormalBasis<T>,
    anchor: DenseVector<T>,
}

impl<T: Scalar> AffineSet<T> {
    /// Fails with [`AffineError::InconsistentSystem`] when
    /// `||M M^+ p - p|| > T::FEAS_TOL * max(1, ||p||)`.
    pub fn new(matrix: DenseMatrix<T>, rhs: DenseVector<T>) -> Result<Self, AffineError> {
        if rhs.dim() != matrix.rows() {
            return Err(AffineError::DimensionMismatch { expected: matrix.rows(), found: rhs.dim() });
        }
        let pinv = pseudoinverse(&matrix)?;
        let kernel = kernel_basis(&matrix)?;
        let row_space = range_transpose_basis(&matrix)?;
        let anchor = pinv.mul_vector(&rhs)?;
        let residual = matrix.mul_vector(&anchor)?.distance(&rhs);
        if residual > T::FEAS_TOL * rhs.norm().max(T::one()) {
            return Err(AffineError::InconsistentSystem { residual: residual.to_f64_lossy() });
        }
        debug_assert_eq!(kernel.dim() + row_space.dim(), matrix.cols());
        Ok(Self { matrix, rhs, pinv, kernel, row_space, anchor })
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DenseVector<T> {
        &self.rhs
    }

    pub fn pseudoinverse(&self) -> &DenseMatrix<T> {
        &self.pinv
    }

    /// Orthonormal basis of `ker M`, the subspace parallel to `B`.
    pub fn kernel(&self) -> &OrthonormalBasis<T> {
        &self.kernel
    }

    /// Orthonormal basis of `ran M^T`, the normal space of `B`.
    pub fn row_space(&self) -> &OrthonormalBasis<T> {
        &self.row_space
    }

    pub fn rank(&self) -> usize {
        self.row_space.dim()
    }

    /// The minimum-norm point `M^+ p` of `B`.
    pub fn anchor(&self) -> &DenseVector<T> {
        &self.anchor
    }

    pub fn ambient_dim(&self) -> usize {
        self.matrix.cols()
    }

    /// `||Mx - p||`.
    pub fn residual_norm(&self, x: &DenseVector<T>) -> Result<T, AffineError> {
        self.check(x)?;
        Ok(self.matrix.mul_vector(x)?.distance(&self.rhs))
    }

    /// `P_B x = x - M^+ (Mx - p)`.
    pub fn project(&self, x: &DenseVector<T>) -> Result<DenseVector<T>, AffineError> {
        self.check(x)?;
        let mx = self.matrix.mul_vector(x)?;
        let correction = self.pinv.mul_vector(&(&mx - &self.rhs))?;
        Ok(x - &correction)
    }

    /// `||Mx - p|| <= tol * max(1, ||p||)`.
    pub fn contains(&self, x: &DenseVector<T>, tol: T) -> Result<bool, AffineError> {
        Ok(self.residual_norm(x)? <= tol * self.rhs.norm().max(T::one()))
    }

    fn check(&self, x: &DenseVector<T>) -> Result<(), AffineError> {
        if x.dim() == self.ambient_dim() {
            Ok(())
        } else {
            Err(AffineError::DimensionMismatch { expected: self.ambient_dim(), found: x.dim() })
        }
    }
}
