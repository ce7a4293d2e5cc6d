use nalgebra::DMatrix;

use super::{DenseVector, LinalgError};
use crate::Scalar;

/// Orthonormal basis of a linear subspace of `R^n`, stored as the columns of
/// an `n x k` matrix. `k = 0` represents the trivial subspace `{0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis<T: Scalar> {
    ambient_dim: usize,
    columns: DMatrix<T>,
}

impl<T: Scalar> OrthonormalBasis<T> {
    /// Basis of `{0}` in `R^n`.
    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, columns: DMatrix::zeros(ambient_dim, 0) }
    }

    /// Wraps the columns of `columns`, checking `Q^T Q = I` within `T::ORTH_TOL`.
    pub fn from_columns(columns: DMatrix<T>) -> Result<Self, LinalgError> {
        let ambient_dim = columns.nrows();
        if columns.ncols() > ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: ambient_dim, found: columns.ncols() });
        }
        if let Some(index) = columns.iter().position(|v| !v.is_finite()) {
            return Err(LinalgError::NonFinite { index });
        }
        let basis = Self { ambient_dim, columns };
        let deviation = basis.orthonormality_defect();
        if deviation > T::ORTH_TOL {
            return Err(LinalgError::NotOrthonormal { deviation: deviation.to_f64_lossy() });
        }
        Ok(basis)
    }

    /// Orthonormalizes `vectors` (modified Gram-Schmidt, dropping dependent ones).
    pub fn spanning(ambient_dim: usize, vectors: &[DenseVector<T>]) -> Result<Self, LinalgError> {
        let mut kept: Vec<nalgebra::DVector<T>> = Vec::new();
        for v in vectors {
            v.check_dim(ambient_dim)?;
            let mut w = v.as_nalgebra().clone();
            let scale = w.norm();
            for _ in 0..2 {
                for q in &kept {
                    let proj = q.dot(&w);
                    w.axpy(-proj, q, T::one());
                }
            }
            let norm = w.norm();
            if norm > T::lit(1e3) * T::machine_epsilon() * scale.max(T::one()) {
                kept.push(w / norm);
            }
        }
        let columns = if kept.is_empty() { DMatrix::zeros(ambient_dim, 0) } else { DMatrix::from_columns(&kept) };
        Self::from_columns(columns)
    }

    /// `span{e_j : j in indices}` (0-based indices).
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut columns = DMatrix::zeros(ambient_dim, indices.len());
        for (col, &j) in indices.iter().enumerate() {
            columns[(j, col)] = T::one();
        }
        Self { ambient_dim, columns }
    }

    pub(crate) fn from_columns_unchecked(columns: DMatrix<T>) -> Self {
        Self { ambient_dim: columns.nrows(), columns }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the spanned subspace.
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn as_matrix(&self) -> &DMatrix<T> {
        &self.columns
    }

    pub fn vectors(&self) -> Vec<DenseVector<T>> {
        self.columns.column_iter().map(|c| DenseVector::from_inner(c.into_owned())).collect()
    }

    /// `max |<q_i, q_j> - delta_ij|`.
    pub fn orthonormality_defect(&self) -> T {
        let gram = self.columns.transpose() * &self.columns;
        let mut worst = T::zero();
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((gram[(i, j)] - target).abs());
            }
        }
        worst
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &DenseVector<T>) -> Result<DenseVector<T>, LinalgError> {
        x.check_dim(self.ambient_dim)?;
        let coeffs = self.columns.tr_mul(x.as_nalgebra());
        Ok(DenseVector::from_inner(&self.columns * coeffs))
    }

    /// Distance from `x` to the subspace.
    pub fn distance(&self, x: &DenseVector<T>) -> Result<T, LinalgError> {
        let p = self.project(x)?;
        Ok(x.distance(&p))
    }

    /// Largest `|<q, other_q>|` over pairs of basis vectors, zero if either is trivial.
    pub fn max_cross_inner_product(&self, other: &Self) -> T {
        let cross = self.columns.tr_mul(&other.columns);
        cross.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }
}
