//! Dense linear-algebra substrate.
//!
//! Thin validated wrappers around `nalgebra` storage plus the handful of
//! factorization-backed operations the projection and certificate code needs:
//! SVD, numerical rank, pseudoinverse, orthonormal bases of the kernel and row
//! space, and principal angles between subspaces.

mod angles;
mod basis;
mod decomp;

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::Scalar;

pub use angles::{
    friedrichs_cosine, principal_angle_cosines, principal_vectors, subspace_intersection, PrincipalVectors,
};
pub use basis::OrthonormalBasis;
pub use decomp::{kernel_basis, numeric_rank, pseudoinverse, range_transpose_basis, rank_tolerance, svd_factor, Svd};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimensions must be positive (got {rows}x{cols})")]
    EmptyShape { rows: usize, cols: usize },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("basis vectors are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("singular value decomposition did not converge")]
    SvdNoConvergence,
}

fn check_finite<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> Result<(), LinalgError> {
    match values.into_iter().position(|v| !v.is_finite()) {
        Some(index) => Err(LinalgError::NonFinite { index }),
        None => Ok(()),
    }
}

/// Real vector with at least one entry and no NaN/Inf.
#[derive(Clone, PartialEq)]
pub struct DenseVector<T: Scalar>(DVector<T>);

impl<T: Scalar> DenseVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::EmptyShape { rows: 0, cols: 1 });
        }
        check_finite(&entries)?;
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn from_slice(entries: &[T]) -> Result<Self, LinalgError> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self(DVector::zeros(dim))
    }

    /// The `i`-th standard basis vector of `R^dim` (0-based).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = T::one();
        v
    }

    /// Wraps an `nalgebra` vector, validating the finiteness invariant.
    pub fn from_nalgebra(inner: DVector<T>) -> Result<Self, LinalgError> {
        if inner.is_empty() {
            return Err(LinalgError::EmptyShape { rows: 0, cols: 1 });
        }
        check_finite(inner.iter())?;
        Ok(Self(inner))
    }

    /// Internal constructor for results of arithmetic on already validated data.
    pub(crate) fn from_inner(inner: DVector<T>) -> Self {
        debug_assert!(inner.iter().all(|v| v.is_finite()));
        Self(inner)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        self.0.as_slice()
    }

    pub fn as_nalgebra(&self) -> &DVector<T> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DVector<T> {
        self.0
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.0.as_slice().to_vec()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> + '_ {
        self.0.iter()
    }

    pub fn norm(&self) -> T {
        self.0.norm()
    }

    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dot product of vectors with different dimensions");
        self.0.dot(&other.0)
    }

    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "distance between vectors with different dimensions");
        (&self.0 - &other.0).norm()
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::from_inner(&self.0 * factor)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        if norm > T::zero() {
            Some(self.scale(T::one() / norm))
        } else {
            None
        }
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<(), LinalgError> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch { expected, found: self.dim() })
        }
    }
}

impl<T: Scalar> fmt::Debug for DenseVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<T: Scalar> Index<usize> for DenseVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar> Add for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn add(self, rhs: Self) -> DenseVector<T> {
        DenseVector::from_inner(&self.0 + &rhs.0)
    }
}

impl<T: Scalar> Sub for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn sub(self, rhs: Self) -> DenseVector<T> {
        DenseVector::from_inner(&self.0 - &rhs.0)
    }
}

impl<T: Scalar> Mul<T> for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn mul(self, rhs: T) -> DenseVector<T> {
        self.scale(rhs)
    }
}

impl<T: Scalar> Neg for &DenseVector<T> {
    type Output = DenseVector<T>;

    fn neg(self) -> DenseVector<T> {
        DenseVector::from_inner(-&self.0)
    }
}

/// Real matrix with positive dimensions and finite entries.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T: Scalar>(DMatrix<T>);

impl<T: Scalar> DenseMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[T]) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        check_finite(entries)?;
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (row, values) in rows.iter().enumerate() {
            let values = values.as_ref();
            if values.len() != cols {
                return Err(LinalgError::RaggedRow { row, expected: cols, found: values.len() });
            }
            entries.extend_from_slice(values);
        }
        Self::from_row_major(rows.len(), cols, &entries)
    }

    pub fn from_nalgebra(inner: DMatrix<T>) -> Result<Self, LinalgError> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(LinalgError::EmptyShape { rows: inner.nrows(), cols: inner.ncols() });
        }
        check_finite(inner.iter())?;
        Ok(Self(inner))
    }

    pub(crate) fn from_inner(inner: DMatrix<T>) -> Self {
        debug_assert!(inner.iter().all(|v| v.is_finite()));
        Self(inner)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.0[(row, col)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<T> {
        &self.0
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.0.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn frobenius_norm(&self) -> T {
        self.0.norm()
    }

    pub fn mul_vector(&self, x: &DenseVector<T>) -> Result<DenseVector<T>, LinalgError> {
        x.check_dim(self.cols())?;
        Ok(DenseVector::from_inner(&self.0 * &x.0))
    }

    pub fn mul_matrix(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols() != other.rows() {
            return Err(LinalgError::DimensionMismatch { expected: self.cols(), found: other.rows() });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.0.shape(), other.0.shape());
        self.0.iter().zip(other.0.iter()).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }
}

impl<T: Scalar> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}
