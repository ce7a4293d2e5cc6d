use nalgebra::{DMatrix, SVD};

use super::{DenseMatrix, LinalgError, OrthonormalBasis};
use crate::Scalar;

const SVD_MAX_ITERS: usize = 10_000;

/// Thin singular value decomposition `A = U diag(sigma) V^T`.
///
/// `left` is `m x k`, `right` is `n x k` with `k = min(m, n)`; singular values
/// are nonnegative and sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd<T: Scalar> {
    pub left: OrthonormalBasis<T>,
    pub singular_values: Vec<T>,
    pub right: OrthonormalBasis<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn reconstruct(&self) -> DMatrix<T> {
        let u = self.left.as_matrix();
        let v = self.right.as_matrix();
        let mut scaled = u.clone();
        for (j, sigma) in self.singular_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*sigma);
        }
        scaled * v.transpose()
    }
}

fn raw_svd<T: Scalar>(a: DMatrix<T>) -> Result<SVD<T, nalgebra::Dyn, nalgebra::Dyn>, LinalgError> {
    let svd = SVD::try_new(a, true, true, T::default_epsilon(), SVD_MAX_ITERS).ok_or(LinalgError::SvdNoConvergence)?;
    if svd.singular_values.iter().any(|s| !s.is_finite()) {
        return Err(LinalgError::SvdNoConvergence);
    }
    Ok(svd)
}

pub fn svd_factor<T: Scalar>(a: &DenseMatrix<T>) -> Result<Svd<T>, LinalgError> {
    let svd = raw_svd(a.as_nalgebra().clone())?;
    let u = svd.u.ok_or(LinalgError::SvdNoConvergence)?;
    let v = svd.v_t.ok_or(LinalgError::SvdNoConvergence)?.transpose();
    Ok(Svd {
        left: OrthonormalBasis::from_columns_unchecked(u),
        singular_values: svd.singular_values.iter().map(|s| s.max(T::zero())).collect(),
        right: OrthonormalBasis::from_columns_unchecked(v),
    })
}

/// `max(m, n) * eps * sigma_max`.
pub fn rank_tolerance<T: Scalar>(singular_values: &[T], rows: usize, cols: usize) -> T {
    let sigma_max = singular_values.first().copied().unwrap_or_else(T::zero);
    T::lit(rows.max(cols) as f64) * T::machine_epsilon() * sigma_max
}

/// Number of singular values above [`rank_tolerance`]; zero when `sigma_max = 0`.
pub fn numeric_rank<T: Scalar>(singular_values: &[T], rows: usize, cols: usize) -> usize {
    let tol = rank_tolerance(singular_values, rows, cols);
    singular_values.iter().filter(|&&s| s > tol).count()
}

pub fn pseudoinverse<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>, LinalgError> {
    let svd = svd_factor(a)?;
    let rank = numeric_rank(&svd.singular_values, a.rows(), a.cols());
    let u = svd.left.as_matrix();
    let v = svd.right.as_matrix();
    let mut pinv = DMatrix::zeros(a.cols(), a.rows());
    for j in 0..rank {
        let inv = T::one() / svd.singular_values[j];
        pinv += v.column(j) * u.column(j).transpose() * inv;
    }
    Ok(DenseMatrix::from_inner(pinv))
}

/// Full `n x n` right singular factor together with the numerical rank.
///
/// Wide matrices are padded with zero rows so the factorization is square and
/// the trailing right singular vectors span the kernel.
fn full_right_factor<T: Scalar>(a: &DenseMatrix<T>) -> Result<(DMatrix<T>, usize), LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a.as_nalgebra());
        p
    } else {
        a.as_nalgebra().clone()
    };
    let svd = raw_svd(padded)?;
    let sigma: Vec<T> = svd.singular_values.iter().map(|s| s.max(T::zero())).collect();
    let rank = numeric_rank(&sigma[..m.min(n)], m, n);
    let v = svd.v_t.ok_or(LinalgError::SvdNoConvergence)?.transpose();
    Ok((v, rank))
}

/// Orthonormal basis of `{x : Ax = 0}`.
pub fn kernel_basis<T: Scalar>(a: &DenseMatrix<T>) -> Result<OrthonormalBasis<T>, LinalgError> {
    let (v, rank) = full_right_factor(a)?;
    let n = a.cols();
    Ok(OrthonormalBasis::from_columns_unchecked(v.columns(rank, n - rank).into_owned()))
}

/// Orthonormal basis of `ran A^T` (the row space).
pub fn range_transpose_basis<T: Scalar>(a: &DenseMatrix<T>) -> Result<OrthonormalBasis<T>, LinalgError> {
    let (v, rank) = full_right_factor(a)?;
    Ok(OrthonormalBasis::from_columns_unchecked(v.columns(0, rank).into_owned()))
}
