use nalgebra::{DMatrix, SVD};

use super::{LinalgError, OrthonormalBasis};
use crate::Scalar;

/// Principal cosines together with the paired principal vectors.
///
/// Column `i` of `left` (in `U`) and of `right` (in `V`) realize `cosines[i]`.
#[derive(Debug, Clone)]
pub struct PrincipalVectors<T: Scalar> {
    pub cosines: Vec<T>,
    pub left: OrthonormalBasis<T>,
    pub right: OrthonormalBasis<T>,
}

fn check_ambient<T: Scalar>(u: &OrthonormalBasis<T>, v: &OrthonormalBasis<T>) -> Result<(), LinalgError> {
    if u.ambient_dim() == v.ambient_dim() {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected: u.ambient_dim(), found: v.ambient_dim() })
    }
}

pub fn principal_vectors<T: Scalar>(
    u: &OrthonormalBasis<T>,
    v: &OrthonormalBasis<T>,
) -> Result<PrincipalVectors<T>, LinalgError> {
    check_ambient(u, v)?;
    let n = u.ambient_dim();
    if u.is_trivial() || v.is_trivial() {
        return Ok(PrincipalVectors {
            cosines: Vec::new(),
            left: OrthonormalBasis::empty(n),
            right: OrthonormalBasis::empty(n),
        });
    }
    let cross = u.as_matrix().tr_mul(v.as_matrix());
    let svd = SVD::try_new(cross, true, true, T::default_epsilon(), 10_000).ok_or(LinalgError::SvdNoConvergence)?;
    let y: DMatrix<T> = svd.u.ok_or(LinalgError::SvdNoConvergence)?;
    let z: DMatrix<T> = svd.v_t.ok_or(LinalgError::SvdNoConvergence)?.transpose();
    let cosines = svd.singular_values.iter().map(|c| c.clamp(T::zero(), T::one())).collect();
    Ok(PrincipalVectors {
        cosines,
        left: OrthonormalBasis::from_columns_unchecked(u.as_matrix() * y),
        right: OrthonormalBasis::from_columns_unchecked(v.as_matrix() * z),
    })
}

/// Cosines of the principal angles between `span U` and `span V`, descending,
/// clamped into `[0, 1]`. Empty if either subspace is trivial.
pub fn principal_angle_cosines<T: Scalar>(
    u: &OrthonormalBasis<T>,
    v: &OrthonormalBasis<T>,
) -> Result<Vec<T>, LinalgError> {
    Ok(principal_vectors(u, v)?.cosines)
}

/// Cosine of the Friedrichs angle: the largest principal cosine once the
/// directions shared by both subspaces (cosine `>= 1 - T::INTERSECT_TOL`) are
/// removed. Returns zero when nothing is left, e.g. when one subspace contains
/// the other.
pub fn friedrichs_cosine<T: Scalar>(u: &OrthonormalBasis<T>, v: &OrthonormalBasis<T>) -> Result<T, LinalgError> {
    let threshold = T::one() - T::INTERSECT_TOL;
    let cosines = principal_angle_cosines(u, v)?;
    Ok(cosines.into_iter().find(|&c| c < threshold).unwrap_or_else(T::zero))
}

/// Orthonormal basis of `span U ∩ span V`, detected as the principal vectors
/// whose cosine is at least `1 - T::INTERSECT_TOL`.
pub fn subspace_intersection<T: Scalar>(
    u: &OrthonormalBasis<T>,
    v: &OrthonormalBasis<T>,
) -> Result<OrthonormalBasis<T>, LinalgError> {
    let threshold = T::one() - T::INTERSECT_TOL;
    let pv = principal_vectors(u, v)?;
    let shared = pv.cosines.iter().take_while(|&&c| c >= threshold).count();
    Ok(OrthonormalBasis::from_columns_unchecked(pv.left.as_matrix().columns(0, shared).into_owned()))
}
