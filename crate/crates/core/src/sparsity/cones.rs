//! Normal and tangent cones of the sparsity set at a point `a` in `A`.

use super::{require_sparse, support, IndexSet, SparsityConfig, SparsityError};
use crate::linalg::{DenseVector, OrthonormalBasis};
use crate::Scalar;

/// A normal cone that is either `{0}` or a linear subspace.
#[derive(Debug, Clone, PartialEq)]
pub enum NormalCone<T: Scalar> {
    Zero,
    Subspace(OrthonormalBasis<T>),
}

impl<T: Scalar> NormalCone<T> {
    pub fn dim(&self) -> usize {
        match self {
            NormalCone::Zero => 0,
            NormalCone::Subspace(b) => b.dim(),
        }
    }
}

/// Proximal normal cone of `A` at `a`: `supp(a)^⊥` when `||a||_0 = s`, `{0}`
/// otherwise.
pub fn proximal_normal<T: Scalar>(a: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<NormalCone<T>, SparsityError> {
    let supp = require_sparse(a, cfg)?;
    if supp.len() < cfg.s() {
        return Ok(NormalCone::Zero);
    }
    Ok(NormalCone::Subspace(OrthonormalBasis::coordinate(cfg.n(), supp.complement().members())))
}

/// Membership in the limiting (Mordukhovich) normal cone
/// `N_A(a) = {u : ||u||_0 <= n - s} ∩ supp(a)^⊥`.
pub fn mordukhovich_normal_contains<T: Scalar>(
    a: &DenseVector<T>,
    u: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<bool, SparsityError> {
    let supp_a = require_sparse(a, cfg)?;
    let supp_u = support(u, cfg)?;
    let disjoint = supp_u.members().iter().all(|&i| !supp_a.contains(i));
    let closed_form = supp_u.len() <= cfg.n() - cfg.s() && disjoint;
    // u ∈ A_J^⊥ for some J ⊇ I(a) with |J| = s: J must avoid I(u), so enough
    // free indices outside I(a) ∪ I(u) must remain.
    let free = cfg.n() - supp_a.union(&supp_u).len();
    let union_form = disjoint && free >= cfg.s() - supp_a.len();
    debug_assert_eq!(closed_form, union_form);
    Ok(closed_form)
}

/// Membership in the tangent cone
/// `T_A(a) = ⋃_{I(a) ⊆ J, |J| = s} A_J = supp(a) + {x : ||x||_0 <= s - ||a||_0}`.
pub fn tangent_cone_contains<T: Scalar>(
    a: &DenseVector<T>,
    v: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<bool, SparsityError> {
    let supp_a = require_sparse(a, cfg)?;
    let supp_v = support(v, cfg)?;
    let off_support = supp_v.members().iter().filter(|&&i| !supp_a.contains(i)).count();
    let sum_form = off_support <= cfg.s() - supp_a.len();
    let union_form = supp_a.union(&supp_v).len() <= cfg.s();
    debug_assert_eq!(sum_form, union_form);
    Ok(sum_form)
}

/// Smallest distance from `c` to a coordinate subspace `A_J` (`|J| = s`) that
/// does not contain `c`, which equals `min_{j in I(c)} |c_j|`.
pub fn min_escape_distance<T: Scalar>(c: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<T, SparsityError> {
    let supp = require_sparse(c, cfg)?;
    if cfg.s() == cfg.n() {
        return Err(SparsityError::FullSparsity);
    }
    supp.members().iter().map(|&j| c[j].abs()).reduce(|m, v| m.min(v)).ok_or(SparsityError::ZeroVector)
}

/// Coordinate subspaces `A_J` with `I(a) ⊆ J`, `|J| = s`, as index sets.
pub(crate) fn supersets_of_support(
    supp: &IndexSet,
    cfg_n: usize,
    s: usize,
    max_enum: usize,
) -> Result<Vec<IndexSet>, SparsityError> {
    let free = supp.complement();
    let need = s - supp.len();
    let count = super::binomial(free.len(), need);
    if count > max_enum as u64 {
        return Err(SparsityError::EnumerationCap { count, cap: max_enum });
    }
    Ok(super::k_subsets(free.members(), need)
        .into_iter()
        .map(|extra| {
            let mut members = supp.members().to_vec();
            members.extend(extra);
            members.sort_unstable();
            IndexSet::from_sorted(cfg_n, members)
        })
        .collect())
}
