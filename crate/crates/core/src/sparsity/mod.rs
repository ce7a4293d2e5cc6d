//! Geometry of the sparsity set `A = {x : ||x||_0 <= s}`.
//!
//! `A` is the union of the coordinate subspaces `A_J = span{e_j : j in J}`
//! over all `J` with `|J| = s`. Projection onto `A` is hard thresholding; it
//! is multivalued exactly when the `s`-th largest magnitude is tied.

mod cones;
mod index_set;

use thiserror::Error;

use crate::linalg::{DenseVector, LinalgError};
use crate::Scalar;

pub(crate) use cones::supersets_of_support;
pub use cones::{
    min_escape_distance, mordukhovich_normal_contains, proximal_normal, tangent_cone_contains, NormalCone,
};
pub use index_set::{binomial, k_subsets, IndexSet};

/// Default cap on how many index sets an enumeration may produce.
pub const DEFAULT_MAX_ENUM: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SparsityError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sparsity bound s = {s} must satisfy 1 <= s <= n = {n}")]
    InvalidSparsity { s: usize, n: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("vector has {nonzeros} nonzero entries, more than s = {s}")]
    NotInSparsitySet { nonzeros: usize, s: usize },
    #[error("the zero vector has an empty support")]
    ZeroVector,
    #[error("s = n: every coordinate subspace contains the point")]
    FullSparsity,
    #[error("enumeration would produce {count} index sets, above the cap of {cap}")]
    EnumerationCap { count: u64, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ambient dimension `n`, sparsity bound `s` and the magnitude at or below
/// which an entry counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityConfig<T: Scalar> {
    n: usize,
    s: usize,
    pub zero_tol: T,
    pub max_enum: usize,
}

impl<T: Scalar> SparsityConfig<T> {
    pub fn new(n: usize, s: usize) -> Result<Self, SparsityError> {
        if s == 0 || s > n {
            return Err(SparsityError::InvalidSparsity { s, n });
        }
        Ok(Self { n, s, zero_tol: T::zero(), max_enum: DEFAULT_MAX_ENUM })
    }

    pub fn with_zero_tol(mut self, zero_tol: T) -> Self {
        self.zero_tol = zero_tol;
        self
    }

    pub fn with_max_enum(mut self, max_enum: usize) -> Self {
        self.max_enum = max_enum;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    fn check(&self, x: &DenseVector<T>) -> Result<(), SparsityError> {
        if x.dim() == self.n {
            Ok(())
        } else {
            Err(SparsityError::DimensionMismatch { expected: self.n, found: x.dim() })
        }
    }
}

fn check_index_set<T: Scalar>(x: &DenseVector<T>, j: &IndexSet) -> Result<(), SparsityError> {
    if x.dim() == j.ambient_dim() {
        Ok(())
    } else {
        Err(SparsityError::DimensionMismatch { expected: j.ambient_dim(), found: x.dim() })
    }
}

/// `I(x) = {i : |x_i| > zero_tol}`.
pub fn support<T: Scalar>(x: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<IndexSet, SparsityError> {
    cfg.check(x)?;
    let members = x.iter().enumerate().filter(|(_, v)| v.abs() > cfg.zero_tol).map(|(i, _)| i).collect();
    Ok(IndexSet::from_sorted(cfg.n, members))
}

/// Number of entries counted as nonzero.
pub fn zero_norm<T: Scalar>(x: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<usize, SparsityError> {
    Ok(support(x, cfg)?.len())
}

/// Errors unless `x` lies in the sparsity set; returns its support.
pub(crate) fn require_sparse<T: Scalar>(
    x: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<IndexSet, SparsityError> {
    let supp = support(x, cfg)?;
    if supp.len() > cfg.s {
        return Err(SparsityError::NotInSparsitySet { nonzeros: supp.len(), s: cfg.s });
    }
    Ok(supp)
}

/// Indices ordered by decreasing magnitude, ties broken by increasing index.
fn magnitude_order<T: Scalar>(x: &DenseVector<T>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.dim()).collect();
    order.sort_by(|&i, &j| x[j].abs().partial_cmp(&x[i].abs()).expect("finite entries").then(i.cmp(&j)));
    order
}

/// Splits the index set into the entries strictly above the `s`-th largest
/// magnitude (forced into every top-`s` set) and the entries tied with it.
fn threshold_split<T: Scalar>(x: &DenseVector<T>, s: usize) -> (Vec<usize>, Vec<usize>) {
    let order = magnitude_order(x);
    let threshold = x[order[s - 1]].abs();
    let mut above: Vec<usize> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();
    for &i in &order {
        let m = x[i].abs();
        if m > threshold {
            above.push(i);
        } else if m == threshold {
            tied.push(i);
        }
    }
    above.sort_unstable();
    tied.sort_unstable();
    (above, tied)
}

/// The family of `s`-element index sets that collect `s` largest-magnitude
/// coordinates of `x`, in lexicographic order.
///
/// Errors with [`SparsityError::EnumerationCap`] if ties would produce more
/// than `cfg.max_enum` sets.
pub fn top_s_index_sets<T: Scalar>(
    x: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<Vec<IndexSet>, SparsityError> {
    cfg.check(x)?;
    let (above, tied) = threshold_split(x, cfg.s);
    let need = cfg.s - above.len();
    let count = binomial(tied.len(), need);
    if count > cfg.max_enum as u64 {
        return Err(SparsityError::EnumerationCap { count, cap: cfg.max_enum });
    }
    let mut sets: Vec<IndexSet> = k_subsets(&tied, need)
        .into_iter()
        .map(|extra| {
            let mut members = above.clone();
            members.extend(extra);
            members.sort_unstable();
            IndexSet::from_sorted(cfg.n, members)
        })
        .collect();
    sets.sort();
    Ok(sets)
}

/// Lexicographically smallest member of [`top_s_index_sets`], computed
/// without enumerating the ties.
pub fn top_s_lexicographic<T: Scalar>(x: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<IndexSet, SparsityError> {
    cfg.check(x)?;
    let mut members: Vec<usize> = magnitude_order(x).into_iter().take(cfg.s).collect();
    members.sort_unstable();
    Ok(IndexSet::from_sorted(cfg.n, members))
}

/// Orthogonal projection onto `A_J`: keeps the entries indexed by `J`.
pub fn project_onto_coordinate_subspace<T: Scalar>(
    x: &DenseVector<T>,
    j: &IndexSet,
) -> Result<DenseVector<T>, SparsityError> {
    check_index_set(x, j)?;
    let mut out = vec![T::zero(); x.dim()];
    for &i in j.members() {
        out[i] = x[i];
    }
    Ok(DenseVector::new(out)?)
}

/// `d_{A_J}(x) = sqrt(sum_{j not in J} x_j^2)`.
pub fn dist_to_coordinate_subspace<T: Scalar>(x: &DenseVector<T>, j: &IndexSet) -> Result<T, SparsityError> {
    check_index_set(x, j)?;
    let sum = x.iter().enumerate().filter(|(i, _)| !j.contains(*i)).fold(T::zero(), |acc, (_, &v)| acc + v * v);
    Ok(sum.sqrt())
}

/// Deterministic selection from the projection onto `A`: hard thresholding
/// onto the lexicographically smallest top-`s` index set.
pub fn project_sparse<T: Scalar>(x: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<DenseVector<T>, SparsityError> {
    let j = top_s_lexicographic(x, cfg)?;
    project_onto_coordinate_subspace(x, &j)
}

/// Every point of the (multivalued) projection onto `A`, deduplicated, in the
/// order of the generating index sets.
pub fn project_sparse_all<T: Scalar>(
    x: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<Vec<DenseVector<T>>, SparsityError> {
    let mut out: Vec<DenseVector<T>> = Vec::new();
    for j in top_s_index_sets(x, cfg)? {
        let y = project_onto_coordinate_subspace(x, &j)?;
        if !out.contains(&y) {
            out.push(y);
        }
    }
    Ok(out)
}

/// `d_A(x)`, evaluated on a top-`s` index set.
pub fn dist_to_sparse_set<T: Scalar>(x: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<T, SparsityError> {
    let j = top_s_lexicographic(x, cfg)?;
    dist_to_coordinate_subspace(x, &j)
}

/// Whether `y` belongs to the preimage of `a` under the projection onto `A`.
///
/// For `||a||_0 = s` this is: `y` agrees with `a` on `I(a)` and no entry of `y`
/// off `I(a)` exceeds the smallest magnitude of `a` on `I(a)`. For
/// `||a||_0 < s` the preimage is `{a}`. Comparisons use `T::EQ_TOL`.
pub fn preimage_contains<T: Scalar>(
    a: &DenseVector<T>,
    y: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<bool, SparsityError> {
    let supp = require_sparse(a, cfg)?;
    cfg.check(y)?;
    let tol = T::EQ_TOL;
    if supp.len() < cfg.s {
        return Ok(a.iter().zip(y.iter()).all(|(p, q)| (*p - *q).abs() <= tol));
    }
    let agrees = supp.members().iter().all(|&j| (a[j] - y[j]).abs() <= tol);
    let floor = supp.members().iter().map(|&j| a[j].abs()).reduce(|m, v| m.min(v)).expect("s >= 1");
    let off_max = (0..cfg.n).filter(|&k| !supp.contains(k)).map(|k| y[k].abs()).fold(T::zero(), |m, v| m.max(v));
    Ok(agrees && off_max <= floor + tol)
}
