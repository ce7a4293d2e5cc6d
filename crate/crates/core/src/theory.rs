//! A priori local convergence certificates for alternating projections
//! between the sparsity set and an affine subspace.
//!
//! Near a solution `c`, the sparsity set coincides with the union of the
//! coordinate subspaces `A_J` that contain `c`. Each of them meets `B` in an
//! affine subspace, so the regularity of the pair is governed by the
//! Friedrichs angles between `A_J` and `ker M`. The largest of their cosines,
//! `theta_bar`, gives the rate `theta_bar^2`; the smallest nonzero magnitude
//! of `c` fixes how far from `c` the local picture stays valid.
//!
//! The regularity hypotheses on the collections of subspaces hold
//! automatically (subspaces are convex), so nothing is computed for them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::affine::{AffineError, AffineSet};
use crate::linalg::{
    friedrichs_cosine, numeric_rank, principal_angle_cosines, subspace_intersection, svd_factor, DenseMatrix,
    DenseVector, LinalgError, OrthonormalBasis,
};
use crate::solver::MapTrace;
use crate::sparsity::{
    min_escape_distance, project_onto_coordinate_subspace, require_sparse, supersets_of_support, IndexSet,
    SparsityConfig, SparsityError,
};
use crate::Scalar;

/// Relative margin below `delta_bar` used when no `delta` is supplied.
pub const DEFAULT_DELTA_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("reference point is not in A ∩ B: {nonzeros} nonzeros (s = {s}), ||Mc - p|| = {affine_residual:e}")]
    NotFeasible { nonzeros: usize, s: usize, affine_residual: f64 },
    #[error("delta = {delta} must lie in (0, {delta_bar}]")]
    DeltaOutOfRange { delta: f64, delta_bar: f64 },
    #[error("vector is not of unit length (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("the two lines coincide")]
    SameLine,
    #[error("the trace does not contain the iterates")]
    TraceNotRecorded,
    #[error("need at least one sample")]
    NoSamples,
    #[error(transparent)]
    Sparsity(#[from] SparsityError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Friedrichs cosine between `A_J` and `B` for one support `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportAngle<T: Scalar> {
    pub support: IndexSet,
    pub cosine: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCertificate<T: Scalar> {
    pub c: DenseVector<T>,
    /// `max_J c(A_J, B)` over the supports containing `c`.
    pub theta_bar: T,
    /// `min_{j in I(c)} |c_j| / 3`.
    pub delta_bar: T,
    pub delta: T,
    /// `(1 - theta_bar) delta / (6 (2 - theta_bar))`.
    pub basin_radius: T,
    /// `theta_bar^2`.
    pub rate_bound: T,
    pub per_support: Vec<SupportAngle<T>>,
    /// `T_A(c) + T_B(c) = R^n`.
    pub transversal: bool,
    /// `N_A(c) ∩ (-N_B(c)) = {0}`.
    pub classical_cq_holds: bool,
    pub enumerated_supports: usize,
}

impl<T: Scalar> ConvergenceCertificate<T> {
    /// `delta / (2 - theta_bar) * theta_bar^(2(k-1))`, the bound on
    /// `max(||a_k - c'||, ||b_k - c'||)` for `k >= 1`, where `c'` is the limit.
    pub fn envelope_bound(&self, k: usize) -> T {
        assert!(k >= 1, "the envelope starts at k = 1");
        let exponent = i32::try_from(k - 1).unwrap_or(i32::MAX);
        self.delta / (T::lit(2.0) - self.theta_bar) * self.rate_bound.powi(exponent)
    }

    /// Whether a run started at `start` is covered by the certificate.
    pub fn guarantee_holds(&self, start: &DenseVector<T>) -> bool {
        start.distance(&self.c) <= self.basin_radius
    }

    /// Steps `k >= 1` of a recorded run whose distance to the run's limit point
    /// exceeds [`Self::envelope_bound`] plus `slack`.
    pub fn envelope_violations(&self, trace: &MapTrace<T>, slack: T) -> Result<Vec<usize>, TheoryError> {
        if trace.a_iterates.len() != trace.iterations() || trace.b_iterates.len() != trace.iterations() {
            return Err(TheoryError::TraceNotRecorded);
        }
        let limit = &trace.limit_point;
        Ok((1..trace.iterations())
            .filter(|&k| {
                let dist = trace.a_iterates[k].distance(limit).max(trace.b_iterates[k].distance(limit));
                dist > self.envelope_bound(k) + slack
            })
            .collect())
    }
}

/// Checks `c ∈ A ∩ B` (support size and `||Mc - p|| <= T::FEAS_TOL max(1, ||p||)`),
/// returning the support of `c`.
fn require_feasible<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<IndexSet, TheoryError> {
    let residual = affine.residual_norm(c)?;
    let support = match require_sparse(c, cfg) {
        Ok(support) => support,
        Err(SparsityError::NotInSparsitySet { nonzeros, s }) => {
            return Err(TheoryError::NotFeasible { nonzeros, s, affine_residual: residual.to_f64_lossy() })
        }
        Err(e) => return Err(e.into()),
    };
    if !affine.contains(c, T::FEAS_TOL)? {
        return Err(TheoryError::NotFeasible {
            nonzeros: support.len(),
            s: cfg.s(),
            affine_residual: residual.to_f64_lossy(),
        });
    }
    Ok(support)
}

/// Supports `J ⊇ I(c)` with `|J| = s`, i.e. the subspaces `A_J` through `c`.
pub fn supports_through<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
) -> Result<Vec<IndexSet>, SparsityError> {
    let support = require_sparse(c, cfg)?;
    supersets_of_support(&support, cfg.n(), cfg.s(), cfg.max_enum)
}

/// `c(A_J, B)`: Friedrichs cosine between `A_J` and `ker M`.
pub fn friedrichs_support_affine<T: Scalar>(j: &IndexSet, affine: &AffineSet<T>) -> Result<T, TheoryError> {
    if j.ambient_dim() != affine.ambient_dim() {
        return Err(LinalgError::DimensionMismatch { expected: affine.ambient_dim(), found: j.ambient_dim() }.into());
    }
    let aj = OrthonormalBasis::coordinate(j.ambient_dim(), j.members());
    Ok(friedrichs_cosine(&aj, affine.kernel())?)
}

/// `theta_bar = max{c(A_J, B) : c ∈ A_J, |J| = s}` with the per-support cosines.
pub fn theta_bar<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<(T, Vec<SupportAngle<T>>), TheoryError> {
    require_feasible(c, cfg, affine)?;
    let per_support = supports_through(c, cfg)?
        .into_iter()
        .map(|support| {
            let cosine = friedrichs_support_affine(&support, affine)?;
            Ok(SupportAngle { support, cosine })
        })
        .collect::<Result<Vec<_>, TheoryError>>()?;
    let max = per_support.iter().fold(T::zero(), |m, sa| m.max(sa.cosine));
    Ok((max, per_support))
}

/// `delta_bar = min_{j in I(c)} |c_j| / 3`.
pub fn delta_bar<T: Scalar>(c: &DenseVector<T>, cfg: &SparsityConfig<T>) -> Result<T, TheoryError> {
    Ok(min_escape_distance(c, cfg)? / T::lit(3.0))
}

/// Assembles the certificate at `c`. Without `delta`, uses
/// `delta_bar * (1 - DEFAULT_DELTA_MARGIN)`.
pub fn certify<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
    delta: Option<T>,
) -> Result<ConvergenceCertificate<T>, TheoryError> {
    require_feasible(c, cfg, affine)?;
    let delta_bar = delta_bar(c, cfg)?;
    let delta = match delta {
        Some(d) if d > T::zero() && d <= delta_bar => d,
        Some(d) => {
            return Err(TheoryError::DeltaOutOfRange { delta: d.to_f64_lossy(), delta_bar: delta_bar.to_f64_lossy() })
        }
        None => delta_bar * (T::one() - T::lit(DEFAULT_DELTA_MARGIN)),
    };
    let (theta_bar, per_support) = theta_bar(c, cfg, affine)?;
    let two = T::lit(2.0);
    let basin_radius = (T::one() - theta_bar) * delta / (T::lit(6.0) * (two - theta_bar));
    Ok(ConvergenceCertificate {
        c: c.clone(),
        theta_bar,
        delta_bar,
        delta,
        basin_radius,
        rate_bound: theta_bar * theta_bar,
        enumerated_supports: per_support.len(),
        per_support,
        transversal: check_transversality(c, cfg, affine)?,
        classical_cq_holds: check_classical_cq(c, cfg, affine)?,
    })
}

/// Whether `T_A(c) + T_B(c) = R^n`, i.e. `A_J + ker M = R^n` for some support
/// `J ⊇ I(c)`. Rejects early when `s < rank M`, which rules it out.
pub fn check_transversality<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<bool, TheoryError> {
    require_feasible(c, cfg, affine)?;
    if cfg.s() < affine.rank() {
        return Ok(false);
    }
    for j in supports_through(c, cfg)? {
        if subspace_sum_dim(&OrthonormalBasis::coordinate(cfg.n(), j.members()), affine.kernel())? == cfg.n() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `dim(U + V)`, the numerical rank of the stacked bases.
pub fn subspace_sum_dim<T: Scalar>(u: &OrthonormalBasis<T>, v: &OrthonormalBasis<T>) -> Result<usize, LinalgError> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(LinalgError::DimensionMismatch { expected: u.ambient_dim(), found: v.ambient_dim() });
    }
    let (n, k) = (u.ambient_dim(), u.dim() + v.dim());
    if k == 0 {
        return Ok(0);
    }
    let mut stacked = nalgebra::DMatrix::zeros(n, k);
    stacked.columns_mut(0, u.dim()).copy_from(u.as_matrix());
    stacked.columns_mut(u.dim(), v.dim()).copy_from(v.as_matrix());
    let svd = svd_factor(&DenseMatrix::from_nalgebra(stacked)?)?;
    Ok(numeric_rank(&svd.singular_values, n, k))
}

/// A nonzero common direction of `N_A(c)` and `N_B(c) = ran M^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqWitness<T: Scalar> {
    /// Support whose `A_J^⊥` meets `ran M^T`.
    pub support: IndexSet,
    /// Orthonormal basis of `A_J^⊥ ∩ ran M^T`.
    pub intersection: OrthonormalBasis<T>,
}

/// The first support `J ⊇ I(c)` (lexicographic) for which `A_J^⊥ ∩ ran M^T`
/// is nontrivial, if any.
pub fn classical_cq_witness<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<Option<CqWitness<T>>, TheoryError> {
    require_feasible(c, cfg, affine)?;
    for support in supports_through(c, cfg)? {
        let normal = OrthonormalBasis::coordinate(cfg.n(), support.complement().members());
        let intersection = subspace_intersection(&normal, affine.row_space())?;
        if !intersection.is_trivial() {
            return Ok(Some(CqWitness { support, intersection }));
        }
    }
    Ok(None)
}

/// Whether `N_A(c) ∩ (-N_B(c)) = {0}`. `N_A(c)` is the union of `A_J^⊥` over
/// the supports through `c`; `N_B(c) = ran M^T` is a subspace, so `-N_B = N_B`.
pub fn check_classical_cq<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<bool, TheoryError> {
    Ok(classical_cq_witness(c, cfg, affine)?.is_none())
}

/// Largest principal cosine between any `A_J^⊥` (`J ⊇ I(c)`) and `ran M^T`.
pub fn max_normal_cosine<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
) -> Result<T, TheoryError> {
    require_feasible(c, cfg, affine)?;
    let mut worst = T::zero();
    for support in supports_through(c, cfg)? {
        let normal = OrthonormalBasis::coordinate(cfg.n(), support.complement().members());
        if let Some(&first) = principal_angle_cosines(&normal, affine.row_space())?.first() {
            worst = worst.max(first);
        }
    }
    Ok(worst)
}

/// Monte-Carlo lower bound on the CQ-number at `c` for radius `delta`, with
/// normals restricted to the decomposition (`u` generated by points of `B`
/// projected onto `A_J`, `v` by points of `A_J` projected onto `B`).
///
/// Each sample draws a support `J` through `c` and a point `b ∈ B` with
/// `||b - c|| <= delta`; `u` is the unit direction of `b - P_{A_J} b`. The
/// partner `v` is the best restricted normal of `B` for that `u`: the
/// directions `P_B a - a` for `a ∈ A_J` near `c` fill the subspace
/// `P_{ran M^T}(A_J)`, so the inner product is `||P_W u||`. The result is
/// floored at zero (`u = 0` is admissible).
pub fn estimate_cq_number_empirical<T: Scalar>(
    c: &DenseVector<T>,
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
    delta: T,
    n_samples: usize,
    seed: u64,
) -> Result<T, TheoryError> {
    require_feasible(c, cfg, affine)?;
    if n_samples == 0 {
        return Err(TheoryError::NoSamples);
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN is rejected too
    if !(delta > T::zero()) {
        return Err(TheoryError::DeltaOutOfRange { delta: delta.to_f64_lossy(), delta_bar: f64::INFINITY });
    }
    let supports = supports_through(c, cfg)?;
    let kernel = affine.kernel();
    if kernel.is_trivial() {
        return Ok(T::zero());
    }
    let responses = supports
        .iter()
        .map(|j| {
            let images: Vec<DenseVector<T>> = j
                .members()
                .iter()
                .map(|&i| affine.row_space().project(&DenseVector::unit(cfg.n(), i)))
                .collect::<Result<_, _>>()?;
            OrthonormalBasis::spanning(cfg.n(), &images)
        })
        .collect::<Result<Vec<_>, LinalgError>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernel_vectors = kernel.vectors();
    let mut best = T::zero();
    for _ in 0..n_samples {
        let pick = rng.random_range(0..supports.len());
        let mut direction = DenseVector::zeros(cfg.n());
        for q in &kernel_vectors {
            let g: f64 = rng.sample(StandardNormal);
            direction = &direction + &q.scale(T::lit(g));
        }
        let Some(direction) = direction.normalized() else { continue };
        let radius = T::lit(rng.random_range(0.0..=1.0)) * delta;
        let b = c + &direction.scale(radius);
        let a = project_onto_coordinate_subspace(&b, &supports[pick])?;
        let Some(u) = (&b - &a).normalized() else { continue };
        let value = responses[pick].project(&u)?.norm();
        best = best.max(value);
    }
    Ok(best.min(T::one()))
}

/// CQ-number of two distinct lines `R w_a`, `R w_b` through the origin:
/// `|<w_a, w_b>|`.
pub fn two_lines_cq<T: Scalar>(w_a: &DenseVector<T>, w_b: &DenseVector<T>) -> Result<T, TheoryError> {
    for w in [w_a, w_b] {
        let norm = w.norm();
        if (norm - T::one()).abs() > T::ORTH_TOL {
            return Err(TheoryError::NotUnit { norm: norm.to_f64_lossy() });
        }
    }
    if w_a.dim() != w_b.dim() {
        return Err(LinalgError::DimensionMismatch { expected: w_a.dim(), found: w_b.dim() }.into());
    }
    let cosine = w_a.dot(w_b).abs();
    if cosine >= T::one() - T::INTERSECT_TOL {
        return Err(TheoryError::SameLine);
    }
    debug_assert!({
        let la = OrthonormalBasis::spanning(w_a.dim(), std::slice::from_ref(w_a))?;
        let lb = OrthonormalBasis::spanning(w_b.dim(), std::slice::from_ref(w_b))?;
        (friedrichs_cosine(&la, &lb)? - cosine).abs() <= T::ORTH_TOL
    });
    Ok(cosine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn v(xs: &[f64]) -> DenseVector<f64> {
        DenseVector::from_slice(xs).unwrap()
    }

    fn example() -> (SparsityConfig<f64>, AffineSet<f64>) {
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        (SparsityConfig::new(3, 1).unwrap(), AffineSet::new(m, v(&[1.0, 1.0])).unwrap())
    }

    #[test]
    fn friedrichs_cosines_of_the_example_supports() {
        let (_, b) = example();
        for label in [1, 2] {
            let j = IndexSet::from_one_based(3, &[label]).unwrap();
            assert!((friedrichs_support_affine(&j, &b).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        // A_3 = R e_3 is orthogonal to ker M = R(-1, 1, 0)
        let j = IndexSet::from_one_based(3, &[3]).unwrap();
        assert!(friedrichs_support_affine(&j, &b).unwrap() < 1e-15);
    }

    #[test]
    fn example_certificate() {
        let (cfg, b) = example();
        for c in [v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])] {
            let cert = certify(&c, &cfg, &b, Some(1.0 / 3.0)).unwrap();
            assert!((cert.theta_bar - FRAC_1_SQRT_2).abs() < 1e-12);
            assert!((cert.delta_bar - 1.0 / 3.0).abs() < 1e-15);
            assert!((cert.rate_bound - 0.5).abs() < 1e-12);
            let expected = (SQRT_2 - 1.0) / (18.0 * (2.0 * SQRT_2 - 1.0));
            assert!((cert.basin_radius - expected).abs() < 1e-12);
            assert_eq!(cert.enumerated_supports, 1);
            assert!(!cert.transversal);
            assert!(!cert.classical_cq_holds);
        }
    }

    #[test]
    fn default_delta_sits_just_inside_delta_bar() {
        let (cfg, b) = example();
        let cert = certify(&v(&[1.0, 0.0, 0.0]), &cfg, &b, None).unwrap();
        assert!(cert.delta < cert.delta_bar);
        assert!((cert.delta - cert.delta_bar * (1.0 - 1e-6)).abs() < 1e-16);
        let recomposed = cert.basin_radius * 6.0 * (2.0 - cert.theta_bar) / (1.0 - cert.theta_bar);
        assert!((recomposed - cert.delta).abs() < 1e-14);
    }

    #[test]
    fn delta_out_of_range_and_infeasible_points() {
        let (cfg, b) = example();
        let c = v(&[1.0, 0.0, 0.0]);
        assert!(matches!(certify(&c, &cfg, &b, Some(0.5)), Err(TheoryError::DeltaOutOfRange { .. })));
        assert!(matches!(certify(&c, &cfg, &b, Some(0.0)), Err(TheoryError::DeltaOutOfRange { .. })));
        assert!(matches!(
            certify(&v(&[0.5, 0.5, 0.0]), &cfg, &b, None),
            Err(TheoryError::NotFeasible { nonzeros: 2, .. })
        ));
        assert!(matches!(
            certify(&v(&[0.0, 0.0, 1.0]), &cfg, &b, None),
            Err(TheoryError::NotFeasible { nonzeros: 1, .. })
        ));
    }

    #[test]
    fn delta_bar_examples() {
        let cfg = SparsityConfig::new(3, 1).unwrap();
        assert!((delta_bar(&v(&[1.0, 0.0, 0.0]), &cfg).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert!((delta_bar(&v(&[0.0, -4.5, 0.0]), &cfg).unwrap() - 1.5).abs() < 1e-15);
        let cfg = SparsityConfig::new(4, 3).unwrap();
        assert!((delta_bar(&v(&[5.0, -0.2, 0.0, 1.0]), &cfg).unwrap() - 0.2 / 3.0).abs() < 1e-16);
        let full = SparsityConfig::new(2, 2).unwrap();
        assert!(matches!(delta_bar(&v(&[1.0, 1.0]), &full), Err(TheoryError::Sparsity(SparsityError::FullSparsity))));
    }

    #[test]
    fn orthogonal_instance_has_zero_theta() {
        // A_1 = R e_1 against ker M = R e_2
        let m = DenseMatrix::from_rows(&[[1.0, 0.0]]).unwrap();
        let b = AffineSet::new(m, v(&[2.0])).unwrap();
        let cfg = SparsityConfig::new(2, 1).unwrap();
        let c = v(&[2.0, 0.0]);
        let cert = certify(&c, &cfg, &b, Some(0.5)).unwrap();
        assert_eq!(cert.theta_bar, 0.0);
        assert_eq!(cert.rate_bound, 0.0);
        assert!((cert.basin_radius - 0.5 / 12.0).abs() < 1e-16);
        assert!(cert.transversal);
        assert!(cert.classical_cq_holds);
        let est = estimate_cq_number_empirical(&c, &cfg, &b, 0.1, 1000, 3).unwrap();
        assert!(est <= 1e-10);
    }

    #[test]
    fn example_diagnostics_and_witness() {
        let (cfg, b) = example();
        let c = v(&[1.0, 0.0, 0.0]);
        assert!(!check_transversality(&c, &cfg, &b).unwrap());
        let witness = classical_cq_witness(&c, &cfg, &b).unwrap().unwrap();
        assert_eq!(witness.support.one_based(), vec![1]);
        assert_eq!(witness.intersection.dim(), 1);
        assert!((witness.intersection.vectors()[0][2].abs() - 1.0).abs() < 1e-12);
        assert!(max_normal_cosine(&c, &cfg, &b).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn modified_matrix_still_fails_both_conditions() {
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 2.0, 0.0]]).unwrap();
        let b = AffineSet::new(m, v(&[1.0, 1.0])).unwrap();
        let cfg = SparsityConfig::new(3, 1).unwrap();
        let c = v(&[1.0, 0.0, 0.0]);
        assert!(!check_transversality(&c, &cfg, &b).unwrap());
        assert!(!check_classical_cq(&c, &cfg, &b).unwrap());
    }

    #[test]
    fn transversal_hyperplane() {
        // ker M is the hyperplane x_1 + x_2 + x_3 = 0; A_{1} is not inside it
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0]]).unwrap();
        let b = AffineSet::new(m, v(&[2.0])).unwrap();
        let cfg = SparsityConfig::new(3, 1).unwrap();
        assert!(check_transversality(&v(&[2.0, 0.0, 0.0]), &cfg, &b).unwrap());
    }

    #[test]
    fn empirical_estimate_on_the_example() {
        let (cfg, b) = example();
        let c = v(&[1.0, 0.0, 0.0]);
        let est = estimate_cq_number_empirical(&c, &cfg, &b, 0.1, 100_000, 11).unwrap();
        assert!((FRAC_1_SQRT_2 - 0.05..=FRAC_1_SQRT_2 + 1e-10).contains(&est), "estimate {est}");
        let again = estimate_cq_number_empirical(&c, &cfg, &b, 0.1, 100_000, 11).unwrap();
        assert_eq!(est, again);
        assert!(matches!(estimate_cq_number_empirical(&c, &cfg, &b, 0.1, 0, 11), Err(TheoryError::NoSamples)));
    }

    #[test]
    fn two_lines() {
        let e1 = v(&[1.0, 0.0, 0.0]);
        let w = v(&[-FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0]);
        assert!((two_lines_cq(&e1, &w).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(two_lines_cq(&e1, &v(&[0.0, 0.0, 1.0])).unwrap(), 0.0);
        assert!(matches!(two_lines_cq(&e1, &v(&[-1.0, 0.0, 0.0])), Err(TheoryError::SameLine)));
        assert!(matches!(two_lines_cq(&e1, &v(&[2.0, 0.0, 0.0])), Err(TheoryError::NotUnit { .. })));
    }

    #[test]
    fn envelope_bound_formula() {
        let (cfg, b) = example();
        let cert = certify(&v(&[1.0, 0.0, 0.0]), &cfg, &b, Some(0.3)).unwrap();
        let base = 0.3 / (2.0 - FRAC_1_SQRT_2);
        assert!((cert.envelope_bound(1) - base).abs() < 1e-15);
        assert!((cert.envelope_bound(3) - base * 0.25).abs() < 1e-15);
    }
}
