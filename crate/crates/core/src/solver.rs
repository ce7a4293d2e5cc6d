//! Method of alternating projections between the sparsity set and `B`.
//!
//! Starting from `b_{-1}`, each step computes `a_k = P_A b_{k-1}` (hard
//! thresholding with lexicographic tie-breaking) and `b_k = P_B a_k`. Steps
//! are numbered from `k = 0`.

use thiserror::Error;

use crate::affine::{AffineError, AffineSet};
use crate::linalg::DenseVector;
use crate::sparsity::{dist_to_sparse_set, project_sparse, SparsityConfig, SparsityError};
use crate::Scalar;

/// Consecutive non-decreasing residuals tolerated before declaring a stall.
pub const STALL_WINDOW: usize = 50;
/// Errors at or below this level are treated as rounding noise by [`observed_rate`].
pub const NOISE_FLOOR: f64 = 1e-13;
/// Fewest usable error samples [`observed_rate`] accepts.
pub const MIN_RATE_SAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid options: {0}")]
    InvalidOptions(&'static str),
    #[error(transparent)]
    Sparsity(#[from] SparsityError),
    #[error(transparent)]
    Affine(#[from] AffineError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions<T: Scalar> {
    pub max_iters: usize,
    /// Stop once `||a_k - b_k||` falls to this value.
    pub residual_tol: T,
    /// Keep every iterate (otherwise only residuals and errors are stored).
    pub record_trace: bool,
    /// Known solution used to record `||a_k - c||` and `||b_k - c||`.
    pub reference_point: Option<DenseVector<T>>,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self { max_iters: 10_000, residual_tol: T::lit(1e-12), record_trace: false, reference_point: None }
    }
}

impl<T: Scalar> SolveOptions<T> {
    pub fn with_reference(mut self, c: DenseVector<T>) -> Self {
        self.reference_point = Some(c);
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ResidualMet,
    MaxIters,
    Stalled,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ResidualMet => "residual_met",
            Termination::MaxIters => "max_iters",
            Termination::Stalled => "stalled",
        }
    }
}

/// Record of one run. Entry `k` of every per-step list refers to step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapTrace<T: Scalar> {
    pub start: DenseVector<T>,
    /// `d_A(b_{-1})`.
    pub start_sparse_distance: T,
    /// `a_k`; empty unless the trace was recorded.
    pub a_iterates: Vec<DenseVector<T>>,
    /// `b_k`; empty unless the trace was recorded.
    pub b_iterates: Vec<DenseVector<T>>,
    /// `||a_k - b_k|| = d_B(a_k)`.
    pub residuals: Vec<T>,
    /// `d_A(b_k) = ||a_{k+1} - b_k||`.
    pub sparse_distances: Vec<T>,
    /// `||a_k - c||` for the reference point `c`, when one was given.
    pub a_errors: Option<Vec<T>>,
    /// `||b_k - c||` for the reference point `c`, when one was given.
    pub b_errors: Option<Vec<T>>,
    pub termination: Termination,
    /// Last `b_k`.
    pub limit_point: DenseVector<T>,
    /// `||M limit - p||`.
    pub limit_affine_residual: T,
    /// `d_A(limit)`.
    pub limit_sparse_distance: T,
}

impl<T: Scalar> MapTrace<T> {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn final_residual(&self) -> T {
        *self.residuals.last().expect("at least one step")
    }

    pub fn a_error_ratios(&self) -> Option<Vec<T>> {
        self.a_errors.as_deref().map(ratios)
    }

    pub fn b_error_ratios(&self) -> Option<Vec<T>> {
        self.b_errors.as_deref().map(ratios)
    }

    /// Largest violation of the nearest-point inequalities
    /// `||a_k - b_k|| <= ||a_k - b_{k-1}||` and `||a_{k+1} - b_k|| <= ||a_k - b_k||`
    /// over the run; nonpositive means monotone. The first inequality needs
    /// `b_{k-1} ∈ B`, so it is checked from `k = 1` on.
    pub fn monotonicity_defect(&self) -> T {
        let mut worst = T::min_value().unwrap_or_else(T::zero);
        let mut previous_gap = None;
        for (residual, gap) in self.residuals.iter().zip(&self.sparse_distances) {
            if let Some(previous_gap) = previous_gap {
                worst = worst.max(*residual - previous_gap);
            }
            worst = worst.max(*gap - *residual);
            previous_gap = Some(*gap);
        }
        worst
    }
}

fn ratios<T: Scalar>(errors: &[T]) -> Vec<T> {
    errors.windows(2).map(|w| w[1] / w[0]).collect()
}

/// Runs alternating projections from `start` (`b_{-1}`).
///
/// Stops when the residual reaches `opts.residual_tol`, after `opts.max_iters`
/// steps, or when the residual has failed to decrease by a relative `1e-16`
/// for [`STALL_WINDOW`] consecutive steps.
pub fn run_map<T: Scalar>(
    cfg: &SparsityConfig<T>,
    affine: &AffineSet<T>,
    start: &DenseVector<T>,
    opts: &SolveOptions<T>,
) -> Result<MapTrace<T>, SolveError> {
    if opts.max_iters == 0 {
        return Err(SolveError::InvalidOptions("max_iters must be at least 1"));
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN is rejected too
    if !(opts.residual_tol > T::zero()) {
        return Err(SolveError::InvalidOptions("residual_tol must be positive"));
    }
    if cfg.n() != affine.ambient_dim() {
        return Err(SparsityError::DimensionMismatch { expected: affine.ambient_dim(), found: cfg.n() }.into());
    }
    if let Some(c) = &opts.reference_point {
        if c.dim() != cfg.n() {
            return Err(SparsityError::DimensionMismatch { expected: cfg.n(), found: c.dim() }.into());
        }
    }

    let start_sparse_distance = dist_to_sparse_set(start, cfg)?;
    let decrease_factor = T::one() - T::lit(1e-16);
    let mut a_iterates = Vec::new();
    let mut b_iterates = Vec::new();
    let mut residuals = Vec::new();
    let mut sparse_distances = Vec::new();
    let mut a_errors = opts.reference_point.as_ref().map(|_| Vec::new());
    let mut b_errors = opts.reference_point.as_ref().map(|_| Vec::new());
    let mut termination = Termination::MaxIters;
    let mut stalled_steps = 0;
    let mut b_prev = start.clone();

    for _ in 0..opts.max_iters {
        let a = project_sparse(&b_prev, cfg)?;
        let b = affine.project(&a)?;
        let residual = a.distance(&b);
        sparse_distances.push(dist_to_sparse_set(&b, cfg)?);
        if let (Some(c), Some(ea), Some(eb)) = (&opts.reference_point, a_errors.as_mut(), b_errors.as_mut()) {
            ea.push(a.distance(c));
            eb.push(b.distance(c));
        }
        if let Some(&last) = residuals.last() {
            if residual >= last * decrease_factor {
                stalled_steps += 1;
            } else {
                stalled_steps = 0;
            }
        }
        residuals.push(residual);
        if opts.record_trace {
            a_iterates.push(a);
        }
        let done = if residual <= opts.residual_tol {
            termination = Termination::ResidualMet;
            true
        } else if stalled_steps >= STALL_WINDOW {
            termination = Termination::Stalled;
            true
        } else {
            false
        };
        if opts.record_trace {
            b_iterates.push(b.clone());
        }
        b_prev = b;
        if done {
            break;
        }
    }

    let limit_affine_residual = affine.residual_norm(&b_prev)?;
    let limit_sparse_distance = *sparse_distances.last().expect("at least one step");
    Ok(MapTrace {
        start: start.clone(),
        start_sparse_distance,
        a_iterates,
        b_iterates,
        residuals,
        sparse_distances,
        a_errors,
        b_errors,
        termination,
        limit_point: b_prev,
        limit_affine_residual,
        limit_sparse_distance,
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("the run recorded no reference-point errors")]
    NoReference,
    #[error("only {usable} error samples above the noise floor, need {MIN_RATE_SAMPLES}")]
    TooFewSteps { usable: usize },
}

/// Empirical linear rate of `||b_k - c||`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit<T: Scalar> {
    /// `||b_{k+1} - c|| / ||b_k - c||` over the usable steps.
    pub ratios: Vec<T>,
    /// `exp` of the least-squares slope of `ln ||b_k - c||` against `k`.
    pub geometric_fit: T,
    pub samples: usize,
}

/// Fits the linear rate of the `b`-errors over the leading run of steps whose
/// error exceeds [`NOISE_FLOOR`].
pub fn observed_rate<T: Scalar>(trace: &MapTrace<T>) -> Result<RateFit<T>, RateError> {
    let errors = trace.b_errors.as_ref().ok_or(RateError::NoReference)?;
    geometric_fit(errors)
}

/// [`observed_rate`] on a bare error sequence.
pub fn geometric_fit<T: Scalar>(errors: &[T]) -> Result<RateFit<T>, RateError> {
    let floor = T::lit(NOISE_FLOOR);
    let usable: Vec<T> = errors.iter().copied().take_while(|&e| e > floor).collect();
    if usable.len() < MIN_RATE_SAMPLES {
        return Err(RateError::TooFewSteps { usable: usable.len() });
    }
    let count = T::lit(usable.len() as f64);
    let mean_k = usable.iter().enumerate().fold(T::zero(), |acc, (k, _)| acc + T::lit(k as f64)) / count;
    let mean_log = usable.iter().fold(T::zero(), |acc, e| acc + e.ln()) / count;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (k, e) in usable.iter().enumerate() {
        let dk = T::lit(k as f64) - mean_k;
        sxy += dk * (e.ln() - mean_log);
        sxx += dk * dk;
    }
    Ok(RateFit { ratios: ratios(&usable), geometric_fit: (sxy / sxx).exp(), samples: usable.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn v(xs: &[f64]) -> DenseVector<f64> {
        DenseVector::from_slice(xs).unwrap()
    }

    fn example() -> (SparsityConfig<f64>, AffineSet<f64>) {
        let m = DenseMatrix::from_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        (SparsityConfig::new(3, 1).unwrap(), AffineSet::new(m, v(&[1.0, 1.0])).unwrap())
    }

    #[test]
    fn solution_is_a_fixed_point() {
        let (cfg, b) = example();
        let x = v(&[1.0, 0.0, 0.0]);
        let trace = run_map(&cfg, &b, &x, &SolveOptions::default().recording()).unwrap();
        assert_eq!(trace.termination, Termination::ResidualMet);
        assert_eq!(trace.iterations(), 1);
        assert!(trace.final_residual() < 1e-15);
        assert!(trace.limit_point.distance(&x) < 1e-15);
    }

    #[test]
    fn converges_at_rate_one_half_near_x_star() {
        let (cfg, b) = example();
        let c = v(&[1.0, 0.0, 0.0]);
        let start = v(&[1.004, 0.003, -0.002]);
        let opts = SolveOptions::default().with_reference(c.clone()).recording();
        let trace = run_map(&cfg, &b, &start, &opts).unwrap();
        assert_eq!(trace.termination, Termination::ResidualMet);
        assert!(trace.limit_point.distance(&c) < 1e-11);
        let fit = observed_rate(&trace).unwrap();
        assert!((fit.geometric_fit - 0.5).abs() < 1e-3, "fit {}", fit.geometric_fit);
        // well above rounding level every step contracts by exactly 1/2
        let errors = trace.b_errors.as_ref().unwrap();
        for (r, e) in fit.ratios.iter().zip(errors) {
            if *e > 1e-6 {
                assert!((r - 0.5).abs() < 1e-9, "ratio {r} at error {e}");
            }
        }
        assert!(trace.monotonicity_defect() <= 1e-12);
    }

    #[test]
    fn synthetic_geometric_sequence() {
        let errors: Vec<f64> = (0..20).map(|k| 0.5f64.powi(k)).collect();
        let fit = geometric_fit(&errors).unwrap();
        assert!((fit.geometric_fit - 0.5).abs() < 1e-15);
        assert_eq!(fit.samples, 20);
    }

    #[test]
    fn rate_needs_enough_steps() {
        let (cfg, b) = example();
        let c = v(&[1.0, 0.0, 0.0]);
        let trace = run_map(&cfg, &b, &c, &SolveOptions::default().with_reference(c.clone())).unwrap();
        assert_eq!(observed_rate(&trace).unwrap_err(), RateError::TooFewSteps { usable: 0 });
        let no_ref = run_map(&cfg, &b, &c, &SolveOptions::default()).unwrap();
        assert_eq!(observed_rate(&no_ref).unwrap_err(), RateError::NoReference);
    }

    #[test]
    fn max_iters_and_invalid_options() {
        let (cfg, b) = example();
        let start = v(&[0.9, 0.1, 0.3]);
        let opts = SolveOptions { max_iters: 3, ..SolveOptions::default() };
        let trace = run_map(&cfg, &b, &start, &opts).unwrap();
        assert_eq!(trace.termination, Termination::MaxIters);
        assert_eq!(trace.iterations(), 3);
        assert!(trace.a_iterates.is_empty());
        let bad = SolveOptions { max_iters: 0, ..SolveOptions::default() };
        assert!(run_map(&cfg, &b, &start, &bad).is_err());
        let bad = SolveOptions { residual_tol: 0.0, ..SolveOptions::default() };
        assert!(run_map(&cfg, &b, &start, &bad).is_err());
        assert!(run_map(&cfg, &b, &v(&[1.0, 0.0]), &SolveOptions::default()).is_err());
    }

    #[test]
    fn stalls_at_a_spurious_fixed_point() {
        // B = {x_2 = 1} is parallel to A_{1}; from (5, 1) thresholding keeps
        // the first entry and projecting back onto B returns (5, 1).
        let m = DenseMatrix::from_rows(&[[0.0, 1.0]]).unwrap();
        let b = AffineSet::new(m, v(&[1.0])).unwrap();
        let cfg = SparsityConfig::new(2, 1).unwrap();
        let trace = run_map(&cfg, &b, &v(&[5.0, 1.0]), &SolveOptions::default()).unwrap();
        assert_eq!(trace.termination, Termination::Stalled);
        assert_eq!(trace.iterations(), STALL_WINDOW + 1);
        assert!(trace.residuals.iter().all(|&r| (r - 1.0).abs() < 1e-14));
        assert!(trace.limit_point.distance(&v(&[5.0, 1.0])) < 1e-14);
    }

    #[test]
    fn reaches_y_star_exactly_from_e3() {
        let (cfg, b) = example();
        let opts = SolveOptions { residual_tol: 1e-300, ..SolveOptions::default() };
        let trace = run_map(&cfg, &b, &v(&[0.0, 0.0, 1.0]), &opts).unwrap();
        assert_eq!(trace.termination, Termination::ResidualMet);
        assert_eq!(trace.final_residual(), 0.0);
        assert!(trace.limit_point.distance(&v(&[0.0, 1.0, 0.0])) < 1e-15);
    }
}
