//! Sparse affine feasibility by alternating projections.
//!
//! Finds `x` with at most `s` nonzero entries and `Mx = p` by alternating
//! between hard thresholding and the affine projection, and computes a
//! priori local linear convergence certificates: per-support Friedrichs
//! angles, the joint constraint-qualification number, the admissible radius,
//! the guaranteed basin of attraction and the rate bound.
//!
//! Every routine is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod affine;
pub mod instance;
pub mod linalg;
mod scalar;
pub mod solver;
pub mod sparsity;
pub mod theory;

pub use scalar::Scalar;

pub type Vector = linalg::DenseVector<f64>;
pub type Matrix = linalg::DenseMatrix<f64>;
pub type Basis = linalg::OrthonormalBasis<f64>;
pub type Affine = affine::AffineSet<f64>;
pub type Config = sparsity::SparsityConfig<f64>;
pub type Options = solver::SolveOptions<f64>;
pub type Trace = solver::MapTrace<f64>;
pub type Certificate = theory::ConvergenceCertificate<f64>;
pub type Instance = instance::PlantedInstance<f64>;
