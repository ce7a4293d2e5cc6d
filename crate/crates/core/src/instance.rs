//! Seeded random instances with a planted sparse solution.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::{DenseMatrix, DenseVector};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("need 1 <= solution sparsity ({k}) <= s ({s}) <= n ({n})")]
    Sparsity { n: usize, s: usize, k: usize },
    #[error("need 1 <= m ({m}) < n ({n})")]
    Rows { m: usize, n: usize },
}

/// A consistent instance `(M, p, s)` with `p = M c` for the planted `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance<T: Scalar> {
    pub matrix: DenseMatrix<T>,
    pub rhs: DenseVector<T>,
    pub s: usize,
    pub planted: DenseVector<T>,
    pub seed: u64,
}

/// `M` has independent standard normal entries; `c` has `k` nonzeros at
/// uniformly chosen positions, with magnitudes uniform in `[0.5, 1.5]` and
/// random signs, so `min |c_j| / 3 >= 1/6`.
pub fn generate_instance<T: Scalar>(
    n: usize,
    m: usize,
    s: usize,
    k: usize,
    seed: u64,
) -> Result<PlantedInstance<T>, InstanceError> {
    if k == 0 || k > s || s > n {
        return Err(InstanceError::Sparsity { n, s, k });
    }
    if m == 0 || m >= n {
        return Err(InstanceError::Rows { m, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<T> = (0..m * n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
    let matrix = DenseMatrix::from_row_major(m, n, &entries).expect("finite entries");
    let mut support = sample(&mut rng, n, k).into_vec();
    support.sort_unstable();
    let mut planted = vec![T::zero(); n];
    for j in support {
        let magnitude: f64 = rng.random_range(0.5..=1.5);
        let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        planted[j] = T::lit(sign * magnitude);
    }
    let planted = DenseVector::new(planted).expect("finite entries");
    let rhs = matrix.mul_vector(&planted).expect("matching dimensions");
    Ok(PlantedInstance { matrix, rhs, s, planted, seed })
}

/// Vector of independent standard normal entries.
pub fn random_gaussian_vector<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseVector<T> {
    let g: Vec<T> = (0..n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
    DenseVector::new(g).expect("finite entries")
}

/// Uniformly distributed unit vector in `R^n`.
pub fn random_unit_vector<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseVector<T> {
    loop {
        if let Some(u) = random_gaussian_vector(n, rng).normalized() {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineSet;

    #[test]
    fn deterministic_and_consistent() {
        let a = generate_instance::<f64>(6, 3, 2, 2, 42).unwrap();
        let b = generate_instance::<f64>(6, 3, 2, 2, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_instance::<f64>(6, 3, 2, 2, 43).unwrap());
        let r = a.matrix.mul_vector(&a.planted).unwrap().distance(&a.rhs);
        assert_eq!(r, 0.0);
        assert!(AffineSet::new(a.matrix.clone(), a.rhs.clone()).is_ok());
    }

    #[test]
    fn planted_entries_are_bounded_away_from_zero() {
        for seed in 0..50 {
            let inst = generate_instance::<f64>(8, 4, 3, 3, seed).unwrap();
            let nonzero: Vec<f64> = inst.planted.iter().copied().filter(|x| *x != 0.0).collect();
            assert_eq!(nonzero.len(), 3);
            assert!(nonzero.iter().all(|x| (0.5..=1.5).contains(&x.abs())));
        }
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(generate_instance::<f64>(6, 3, 2, 3, 0), Err(InstanceError::Sparsity { .. })));
        assert!(matches!(generate_instance::<f64>(6, 3, 7, 2, 0), Err(InstanceError::Sparsity { .. })));
        assert!(matches!(generate_instance::<f64>(6, 3, 2, 0, 0), Err(InstanceError::Sparsity { .. })));
        assert!(matches!(generate_instance::<f64>(6, 6, 2, 2, 0), Err(InstanceError::Rows { .. })));
    }

    #[test]
    fn unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let u: DenseVector<f32> = random_unit_vector(5, &mut rng);
            assert!((u.norm() - 1.0).abs() < 1e-6);
        }
    }
}
