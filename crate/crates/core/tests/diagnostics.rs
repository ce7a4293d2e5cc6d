use nalgebra::DMatrix;
use sparse_map::affine::AffineSet;
use sparse_map::instance::generate_instance;
use sparse_map::linalg::{DenseMatrix, DenseVector};
use sparse_map::solver::{observed_rate, run_map, SolveOptions, Termination};
use sparse_map::sparsity::{k_subsets, SparsityConfig};
use sparse_map::theory::{certify, check_classical_cq, check_transversality, classical_cq_witness, max_normal_cosine};
use sparse_map::{Affine, Config};

/// `A_J + ker M = R^n` for some `J ⊇ I(c)`, by the rank of `[I_J | N]` where
/// `N` spans `ker M`; both straight from nalgebra.
fn transversal_oracle(m: &DMatrix<f64>, c: &[f64], s: usize) -> bool {
    let n = m.ncols();
    let mut square = DMatrix::zeros(n, n);
    square.rows_mut(0, m.nrows()).copy_from(m);
    let svd = square.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let kernel: Vec<usize> = (0..n).filter(|&i| svd.singular_values[i] <= 1e-10).collect();
    let support: Vec<usize> = (0..n).filter(|&j| c[j] != 0.0).collect();
    let free: Vec<usize> = (0..n).filter(|j| !support.contains(j)).collect();
    k_subsets(&free, s - support.len()).into_iter().any(|extra| {
        let mut cols = support.clone();
        cols.extend(extra);
        let mut stacked = DMatrix::zeros(n, cols.len() + kernel.len());
        for (k, &j) in cols.iter().enumerate() {
            stacked[(j, k)] = 1.0;
        }
        for (k, &i) in kernel.iter().enumerate() {
            for r in 0..n {
                stacked[(r, cols.len() + k)] = v_t[(i, r)];
            }
        }
        stacked.rank(1e-10) == n
    })
}

#[test]
fn transversality_matches_rank_oracle() {
    let mut seen_true = 0;
    for seed in 0..40 {
        let (n, m) = (6, 2 + (seed as usize % 3));
        let s = 1 + (seed as usize / 3) % 4;
        let k = 1 + (seed as usize) % s;
        let inst = generate_instance::<f64>(n, m, s, k, seed).unwrap();
        let b = Affine::new(inst.matrix.clone(), inst.rhs.clone()).unwrap();
        let cfg = Config::new(n, s).unwrap();
        let got = check_transversality(&inst.planted, &cfg, &b).unwrap();
        let expected = transversal_oracle(inst.matrix.as_nalgebra(), inst.planted.as_slice(), s);
        assert_eq!(got, expected, "seed {seed}");
        if got {
            seen_true += 1;
            assert!(s >= b.rank());
        }
    }
    assert!(seen_true > 0);
}

#[test]
fn rank_two_instance_with_three_sparse_supports_is_transversal() {
    let inst = generate_instance::<f64>(6, 2, 3, 2, 5).unwrap();
    let b = Affine::new(inst.matrix.clone(), inst.rhs.clone()).unwrap();
    assert_eq!(b.rank(), 2);
    let cfg = Config::new(6, 3).unwrap();
    assert!(check_transversality(&inst.planted, &cfg, &b).unwrap());
    assert!(transversal_oracle(inst.matrix.as_nalgebra(), inst.planted.as_slice(), 3));
}

#[test]
fn classical_cq_agrees_with_principal_cosines() {
    for seed in 0..40 {
        let n = 5 + (seed as usize % 3);
        let m = 1 + (seed as usize % 4);
        let s = 1 + (seed as usize / 4) % (n - 1);
        let inst = generate_instance::<f64>(n, m, s, 1 + seed as usize % s, seed).unwrap();
        let b = Affine::new(inst.matrix.clone(), inst.rhs.clone()).unwrap();
        let cfg = Config::new(n, s).unwrap();
        let holds = check_classical_cq(&inst.planted, &cfg, &b).unwrap();
        let worst = max_normal_cosine(&inst.planted, &cfg, &b).unwrap();
        assert_eq!(holds, worst < 1.0 - 1e-9, "seed {seed}");
        assert_eq!(holds, classical_cq_witness(&inst.planted, &cfg, &b).unwrap().is_none());
    }
}

#[test]
fn surjective_orthogonal_case_satisfies_classical_cq() {
    // ran M^T = span{e_1}, every A_J^⊥ through c = e_1 avoids e_1
    let m = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0]]).unwrap();
    let b = AffineSet::new(m, DenseVector::from_slice(&[1.0]).unwrap()).unwrap();
    let cfg = SparsityConfig::new(3, 1).unwrap();
    assert!(check_classical_cq(&DenseVector::from_slice(&[1.0, 0.0, 0.0]).unwrap(), &cfg, &b).unwrap());
}

#[test]
fn single_precision_example() {
    let m = DenseMatrix::<f32>::from_rows(&[[1.0, 1.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
    let b = AffineSet::new(m, DenseVector::from_slice(&[1.0f32, 1.0]).unwrap()).unwrap();
    let cfg = SparsityConfig::<f32>::new(3, 1).unwrap();
    let c = DenseVector::from_slice(&[1.0f32, 0.0, 0.0]).unwrap();
    let cert = certify(&c, &cfg, &b, Some(1.0 / 3.0)).unwrap();
    assert!((cert.theta_bar - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    assert!((cert.rate_bound - 0.5).abs() < 1e-5);
    assert!(!cert.transversal && !cert.classical_cq_holds);

    let start = DenseVector::from_slice(&[1.004f32, 0.003, -0.002]).unwrap();
    let opts = SolveOptions { residual_tol: 1e-6, ..SolveOptions::default() }.with_reference(c.clone());
    let trace = run_map(&cfg, &b, &start, &opts).unwrap();
    assert_eq!(trace.termination, Termination::ResidualMet);
    let fit = observed_rate(&trace).unwrap();
    assert!((fit.geometric_fit - 0.5).abs() < 1e-2);
}
