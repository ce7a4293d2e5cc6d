use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use sparse_map::linalg::{friedrichs_cosine, pseudoinverse};
use sparse_map::solver::{run_map, SolveOptions};
use sparse_map::sparsity::{
    dist_to_coordinate_subspace, k_subsets, mordukhovich_normal_contains, preimage_contains,
    project_onto_coordinate_subspace, project_sparse, project_sparse_all, support, tangent_cone_contains, zero_norm,
    IndexSet,
};
use sparse_map::{Affine, Basis, Config, Matrix, Vector};

/// Small integers make ties and exact zeros common.
fn lattice_vec(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i32..=3, n).prop_map(|v| Vector::new(v.into_iter().map(f64::from).collect()).unwrap())
}

fn real_vec(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-5.0f64..5.0, n).prop_map(|v| Vector::new(v).unwrap())
}

fn sized_case() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=7).prop_flat_map(|n| (Just(n), 1..=n))
}

fn affine_case() -> impl Strategy<Value = (Affine, Vector, Vector)> {
    (2usize..=6).prop_flat_map(|n| (Just(n), 1..n)).prop_flat_map(|(n, m)| {
        (prop::collection::vec(-2.0f64..2.0, m * n), real_vec(n), real_vec(n), real_vec(n)).prop_map(
            move |(entries, c, x, y)| {
                let matrix = Matrix::from_row_major(m, n, &entries).unwrap();
                let rhs = matrix.mul_vector(&c).unwrap();
                (Affine::new(matrix, rhs).unwrap(), x, y)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn friedrichs_cosine_is_symmetric(u in prop::collection::vec(real_vec(5), 1..4), v in prop::collection::vec(real_vec(5), 1..4)) {
        let a = Basis::spanning(5, &u).unwrap();
        let b = Basis::spanning(5, &v).unwrap();
        let ab = friedrichs_cosine(&a, &b).unwrap();
        let ba = friedrichs_cosine(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-10);
        prop_assert!((0.0..1.0).contains(&ab));
    }

    #[test]
    fn lines_meet_at_their_inner_product(u in real_vec(4), v in real_vec(4)) {
        let (Some(wa), Some(wb)) = (u.normalized(), v.normalized()) else { return Ok(()) };
        let inner = wa.dot(&wb).abs();
        prop_assume!(inner < 1.0 - 1e-6);
        let la = Basis::spanning(4, &[wa]).unwrap();
        let lb = Basis::spanning(4, &[wb]).unwrap();
        assert_abs_diff_eq!(friedrichs_cosine(&la, &lb).unwrap(), inner, epsilon = 1e-10);
    }

    #[test]
    fn pseudoinverse_and_fundamental_subspaces((b, _, _) in affine_case()) {
        let m = b.matrix();
        let pinv = pseudoinverse(m).unwrap();
        let mpm = m.mul_matrix(&pinv).unwrap().mul_matrix(m).unwrap();
        prop_assert!(mpm.max_abs_diff(m) < 1e-9);
        let pmp = pinv.mul_matrix(m).unwrap().mul_matrix(&pinv).unwrap();
        prop_assert!(pmp.max_abs_diff(&pinv) < 1e-9 * (1.0 + pinv.frobenius_norm()));
        prop_assert_eq!(b.kernel().dim() + b.rank(), b.ambient_dim());
        prop_assert!(b.kernel().max_cross_inner_product(b.row_space()) < 1e-10);
    }

    #[test]
    fn hard_thresholding_is_optimal(((n, s), x) in sized_case().prop_flat_map(|(n, s)| (Just((n, s)), lattice_vec(n)))) {
        let cfg = Config::new(n, s).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        for j in k_subsets(&all, s) {
            best = best.min(dist_to_coordinate_subspace(&x, &IndexSet::new(n, j).unwrap()).unwrap());
        }
        let p = project_sparse(&x, &cfg).unwrap();
        prop_assert!((p.distance(&x) - best).abs() < 1e-12);
        let mut argmin: Vec<Vector> = Vec::new();
        for j in k_subsets(&all, s) {
            let j = IndexSet::new(n, j).unwrap();
            let y = project_onto_coordinate_subspace(&x, &j).unwrap();
            if (y.distance(&x) - best).abs() < 1e-12 && !argmin.contains(&y) {
                argmin.push(y);
            }
        }
        let mut reported = project_sparse_all(&x, &cfg).unwrap();
        let key = |v: &Vector| v.to_vec().iter().map(|t| *t as i64).collect::<Vec<_>>();
        argmin.sort_by_key(key);
        reported.sort_by_key(key);
        prop_assert_eq!(reported, argmin);
    }

    #[test]
    fn support_arithmetic(x in lattice_vec(6), y in lattice_vec(6), alpha in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0]) {
        let cfg = Config::new(6, 6).unwrap();
        let sum = &x + &y;
        let (ix, iy, isum) = (support(&x, &cfg).unwrap(), support(&y, &cfg).unwrap(), support(&sum, &cfg).unwrap());
        prop_assert!(isum.is_subset_of(&ix.union(&iy)));
        prop_assert!(zero_norm(&sum, &cfg).unwrap() <= ix.len() + iy.len());
        prop_assert_eq!(support(&x.scale(alpha), &cfg).unwrap(), ix);
        prop_assert_eq!(zero_norm(&(-&x), &cfg).unwrap(), zero_norm(&x, &cfg).unwrap());
    }

    #[test]
    fn preimage_matches_projection(((n, s), a, y) in sized_case().prop_flat_map(|(n, s)| (Just((n, s)), lattice_vec(n), lattice_vec(n)))) {
        let cfg = Config::new(n, s).unwrap();
        let a = project_sparse(&a, &cfg).unwrap();
        // y built to often land in the preimage: copy a on its support
        let mut mixed = y.to_vec();
        for j in support(&a, &cfg).unwrap().members() {
            mixed[*j] = a[*j];
        }
        for y in [y, Vector::new(mixed).unwrap(), a.clone()] {
            let direct = project_sparse_all(&y, &cfg).unwrap().contains(&a);
            prop_assert_eq!(preimage_contains(&a, &y, &cfg).unwrap(), direct);
        }
    }

    #[test]
    fn cones_agree_with_exhaustive_unions(((n, s), a, u) in (2usize..=6).prop_flat_map(|n| (Just(n), 1..n)).prop_flat_map(|(n, s)| (Just((n, s)), lattice_vec(n), lattice_vec(n)))) {
        let cfg = Config::new(n, s).unwrap();
        let a = project_sparse(&a, &cfg).unwrap();
        let ia = support(&a, &cfg).unwrap();
        let iu = support(&u, &cfg).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let through_a: Vec<IndexSet> = k_subsets(&all, s)
            .into_iter()
            .map(|j| IndexSet::new(n, j).unwrap())
            .filter(|j| ia.is_subset_of(j))
            .collect();
        let in_normal = through_a.iter().any(|j| iu.members().iter().all(|i| !j.contains(*i)));
        let in_tangent = through_a.iter().any(|j| iu.is_subset_of(j));
        prop_assert_eq!(mordukhovich_normal_contains(&a, &u, &cfg).unwrap(), in_normal);
        prop_assert_eq!(tangent_cone_contains(&a, &u, &cfg).unwrap(), in_tangent);
        if ia.len() == s {
            // at full sparsity both cones are subspaces, complementary and orthogonal
            let t = project_onto_coordinate_subspace(&u, &ia).unwrap();
            let nrm = &u - &t;
            prop_assert!(tangent_cone_contains(&a, &t, &cfg).unwrap());
            prop_assert!(mordukhovich_normal_contains(&a, &nrm, &cfg).unwrap());
            prop_assert_eq!(t.dot(&nrm), 0.0);
        }
    }

    #[test]
    fn affine_projection_properties((b, x, y) in affine_case()) {
        let px = b.project(&x).unwrap();
        let py = b.project(&y).unwrap();
        prop_assert!(px.distance(&py) <= x.distance(&y) + 1e-10);
        prop_assert!(b.contains(&px, 1e-8).unwrap());
        // nearest point: beats any other point of B
        let other = b.project(&(&x + &y)).unwrap();
        prop_assert!(x.distance(&px) <= x.distance(&other) + 1e-10);
        for k in b.kernel().vectors() {
            let shifted = b.project(&(&x + &k)).unwrap();
            prop_assert!(shifted.distance(&(&px + &k)) < 1e-10);
        }
    }

    #[test]
    fn runs_are_deterministic((b, x, _) in affine_case(), s in 1usize..3) {
        let n = b.ambient_dim();
        let cfg = Config::new(n, s.min(n)).unwrap();
        let opts = SolveOptions { max_iters: 200, ..SolveOptions::default() }.recording();
        let first = run_map(&cfg, &b, &x, &opts).unwrap();
        let second = run_map(&cfg, &b, &x, &opts).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert!(first.monotonicity_defect() <= 1e-12);
        for (a, bk) in first.a_iterates.iter().zip(&first.b_iterates) {
            prop_assert!(zero_norm(a, &cfg).unwrap() <= cfg.s());
            prop_assert!(b.residual_norm(bk).unwrap() <= 1e-8);
        }
    }
}
