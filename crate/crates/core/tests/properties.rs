use graphsep::density::{
    circulant_density, degree_condition_general, density_of_graph, group_density_z2n, DensityMatrix,
};
use graphsep::graph::{parse_graph, vertex_pairs, BipartiteLabeledGraph};
use graphsep::lab::random::{random_circulant_spec, random_group_function, rng_from_seed};
use graphsep::matrix::{hadamard_sylvester, ComplexMatrix, IntegerMatrix, PSD_TOL};
use graphsep::separability::{
    decompose_circulant, decompose_nearest_point, decompose_z2n, degree_condition_graph, ppt_test,
    verify_decomposition, RECONSTRUCTION_TOL,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn arb_graph(max_p: usize, max_q: usize) -> impl Strategy<Value = BipartiteLabeledGraph> {
    (1..=max_p, 1..=max_q).prop_flat_map(|(p, q)| {
        let pairs = vertex_pairs(p * q).len();
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let pairs = vertex_pairs(p * q);
            let edges = pairs.into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e);
            BipartiteLabeledGraph::from_index_edges(p, q, edges).unwrap()
        })
    })
}

fn arb_nonempty_graph(max_p: usize, max_q: usize) -> impl Strategy<Value = BipartiteLabeledGraph> {
    arb_graph(max_p, max_q).prop_filter("needs an edge", |g| g.edge_count() > 0)
}

fn arb_hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let raw = ComplexMatrix::from_fn(n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1));
        (&raw + &raw.adjoint()).scale(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn graph_partial_transpose_is_an_involution(g in arb_graph(4, 4)) {
        prop_assert_eq!(g.partial_transpose().partial_transpose(), g.clone());
        prop_assert_eq!(g.partial_transpose().edge_count(), g.edge_count());
    }

    #[test]
    fn adjacency_commutes_with_partial_transpose(g in arb_graph(4, 4)) {
        let lhs = g.adjacency_matrix().partial_transpose(g.p(), g.q()).unwrap();
        prop_assert_eq!(lhs, g.partial_transpose().adjacency_matrix());
    }

    #[test]
    fn laplacian_transpose_identity_is_exact(g in arb_graph(4, 4)) {
        let lhs = g.laplacian().partial_transpose(g.p(), g.q()).unwrap();
        let d = &g.degree_matrix() - &g.partial_transpose().degree_matrix();
        let rhs = &d + &g.partial_transpose().laplacian();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in arb_graph(4, 4)) {
        let l = g.laplacian();
        prop_assert!(l.is_symmetric());
        prop_assert!(l.row_sums().iter().all(|&s| s == 0));
    }

    #[test]
    fn graph_density_degrees(g in arb_nonempty_graph(3, 3)) {
        let rho = density_of_graph(&g).unwrap();
        let report = degree_condition_general(&rho);
        let scale = (2 * g.edge_count()) as f64;
        let diff = degree_condition_graph(&g).diff;
        for ((d, d_pt), &k) in report.delta.iter().zip(&report.delta_pt).zip(&diff) {
            prop_assert!(d.norm() < 1e-14);
            prop_assert!((d_pt - Complex64::new(k as f64 / scale, 0.0)).norm() < 1e-14);
        }
        prop_assert_eq!(report.holds, degree_condition_graph(&g).holds);
    }

    #[test]
    fn degree_condition_matches_ppt(g in arb_nonempty_graph(3, 4)) {
        let degree = degree_condition_graph(&g);
        let ppt = ppt_test(&density_of_graph(&g).unwrap(), PSD_TOL);
        prop_assert_eq!(degree.holds, ppt.ppt);
        if let Some(v) = degree.violation {
            prop_assert!(v.check(&g));
        }
    }

    #[test]
    fn nearest_point_pairing_is_symmetric(g in arb_nonempty_graph(3, 3)) {
        prop_assume!(g.is_nearest_point() && degree_condition_graph(&g).holds);
        let q = g.q();
        for &(a, b) in &g.entangled_edges() {
            let (i, j, k, l) = (a / q, a % q, b / q, b % q);
            prop_assert!(g.has_edge(i * q + l, k * q + j));
        }
        let d = decompose_nearest_point(&g).unwrap();
        let rho = density_of_graph(&g).unwrap();
        prop_assert!(verify_decomposition(&d, &rho, RECONSTRUCTION_TOL).unwrap().ok);
    }

    #[test]
    fn text_and_json_round_trip(g in arb_graph(4, 4)) {
        prop_assert_eq!(parse_graph(&g.to_text()).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn matrix_partial_transpose_is_an_involution(m in arb_hermitian(6)) {
        for (p, q) in [(1, 6), (2, 3), (3, 2), (6, 1)] {
            let back = m.partial_transpose(p, q).unwrap().partial_transpose(p, q).unwrap();
            prop_assert_eq!(&back, &m);
        }
        prop_assert_eq!(m.partial_transpose(6, 1).unwrap(), m.clone());
        prop_assert_eq!(m.partial_transpose(1, 6).unwrap(), m.transpose());
    }

    #[test]
    fn partial_transpose_of_products(a in arb_hermitian(2), b in arb_hermitian(3)) {
        let pt = a.kron(&b).partial_transpose(2, 3).unwrap();
        prop_assert!(pt.max_abs_diff(&a.kron(&b.transpose())) < 1e-15);
    }

    #[test]
    fn eigen_decomposition_residuals(m in arb_hermitian(8)) {
        let eig = m.hermitian_eigen(1e-12).unwrap();
        prop_assert!(eig.max_residual(&m) < 1e-10);
        prop_assert!(eig.orthonormality_error() < 1e-12);
        let trace: f64 = eig.values.iter().sum();
        prop_assert!((trace - m.trace().re).abs() < 1e-10);
    }

    #[test]
    fn integer_quadratic_form_matches_float(g in arb_graph(3, 3), x in proptest::collection::vec(-5i64..5, 9)) {
        let l = g.laplacian();
        let x = &x[..g.vertex_count()];
        let exact = l.quadratic_form(x);
        let lc = l.to_complex();
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
        let float = graphsep::matrix::inner(&xc, &lc.mul_vec(&xc)).re;
        prop_assert_eq!(exact as f64, float);
        prop_assert!(exact >= 0);
    }

    #[test]
    fn circulant_structure_and_decomposition(seed in any::<u64>(), n_idx in 0usize..4) {
        let n = [4, 6, 8, 9][n_idx];
        let spec = random_circulant_spec(&mut rng_from_seed(seed), n);
        let rho = circulant_density(&spec).unwrap();
        let m = rho.matrix();
        for (p, q) in (1..=n).filter(|p| n % p == 0).map(|p| (p, n / p)) {
            // First block row: A_{0,m} = A_{0,p−m}†.
            for blk in 0..p {
                let other = (p - blk) % p;
                for r in 0..q {
                    for c in 0..q {
                        let lhs = m[(r, blk * q + c)];
                        let rhs = m[(c, other * q + r)].conj();
                        prop_assert!((lhs - rhs).norm() < 1e-14);
                    }
                }
            }
            let split = rho.with_split(p, q).unwrap();
            let report = degree_condition_general(&split);
            prop_assert!(report.holds);
            prop_assert!(report.delta.iter().all(|z| z.im.abs() < 1e-14));
            let d = decompose_circulant(&spec, p, q).unwrap();
            prop_assert!(verify_decomposition(&d, &split, RECONSTRUCTION_TOL).unwrap().ok);
        }
    }

    #[test]
    fn z2n_diagonalized_by_hadamard(seed in any::<u64>(), n in 1u32..=4) {
        let f = random_group_function(&mut rng_from_seed(seed), n);
        let rho = group_density_z2n(&f).unwrap();
        let h = hadamard_sylvester(n);
        let d = &(&h * rho.matrix()) * &h;
        let dim = d.dim();
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    prop_assert!(d[(i, j)].norm() <= 1e-12);
                }
            }
        }
        for k in 0..=n {
            let dec = decompose_z2n(&f, k, n - k).unwrap();
            let split = rho.with_split(1 << k, 1 << (n - k)).unwrap();
            prop_assert!(verify_decomposition(&dec, &split, RECONSTRUCTION_TOL).unwrap().ok);
        }
    }

    #[test]
    fn group_action_is_a_homomorphism(g in 0usize..8, h in 0usize..8) {
        let sigma = |x: usize| {
            let mut v = vec![0.0; 8];
            v[x] = 1.0;
            graphsep::density::GroupFunctionZ2n::new(3, v).unwrap().matrix()
        };
        prop_assert_eq!(&sigma(g) * &sigma(h), sigma(g ^ h));
    }
}

#[test]
fn density_matrix_rejects_non_states() {
    let m = IntegerMatrix::from_diagonal(&[1, 1, 1, 1]).to_complex();
    assert!(DensityMatrix::new(m.scale(0.25), 2, 2).is_ok());
    assert!(DensityMatrix::new(m, 2, 2).is_err());
}
