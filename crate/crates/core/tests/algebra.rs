mod common;

use common::*;
use proptest::prelude::*;
use snf_core::detadj::{adjoint, determinant, jacobian_adj, jacobian_det};
use snf_core::oracle::{central_difference, cofactor_determinant, to_exact_mat, to_float};
use snf_core::structured::{block_conv_matrix, conv_matrix, numeric_rank};
use snf_core::{MatPoly, Poly};

fn poly_close(a: &Poly, b: &Poly, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vec_unvec_round_trip(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, d in 0usize..4, extra in 0usize..3) {
        let mut r = rng(seed);
        let grid = (0..rows).map(|_| (0..cols).map(|_| random_poly(&mut r, d)).collect()).collect();
        let a = MatPoly::from_rows_with_bound(grid, d).unwrap();
        let v = a.vec(d + extra).unwrap();
        prop_assert_eq!(v.len(), rows * cols * (d + extra + 1));
        let back = MatPoly::unvec(rows, cols, d + extra, &v).unwrap();
        for i in 0..rows {
            for j in 0..cols {
                prop_assert_eq!(back.get(i, j).normalized(), a.get(i, j).normalized());
            }
        }
        let stacked: Vec<f64> = a.pvec().iter().flat_map(|p| p.padded(d + extra).unwrap()).collect();
        prop_assert_eq!(stacked, v);
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>(), n in 1usize..4, d in 0usize..4) {
        let a = random_matpoly(&mut rng(seed), n, d);
        let back = a.reversed().reversed();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(back.get(i, j).normalized(), a.get(i, j).normalized());
            }
        }
    }

    #[test]
    fn convolution_matrix_multiplies(seed in any::<u64>(), da in 0usize..5, db in 0usize..5) {
        let mut r = rng(seed);
        let (a, b) = (random_poly(&mut r, da), random_poly(&mut r, db));
        let c = conv_matrix(&a, db) * nalgebra::DVector::from_vec(b.padded(db).unwrap());
        let prod = &a * &b;
        for k in 0..=da + db {
            prop_assert!((c[k] - prod.coeff(k)).abs() <= 1e-12);
        }
    }

    #[test]
    fn block_convolution_multiplies_columns(seed in any::<u64>(), n in 1usize..4, d in 0usize..3, d2 in 0usize..3) {
        let mut r = rng(seed);
        let a = random_matpoly(&mut r, n, d);
        let b: Vec<Poly> = (0..n).map(|_| random_poly(&mut r, d2)).collect();
        let x: Vec<f64> = b.iter().flat_map(|p| p.padded(d2).unwrap()).collect();
        let y = block_conv_matrix(&a, d2) * nalgebra::DVector::from_vec(x);
        let ab = a.try_mul(&MatPoly::column(&b).unwrap().with_degree_bound(d2).unwrap()).unwrap();
        let expect: Vec<f64> = ab.pvec().iter().flat_map(|p| p.padded(d + d2).unwrap()).collect();
        prop_assert_eq!(y.len(), expect.len());
        for (u, v) in y.iter().zip(&expect) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn kronecker_mixed_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c, e) = (
            random_matpoly(&mut r, 2, 1),
            random_matpoly(&mut r, 2, 1),
            random_matpoly(&mut r, 2, 1),
            random_matpoly(&mut r, 2, 1),
        );
        let lhs = a.kronecker(&b).try_mul(&c.kronecker(&e)).unwrap();
        let rhs = a.try_mul(&c).unwrap().kronecker(&b.try_mul(&e).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!(poly_close(lhs.get(i, j), rhs.get(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn adjoint_is_a_two_sided_inverse_up_to_det(seed in any::<u64>(), n in 1usize..5, d in 0usize..4) {
        let a = random_matpoly(&mut rng(seed), n, d);
        let adj = adjoint(&a).unwrap();
        let det = determinant(&a).unwrap();
        let scale = 1.0 + a.frobenius_norm().powi(n as i32);
        for prod in [a.try_mul(&adj).unwrap(), adj.try_mul(&a).unwrap()] {
            let mut err = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let target = if i == j { det.clone() } else { Poly::zero() };
                    err += (prod.get(i, j) - &target).norm().powi(2);
                }
            }
            prop_assert!(err.sqrt() <= 1e-10 * scale, "{}", err.sqrt());
        }
    }

    #[test]
    fn determinant_matches_exact_cofactors(seed in any::<u64>(), n in 1usize..5, d in 0usize..4) {
        let a = random_matpoly(&mut rng(seed), n, d);
        let det = determinant(&a).unwrap();
        let exact = to_float(&cofactor_determinant(&to_exact_mat(&a)));
        prop_assert!((&det - &exact).norm() <= 1e-10 * exact.norm().max(1e-300));
        let dt = determinant(&a.transpose()).unwrap();
        prop_assert!(poly_close(&det, &dt, 1e-10));
    }

    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>(), n in 1usize..4, d in 0usize..3) {
        let mut r = rng(seed);
        let (a, b) = (random_matpoly(&mut r, n, d), random_matpoly(&mut r, n, d));
        let lhs = determinant(&a.try_mul(&b).unwrap()).unwrap();
        let rhs = &determinant(&a).unwrap() * &determinant(&b).unwrap();
        prop_assert!(poly_close(&lhs, &rhs, 1e-10));
    }
}

fn fd_relative_error(j: &nalgebra::DMatrix<f64>, a: &MatPoly, out_pad: usize, f: impl Fn(&MatPoly) -> MatPoly) -> f64 {
    let d = a.degree_bound();
    let x = a.vec(d).unwrap();
    let (n, m) = (a.rows(), a.cols());
    let fd = central_difference(
        |v| f(&MatPoly::unvec(n, m, d, v).unwrap()).vec(out_pad).unwrap(),
        &x,
        1e-6,
    );
    (j - fd).norm() / j.norm().max(1.0)
}

#[test]
fn jacobians_match_finite_differences() {
    let mut r = rng(11);
    for case in 0..20 {
        let n = 1 + case % 3;
        let d = 1 + (case / 3) % 2;
        let a = random_matpoly(&mut r, n, d);
        let jd = jacobian_det(&a).unwrap().matrix;
        let err = fd_relative_error(&jd, &a, n * d, |m| MatPoly::column(&[determinant(m).unwrap()]).unwrap());
        assert!(err <= 1e-5, "det case {case}: {err:e}");
        if n >= 2 {
            let ja = jacobian_adj(&a).unwrap().matrix;
            let err = fd_relative_error(&ja, &a, (n - 1) * d, |m| adjoint(m).unwrap());
            assert!(err <= 1e-5, "adj case {case}: {err:e}");
            assert_eq!(numeric_rank(&ja, None).unwrap(), ja.ncols(), "adj case {case}");
        }
    }
}

#[test]
fn jacobian_shapes() {
    let a = random_matpoly(&mut rng(3), 3, 2);
    assert_eq!(jacobian_det(&a).unwrap().matrix.shape(), (7, 27));
    assert_eq!(jacobian_adj(&a).unwrap().matrix.shape(), (45, 27));
}
