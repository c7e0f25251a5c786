mod common;

use common::*;
use proptest::prelude::*;
use snf_core::detadj::determinant;
use snf_core::gcdkit::{
    approx_gcd, detect_unattainable, distance_lower_bound, gcd_degree, invariant_factor_degrees, triviality_report,
};
use snf_core::oracle::exact_gcd_degree;
use snf_core::structured::{generalized_sylvester, numeric_rank};
use snf_core::{MatPoly, PerturbStructure, Poly};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sylvester_nullity_is_the_gcd_degree(seed in any::<u64>(), k in 2usize..5, planted in 0usize..3) {
        let mut r = rng(seed);
        let common = random_int_poly(&mut r, planted);
        let polys: Vec<Poly> = (0..k).map(|i| &random_int_poly(&mut r, 1 + (i + seed as usize) % 3) * &common).collect();
        let degs: Vec<usize> = polys.iter().map(|p| p.degree().finite().unwrap()).collect();
        let syl = generalized_sylvester(&polys, &degs).unwrap();
        let nullity = syl.ncols() - numeric_rank(&syl, None).unwrap();
        let exact = exact_gcd_degree(&polys).finite().unwrap();
        prop_assert_eq!(nullity, exact);
        prop_assert_eq!(gcd_degree(&polys).unwrap(), exact);
    }

    #[test]
    fn invariant_degrees_add_up_to_det_degree(seed in any::<u64>(), n in 2usize..4, d in 1usize..3) {
        let a = random_matpoly(&mut rng(seed), n, d);
        let degs = invariant_factor_degrees(&a).unwrap();
        let det = determinant(&a).unwrap().numeric_degree(1e-12).finite().unwrap();
        prop_assert_eq!(degs.iter().sum::<usize>(), det);
        prop_assert!(degs.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn approx_gcd_recovers_a_perturbed_factor() {
    let h = p(&[2.0, -3.0, 1.0]);
    let f = [&h * &p(&[1.0, 1.0]), &h * &p(&[-2.0, 0.5, 1.0]), &h * &p(&[3.0])];
    let noisy: Vec<Poly> = f
        .iter()
        .enumerate()
        .map(|(i, q)| {
            Poly::new(
                q.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c + 1e-7 * ((i + k) as f64).sin())
                    .collect(),
            )
        })
        .collect();
    let g = approx_gcd(&noisy, 2, &[3, 4, 2]).unwrap();
    for (a, b) in g.h.coeffs().iter().zip(h.coeffs()) {
        assert!((a - b).abs() < 1e-5, "{:?}", g.h);
    }
    assert!(g.residual < 1e-6);
}

#[test]
fn block_unimodular_example_is_unattainable() {
    let c = unimodular_block();
    let s = PerturbStructure::support(&c);
    assert!(detect_unattainable(&c, &s).unwrap());
    let rep = triviality_report(&c, &s).unwrap();
    assert!(rep.is_trivial && rep.unattainable);
    assert_eq!(invariant_factor_degrees(&c.reversed()).unwrap(), vec![0, 0, 2, 2]);
    assert_eq!(invariant_factor_degrees(&c).unwrap(), vec![0, 0, 0, 0]);
}

#[test]
fn generic_input_is_attainable() {
    let a = random_matpoly(&mut rng(5), 3, 2);
    assert!(!detect_unattainable(&a, &PerturbStructure::full(&a)).unwrap());
}

#[test]
fn lower_bound_vanishes_on_non_trivial_input() {
    let a = MatPoly::from_rows(vec![vec![p(&[-1.0, 1.0]), p(&[0.0])], vec![p(&[0.0]), p(&[-1.0, 1.0])]]).unwrap();
    assert_eq!(distance_lower_bound(&a).unwrap(), (0.0, 0.0));
}

#[test]
fn lower_bound_is_positive_on_ex1() {
    let (lb, sigma) = distance_lower_bound(&ex1()).unwrap();
    assert!(lb > 0.0 && sigma > 0.0);
    assert!(lb < 0.164813183138322);
}
