#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snf_core::{MatPoly, Poly};

pub fn p(c: &[f64]) -> Poly {
    Poly::new(c.to_vec())
}

/// 4x4 degree 3 instance with a trivial Smith form.
pub fn ex1() -> MatPoly {
    MatPoly::from_rows(vec![
        vec![p(&[1.0, 0.1, 1.0]), p(&[0.0]), p(&[-0.1, 0.3]), p(&[0.0])],
        vec![p(&[0.0]), p(&[1.3, 0.2, 0.9]), p(&[0.0]), p(&[0.1])],
        vec![p(&[0.0, 0.2]), p(&[0.0]), p(&[1.32, 0.0, 1.0, 0.03]), p(&[0.0])],
        vec![p(&[0.0]), p(&[1.2, 0.0, 0.1]), p(&[0.0]), p(&[0.89, 0.0, 0.89])],
    ])
    .unwrap()
}

/// Unimodular `[[t, t-1], [t+1, t]]`.
pub fn unimodular() -> MatPoly {
    MatPoly::from_rows(vec![
        vec![p(&[0.0, 1.0]), p(&[-1.0, 1.0])],
        vec![p(&[1.0, 1.0]), p(&[0.0, 1.0])],
    ])
    .unwrap()
}

/// `diag(U, U)` with `U` from [`unimodular`].
pub fn unimodular_block() -> MatPoly {
    let u = unimodular();
    let z = p(&[0.0]);
    let e = |i: usize, j: usize| u.get(i, j).clone();
    MatPoly::from_rows(vec![
        vec![e(0, 0), e(0, 1), z.clone(), z.clone()],
        vec![e(1, 0), e(1, 1), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), e(0, 0), e(0, 1)],
        vec![z.clone(), z.clone(), e(1, 0), e(1, 1)],
    ])
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_poly(r: &mut ChaCha8Rng, d: usize) -> Poly {
    Poly::new((0..=d).map(|_| r.random_range(-1.0..1.0)).collect())
}

pub fn random_matpoly(r: &mut ChaCha8Rng, n: usize, d: usize) -> MatPoly {
    let grid = (0..n).map(|_| (0..n).map(|_| random_poly(r, d)).collect()).collect();
    MatPoly::from_rows_with_bound(grid, d).unwrap()
}

/// Random polynomial with small integer coefficients, exactly representable.
pub fn random_int_poly(r: &mut ChaCha8Rng, d: usize) -> Poly {
    let mut c: Vec<f64> = (0..=d).map(|_| r.random_range(-4i32..=4) as f64).collect();
    if c[d] == 0.0 {
        c[d] = 1.0;
    }
    Poly::new(c)
}
