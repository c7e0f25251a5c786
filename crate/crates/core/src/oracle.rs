//! Independent reference computations used to cross-check the numerical
//! routines: exact rational arithmetic, finite differences and brute-force
//! one- and two-dimensional searches for small closed-form problems.

use nalgebra::{Complex, DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};

use crate::matpoly::{Degree, MatrixPolynomial, Polynomial};
use crate::scalar::Scalar;
use crate::structured::{conv_matrix, pinv};
use crate::{ExactMatPoly, ExactPoly, MatPoly, Poly};

/// Exact rational image of a floating point polynomial.
pub fn to_exact(p: &Poly) -> ExactPoly {
    Polynomial::new(
        p.coeffs()
            .iter()
            .map(|&c| BigRational::from_f64(c).expect("finite coefficient"))
            .collect(),
    )
}

pub fn to_exact_mat(a: &MatPoly) -> ExactMatPoly {
    let grid = (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| to_exact(a.get(i, j))).collect())
        .collect();
    MatrixPolynomial::from_rows_with_bound(grid, a.degree_bound()).expect("same shape")
}

pub fn to_float(p: &ExactPoly) -> Poly {
    use num_traits::ToPrimitive;
    Polynomial::new(p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_determinant<T: Scalar>(a: &MatrixPolynomial<T>) -> Polynomial<T> {
    let n = a.rows();
    let idx: Vec<usize> = (0..n).collect();
    laplace(a, 0, &idx)
}

fn laplace<T: Scalar>(a: &MatrixPolynomial<T>, row: usize, cols: &[usize]) -> Polynomial<T> {
    if cols.is_empty() {
        return Polynomial::constant(T::one());
    }
    let mut acc = Polynomial::zero();
    for (pos, &c) in cols.iter().enumerate() {
        let entry = a.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &laplace(a, row + 1, &rest);
        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc.normalized()
}

/// Quotient and remainder of `a / b` over a field.
pub fn poly_divrem<T: Scalar>(a: &Polynomial<T>, b: &Polynomial<T>) -> (Polynomial<T>, Polynomial<T>) {
    let db = match b.degree() {
        Degree::Finite(d) => d,
        Degree::NegInf => panic!("division by the zero polynomial"),
    };
    let lead = b.coeff(db);
    let mut r = a.normalized().into_coeffs();
    if r.len() <= db {
        return (Polynomial::zero(), Polynomial::new(r));
    }
    let mut q = vec![T::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone() / lead.clone();
        for (i, bi) in b.coeffs()[..=db].iter().enumerate() {
            r[k + i] = r[k + i].clone() - c.clone() * bi.clone();
        }
        q[k] = c;
    }
    r.truncate(db.max(1));
    (Polynomial::new(q).normalized(), Polynomial::new(r).normalized())
}

/// Monic greatest common divisor by the Euclidean algorithm; zero when all
/// inputs vanish.
pub fn poly_gcd<T: Scalar>(f: &[Polynomial<T>]) -> Polynomial<T> {
    let mut g = Polynomial::zero();
    for p in f {
        let mut a = g;
        let mut b = p.normalized();
        while !b.is_zero() {
            let (_, r) = poly_divrem(&a, &b);
            a = b;
            b = r;
        }
        g = a;
    }
    match g.degree() {
        Degree::NegInf => g,
        Degree::Finite(d) => {
            let lead = g.coeff(d);
            Polynomial::new(g.coeffs().iter().map(|c| c.clone() / lead.clone()).collect())
        }
    }
}

/// Central difference Jacobian of `f` at `x`.
pub fn central_difference<F>(f: F, x: &[f64], h: f64) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let m = f(x).len();
    let mut jac = DMatrix::zeros(m, x.len());
    let mut xp = x.to_vec();
    for j in 0..x.len() {
        xp[j] = x[j] + h;
        let fp = f(&xp);
        xp[j] = x[j] - h;
        let fm = f(&xp);
        xp[j] = x[j];
        for i in 0..m {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    jac
}

/// Golden section search for a minimum of a unimodal `f` on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

/// Global minimum of `f` over the real line: a grid in `atan` coordinates
/// followed by golden section refinement around the best grid point.
pub fn minimize_on_line<F: Fn(f64) -> f64>(f: F, grid: usize) -> (f64, f64) {
    let half = std::f64::consts::FRAC_PI_2;
    let theta = |k: usize| -half + std::f64::consts::PI * (k as f64 + 0.5) / grid as f64;
    let best = (0..grid)
        .map(|k| (k, f(theta(k).tan())))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    let lo = theta(best.0.saturating_sub(1));
    let hi = theta((best.0 + 1).min(grid - 1));
    let (t, v) = golden_section(|t| f(t.tan()), lo, hi, 1e-13);
    (t.tan(), v)
}

/// Nelder–Mead simplex minimization.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], scale: f64, tol: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    for _ in 0..max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[n] - vals[0]).abs() <= tol * (1.0 + vals[0].abs()) {
            let spread = simplex[1..]
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread < 1e-12 {
                break;
            }
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + t * (simplex[n][k] - centroid[k]))
                .collect()
        };
        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
        } else {
            let xc = if fr < vals[n] { along(-0.5) } else { along(0.5) };
            let fc = f(&xc);
            if fc < vals[n].min(fr) {
                simplex[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    simplex[i] = (0..n)
                        .map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]))
                        .collect();
                    vals[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("non-empty simplex");
    (simplex[best].clone(), vals[best])
}

/// Squared distance from `f` to the multiples `h q` with `deg q <= deg_q`.
pub fn projection_distance_sq(f: &Poly, h: &Poly, deg_q: usize) -> f64 {
    let c = conv_matrix(h, deg_q);
    let mut target = DVector::zeros(c.nrows());
    for (k, v) in f.coeffs().iter().enumerate() {
        target[k] = *v;
    }
    let q = pinv(&c, None).expect("small least squares") * &target;
    (&c * q - target).norm_squared()
}

/// Least-norm squared change to the coefficients `0..=deg` of `a` that makes
/// `w` a root (together with its conjugate when `w` is not real).
pub fn root_forcing_distance_sq(a: &Poly, deg: usize, w: Complex<f64>) -> f64 {
    let mut coeffs = DVector::zeros(deg + 1);
    for k in 0..=deg {
        coeffs[k] = a.coeff(k);
    }
    let mut pw = Complex::new(1.0, 0.0);
    let mut v = DMatrix::zeros(deg + 1, 2);
    for k in 0..=deg {
        v[(k, 0)] = pw.re;
        v[(k, 1)] = pw.im;
        pw *= w;
    }
    let tol = 1e-13 * v.norm();
    let p = pinv(&v, Some(tol)).expect("tiny SVD");
    let proj = &v * (p * &coeffs);
    proj.norm_squared()
}

/// Distance from `diag(f, g)` to the nearest diagonal matrix whose entries
/// share a real root, perturbing coefficients up to each entry's degree.
/// Returns `(distance, root)`.
pub fn diagonal_common_root_distance(f: &Poly, g: &Poly) -> (f64, f64) {
    let df = f.degree().finite().unwrap_or(0);
    let dg = g.degree().finite().unwrap_or(0);
    let value = |r: f64| {
        let w = Complex::new(r, 0.0);
        root_forcing_distance_sq(f, df, w) + root_forcing_distance_sq(g, dg, w)
    };
    let (r, v) = minimize_on_line(value, 4001);
    (v.sqrt(), r)
}

/// Distance from `A` to the nearest matrix polynomial (same degree bound,
/// every coefficient free) all of whose entries vanish at a common
/// `omega`. Returns `(distance, omega)` with `Im omega >= 0`.
pub fn all_entries_vanish_distance(a: &MatPoly) -> (f64, Complex<f64>) {
    let d = a.degree_bound();
    let value = |w: Complex<f64>| -> f64 {
        a.entries_row_major()
            .iter()
            .map(|p| root_forcing_distance_sq(p, d, w))
            .sum()
    };
    let (r, real_best) = minimize_on_line(|x| value(Complex::new(x, 0.0)), 4001);
    let mut best = (real_best, Complex::new(r, 0.0));
    if d >= 2 {
        let grid = 161;
        let half = std::f64::consts::FRAC_PI_2;
        let mut start = (f64::INFINITY, 0.0, 0.0);
        for i in 0..grid {
            let tx = -half + std::f64::consts::PI * (i as f64 + 0.5) / grid as f64;
            for j in 0..grid {
                let ty = half * (j as f64 + 0.5) / grid as f64;
                let v = value(Complex::new(tx.tan(), ty.tan()));
                if v < start.0 {
                    start = (v, tx, ty);
                }
            }
        }
        let to_w = |p: &[f64]| Complex::new(p[0].tan(), p[1].abs().min(half - 1e-12).tan());
        let (p, v) = nelder_mead(|p| value(to_w(p)), &[start.1, start.2], 1e-2, 1e-15, 4000);
        if v < best.0 {
            best = (v, to_w(&p));
        }
    }
    (best.0.sqrt(), best.1)
}

/// Exact degree of the GCD of exactly converted floating point inputs.
pub fn exact_gcd_degree(f: &[Poly]) -> Degree {
    let ex: Vec<ExactPoly> = f.iter().map(to_exact).collect();
    poly_gcd(&ex).degree()
}

/// Zero test helper for exact polynomials.
pub fn is_exact_zero(p: &ExactPoly) -> bool {
    p.coeffs().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    #[test]
    fn exact_gcd_of_planted_factor() {
        let f = [p(&[-1.0, 0.0, 1.0]), p(&[1.0, -2.0, 1.0])];
        let g = poly_gcd(&f.iter().map(to_exact).collect::<Vec<_>>());
        assert_eq!(to_float(&g).coeffs(), &[-1.0, 1.0]);
        assert_eq!(exact_gcd_degree(&[p(&[1.0, 1.0]), p(&[-1.0, 1.0])]), Degree::Finite(0));
    }

    #[test]
    fn laplace_matches_two_by_two() {
        let a = MatPoly::from_rows(vec![
            vec![p(&[0.0, 1.0]), p(&[-1.0, 1.0])],
            vec![p(&[1.0, 1.0]), p(&[0.0, 1.0])],
        ])
        .unwrap();
        let d = cofactor_determinant(&to_exact_mat(&a));
        assert_eq!(to_float(&d).coeffs(), &[1.0]);
    }

    #[test]
    fn intro_curve_projection() {
        let f = p(&[1.0, -2.0, 1.0]);
        let g = p(&[2.0, 2.0, 1.0]);
        for gamma in [0.01, 0.5, 1.0, -1.0] {
            let h = p(&[1.0, gamma]);
            let got = projection_distance_sq(&f, &h, 1) + projection_distance_sq(&g, &h, 1);
            let g2 = gamma * gamma;
            let want = (5.0 * g2 * g2 - 4.0 * g2 * gamma + 14.0 * g2 + 2.0) / (g2 * g2 + g2 + 1.0);
            assert!((got - want).abs() < 1e-10, "{gamma}: {got} vs {want}");
        }
    }

    #[test]
    fn line_search_finds_parabola_minimum() {
        let (x, v) = minimize_on_line(|x| (x - 3.0).powi(2) + 1.0, 1001);
        assert!((x - 3.0).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let (x, _) = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.0, 1.0],
            0.5,
            1e-16,
            10_000,
        );
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn root_forcing_real() {
        let v = root_forcing_distance_sq(&p(&[1.0, 0.0, 1.0]), 2, Complex::new(0.0, 0.0));
        assert!((v - 1.0).abs() < 1e-14);
        let v = root_forcing_distance_sq(&p(&[1.0, 0.0, 1.0]), 2, Complex::new(0.0, 1.0));
        assert!(v < 1e-24);
    }
}
