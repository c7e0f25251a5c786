//! Determinant and adjoint by evaluation and interpolation, their Jacobians
//! with respect to the coefficients of `A`, and first-order perturbation
//! bounds for the adjoint.

use nalgebra::{Complex, ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::matpoly::{MatrixPolynomial, Polynomial};
use crate::scalar::Real;
use crate::structured::{conv_matrix, numeric_rank, pinv, singular_values};

/// Jacobian of `vec(det(A))` with respect to `vec(A)`, `(nd+1) x n^2(d+1)`.
#[derive(Clone, Debug)]
pub struct JacobianDet<T: Real> {
    pub matrix: DMatrix<T>,
}

/// Jacobian of `vec(Adj(A))` with respect to `vec(A)`,
/// `n^2((n-1)d+1) x n^2(d+1)`.
#[derive(Clone, Debug)]
pub struct JacobianAdj<T: Real> {
    pub matrix: DMatrix<T>,
}

fn require_square<T: Real>(a: &MatrixPolynomial<T>) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix polynomial, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

/// `count` points on the circle of radius `max(1, |A|_inf)`.
fn sample_points<T: Real>(a: &MatrixPolynomial<T>, count: usize) -> (T, Vec<Complex<T>>) {
    let radius = a.max_abs_coeff().max(T::one());
    let two_pi = T::two_pi();
    let n = T::from_f64_lossy(count as f64);
    let pts = (0..count)
        .map(|k| {
            let theta = two_pi * T::from_f64_lossy(k as f64) / n;
            Complex::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect();
    (radius, pts)
}

/// Real coefficients of the polynomial of degree `< values.len()` taking
/// `values[k]` at `radius * exp(2 pi i k / N)`.
fn interpolate<T: Real>(radius: T, values: &[Complex<T>]) -> Vec<T> {
    let count = values.len();
    let n = T::from_f64_lossy(count as f64);
    let two_pi = T::two_pi();
    let mut scale = T::one();
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (k, v) in values.iter().enumerate() {
            let theta = -two_pi * T::from_f64_lossy(((j * k) % count) as f64) / n;
            acc += *v * Complex::new(theta.cos(), theta.sin());
        }
        out.push(acc.re / (n * scale));
        scale *= radius;
    }
    out
}

fn complex_det<T: Real>(m: DMatrix<Complex<T>>) -> Complex<T> {
    if m.nrows() == 0 {
        return Complex::new(T::one(), T::zero());
    }
    m.lu().determinant()
}

/// Adjugate of a square complex matrix from its cofactors.
fn complex_adjugate<T: Real>(m: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let n = m.nrows();
    let mut adj = DMatrix::from_element(n, n, Complex::new(T::zero(), T::zero()));
    for i in 0..n {
        for j in 0..n {
            let minor = m.clone().remove_row(i).remove_column(j);
            let c = complex_det(minor);
            adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

/// `det(A)` with degree bound `nd`.
pub fn determinant<T: Real>(a: &MatrixPolynomial<T>) -> Result<Polynomial<T>> {
    let n = require_square(a)?;
    let count = n * a.degree_bound() + 1;
    let (radius, pts) = sample_points(a, count);
    let values: Vec<_> = pts.iter().map(|&z| complex_det(a.evaluate(z))).collect();
    Ok(Polynomial::new(interpolate(radius, &values)))
}

/// `Adj(A)` with degree bound `(n-1)d`; the adjoint of a `1x1` matrix is `[1]`.
pub fn adjoint<T: Real>(a: &MatrixPolynomial<T>) -> Result<MatrixPolynomial<T>> {
    let n = require_square(a)?;
    if n == 1 {
        return Ok(MatrixPolynomial::identity(1));
    }
    let gamma = (n - 1) * a.degree_bound();
    let count = gamma + 1;
    let (radius, pts) = sample_points(a, count);
    let adjs: Vec<_> = pts.iter().map(|&z| complex_adjugate(&a.evaluate(z))).collect();
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let values: Vec<_> = adjs.iter().map(|m| m[(i, j)]).collect();
            row.push(Polynomial::new(interpolate(radius, &values)));
        }
        grid.push(row);
    }
    MatrixPolynomial::from_rows_with_bound(grid, gamma)
}

/// Column offset of coefficient `k` of entry `(i, j)` in `vec(A)`.
pub fn vec_index(n_rows: usize, d: usize, i: usize, j: usize, k: usize) -> usize {
    (j * n_rows + i) * (d + 1) + k
}

fn jacobian_det_from_adj<T: Real>(adj: &MatrixPolynomial<T>, n: usize, d: usize) -> DMatrix<T> {
    let gamma = (n - 1) * d;
    let mut m = DMatrix::zeros(n * d + 1, n * n * (d + 1));
    for j in 0..n {
        for i in 0..n {
            let cof = Polynomial::new(adj.get(j, i).padded(gamma).expect("adjoint within bound"));
            let block = conv_matrix(&cof, d);
            m.view_mut((0, vec_index(n, d, i, j, 0)), (n * d + 1, d + 1))
                .copy_from(&block);
        }
    }
    m
}

pub fn jacobian_det<T: Real>(a: &MatrixPolynomial<T>) -> Result<JacobianDet<T>> {
    let n = require_square(a)?;
    let adj = adjoint(a)?;
    Ok(JacobianDet {
        matrix: jacobian_det_from_adj(&adj, n, a.degree_bound()),
    })
}

/// Block convolution matrix `Phi_gamma(A)` of `A` itself.
fn phi_of_a<T: Real>(a: &MatrixPolynomial<T>, gamma: usize) -> DMatrix<T> {
    crate::structured::block_conv_matrix(a, gamma)
}

fn checked_phi<T: Real>(a: &MatrixPolynomial<T>, gamma: usize) -> Result<DMatrix<T>> {
    let phi = phi_of_a(a, gamma);
    let rank = numeric_rank(&phi, None)?;
    if rank < phi.ncols() {
        return Err(Error::RankDeficientInput(format!(
            "block convolution matrix has rank {rank} < {}",
            phi.ncols()
        )));
    }
    Ok(phi)
}

pub fn jacobian_adj<T: Real>(a: &MatrixPolynomial<T>) -> Result<JacobianAdj<T>> {
    let adj = adjoint(a)?;
    jacobian_adj_with(a, &adj)
}

/// [`jacobian_adj`] reusing an already computed adjoint.
pub fn jacobian_adj_with<T: Real>(a: &MatrixPolynomial<T>, adj: &MatrixPolynomial<T>) -> Result<JacobianAdj<T>> {
    let n = require_square(a)?;
    let d = a.degree_bound();
    let gamma = (n - 1) * d;
    let phi = checked_phi(a, gamma)?;
    let phi_pinv = pinv(&phi, None)?;
    let jdet = jacobian_det_from_adj(adj, n, d);

    // Right hand side of A dAdj = ddet I - E Adj, one column per coefficient of E.
    let len = gamma + d + 1;
    let cols = n * n * (d + 1);
    let mut rhs = DMatrix::zeros(n * n * len, cols);
    for c in 0..n {
        let rows = (c * n + c) * len;
        rhs.view_mut((rows, 0), (n * d + 1, cols)).copy_from(&jdet);
    }
    for j in 0..n {
        for i in 0..n {
            for k in 0..=d {
                let col = vec_index(n, d, i, j, k);
                for c in 0..n {
                    let base = (c * n + i) * len + k;
                    for (m, v) in adj.get(j, c).coeffs().iter().enumerate() {
                        rhs[(base + m, col)] -= *v;
                    }
                }
            }
        }
    }

    let block_rows = n * (gamma + 1);
    let mut out = DMatrix::zeros(n * block_rows, cols);
    for c in 0..n {
        let r = rhs.view((c * n * len, 0), (n * len, cols));
        out.view_mut((c * block_rows, 0), (block_rows, cols))
            .copy_from(&(&phi_pinv * r));
    }
    Ok(JacobianAdj { matrix: out })
}

/// `|Phi_{(n-1)d}(A)^+|_2`, the norm of the pseudo-inverse in the adjoint
/// Jacobian.
pub fn pinv_norm<T: Real>(a: &MatrixPolynomial<T>) -> Result<T> {
    let n = require_square(a)?;
    let phi = checked_phi(a, (n - 1) * a.degree_bound())?;
    let s = singular_values(&phi)?;
    Ok(T::one() / s.sigma_min())
}

/// First-order Lipschitz factor `c (n + sqrt n)(d+1) |Adj(A)|_F`.
pub fn adjoint_perturbation_bound<T: Real>(a: &MatrixPolynomial<T>) -> Result<T> {
    let n = require_square(a)?;
    let c = pinv_norm(a)?;
    let adj = adjoint(a)?;
    let nf = T::from_f64_lossy(n as f64);
    let d1 = T::from_f64_lossy((a.degree_bound() + 1) as f64);
    Ok(c * (nf + nf.sqrt()) * d1 * adj.frobenius_norm())
}

/// Hadamard-type a priori bound on `|J_Adj|_F`.
pub fn hadamard_gradient_bound<T: Real>(a: &MatrixPolynomial<T>) -> T {
    let n = a.rows() as f64;
    let d1 = (a.degree_bound() + 1) as f64;
    let inf = a.max_abs_coeff();
    let e = a.rows() as i32 - 2;
    let head = n.powi(3) * d1.powf(2.5) * d1.powi(e) * n.powf(f64::from(e) / 2.0);
    T::from_f64_lossy(head) * ComplexField::powi(inf, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{MatPoly, Poly};

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    fn unimodular() -> MatPoly {
        MatPoly::from_rows(vec![
            vec![p(&[0.0, 1.0]), p(&[-1.0, 1.0])],
            vec![p(&[1.0, 1.0]), p(&[0.0, 1.0])],
        ])
        .unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        let n = a.len().max(b.len());
        (0..n).all(|i| (a.get(i).unwrap_or(&0.0) - b.get(i).unwrap_or(&0.0)).abs() <= tol)
    }

    #[test]
    fn determinant_of_identity_and_unimodular() {
        let d = determinant(&MatPoly::identity(3)).unwrap();
        assert!(close(d.coeffs(), &[1.0], 1e-14));
        let d = determinant(&unimodular()).unwrap();
        assert!(close(d.coeffs(), &[1.0, 0.0, 0.0], 1e-12));
    }

    #[test]
    fn adjoint_two_by_two() {
        let adj = adjoint(&unimodular()).unwrap();
        assert!(close(adj.get(0, 0).coeffs(), &[0.0, 1.0], 1e-12));
        assert!(close(adj.get(0, 1).coeffs(), &[1.0, -1.0], 1e-12));
        assert!(close(adj.get(1, 0).coeffs(), &[-1.0, -1.0], 1e-12));
        assert!(close(adj.get(1, 1).coeffs(), &[0.0, 1.0], 1e-12));
        let id = adjoint(&MatPoly::identity(3)).unwrap();
        assert!(id.try_sub(&MatPoly::identity(3)).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn one_by_one() {
        let a = MatPoly::from_rows(vec![vec![p(&[1.0, 2.0, 3.0])]]).unwrap();
        assert_eq!(adjoint(&a).unwrap(), MatPoly::identity(1));
        let j = jacobian_det(&a).unwrap();
        assert_eq!(j.matrix, DMatrix::identity(3, 3));
    }

    #[test]
    fn jacobian_det_two_by_two_block() {
        let a = MatPoly::from_rows(vec![
            vec![p(&[1.0, 2.0]), p(&[0.5, -1.0])],
            vec![p(&[3.0, 0.0]), p(&[-2.0, 4.0])],
        ])
        .unwrap();
        let j = jacobian_det(&a).unwrap();
        let block = j.matrix.view((0, 0), (3, 2)).into_owned();
        assert_eq!(block, conv_matrix(a.get(1, 1), 1));
    }

    #[test]
    fn hadamard_small_cases() {
        let a = MatPoly::from_rows(vec![vec![p(&[1.0, 0.5]); 2]; 2]).unwrap();
        assert!((hadamard_gradient_bound(&a) - 8.0 * 2f64.powf(2.5)).abs() < 1e-12);
        let b = MatPoly::from_rows(vec![vec![p(&[1.0, -0.5]); 3]; 3]).unwrap();
        let expect = 27.0 * 2f64.powf(2.5) * 2.0 * 3f64.sqrt();
        assert!((hadamard_gradient_bound(&b) - expect).abs() < 1e-9);
    }

    #[test]
    fn perturbation_bound_of_identity() {
        let b = adjoint_perturbation_bound(&MatPoly::identity(2)).unwrap();
        let expect = (2.0 + 2f64.sqrt()) * 2f64.sqrt();
        assert!((b - expect).abs() < 1e-12);
    }

    #[test]
    fn jacobian_adj_two_by_two_is_signed_permutation() {
        let a = MatPoly::from_rows(vec![
            vec![p(&[1.0, 2.0]), p(&[0.5, -1.0])],
            vec![p(&[3.0, 0.0]), p(&[-2.0, 4.0])],
        ])
        .unwrap();
        let j = jacobian_adj(&a).unwrap().matrix;
        for r in 0..j.nrows() {
            let nz: Vec<f64> = j.row(r).iter().copied().filter(|v| v.abs() > 1e-9).collect();
            assert_eq!(nz.len(), 1);
            assert!((nz[0].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_input_is_rejected() {
        let a = MatPoly::from_rows(vec![vec![p(&[1.0, 1.0]); 2]; 2]).unwrap();
        assert!(matches!(jacobian_adj(&a), Err(Error::RankDeficientInput(_))));
    }
}
