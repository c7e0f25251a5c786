//! Scalar matrix embeddings of polynomial arithmetic and SVD based rank tools.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matpoly::{Degree, MatrixPolynomial, Polynomial};
use crate::scalar::{Real, Scalar};

/// Toeplitz matrix of multiplication by `a` on polynomials of degree `<= d2`.
///
/// The declared degree of `a` is its stored length minus one, so padded
/// entries of a [`MatrixPolynomial`] keep their bound.
pub fn conv_matrix<T: Scalar>(a: &Polynomial<T>, d2: usize) -> DMatrix<T> {
    let c = a.coeffs();
    let da = c.len() - 1;
    let mut m = DMatrix::from_element(da + d2 + 1, d2 + 1, T::zero());
    for j in 0..=d2 {
        for (k, ck) in c.iter().enumerate() {
            m[(j + k, j)] = ck.clone();
        }
    }
    m
}

/// Block matrix whose `(i, j)` block is `conv_matrix(A_ij, d2)`.
pub fn block_conv_matrix<T: Scalar>(a: &MatrixPolynomial<T>, d2: usize) -> DMatrix<T> {
    let d1 = a.degree_bound();
    let (br, bc) = (d1 + d2 + 1, d2 + 1);
    let mut m = DMatrix::from_element(a.rows() * br, a.cols() * bc, T::zero());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let padded = Polynomial::new(a.get(i, j).padded(d1).expect("entry within bound"));
            let block = conv_matrix(&padded, d2);
            m.view_mut((i * br, j * bc), (br, bc)).copy_from(&block);
        }
    }
    m
}

/// Kronecker product of scalar matrices.
pub fn kronecker<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    let (m, n) = a.shape();
    let (p, q) = b.shape();
    DMatrix::from_fn(m * p, n * q, |r, c| {
        a[(r / p, c / q)].clone() * b[(r % p, c % q)].clone()
    })
}

/// Generalized Sylvester matrix of `f` with declared degrees `dprime`.
///
/// The inputs are stably sorted by non-increasing declared degree first.
/// With `d` the largest and `l` the second largest declared degree the
/// result has `l + (k-1) d` rows and `l + d` columns.
pub fn generalized_sylvester<T: Scalar>(f: &[Polynomial<T>], dprime: &[usize]) -> Result<DMatrix<T>> {
    if f.len() != dprime.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} polynomials but {} declared degrees",
            f.len(),
            dprime.len()
        )));
    }
    if f.len() < 2 {
        return Err(Error::InvalidArgument(
            "a Sylvester matrix needs at least two polynomials".into(),
        ));
    }
    for (index, (p, &dp)) in f.iter().zip(dprime).enumerate() {
        if let Degree::Finite(actual) = p.degree() {
            if actual > dp {
                return Err(Error::DegreeBoundViolation {
                    index,
                    declared: dp,
                    actual,
                });
            }
        }
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| dprime[b].cmp(&dprime[a]));
    let d = dprime[order[0]];
    let l = order[1..].iter().map(|&i| dprime[i]).max().unwrap_or(0);
    let k = f.len();
    let cols = l + d;
    let mut m = DMatrix::from_element(l + (k - 1) * d, cols, T::zero());
    let mut row = 0;
    for (pos, &idx) in order.iter().enumerate() {
        let shifts = if pos == 0 { l } else { d };
        let coeffs = f[idx].padded(dprime[idx])?;
        for s in 0..shifts {
            for (c, v) in coeffs.iter().enumerate() {
                m[(row + s, s + c)] = v.clone();
            }
        }
        row += shifts;
    }
    Ok(m)
}

/// Singular value decomposition with descending singular values.
///
/// `v` is always the full `cols x cols` orthogonal factor so that trailing
/// columns span the right kernel, also for wide matrices.
#[derive(Clone, Debug)]
pub struct SvdResult<T: Real> {
    pub singular_values: Vec<T>,
    /// `rows x min(rows, cols)`.
    pub u: DMatrix<T>,
    /// `cols x cols`.
    pub v: DMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    pub fn sigma_max(&self) -> T {
        self.singular_values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn sigma_min(&self) -> T {
        self.singular_values.last().copied().unwrap_or_else(T::zero)
    }
}

pub fn singular_values<T: Real>(m: &DMatrix<T>) -> Result<SvdResult<T>> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let work = if rows < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work
        .try_svd(true, true, T::default_epsilon(), 0)
        .ok_or(Error::ConvergenceFailure)?;
    let u = svd.u.ok_or(Error::ConvergenceFailure)?;
    let vt = svd.v_t.ok_or(Error::ConvergenceFailure)?;
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap_or(std::cmp::Ordering::Equal));
    let k = rows.min(cols);
    let singular_values = order[..k].iter().map(|&i| s[i]).collect();
    let mut u_out = DMatrix::zeros(rows, k);
    for (c, &i) in order[..k].iter().enumerate() {
        u_out.set_column(c, &u.column(i).rows(0, rows));
    }
    let mut v = DMatrix::zeros(cols, cols);
    for (c, &i) in order.iter().enumerate() {
        v.set_column(c, &vt.row(i).transpose());
    }
    Ok(SvdResult {
        singular_values,
        u: u_out,
        v,
    })
}

/// Rank threshold `sigma_1 * max(rows, cols) * 1e-12`.
pub fn default_rank_tol<T: Real>(sigma_max: T, rows: usize, cols: usize) -> T {
    sigma_max * T::from_f64_lossy(rows.max(cols) as f64 * 1e-12)
}

/// Number of singular values above `tol` (default [`default_rank_tol`]).
pub fn numeric_rank<T: Real>(m: &DMatrix<T>, tol: Option<T>) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let svd = singular_values(m)?;
    Ok(rank_of(&svd, m.nrows(), m.ncols(), tol))
}

fn rank_of<T: Real>(svd: &SvdResult<T>, rows: usize, cols: usize, tol: Option<T>) -> usize {
    let tau = tol.unwrap_or_else(|| default_rank_tol(svd.sigma_max(), rows, cols));
    svd.singular_values.iter().filter(|&&s| s > tau).count()
}

/// Moore–Penrose pseudo-inverse truncated at the numeric rank.
pub fn pinv<T: Real>(m: &DMatrix<T>, tol: Option<T>) -> Result<DMatrix<T>> {
    let (rows, cols) = m.shape();
    let svd = singular_values(m)?;
    let r = rank_of(&svd, rows, cols, tol);
    let mut out = DMatrix::zeros(cols, rows);
    for k in 0..r {
        let vk = svd.v.column(k);
        let uk = svd.u.column(k);
        out += (vk * uk.transpose()) / svd.singular_values[k];
    }
    Ok(out)
}

/// Descending singular values of a complex matrix.
pub fn complex_singular_values<T: Real>(m: &DMatrix<Complex<T>>) -> Vec<T> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<T> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Minimum-norm least squares solution of `m x = b`.
pub fn lstsq<T: Real>(m: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    if m.ncols() == 0 {
        return Ok(DVector::zeros(0));
    }
    Ok(pinv(m, None)? * b)
}

/// Orthonormal basis (as columns) of the numeric right kernel.
pub fn kernel_basis<T: Real>(m: &DMatrix<T>, tol: Option<T>) -> Result<DMatrix<T>> {
    let (rows, cols) = m.shape();
    let svd = singular_values(m)?;
    let r = rank_of(&svd, rows, cols, tol);
    Ok(svd.v.columns(r, cols - r).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Poly;

    #[test]
    fn conv_of_one_is_identity() {
        let m = conv_matrix(&Poly::constant(1.0), 2);
        assert_eq!(m, DMatrix::identity(3, 3));
    }

    #[test]
    fn conv_of_one_plus_t() {
        let m = conv_matrix(&Poly::new(vec![1.0, 1.0]), 1);
        assert_eq!(m, DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 1.0, 1.0, 0.0, 1.0]));
    }

    #[test]
    fn sylvester_shape_and_rank() {
        let f = [Poly::new(vec![-1.0, 0.0, 1.0]), Poly::new(vec![-1.0, 1.0])];
        let s = generalized_sylvester(&f, &[2, 1]).unwrap();
        assert_eq!(s.shape(), (3, 3));
        assert_eq!(numeric_rank(&s, None).unwrap(), 2);
        let g = [Poly::new(vec![0.0, 1.0]), Poly::constant(1.0)];
        let s = generalized_sylvester(&g, &[1, 0]).unwrap();
        assert_eq!(numeric_rank(&s, None).unwrap(), s.ncols());
    }

    #[test]
    fn sylvester_sorts_by_declared_degree() {
        let f = [Poly::new(vec![-1.0, 1.0]), Poly::new(vec![-1.0, 0.0, 1.0])];
        let a = generalized_sylvester(&f, &[1, 2]).unwrap();
        let b = generalized_sylvester(&[f[1].clone(), f[0].clone()], &[2, 1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sylvester_rejects_low_bound() {
        let f = [Poly::new(vec![1.0, 1.0, 1.0]), Poly::constant(1.0)];
        assert!(matches!(
            generalized_sylvester(&f, &[1, 0]),
            Err(Error::DegreeBoundViolation { index: 0, .. })
        ));
    }

    #[test]
    fn svd_of_diag() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 3.0]));
        let s = singular_values(&m).unwrap();
        assert_eq!(s.singular_values, vec![3.0, 0.0]);
        assert_eq!(numeric_rank(&m, None).unwrap(), 1);
        assert_eq!(numeric_rank(&DMatrix::<f64>::zeros(3, 2), None).unwrap(), 0);
        assert_eq!(numeric_rank(&DMatrix::<f64>::identity(4, 4), None).unwrap(), 4);
    }

    #[test]
    fn wide_svd_has_full_v() {
        let m = DMatrix::<f64>::from_row_slice(1, 3, &[1.0, 2.0, 2.0]);
        let s = singular_values(&m).unwrap();
        assert_eq!(s.singular_values.len(), 1);
        assert!((s.singular_values[0] - 3.0).abs() < 1e-12);
        let k = kernel_basis(&m, None).unwrap();
        assert_eq!(k.ncols(), 2);
        assert!((&m * &k).norm() < 1e-12);
        assert!((k.transpose() * &k - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn pinv_of_rank_one() {
        let m = DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = pinv(&m, None).unwrap();
        assert!((&m * &p * &m - &m).norm() < 1e-12);
        assert!((p[(0, 0)] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn kronecker_identity_blocks() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let k = kronecker(&DMatrix::identity(2, 2), &b);
        assert_eq!(k.view((0, 0), (2, 2)), b.view((0, 0), (2, 2)));
        assert_eq!(k.view((2, 2), (2, 2)), b.view((0, 0), (2, 2)));
        assert_eq!(k.view((0, 2), (2, 2)).norm(), 0.0);
    }
}
