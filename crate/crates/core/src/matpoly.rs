//! Dense polynomials and matrix polynomials with coefficients in ascending
//! degree order.
//!
//! A [`MatrixPolynomial`] carries an explicit degree bound that may exceed the
//! actual degree of every entry; reversal and padded vectorization are taken
//! with respect to the declared bound.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Degree of a polynomial. The zero polynomial has degree [`Degree::NegInf`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Degree::NegInf)
    }

    /// Degree of a product.
    pub fn plus(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInf,
        }
    }

    /// `true` when a polynomial of this degree fits in `bound + 1` coefficients.
    pub fn fits(self, bound: usize) -> bool {
        match self {
            Degree::NegInf => true,
            Degree::Finite(d) => d <= bound,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Univariate polynomial, `coeffs[i]` is the coefficient of `t^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// An empty coefficient list is read as the zero polynomial.
    pub fn new(coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![T::zero()],
        }
    }

    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `c * t^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `t^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(d) => Degree::Finite(d),
            None => Degree::NegInf,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_neg_inf()
    }

    /// Coefficient vector of length `pad + 1`.
    pub fn padded(&self, pad: usize) -> Result<Vec<T>> {
        if let Degree::Finite(d) = self.degree() {
            if d > pad {
                return Err(Error::PadTooSmall { pad, degree: d });
            }
        }
        let mut v = vec![T::zero(); pad + 1];
        for (dst, c) in v.iter_mut().zip(self.coeffs.iter()) {
            *dst = c.clone();
        }
        Ok(v)
    }

    /// Drops trailing zero coefficients (keeps at least one).
    pub fn normalized(&self) -> Self {
        let len = match self.degree() {
            Degree::Finite(d) => d + 1,
            Degree::NegInf => 1,
        };
        Self::new(self.coeffs[..len].to_vec())
    }

    /// Degree-`d` reversal `t^d f(1/t)`.
    pub fn reverse(&self, d: usize) -> Result<Self> {
        let mut v = self.padded(d)?;
        v.reverse();
        Ok(Self { coeffs: v })
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut k = T::zero();
        let coeffs = self.coeffs[1..]
            .iter()
            .map(|c| {
                k = k.clone() + T::one();
                c.clone() * k.clone()
            })
            .collect();
        Self { coeffs }
    }
}

impl<T: Real> Polynomial<T> {
    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &c| acc + c * c).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, &c| if c.abs() > acc { c.abs() } else { acc })
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &c| {
                acc * z + Complex::new(c, T::zero())
            })
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Sets coefficients with `|c| <= tol` to zero.
    pub fn chopped(&self, tol: T) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| if c.abs() <= tol { T::zero() } else { c })
                .collect(),
        }
    }

    /// Degree after discarding trailing coefficients below `rel_tol * max|c|`.
    pub fn numeric_degree(&self, rel_tol: T) -> Degree {
        let scale = self.max_abs();
        if scale == T::zero() {
            return Degree::NegInf;
        }
        let tol = rel_tol * scale;
        match self.coeffs.iter().rposition(|c| c.abs() > tol) {
            Some(d) => Degree::Finite(d),
            None => Degree::NegInf,
        }
    }

    /// Copy truncated after the numeric degree.
    pub fn trimmed(&self, rel_tol: T) -> Self {
        match self.numeric_degree(rel_tol) {
            Degree::NegInf => Self::zero(),
            Degree::Finite(d) => Self::new(self.coeffs[..=d].to_vec()),
        }
    }
}

impl Polynomial<f64> {
    /// Complex roots from the eigenvalues of the companion matrix.
    ///
    /// Exactly zero low-order coefficients are factored out first so roots at
    /// the origin are returned exactly.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        let d = match self.degree() {
            Degree::NegInf | Degree::Finite(0) => return Vec::new(),
            Degree::Finite(d) => d,
        };
        let c = &self.coeffs[..=d];
        let low = c.iter().position(|x| *x != 0.0).unwrap_or(0);
        let mut roots = vec![Complex::new(0.0, 0.0); low];
        let c = &c[low..];
        let m = c.len() - 1;
        if m == 0 {
            return roots;
        }
        let lead = c[m];
        let mut comp = DMatrix::<f64>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..m {
            comp[(i, m - 1)] = -c[i] / lead;
        }
        roots.extend(comp.complex_eigenvalues().iter().copied());
        roots
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// `rows x cols` grid of polynomials with a declared degree bound.
///
/// Entries are stored row-major and always padded to `degree_bound + 1`
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial<T> {
    rows: usize,
    cols: usize,
    degree_bound: usize,
    entries: Vec<Polynomial<T>>,
}

impl<T: Scalar> MatrixPolynomial<T> {
    /// Builds from a row-major grid; the degree bound is the maximal entry degree.
    pub fn from_rows(grid: Vec<Vec<Polynomial<T>>>) -> Result<Self> {
        let bound = grid
            .iter()
            .flatten()
            .filter_map(|p| p.degree().finite())
            .max()
            .unwrap_or(0);
        Self::from_rows_with_bound(grid, bound)
    }

    pub fn from_rows_with_bound(grid: Vec<Vec<Polynomial<T>>>, degree_bound: usize) -> Result<Self> {
        let rows = grid.len();
        if rows == 0 {
            return Err(Error::DimensionMismatch("matrix polynomial has no rows".into()));
        }
        let cols = grid[0].len();
        if cols == 0 || grid.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged or empty rows".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for p in grid.into_iter().flatten() {
            entries.push(Polynomial::new(p.padded(degree_bound)?));
        }
        Ok(Self {
            rows,
            cols,
            degree_bound,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, degree_bound: usize) -> Self {
        Self {
            rows,
            cols,
            degree_bound,
            entries: vec![Polynomial::new(vec![T::zero(); degree_bound + 1]); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n, 0);
        for i in 0..n {
            m.entries[i * n + i] = Polynomial::constant(T::one());
        }
        m
    }

    /// Builds `sum_k C_k t^k` from scalar coefficient matrices.
    pub fn from_coefficients(coeffs: &[DMatrix<T>]) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no coefficient matrices".into()))?;
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|c| c.shape() != (rows, cols)) {
            return Err(Error::DimensionMismatch("coefficient shapes differ".into()));
        }
        let d = coeffs.len() - 1;
        let mut m = Self::zeros(rows, cols, d);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = Polynomial::new(coeffs.iter().map(|c| c[(i, j)].clone()).collect());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial<T>) -> Result<()> {
        let padded = p.padded(self.degree_bound)?;
        self.entries[i * self.cols + j] = Polynomial::new(padded);
        Ok(())
    }

    /// Coefficient `k` of entry `(i, j)`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> T {
        self.get(i, j).coeff(k)
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, c: T) {
        let cols = self.cols;
        self.entries[i * cols + j].coeffs[k] = c;
    }

    pub fn entries_row_major(&self) -> &[Polynomial<T>] {
        &self.entries
    }

    /// Maximum entry degree, [`Degree::NegInf`] for the zero matrix.
    pub fn degree(&self) -> Degree {
        self.entries
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(Degree::NegInf)
    }

    /// Same matrix with a different declared degree bound.
    pub fn with_degree_bound(&self, degree_bound: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for p in &self.entries {
            entries.push(Polynomial::new(p.padded(degree_bound)?));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            degree_bound,
            entries,
        })
    }

    /// Scalar coefficient matrix of `t^k`.
    pub fn coefficient(&self, k: usize) -> DMatrix<T> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.coeff(i, j, k))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.degree_bound);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Entries in column-major order (the polynomial vec operator).
    pub fn pvec(&self) -> Vec<Polynomial<T>> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Column vector built from a list of polynomials.
    pub fn column(polys: &[Polynomial<T>]) -> Result<Self> {
        Self::from_rows(polys.iter().map(|p| vec![p.clone()]).collect())
    }

    /// Stacks padded coefficient vectors of the entries in column-major
    /// order; length `rows * cols * (pad + 1)`.
    pub fn vec(&self, pad: usize) -> Result<Vec<T>> {
        if let Degree::Finite(d) = self.degree() {
            if d > pad {
                return Err(Error::PadTooSmall { pad, degree: d });
            }
        }
        let mut out = Vec::with_capacity(self.rows * self.cols * (pad + 1));
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.extend(self.get(i, j).padded(pad)?);
            }
        }
        Ok(out)
    }

    /// Inverse of [`MatrixPolynomial::vec`].
    pub fn unvec(rows: usize, cols: usize, pad: usize, v: &[T]) -> Result<Self> {
        if v.len() != rows * cols * (pad + 1) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} cannot hold a {rows}x{cols} matrix of degree {pad}",
                v.len()
            )));
        }
        let mut out = Self::zeros(rows, cols, pad);
        for j in 0..cols {
            for i in 0..rows {
                let start = (j * rows + i) * (pad + 1);
                out.entries[i * cols + j] = Polynomial::new(v[start..start + pad + 1].to_vec());
            }
        }
        Ok(out)
    }

    /// Entry-wise reversal `t^d A(1/t)` with the declared bound as `d`.
    pub fn reversed(&self) -> Self {
        let d = self.degree_bound;
        let mut out = self.clone();
        for p in &mut out.entries {
            *p = p.reverse(d).expect("entries respect the degree bound");
        }
        out
    }

    /// Entry-wise reversal with a per-entry degree grid (row-major).
    ///
    /// Entries whose degree is [`Degree::NegInf`] must be zero and stay zero.
    pub fn reverse_entries(&self, degrees: &[Degree]) -> Result<Self> {
        if degrees.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch("degree grid size".into()));
        }
        let bound = degrees.iter().filter_map(|d| d.finite()).max().unwrap_or(0);
        let mut out = Self::zeros(self.rows, self.cols, bound);
        for (idx, (p, d)) in self.entries.iter().zip(degrees).enumerate() {
            out.entries[idx] = match d {
                Degree::Finite(d) => Polynomial::new(p.reverse(*d)?.padded(bound)?),
                Degree::NegInf => {
                    if !p.is_zero() {
                        return Err(Error::DimensionMismatch("non-zero entry with degree -inf".into()));
                    }
                    Polynomial::new(vec![T::zero(); bound + 1])
                }
            };
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = self.clone();
        for p in &mut out.entries {
            *p = p.scale(c);
        }
        out
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&Polynomial<T>, &Polynomial<T>) -> Polynomial<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let bound = self.degree_bound.max(rhs.degree_bound);
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(&rhs.entries) {
            entries.push(Polynomial::new(f(a, b).padded(bound)?));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            degree_bound: bound,
            entries,
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Matrix product; the degree bound is the sum of the operand bounds.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let bound = self.degree_bound + rhs.degree_bound;
        let mut out = Self::zeros(self.rows, rhs.cols, bound);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Polynomial::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.entries[i * rhs.cols + j] = Polynomial::new(acc.padded(bound)?);
            }
        }
        Ok(out)
    }

    /// Kronecker product of matrix polynomials.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let bound = self.degree_bound + rhs.degree_bound;
        let mut out = Self::zeros(rows, cols, bound);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let p = a * rhs.get(k, l);
                        out.entries[(i * rhs.rows + k) * cols + j * rhs.cols + l] =
                            Polynomial::new(p.padded(bound).expect("product degree within bound"));
                    }
                }
            }
        }
        out
    }
}

impl<T: Real> MatrixPolynomial<T> {
    /// Entry-wise Horner evaluation at a complex point.
    pub fn evaluate(&self, z: Complex<T>) -> DMatrix<Complex<T>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval_complex(z))
    }

    pub fn evaluate_real(&self, x: T) -> DMatrix<T> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(x))
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .flat_map(|p| p.coeffs.iter())
            .fold(T::zero(), |acc, &c| acc + c * c)
            .sqrt()
    }

    /// Largest absolute coefficient over all entries.
    pub fn max_abs_coeff(&self) -> T {
        self.entries
            .iter()
            .map(Polynomial::max_abs)
            .fold(T::zero(), |acc, m| if m > acc { m } else { acc })
    }
}

/// Per-coefficient mask describing an affine perturbation set
/// `{ C0 + sum_k p_k E_k }`, one unit coefficient `E_k` per masked cell.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbStructure {
    rows: usize,
    cols: usize,
    degree_bound: usize,
    /// Row-major grid, each of length `degree_bound + 1`.
    mask: Vec<Vec<bool>>,
    base_offset: Option<MatrixPolynomial<f64>>,
}

/// Named mask constructors.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// Every coefficient up to the degree bound.
    Full,
    /// Exactly the non-zero coefficients of the input.
    Support,
    /// Coefficients up to each entry's degree.
    Degree,
}

impl PerturbStructure {
    pub fn new<T: Scalar>(a: &MatrixPolynomial<T>, kind: StructureKind) -> Self {
        let d = a.degree_bound();
        let mut mask = Vec::with_capacity(a.rows() * a.cols());
        for p in a.entries_row_major() {
            let cells = match kind {
                StructureKind::Full => vec![true; d + 1],
                StructureKind::Support => (0..=d).map(|k| !p.coeff(k).is_zero()).collect(),
                StructureKind::Degree => {
                    let deg = p.degree();
                    (0..=d).map(|k| Degree::Finite(k) <= deg).collect()
                }
            };
            mask.push(cells);
        }
        Self {
            rows: a.rows(),
            cols: a.cols(),
            degree_bound: d,
            mask,
            base_offset: None,
        }
    }

    pub fn full<T: Scalar>(a: &MatrixPolynomial<T>) -> Self {
        Self::new(a, StructureKind::Full)
    }

    pub fn support<T: Scalar>(a: &MatrixPolynomial<T>) -> Self {
        Self::new(a, StructureKind::Support)
    }

    pub fn degree<T: Scalar>(a: &MatrixPolynomial<T>) -> Self {
        Self::new(a, StructureKind::Degree)
    }

    /// Explicit row-major mask grid.
    pub fn from_mask(rows: usize, cols: usize, degree_bound: usize, mask: Vec<Vec<bool>>) -> Result<Self> {
        if mask.len() != rows * cols || mask.iter().any(|m| m.len() != degree_bound + 1) {
            return Err(Error::DimensionMismatch(format!(
                "mask must be {rows}x{cols} cells of length {}",
                degree_bound + 1
            )));
        }
        Ok(Self {
            rows,
            cols,
            degree_bound,
            mask,
            base_offset: None,
        })
    }

    pub fn with_base_offset(mut self, offset: MatrixPolynomial<f64>) -> Result<Self> {
        if offset.rows() != self.rows || offset.cols() != self.cols {
            return Err(Error::DimensionMismatch("base offset shape".into()));
        }
        self.base_offset = Some(offset.with_degree_bound(self.degree_bound)?);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn base_offset(&self) -> Option<&MatrixPolynomial<f64>> {
        self.base_offset.as_ref()
    }

    pub fn is_masked(&self, i: usize, j: usize, k: usize) -> bool {
        self.mask[i * self.cols + j].get(k).copied().unwrap_or(false)
    }

    /// Mask row of entry `(i, j)`.
    pub fn cells(&self, i: usize, j: usize) -> &[bool] {
        &self.mask[i * self.cols + j]
    }

    /// Number of free parameters.
    pub fn count(&self) -> usize {
        self.mask.iter().flatten().filter(|b| **b).count()
    }

    /// `(row, col, power)` of every parameter, ordered like `vec`:
    /// column-major entries, ascending powers.
    pub fn positions(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.count());
        for j in 0..self.cols {
            for i in 0..self.rows {
                for (k, &b) in self.cells(i, j).iter().enumerate() {
                    if b {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// The same structure on `t^d A(1/t)`: coefficient `k` maps to `d - k`.
    pub fn reversed(&self) -> Self {
        let mask = self
            .mask
            .iter()
            .map(|cells| cells.iter().rev().copied().collect())
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            degree_bound: self.degree_bound,
            mask,
            base_offset: self.base_offset.as_ref().map(|c| c.reversed()),
        }
    }

    /// Largest admissible degree of every entry of the perturbed matrix
    /// `a + C0 + delta` (row-major).
    pub fn reachable_entry_degrees<T: Scalar>(&self, a: &MatrixPolynomial<T>) -> Vec<Degree> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let masked = self
                    .cells(i, j)
                    .iter()
                    .rposition(|b| *b)
                    .map(Degree::Finite)
                    .unwrap_or(Degree::NegInf);
                let offset = self
                    .base_offset
                    .as_ref()
                    .map(|c| c.get(i, j).degree())
                    .unwrap_or(Degree::NegInf);
                out.push(a.get(i, j).degree().max(masked).max(offset));
            }
        }
        out
    }

    fn check_shape<T: Scalar>(&self, a: &MatrixPolynomial<T>) -> Result<()> {
        if a.rows() != self.rows || a.cols() != self.cols || a.degree_bound() != self.degree_bound {
            return Err(Error::DimensionMismatch(format!(
                "structure is {}x{} of degree {}, matrix is {}x{} of degree {}",
                self.rows,
                self.cols,
                self.degree_bound,
                a.rows(),
                a.cols(),
                a.degree_bound()
            )));
        }
        Ok(())
    }
}

/// Adds `params` at the masked coefficient positions of `a`.
///
/// Unmasked coefficients are copied unchanged; the base offset of the
/// structure is not applied here.
pub fn apply_perturbation<T: Scalar>(
    a: &MatrixPolynomial<T>,
    s: &PerturbStructure,
    params: &[T],
) -> Result<MatrixPolynomial<T>> {
    s.check_shape(a)?;
    let positions = s.positions();
    if positions.len() != params.len() {
        return Err(Error::DimensionMismatch(format!(
            "structure has {} parameters, got {}",
            positions.len(),
            params.len()
        )));
    }
    let mut out = a.clone();
    for (&(i, j, k), p) in positions.iter().zip(params) {
        let c = out.coeff(i, j, k) + p.clone();
        out.set_coeff(i, j, k, c);
    }
    Ok(out)
}

/// The perturbation `C0 + sum p_k E_k` itself.
pub fn perturbation_matrix(s: &PerturbStructure, params: &[f64]) -> Result<MatrixPolynomial<f64>> {
    let zero = match &s.base_offset {
        Some(c) => c.clone(),
        None => MatrixPolynomial::zeros(s.rows, s.cols, s.degree_bound),
    };
    apply_perturbation(&zero, s, params)
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: Scalar> Default for Polynomial<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> From<Vec<T>> for Polynomial<T> {
    fn from(coeffs: Vec<T>) -> Self {
        Self::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{MatPoly, Poly};

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    fn example_unimodular() -> MatPoly {
        MatPoly::from_rows(vec![
            vec![p(&[0.0, 1.0]), p(&[-1.0, 1.0])],
            vec![p(&[1.0, 1.0]), p(&[0.0, 1.0])],
        ])
        .unwrap()
    }

    #[test]
    fn degree_of_zero_matrix_is_neg_inf() {
        let z = MatPoly::zeros(2, 2, 3);
        assert_eq!(z.degree(), Degree::NegInf);
        assert_eq!(Poly::zero().degree(), Degree::NegInf);
    }

    #[test]
    fn degree_of_unimodular_example() {
        assert_eq!(example_unimodular().degree(), Degree::Finite(1));
    }

    #[test]
    fn evaluate_at_zero_and_one() {
        let a = example_unimodular();
        let at0 = a.evaluate(Complex::new(0.0, 0.0));
        let c0 = a.coefficient(0);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(at0[(i, j)].re, c0[(i, j)]);
                assert_eq!(at0[(i, j)].im, 0.0);
            }
        }
        let at1 = a.evaluate(Complex::new(1.0, 0.0));
        let expected = [[1.0, 0.0], [2.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(at1[(i, j)], Complex::new(expected[i][j], 0.0));
            }
        }
    }

    #[test]
    fn evaluate_at_root_gives_zero() {
        let a = MatPoly::identity(3).scale(&1.0);
        let a = a
            .try_mul(
                &MatPoly::from_rows(vec![vec![p(&[1.0, 0.0, 1.0])]])
                    .unwrap()
                    .kronecker(&MatPoly::identity(3)),
            )
            .unwrap();
        let v = a.evaluate(Complex::new(0.0, 1.0));
        assert!(v.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn frobenius_norm_cases() {
        assert_eq!(MatPoly::zeros(2, 3, 1).frobenius_norm(), 0.0);
        let a = MatPoly::from_rows(vec![vec![p(&[3.0, 4.0])]]).unwrap();
        assert_eq!(a.frobenius_norm(), 5.0);
    }

    #[test]
    fn vec_pads_and_checks() {
        let a = MatPoly::from_rows(vec![vec![p(&[1.0, 2.0])]]).unwrap();
        assert_eq!(a.vec(2).unwrap(), vec![1.0, 2.0, 0.0]);
        assert_eq!(MatPoly::zeros(2, 2, 1).vec(1).unwrap(), vec![0.0; 8]);
        assert!(matches!(a.vec(0), Err(Error::PadTooSmall { pad: 0, degree: 1 })));
    }

    #[test]
    fn vec_is_column_major() {
        let a = MatPoly::from_rows(vec![vec![p(&[1.0]), p(&[2.0])], vec![p(&[3.0]), p(&[4.0])]]).unwrap();
        assert_eq!(a.vec(0).unwrap(), vec![1.0, 3.0, 2.0, 4.0]);
    }

    #[test]
    fn reverse_cases() {
        assert_eq!(p(&[1.0, 2.0]).reverse(1).unwrap(), p(&[2.0, 1.0]));
        assert_eq!(p(&[0.0, 0.0, 1.0]).reverse(2).unwrap(), p(&[1.0, 0.0, 0.0]));
        assert!(p(&[0.0, 0.0, 1.0]).reverse(1).is_err());
    }

    #[test]
    fn perturbation_identities() {
        let a = example_unimodular();
        let s = PerturbStructure::full(&a);
        assert_eq!(s.count(), 8);
        let zero = vec![0.0; 8];
        assert_eq!(apply_perturbation(&a, &s, &zero).unwrap(), a);
        let neg: Vec<f64> = a.vec(1).unwrap().iter().map(|x| -x).collect();
        let z = apply_perturbation(&a, &s, &neg).unwrap();
        assert_eq!(z.frobenius_norm(), 0.0);
        assert!(matches!(
            apply_perturbation(&a, &s, &[1.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn support_and_degree_masks() {
        let a = MatPoly::from_rows(vec![
            vec![p(&[1.0, 0.0, 2.0]), Poly::zero()],
            vec![p(&[0.0, 3.0]), p(&[4.0])],
        ])
        .unwrap();
        let s = PerturbStructure::support(&a);
        assert_eq!(s.cells(0, 0), &[true, false, true]);
        assert_eq!(s.cells(0, 1), &[false, false, false]);
        assert_eq!(s.count(), 4);
        let d = PerturbStructure::degree(&a);
        assert_eq!(d.cells(0, 0), &[true, true, true]);
        assert_eq!(d.cells(1, 0), &[true, true, false]);
        assert_eq!(d.cells(0, 1), &[false, false, false]);
        assert_eq!(d.count(), 6);
    }

    #[test]
    fn roots_of_simple_polynomials() {
        let mut r = p(&[2.0, -3.0, 1.0]).roots();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0].re - 1.0).abs() < 1e-12 && (r[1].re - 2.0).abs() < 1e-12);
        let r = p(&[0.0, 0.0, 0.0, 0.0, 1.0]).roots();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|z| z.norm() == 0.0));
        let r = p(&[1.0, 0.0, 1.0]).roots();
        assert!(r.iter().all(|z| (z.im.abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn reverse_entries_with_grid() {
        let a = example_unimodular();
        let degs = vec![Degree::Finite(3); 4];
        let r = a.reverse_entries(&degs).unwrap();
        assert_eq!(r.get(0, 0).coeffs(), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(r.get(0, 1).coeffs(), &[0.0, 0.0, 1.0, -1.0]);
    }
}
