//! Approximate GCDs of adjoint entries, Smith form triviality, distance lower
//! bounds and detection of structure at infinity.

use nalgebra::{Complex, DMatrix, DVector};

use crate::detadj::{adjoint, determinant, hadamard_gradient_bound, jacobian_adj_with};
use crate::error::{Error, Result};
use crate::matpoly::{Degree, PerturbStructure};
use crate::oracle::{golden_section, minimize_on_line, nelder_mead};
use crate::structured::{
    complex_singular_values, conv_matrix, generalized_sylvester, lstsq, numeric_rank, singular_values,
};
use crate::{MatPoly, Poly};

/// Relative size below which adjoint coefficients are treated as zero.
pub const ENTRY_TOL: f64 = 1e-12;
/// Relative singular value threshold for rank tests at a point.
pub const POINT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct TrivialityReport {
    pub is_trivial: bool,
    pub mccoy_rank: usize,
    pub gcd_adjoint_degree: usize,
    pub lower_bound: f64,
    pub unattainable: bool,
    pub sylvester_rank: usize,
    pub sylvester_sigma: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxGcdResult {
    /// Monic.
    pub h: Poly,
    pub cofactors: Vec<Poly>,
    pub residual: f64,
    /// Residual after every half step of the alternating refinement.
    pub history: Vec<f64>,
}

fn require_square(a: &MatPoly) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

/// Entries of `adj` in column-major order with coefficients below
/// `ENTRY_TOL * max|coeff|` set to zero and trailing zeros dropped.
pub fn adjoint_polys(adj: &MatPoly) -> Vec<Poly> {
    let tol = ENTRY_TOL * adj.max_abs_coeff();
    adj.pvec().iter().map(|p| p.chopped(tol).normalized()).collect()
}

/// True iff the generalized Sylvester matrix has full numeric column rank.
pub fn gcd_trivial_check(f: &[Poly], dprime: &[usize]) -> Result<bool> {
    let s = generalized_sylvester(f, dprime)?;
    if s.ncols() == 0 {
        return Ok(true);
    }
    Ok(numeric_rank(&s, None)? == s.ncols())
}

/// Numeric degree of the GCD of `f`, from the nullity of the Sylvester
/// matrix built with actual degrees. Zero polynomials are ignored.
pub fn gcd_degree(f: &[Poly]) -> Result<usize> {
    let nz: Vec<Poly> = f.iter().filter(|p| !p.is_zero()).map(Poly::normalized).collect();
    match nz.len() {
        0 => Ok(0),
        1 => Ok(nz[0].degree().finite().unwrap_or(0)),
        _ => {
            let degs: Vec<usize> = nz.iter().map(|p| p.degree().finite().unwrap_or(0)).collect();
            let s = generalized_sylvester(&nz, &degs)?;
            if s.ncols() == 0 {
                return Ok(0);
            }
            Ok(s.ncols() - numeric_rank(&s, None)?)
        }
    }
}

/// Largest sum of weights over perfect matchings of `rows` to `cols`.
fn max_matching(rows: &[usize], cols: &[usize], w: &dyn Fn(usize, usize) -> Degree) -> Degree {
    let m = rows.len();
    let mut dp = vec![Degree::NegInf; 1 << m];
    dp[0] = Degree::Finite(0);
    for mask in 0usize..(1 << m) {
        let r = mask.count_ones() as usize;
        if r >= m || dp[mask].is_neg_inf() {
            continue;
        }
        for (c, &col) in cols.iter().enumerate() {
            if mask & (1 << c) != 0 {
                continue;
            }
            let cand = dp[mask].plus(w(rows[r], col));
            let next = mask | (1 << c);
            if cand > dp[next] {
                dp[next] = cand;
            }
        }
    }
    dp[(1 << m) - 1]
}

/// Upper bounds on the degrees of the adjoint entries (row-major) from the
/// cofactor expansion over a row-major grid of entry degrees.
pub fn structural_adjoint_degrees(entry: &[Degree], n: usize) -> Vec<Degree> {
    if n == 1 {
        return vec![Degree::Finite(0)];
    }
    let w = |r: usize, c: usize| entry[r * n + c];
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            out.push(max_matching(&rows, &cols, &w));
        }
    }
    out
}

/// Whether `A` is singular over the rational functions, tested at a few
/// fixed complex points.
pub fn is_numerically_singular(a: &MatPoly) -> bool {
    let pts = [
        Complex::new(0.31, 0.83),
        Complex::new(-0.67, 0.49),
        Complex::new(0.93, -0.21),
    ];
    !pts.iter().any(|&z| {
        let s = complex_singular_values(&a.evaluate(z));
        s[0] > 0.0 && *s.last().unwrap() > 1e-12 * s[0]
    })
}

fn point_scale(a: &MatPoly, w: Complex<f64>) -> f64 {
    let r = w.norm();
    let mut acc = 0.0;
    let mut pw = 1.0;
    for _ in 0..=a.degree_bound() {
        acc += pw;
        pw *= r;
    }
    a.max_abs_coeff().max(f64::MIN_POSITIVE) * acc
}

/// Numeric rank of `A(w)` with threshold relative to the size of `A` at `w`.
pub fn rank_at(a: &MatPoly, w: Complex<f64>) -> usize {
    let tol = POINT_RANK_TOL * point_scale(a, w);
    complex_singular_values(&a.evaluate(w))
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// Roots of `det(A)` with nearby roots merged into their mean.
pub fn eigenvalue_clusters(a: &MatPoly) -> Result<Vec<(Complex<f64>, usize)>> {
    let det = determinant(a)?;
    let det = det.chopped(1e-13 * det.max_abs()).normalized();
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    for r in det.roots() {
        if !(r.re.is_finite() && r.im.is_finite()) {
            continue;
        }
        let tol = 1e-4 * (1.0 + r.norm());
        match clusters.iter_mut().find(|(c, _)| (*c - r).norm() <= tol) {
            Some((c, k)) => {
                *c = (*c * (*k as f64) + r) / (*k as f64 + 1.0);
                *k += 1;
            }
            None => clusters.push((r, 1)),
        }
    }
    Ok(clusters)
}

/// McCoy rank (minimum rank of `A(w)` over eigenvalues `w`) and the
/// eigenvalue attaining it.
pub fn mccoy_rank(a: &MatPoly) -> Result<(usize, Option<Complex<f64>>)> {
    let n = require_square(a)?;
    let mut best = (n, None);
    for (w, _) in eigenvalue_clusters(a)? {
        let r = rank_at(a, w);
        if r < best.0 {
            best = (r, Some(w));
        }
    }
    Ok(best)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Partial multiplicities of `A` at `w` in ascending order, from the
/// nullities of block Toeplitz matrices of Taylor coefficients.
pub fn partial_multiplicities(a: &MatPoly, w: Complex<f64>) -> Result<Vec<usize>> {
    let n = require_square(a)?;
    let d = a.degree_bound();
    let zero = Complex::new(0.0, 0.0);
    let taylor: Vec<DMatrix<Complex<f64>>> = (0..=d)
        .map(|k| {
            let mut m = DMatrix::from_element(n, n, zero);
            for p in k..=d {
                let c = binomial(p, k) * w.powu((p - k) as u32);
                m += a.coefficient(p).map(|x| Complex::new(x, 0.0)) * c;
            }
            m
        })
        .collect();
    let tol = POINT_RANK_TOL * point_scale(a, w);
    let mut counts = Vec::new();
    let mut prev_null = 0;
    for j in 1..=(n * d + 1) {
        let mut t = DMatrix::from_element(j * n, j * n, zero);
        for r in 0..j {
            for c in 0..=r {
                if r - c <= d {
                    t.view_mut((r * n, c * n), (n, n)).copy_from(&taylor[r - c]);
                }
            }
        }
        let rank = complex_singular_values(&t).iter().filter(|&&s| s > tol).count();
        let null = j * n - rank;
        let c = null - prev_null;
        if c == 0 {
            break;
        }
        counts.push(c);
        prev_null = null;
    }
    let mut kappa: Vec<usize> = (0..n).map(|i| counts.iter().filter(|&&c| c > i).count()).collect();
    kappa.sort_unstable();
    Ok(kappa)
}

/// Degrees of the invariant factors `s_1 | ... | s_n`.
pub fn invariant_factor_degrees(a: &MatPoly) -> Result<Vec<usize>> {
    let n = require_square(a)?;
    let mut out = vec![0; n];
    for (w, _) in eigenvalue_clusters(a)? {
        for (o, k) in out.iter_mut().zip(partial_multiplicities(a, w)?) {
            *o += k;
        }
    }
    Ok(out)
}

/// Largest degrees (row-major) the adjoint entries of `a + delta` can reach
/// for perturbations `delta` admitted by `s`.
pub fn reachable_adjoint_degrees(a: &MatPoly, s: &PerturbStructure) -> Vec<Degree> {
    structural_adjoint_degrees(&s.reachable_entry_degrees(a), a.rows())
}

/// Adjoint entries with structural degree bounds under `s`, in column-major
/// order. Structurally zero entries are dropped.
fn structured_adjoint_entries(a: &MatPoly, s: &PerturbStructure, adj: &MatPoly) -> Vec<(Poly, usize)> {
    let n = a.rows();
    let reach = reachable_adjoint_degrees(a, s);
    let polys = adjoint_polys(adj);
    let mut out = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let p = &polys[j * n + i];
            let declared = reach[i * n + j].max(p.degree());
            if let Degree::Finite(dp) = declared {
                out.push((p.clone(), dp));
            }
        }
    }
    out
}

fn check_structure(a: &MatPoly, s: &PerturbStructure) -> Result<()> {
    if s.rows() != a.rows() || s.cols() != a.cols() || s.degree_bound() != a.degree_bound() {
        return Err(Error::DimensionMismatch("structure does not match the matrix".into()));
    }
    Ok(())
}

/// True when the adjoint entries are coprime with their actual degrees but
/// acquire a common factor at infinity once padded to the degrees that the
/// structure allows.
pub fn detect_unattainable(a: &MatPoly, s: &PerturbStructure) -> Result<bool> {
    require_square(a)?;
    check_structure(a, s)?;
    if is_numerically_singular(a) {
        return Err(Error::RankDeficientInput("determinant vanishes identically".into()));
    }
    let adj = adjoint(a)?;
    let entries = structured_adjoint_entries(a, s, &adj);
    if entries.len() < 2 {
        return Ok(false);
    }
    let f: Vec<Poly> = entries.iter().map(|(p, _)| p.clone()).collect();
    if gcd_degree(&f)? > 0 {
        return Ok(false);
    }
    let dprime: Vec<usize> = entries.iter().map(|(_, d)| *d).collect();
    if gcd_trivial_check(&f, &dprime)? {
        return Ok(false);
    }
    let rev: Vec<Poly> = f
        .iter()
        .zip(&dprime)
        .map(|(p, &d)| p.reverse(d))
        .collect::<Result<_>>()?;
    Ok(!gcd_trivial_check(&rev, &dprime)?)
}

struct BoundParts {
    bound: f64,
    sigma: f64,
    rank: usize,
}

fn lower_bound_parts(a: &MatPoly, adj: &MatPoly) -> Result<BoundParts> {
    let n = a.rows();
    let d = a.degree_bound();
    if d == 0 {
        let s = singular_values(&a.coefficient(0))?;
        let sigma = s.singular_values[n - 2];
        return Ok(BoundParts {
            bound: sigma,
            sigma,
            rank: 0,
        });
    }
    let gamma = (n - 1) * d;
    let f = adjoint_polys(adj);
    let syl = generalized_sylvester(&f, &vec![gamma; f.len()])?;
    let svd = singular_values(&syl)?;
    let rank = numeric_rank(&syl, None)?;
    let sigma = if rank == 0 { 0.0 } else { svd.singular_values[rank - 1] };
    let jn = jacobian_adj_with(a, adj)?.matrix.norm();
    let g = jn.min(hadamard_gradient_bound(a));
    Ok(BoundParts {
        bound: sigma / (gamma as f64 * g),
        sigma,
        rank,
    })
}

/// Lower bound on the distance to a matrix polynomial with non-trivial
/// Smith form, together with the singular value it is built from. Inputs
/// that are already non-trivial give `(0, 0)`.
pub fn distance_lower_bound(a: &MatPoly) -> Result<(f64, f64)> {
    let n = require_square(a)?;
    if n < 2 {
        return Err(Error::InvalidArgument("the bound needs n >= 2".into()));
    }
    if is_numerically_singular(a) {
        return Err(Error::RankDeficientInput("determinant vanishes identically".into()));
    }
    let adj = adjoint(a)?;
    if gcd_degree(&adjoint_polys(&adj))? > 0 || mccoy_rank(a)?.0 + 2 <= n {
        return Ok((0.0, 0.0));
    }
    let parts = lower_bound_parts(a, &adj)?;
    Ok((parts.bound, parts.sigma))
}

pub fn triviality_report(a: &MatPoly, s: &PerturbStructure) -> Result<TrivialityReport> {
    let n = require_square(a)?;
    check_structure(a, s)?;
    let adj = adjoint(a)?;
    let gcd_adjoint_degree = gcd_degree(&adjoint_polys(&adj))?;
    if is_numerically_singular(a) {
        let generic = rank_at(a, Complex::new(0.31, 0.83));
        let mccoy = if gcd_adjoint_degree > 0 {
            generic.min(n.saturating_sub(2))
        } else {
            generic
        };
        return Ok(TrivialityReport {
            is_trivial: false,
            mccoy_rank: mccoy,
            gcd_adjoint_degree,
            lower_bound: 0.0,
            unattainable: false,
            sylvester_rank: 0,
            sylvester_sigma: 0.0,
        });
    }
    let (mccoy, _) = mccoy_rank(a)?;
    let is_trivial = gcd_adjoint_degree == 0 && mccoy + 1 >= n;
    let mut report = TrivialityReport {
        is_trivial,
        mccoy_rank: mccoy,
        gcd_adjoint_degree,
        lower_bound: 0.0,
        unattainable: false,
        sylvester_rank: 0,
        sylvester_sigma: 0.0,
    };
    if is_trivial && n >= 2 {
        report.unattainable = detect_unattainable(a, s)?;
        let parts = lower_bound_parts(a, &adj)?;
        report.sylvester_rank = parts.rank;
        report.sylvester_sigma = parts.sigma;
        if !report.unattainable {
            report.lower_bound = parts.bound;
        }
    }
    Ok(report)
}

struct Factor {
    roots: Vec<Complex<f64>>,
    score: f64,
}

/// Initial monic `h` of degree `deg_h` built from the roots that are
/// cheapest to impose on every entry at once.
pub fn initial_divisor(f: &[Poly], deg_h: usize) -> Result<Poly> {
    divisor_from_roots(f, deg_h, true)
}

/// Starting divisors in order of preference: with and without the cheapest
/// real root over the whole line, which can sit far out when the leading
/// coefficients are free to shrink.
pub fn initial_divisors(f: &[Poly], deg_h: usize) -> Result<Vec<Poly>> {
    let wide = divisor_from_roots(f, deg_h, true)?;
    let local = divisor_from_roots(f, deg_h, false)?;
    let same = (&wide - &local).norm() <= 1e-12 * (1.0 + wide.norm());
    Ok(if same { vec![wide] } else { vec![wide, local] })
}

fn divisor_from_roots(f: &[Poly], deg_h: usize, whole_line: bool) -> Result<Poly> {
    let nz: Vec<Poly> = f
        .iter()
        .map(|p| p.trimmed(ENTRY_TOL))
        .filter(|p| !p.is_zero())
        .collect();
    let mut candidates: Vec<Complex<f64>> = nz
        .iter()
        .flat_map(|p| p.roots())
        .filter(|r| r.re.is_finite() && r.im.is_finite())
        .collect();
    if candidates.is_empty() {
        candidates.push(Complex::new(0.0, 0.0));
    }
    let degs: Vec<usize> = nz.iter().map(|p| p.degree().finite().unwrap_or(0)).collect();
    let score = |w: Complex<f64>| -> f64 {
        nz.iter()
            .zip(&degs)
            .map(|(p, &d)| crate::oracle::root_forcing_distance_sq(p, d, w))
            .sum()
    };
    // Each candidate is polished by a local minimization of the score, since
    // the cheapest common root usually sits between the entry roots.
    let mut factors: Vec<Factor> = Vec::new();
    for &c in &candidates {
        let reach = 0.25 * (1.0 + c.norm());
        let (x, sx) = golden_section(|x| score(Complex::new(x, 0.0)), c.re - reach, c.re + reach, 1e-12);
        let (x, sx) = if sx < score(Complex::new(c.re, 0.0)) {
            (x, sx)
        } else {
            (c.re, score(Complex::new(c.re, 0.0)))
        };
        factors.push(Factor {
            roots: vec![Complex::new(x, 0.0)],
            score: sx,
        });
        if c.im.abs() > 1e-8 * (1.0 + c.norm()) {
            let up = Complex::new(c.re, c.im.abs());
            let (v, sv) = nelder_mead(
                |v| score(Complex::new(v[0], v[1])),
                &[up.re, up.im],
                0.1 * reach,
                1e-14,
                400,
            );
            let up = if sv < score(up) && v[1].abs() > 1e-8 {
                Complex::new(v[0], v[1].abs())
            } else {
                up
            };
            factors.push(Factor {
                roots: vec![up, up.conj()],
                score: score(up),
            });
        }
    }
    // The cheapest real root overall may lie far from every entry root.
    let (x, sx) = if whole_line {
        minimize_on_line(|x| score(Complex::new(x, 0.0)), 512)
    } else {
        (0.0, f64::NAN)
    };
    if sx.is_finite() {
        factors.push(Factor {
            roots: vec![Complex::new(x, 0.0)],
            score: sx,
        });
    }
    factors.sort_by(|a, b| a.score.total_cmp(&b.score));
    let mut chosen: Vec<Complex<f64>> = Vec::new();
    for fac in &factors {
        if chosen.len() + fac.roots.len() > deg_h {
            continue;
        }
        let dup = chosen
            .iter()
            .any(|c| (*c - fac.roots[0]).norm() <= 1e-6 * (1.0 + c.norm()));
        if dup {
            continue;
        }
        chosen.extend(fac.roots.iter().copied());
        if chosen.len() == deg_h {
            break;
        }
    }
    while chosen.len() < deg_h {
        chosen.push(Complex::new(0.0, 0.0));
    }
    let mut h = vec![Complex::new(1.0, 0.0)];
    for r in &chosen {
        let mut next = vec![Complex::new(0.0, 0.0); h.len() + 1];
        for (k, c) in h.iter().enumerate() {
            next[k + 1] += *c;
            next[k] -= *c * r;
        }
        h = next;
    }
    Ok(Poly::new(h.iter().map(|c| c.re).collect()))
}

fn padded_vector(p: &Poly, deg: usize) -> DVector<f64> {
    let mut v = DVector::zeros(deg + 1);
    for k in 0..=deg {
        v[k] = p.coeff(k);
    }
    v
}

fn fit_cofactors(f: &[Poly], dprime: &[usize], h: &Poly, deg_h: usize) -> Result<(Vec<Poly>, f64)> {
    let mut cofactors = Vec::with_capacity(f.len());
    let mut res = 0.0;
    for (p, &dp) in f.iter().zip(dprime) {
        let target = padded_vector(p, dp);
        if dp < deg_h {
            res += target.norm_squared();
            cofactors.push(Poly::zero());
            continue;
        }
        let c = conv_matrix(h, dp - deg_h);
        let q = lstsq(&c, &target)?;
        res += (&c * &q - target).norm_squared();
        cofactors.push(Poly::new(q.iter().copied().collect()));
    }
    Ok((cofactors, res.sqrt()))
}

fn fit_divisor(f: &[Poly], dprime: &[usize], cofactors: &[Poly], deg_h: usize) -> Result<(Poly, f64)> {
    let rows: usize = dprime.iter().map(|&dp| dp + 1).sum();
    let mut m = DMatrix::zeros(rows, deg_h);
    let mut rhs = DVector::zeros(rows);
    let mut r0 = 0;
    for ((p, &dp), q) in f.iter().zip(dprime).zip(cofactors) {
        let target = padded_vector(p, dp);
        if dp >= deg_h {
            let qp = Poly::new(q.padded(dp - deg_h)?);
            let c = conv_matrix(&qp, deg_h);
            m.view_mut((r0, 0), (dp + 1, deg_h)).copy_from(&c.columns(0, deg_h));
            rhs.rows_mut(r0, dp + 1).copy_from(&(target - c.column(deg_h)));
        } else {
            rhs.rows_mut(r0, dp + 1).copy_from(&target);
        }
        r0 += dp + 1;
    }
    let low = lstsq(&m, &rhs)?;
    let res = (&m * &low - rhs).norm();
    let mut coeffs: Vec<f64> = low.iter().copied().collect();
    coeffs.push(1.0);
    Ok((Poly::new(coeffs), res))
}

/// Monic approximate common divisor of degree `deg_h` with least squares
/// cofactors of degree `dprime_i - deg_h`.
pub fn approx_gcd(f: &[Poly], deg_h: usize, dprime: &[usize]) -> Result<ApproxGcdResult> {
    if f.len() != dprime.len() || f.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} polynomials but {} declared degrees",
            f.len(),
            dprime.len()
        )));
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
    if deg_h == 0 {
        return Err(Error::InvalidArgument(
            "the common divisor must have degree >= 1".into(),
        ));
    }
    let max = f
        .iter()
        .zip(dprime)
        .filter(|(p, _)| !p.is_zero())
        .map(|(_, &d)| d)
        .min()
        .unwrap_or_else(|| *dprime.iter().min().expect("non-empty"));
    if deg_h > max {
        return Err(Error::DegreeTooLarge { requested: deg_h, max });
    }
    approx_gcd_from(f, dprime, initial_divisor(f, deg_h)?)
}

/// The alternating refinement of [`approx_gcd`] from a given monic divisor.
pub fn approx_gcd_from(f: &[Poly], dprime: &[usize], h0: Poly) -> Result<ApproxGcdResult> {
    let deg_h = h0
        .degree()
        .finite()
        .filter(|&k| k >= 1)
        .ok_or_else(|| Error::InvalidArgument("the common divisor must have degree >= 1".into()))?;
    let mut h = h0;
    let (mut cofactors, mut res) = fit_cofactors(f, dprime, &h, deg_h)?;
    let mut history = vec![res];
    for _ in 0..100 {
        let (h_new, r_h) = fit_divisor(f, dprime, &cofactors, deg_h)?;
        if r_h.is_nan() || r_h > res {
            break;
        }
        let (cof_new, r_c) = fit_cofactors(f, dprime, &h_new, deg_h)?;
        let r_c = r_c.min(r_h);
        history.push(r_h);
        history.push(r_c);
        let change = res - r_c;
        h = h_new;
        cofactors = cof_new;
        res = r_c;
        if change < 1e-12 {
            break;
        }
    }
    Ok(ApproxGcdResult {
        h,
        cofactors,
        residual: res,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    #[test]
    fn coprime_and_common_factor() {
        assert!(gcd_trivial_check(&[p(&[1.0, 1.0]), p(&[-1.0, 1.0])], &[1, 1]).unwrap());
        assert!(!gcd_trivial_check(&[p(&[-1.0, 0.0, 1.0]), p(&[1.0, -2.0, 1.0])], &[2, 2]).unwrap());
        assert_eq!(gcd_degree(&[p(&[-1.0, 0.0, 1.0]), p(&[1.0, -2.0, 1.0])]).unwrap(), 1);
    }

    #[test]
    fn structural_degrees_of_diagonal() {
        let e = [Degree::Finite(2), Degree::NegInf, Degree::NegInf, Degree::Finite(3)];
        let s = structural_adjoint_degrees(&e, 2);
        assert_eq!(
            s,
            vec![Degree::Finite(3), Degree::NegInf, Degree::NegInf, Degree::Finite(2)]
        );
    }

    #[test]
    fn exact_common_factor_is_recovered() {
        let f = [p(&[-2.0, 1.0, 1.0]), p(&[3.0, -4.0, 1.0])];
        let r = approx_gcd(&f, 1, &[2, 2]).unwrap();
        assert!(r.residual <= 1e-10);
        assert!((r.h.coeff(0) + 1.0).abs() < 1e-10);
        assert_eq!(r.h.coeff(1), 1.0);
    }

    #[test]
    fn residual_history_is_monotone() {
        let f = [p(&[1.0, 0.1, 1.0]), p(&[1.01, 0.11, 1.0]), p(&[0.5, 0.3, 0.2])];
        let r = approx_gcd(&f, 1, &[2, 2, 2]).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn degree_too_large() {
        let f = [p(&[1.0, 1.0]), p(&[1.0, 2.0])];
        assert!(matches!(
            approx_gcd(&f, 2, &[1, 1]),
            Err(Error::DegreeTooLarge { requested: 2, max: 1 })
        ));
    }

    #[test]
    fn mccoy_rank_of_repeated_eigenvalue() {
        let a = MatPoly::from_rows(vec![vec![p(&[-1.0, 1.0]), p(&[0.0])], vec![p(&[0.0]), p(&[-1.0, 1.0])]]).unwrap();
        let (r, w) = mccoy_rank(&a).unwrap();
        assert_eq!(r, 0);
        assert!((w.unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-8);
        assert_eq!(invariant_factor_degrees(&a).unwrap(), vec![1, 1]);
        let rep = triviality_report(&a, &PerturbStructure::support(&a)).unwrap();
        assert!(!rep.is_trivial);
        assert_eq!(rep.lower_bound, 0.0);
    }

    #[test]
    fn identity_report() {
        let a = MatPoly::identity(3);
        let rep = triviality_report(&a, &PerturbStructure::full(&a)).unwrap();
        assert!(rep.is_trivial);
        assert_eq!(rep.mccoy_rank, 3);
        assert!(rep.lower_bound > 0.0);
    }

    #[test]
    fn partial_multiplicities_of_jordan_like() {
        let a = MatPoly::from_rows(vec![vec![p(&[0.0, 0.0, 1.0]), p(&[1.0])], vec![p(&[0.0]), p(&[1.0])]]).unwrap();
        assert_eq!(partial_multiplicities(&a, Complex::new(0.0, 0.0)).unwrap(), vec![0, 2]);
    }
}
