//! Nearest matrix polynomial whose rank drops by `r` at a single point.
//!
//! The rank condition is written as `M(w) B = 0`, `B* B = I_r` with
//! `M = A + dA` or its companion pencil, and both constraints are split
//! into real and imaginary parts so that every variable stays real.

use nalgebra::{Complex, DMatrix, DVector};

use crate::detadj::determinant;
use crate::error::{Error, Result};
use crate::gcdkit::is_numerically_singular;
use crate::lmsolve::{lm_minimize, LmConfig, LmTrace, Termination};
use crate::matpoly::{perturbation_matrix, PerturbStructure};
use crate::structured::{complex_singular_values, lstsq};
use crate::{MatPoly, Poly};

type C64 = Complex<f64>;

/// `|w|` beyond which a run is treated as diverging to infinity.
/// Starting eigenvalues tried by [`solve_mccoy`].
const MAX_STARTS: usize = 4;

pub const OMEGA_LIMIT: f64 = 1e8;

/// Degree-one pencil `E t - F`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil {
    pub e: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

impl Pencil {
    pub fn size(&self) -> usize {
        self.e.nrows()
    }

    pub fn evaluate(&self, w: C64) -> DMatrix<C64> {
        self.e.map(|x| C64::new(x, 0.0) * w) - self.f.map(|x| C64::new(x, 0.0))
    }

    /// The pencil as a degree-one matrix polynomial.
    pub fn to_matpoly(&self) -> MatPoly {
        MatPoly::from_coefficients(&[-&self.f, self.e.clone()]).expect("square blocks of equal size")
    }
}

/// Companion pencil with `E = diag(I, ..., I, A_d)`, identity blocks on the
/// superdiagonal of `F` and `-A_0, ..., -A_{d-1}` in its last block row.
pub fn companion_linearization(a: &MatPoly) -> Result<Pencil> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let d = a.degree_bound();
    if d == 0 {
        return Err(Error::InvalidArgument("a constant matrix has no linearization".into()));
    }
    let big = n * d;
    let mut e = DMatrix::identity(big, big);
    let mut f = DMatrix::zeros(big, big);
    let last = (d - 1) * n;
    e.view_mut((last, last), (n, n)).copy_from(&a.coefficient(d));
    for b in 0..d - 1 {
        f.view_mut((b * n, (b + 1) * n), (n, n)).fill_with_identity();
    }
    for k in 0..d {
        f.view_mut((last, k * n), (n, n)).copy_from(&(-a.coefficient(k)));
    }
    Ok(Pencil { e, f })
}

#[derive(Clone, Debug)]
pub struct McCoyProblem {
    pub a: MatPoly,
    pub structure: PerturbStructure,
    /// Rank drop at the eigenvalue.
    pub r: usize,
    pub use_linearization: bool,
    /// Fixed eigenvalue; set by [`reversed_problem`].
    pub pinned_omega: Option<C64>,
}

impl McCoyProblem {
    pub fn new(a: MatPoly, structure: PerturbStructure, r: usize) -> Result<Self> {
        let use_linearization = a.degree_bound() > 1;
        let p = Self {
            a,
            structure,
            r,
            use_linearization,
            pinned_omega: None,
        };
        p.layout()?;
        Ok(p)
    }

    pub fn with_linearization(mut self, on: bool) -> Self {
        self.use_linearization = on;
        self
    }

    pub fn layout(&self) -> Result<McLayout> {
        let a = &self.a;
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                a.rows(),
                a.cols()
            )));
        }
        let s = &self.structure;
        if s.rows() != a.rows() || s.cols() != a.cols() || s.degree_bound() != a.degree_bound() {
            return Err(Error::DimensionMismatch("structure does not match the matrix".into()));
        }
        let n = a.rows();
        if self.r < 2 || self.r > n {
            return Err(Error::InvalidArgument(format!(
                "rank drop must lie in [2, {n}], got {}",
                self.r
            )));
        }
        let lin = self.use_linearization && a.degree_bound() > 0;
        let size = if lin { n * a.degree_bound() } else { n };
        let params = s.count();
        let omega_vars = if self.pinned_omega.is_some() { 0 } else { 2 };
        let b_off = params + omega_vars;
        let lam_off = b_off + 2 * size * self.r;
        let len = lam_off + 2 * size * self.r + 2 * self.r * self.r;
        Ok(McLayout {
            size,
            r: self.r,
            params,
            omega_vars,
            b_off,
            lam_off,
            len,
        })
    }
}

/// Offsets of `z = (p, Re w, Im w, Re B, Im B, lambda)`; `B` is stored
/// column-major and `lambda` follows the constraint order
/// `(Re MB, Im MB, Re B*B - I, Im B*B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McLayout {
    /// Rows of `M` (and of `B`).
    pub size: usize,
    pub r: usize,
    pub params: usize,
    /// 2, or 0 when the eigenvalue is pinned.
    pub omega_vars: usize,
    pub b_off: usize,
    pub lam_off: usize,
    pub len: usize,
}

impl McLayout {
    pub fn primal(&self) -> usize {
        self.lam_off
    }

    pub fn constraints(&self) -> usize {
        self.len - self.lam_off
    }
}

/// `M(w) = sum_k M_k w^k` with the slot of every free parameter.
struct Model<'a> {
    prob: &'a McCoyProblem,
    layout: McLayout,
    coeffs: Vec<DMatrix<f64>>,
    /// `(power, row, col)` of each parameter inside `M`.
    slots: Vec<(usize, usize, usize)>,
    c0_mask: DVector<f64>,
}

impl<'a> Model<'a> {
    fn new(prob: &'a McCoyProblem) -> Result<Self> {
        let layout = prob.layout()?;
        let n = prob.a.rows();
        let d = prob.a.degree_bound();
        let base = match prob.structure.base_offset() {
            Some(c0) => prob.a.try_add(c0)?,
            None => prob.a.clone(),
        };
        let positions = prob.structure.positions();
        let (coeffs, slots) = if layout.size != n {
            let pencil = companion_linearization(&base)?;
            let last = (d - 1) * n;
            let slots = positions
                .iter()
                .map(|&(i, j, k)| {
                    if k < d {
                        (0, last + i, k * n + j)
                    } else {
                        (1, last + i, last + j)
                    }
                })
                .collect();
            (vec![-pencil.f, pencil.e], slots)
        } else {
            let coeffs = (0..=d).map(|k| base.coefficient(k)).collect();
            (coeffs, positions.iter().map(|&(i, j, k)| (k, i, j)).collect())
        };
        let c0_mask = DVector::from_iterator(
            positions.len(),
            positions
                .iter()
                .map(|&(i, j, k)| prob.structure.base_offset().map_or(0.0, |c| c.coeff(i, j, k))),
        );
        Ok(Self {
            prob,
            layout,
            coeffs,
            slots,
            c0_mask,
        })
    }

    fn omega(&self, z: &DVector<f64>) -> C64 {
        match self.prob.pinned_omega {
            Some(w) => w,
            None => C64::new(z[self.layout.params], z[self.layout.params + 1]),
        }
    }

    fn b(&self, z: &DVector<f64>) -> DMatrix<C64> {
        let l = &self.layout;
        let nr = l.size * l.r;
        DMatrix::from_fn(l.size, l.r, |i, c| {
            let k = c * l.size + i;
            C64::new(z[l.b_off + k], z[l.b_off + nr + k])
        })
    }

    fn perturbed_coeffs(&self, p: &[f64]) -> Vec<DMatrix<f64>> {
        let mut m = self.coeffs.clone();
        for (&(k, i, j), v) in self.slots.iter().zip(p) {
            m[k][(i, j)] += v;
        }
        m
    }

    /// `M(w)` and `M'(w)`.
    fn eval(&self, coeffs: &[DMatrix<f64>], w: C64) -> (DMatrix<C64>, DMatrix<C64>) {
        let size = self.layout.size;
        let mut m = DMatrix::zeros(size, size);
        let mut dm = DMatrix::zeros(size, size);
        for k in (0..coeffs.len()).rev() {
            dm = dm * w + &m;
            m = m * w + coeffs[k].map(|x| C64::new(x, 0.0));
        }
        (m, dm)
    }

    /// Constraint values and their Jacobian with respect to the primal variables.
    fn constraints(&self, z: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let l = &self.layout;
        let (size, r) = (l.size, l.r);
        let nr = size * r;
        let p: Vec<f64> = z.rows(0, l.params).iter().copied().collect();
        let w = self.omega(z);
        let b = self.b(z);
        let (m, dm) = self.eval(&self.perturbed_coeffs(&p), w);
        let res = &m * &b;
        let gram = b.adjoint() * &b - DMatrix::<C64>::identity(r, r);
        let rows = l.constraints();
        let mut c = DVector::zeros(rows);
        for k in 0..nr {
            let (i, col) = (k % size, k / size);
            c[k] = res[(i, col)].re;
            c[nr + k] = res[(i, col)].im;
        }
        let g_off = 2 * nr;
        for k in 0..r * r {
            let (i, col) = (k % r, k / r);
            c[g_off + k] = gram[(i, col)].re;
            c[g_off + r * r + k] = gram[(i, col)].im;
        }

        let mut jac = DMatrix::zeros(rows, l.primal());
        let put = |jac: &mut DMatrix<f64>, row: usize, col: usize, v: C64, stride: usize| {
            jac[(row, col)] += v.re;
            jac[(row + stride, col)] += v.im;
        };
        for (q, &(k, a, bb)) in self.slots.iter().enumerate() {
            let wk = w.powu(k as u32);
            for col in 0..r {
                put(&mut jac, col * size + a, q, wk * b[(bb, col)], nr);
            }
        }
        if l.omega_vars == 2 {
            let db = &dm * &b;
            for k in 0..nr {
                let v = db[(k % size, k / size)];
                put(&mut jac, k, l.params, v, nr);
                put(&mut jac, k, l.params + 1, v * C64::i(), nr);
            }
        }
        for col in 0..r {
            for bb in 0..size {
                let xr = l.b_off + col * size + bb;
                let xi = xr + nr;
                for a in 0..size {
                    let v = m[(a, bb)];
                    put(&mut jac, col * size + a, xr, v, nr);
                    put(&mut jac, col * size + a, xi, v * C64::i(), nr);
                }
            }
        }
        // d(B*B) along e_{a f}: row f gains B[a, :], column f gains conj(B[a, :]).
        let rr = r * r;
        for f in 0..r {
            for a in 0..size {
                let xr = l.b_off + f * size + a;
                let xi = xr + nr;
                for e in 0..r {
                    let v = b[(a, e)];
                    put(&mut jac, g_off + e * r + f, xr, v, rr);
                    put(&mut jac, g_off + e * r + f, xi, -C64::i() * v, rr);
                }
                for cc in 0..r {
                    let v = b[(a, cc)].conj();
                    put(&mut jac, g_off + f * r + cc, xr, v, rr);
                    put(&mut jac, g_off + f * r + cc, xi, C64::i() * v, rr);
                }
            }
        }
        (c, jac)
    }

    fn gradient_parts(&self, z: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let l = &self.layout;
        let (c, jac) = self.constraints(z);
        let lam = z.rows(l.lam_off, l.constraints());
        let mut g = DVector::zeros(l.len);
        let p = z.rows(0, l.params);
        g.rows_mut(0, l.params).copy_from(&((&self.c0_mask + p) * 2.0));
        let jt = jac.transpose() * lam;
        let mut gx = g.rows_mut(0, l.primal());
        gx += &jt;
        g.rows_mut(l.lam_off, l.constraints()).copy_from(&c);
        (g, jac)
    }

    fn check_len(&self, z: &DVector<f64>) -> Result<()> {
        if z.len() != self.layout.len {
            return Err(Error::DimensionMismatch(format!(
                "state has length {} but the problem needs {}",
                z.len(),
                self.layout.len
            )));
        }
        Ok(())
    }

    fn hessian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let l = &self.layout;
        let nx = l.primal();
        let m = l.constraints();
        let (_, jac) = self.constraints(z);
        let lam = z.rows(l.lam_off, m).into_owned();
        let mut h = DMatrix::zeros(l.len, l.len);
        for q in 0..l.params {
            h[(q, q)] = 2.0;
        }
        // Curvature of lambda^T c(x) by central differences of J^T lambda.
        for j in 0..nx {
            let step = 1e-5 * (1.0 + z[j].abs());
            let mut zp = z.clone();
            zp[j] += step;
            let mut zm = z.clone();
            zm[j] -= step;
            let gp = self.constraints(&zp).1.transpose() * &lam;
            let gm = self.constraints(&zm).1.transpose() * &lam;
            let col = (gp - gm) / (2.0 * step);
            for i in 0..nx {
                h[(i, j)] += col[i];
            }
        }
        h.view_mut((nx, 0), (m, nx)).copy_from(&jac);
        h.view_mut((0, nx), (nx, m)).copy_from(&jac.transpose());
        (&h + h.transpose()) * 0.5
    }
}

/// Gradient of the Lagrangian at `z`.
pub fn mccoy_residual(prob: &McCoyProblem, z: &DVector<f64>) -> Result<DVector<f64>> {
    let model = Model::new(prob)?;
    model.check_len(z)?;
    Ok(model.gradient_parts(z).0)
}

/// Symmetric Hessian of the Lagrangian at `z`.
pub fn mccoy_hessian(prob: &McCoyProblem, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    let model = Model::new(prob)?;
    model.check_len(z)?;
    Ok(model.hessian(z))
}

/// Candidate eigenvalues: roots of `det A` and the real local extrema of
/// `|det A(t)|` on 512 Chebyshev points of `[-R, R]`, `R = 1 + |A|_max`.
pub fn omega_candidates(a: &MatPoly) -> Result<Vec<C64>> {
    let det = determinant(a)?.trimmed(1e-10);
    let mut out: Vec<C64> = det
        .roots()
        .into_iter()
        .filter(|w| w.re.is_finite() && w.im.is_finite())
        .collect();
    let radius = 1.0 + a.max_abs_coeff();
    let pts = 512;
    let grid: Vec<f64> = (0..pts)
        .map(|k| -radius * (std::f64::consts::PI * (k as f64 + 0.5) / pts as f64).cos())
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&x| det.eval(x).abs()).collect();
    for k in 1..pts - 1 {
        let (a0, a1, a2) = (vals[k - 1], vals[k], vals[k + 1]);
        if (a1 < a0 && a1 < a2) || (a1 > a0 && a1 > a2) {
            out.push(C64::new(grid[k], 0.0));
        }
    }
    if out.is_empty() {
        let best = (0..pts).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
        out.push(C64::new(grid[best], 0.0));
    }
    Ok(out)
}

fn sorted_svd(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let sv = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let v = DMatrix::from_fn(m.ncols(), idx.len(), |row, c| vt[(idx[c], row)].conj());
    (sv, v)
}

fn starting_state(model: &Model<'_>, w: C64) -> Result<DVector<f64>> {
    let l = &model.layout;
    let (m, _) = model.eval(&model.coeffs, w);
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch("evaluation must be square".into()));
    }
    let (_, v) = sorted_svd(&m);
    let mut z = DVector::zeros(l.len);
    if l.omega_vars == 2 {
        z[l.params] = w.re;
        z[l.params + 1] = w.im;
    }
    let nr = l.size * l.r;
    for c in 0..l.r {
        for i in 0..l.size {
            let b = v[(i, c)];
            z[l.b_off + c * l.size + i] = b.re;
            z[l.b_off + nr + c * l.size + i] = b.im;
        }
    }
    let (g, jac) = model.gradient_parts(&z);
    let target = -g.rows(0, l.primal()).into_owned();
    let lam = lstsq(&jac.transpose(), &target)?;
    z.rows_mut(l.lam_off, l.constraints()).copy_from(&lam);
    Ok(z)
}

/// `dA = 0`, the candidate `w` minimizing `sigma_{n-r+1}(A(w))` and `B`
/// from the `r` smallest right singular vectors of `M(w)`.
pub fn initial_guess_mccoy(prob: &McCoyProblem) -> Result<DVector<f64>> {
    let model = Model::new(prob)?;
    let w = match prob.pinned_omega {
        Some(w) => w,
        None => best_candidate(prob)?,
    };
    starting_state(&model, w)
}

/// Starting point for a prescribed eigenvalue.
pub fn initial_guess_at(prob: &McCoyProblem, w: C64) -> Result<DVector<f64>> {
    let model = Model::new(prob)?;
    starting_state(&model, prob.pinned_omega.unwrap_or(w))
}

fn best_candidate(prob: &McCoyProblem) -> Result<C64> {
    ranked_candidates(prob)?
        .first()
        .copied()
        .ok_or_else(|| Error::NoCandidates("no finite eigenvalue candidate".into()))
}

/// Candidates ordered by `sigma_{n-r+1}(A(w))`, ties by imaginary then real
/// part.
pub fn ranked_candidates(prob: &McCoyProblem) -> Result<Vec<C64>> {
    let n = prob.a.rows();
    let mut scored: Vec<(f64, C64)> = omega_candidates(&prob.a)?
        .into_iter()
        .map(|w| {
            let s = complex_singular_values(&prob.a.evaluate(w));
            (s[n - prob.r], w)
        })
        .filter(|(s, _)| s.is_finite())
        .collect();
    scored.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.im.total_cmp(&y.1.im))
            .then(x.1.re.total_cmp(&y.1.re))
    });
    Ok(scored.into_iter().map(|(_, w)| w).collect())
}

#[derive(Clone, Debug)]
pub struct McCoyReport {
    pub delta_a: MatPoly,
    pub distance: f64,
    /// Eigenvalue of `A + dA`; of the reversed polynomial when `at_infinity`.
    pub omega: C64,
    pub at_infinity: bool,
    pub b: DMatrix<C64>,
    pub iterations: usize,
    pub final_grad_norm: f64,
    /// `t - w` for real `w`, `(t - w)(t - conj w)` otherwise.
    pub invariant_factor: Poly,
    /// `|B* B - I|_F`.
    pub orthonormality_error: f64,
    /// `|M(w) B|_F` with the perturbed `M`.
    pub kernel_residual: f64,
    pub termination: Termination,
    pub trace: LmTrace,
    pub z: DVector<f64>,
    /// Factor the input was divided by before solving; 1 for
    /// [`solve_mccoy_from`].
    pub scale: f64,
}

impl McCoyReport {
    /// Kernel vectors of `(A + dA)(w)`: the leading block of `B` (the whole
    /// of `B` without linearization).
    pub fn kernel_vectors(&self, n: usize) -> DMatrix<C64> {
        self.b.rows(0, n).into_owned()
    }
}

fn invariant_factor(w: C64) -> Poly {
    if w.im.abs() <= 1e-8 * (1.0 + w.norm()) {
        Poly::new(vec![-w.re, 1.0])
    } else {
        Poly::new(vec![w.norm_sqr(), -2.0 * w.re, 1.0])
    }
}

/// Solves on `A / |A|_F` and scales the result back, starting from the best
/// ranked eigenvalue candidate and moving on to the next ones while runs
/// fail to converge. `trace`, `z` and `final_grad_norm` of the report belong
/// to the normalized problem; see [`McCoyReport::scale`].
pub fn solve_mccoy(prob: &McCoyProblem, cfg: &LmConfig) -> Result<McCoyReport> {
    cfg.validate()?;
    prob.layout()?;
    if is_numerically_singular(&prob.a) {
        return Err(Error::RankDeficientInput("determinant vanishes identically".into()));
    }
    let scale = prob.a.frobenius_norm();
    let unit = normalized(prob, scale)?;
    let mut report = multistart(&unit, cfg)?;
    report.delta_a = report.delta_a.scale(&scale);
    report.distance *= scale;
    report.kernel_residual *= scale;
    report.scale = scale;
    Ok(report)
}

fn normalized(prob: &McCoyProblem, scale: f64) -> Result<McCoyProblem> {
    let mut out = prob.clone();
    out.a = prob.a.scale(&(1.0 / scale));
    if let Some(c) = prob.structure.base_offset() {
        out.structure = prob.structure.clone().with_base_offset(c.scale(&(1.0 / scale)))?;
    }
    Ok(out)
}

fn multistart(prob: &McCoyProblem, cfg: &LmConfig) -> Result<McCoyReport> {
    if prob.pinned_omega.is_some() {
        return solve_mccoy_from(prob, initial_guess_mccoy(prob)?, cfg);
    }
    let mut first: Option<Result<McCoyReport>> = None;
    for w in ranked_candidates(prob)?.into_iter().take(MAX_STARTS) {
        let run = initial_guess_at(prob, w).and_then(|z0| solve_mccoy_from(prob, z0, cfg));
        if let Ok(r) = &run {
            if matches!(r.termination, Termination::GradTol | Termination::StepTol) {
                return run;
            }
        }
        first.get_or_insert(run);
    }
    first.unwrap_or_else(|| Err(Error::NoCandidates("no finite eigenvalue candidate".into())))
}

/// Runs the KKT iteration from a caller supplied state.
pub fn solve_mccoy_from(prob: &McCoyProblem, z0: DVector<f64>, cfg: &LmConfig) -> Result<McCoyReport> {
    let model = Model::new(prob)?;
    model.check_len(&z0)?;
    let l = &model.layout;
    let (z, trace) = lm_minimize(
        |z| {
            if model.omega(z).norm() > OMEGA_LIMIT {
                return Err(Error::UnattainableProblem);
            }
            Ok(model.gradient_parts(z).0)
        },
        |z| Ok(model.hessian(z)),
        z0,
        cfg,
    )?;
    let w = model.omega(&z);
    if w.norm() > OMEGA_LIMIT / 10.0 {
        return Err(Error::UnattainableProblem);
    }
    let p: Vec<f64> = z.rows(0, l.params).iter().copied().collect();
    let delta_a = perturbation_matrix(&prob.structure, &p)?;
    let b = model.b(&z);
    let (m, _) = model.eval(&model.perturbed_coeffs(&p), w);
    let gram = b.adjoint() * &b - DMatrix::<C64>::identity(l.r, l.r);
    Ok(McCoyReport {
        distance: delta_a.frobenius_norm(),
        delta_a,
        omega: w,
        at_infinity: prob.pinned_omega.is_some(),
        iterations: trace.iterations.len(),
        final_grad_norm: trace.final_merit(),
        invariant_factor: invariant_factor(w),
        orthonormality_error: gram.norm(),
        kernel_residual: (&m * &b).norm(),
        b,
        termination: trace.termination,
        trace,
        z,
        scale: 1.0,
    })
}

/// The same problem on `t^d A(1/t)` with the eigenvalue pinned to zero,
/// which captures a rank drop at infinity.
pub fn reversed_problem(prob: &McCoyProblem) -> McCoyProblem {
    McCoyProblem {
        a: prob.a.reversed(),
        structure: prob.structure.reversed(),
        r: prob.r,
        use_linearization: prob.use_linearization,
        pinned_omega: Some(C64::new(0.0, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::central_difference;

    fn p(c: &[f64]) -> Poly {
        Poly::new(c.to_vec())
    }

    fn sample() -> MatPoly {
        MatPoly::from_rows(vec![
            vec![p(&[1.0, 0.5, 1.0]), p(&[0.2, -0.1])],
            vec![p(&[-0.3, 0.0, 0.4]), p(&[2.0, 1.0, 0.7])],
        ])
        .unwrap()
    }

    fn state(prob: &McCoyProblem) -> DVector<f64> {
        let l = prob.layout().unwrap();
        DVector::from_fn(l.len, |i, _| (i as f64 * 0.917).sin() * 0.6)
    }

    #[test]
    fn pencil_of_degree_one_is_the_matrix() {
        let a = MatPoly::from_rows(vec![
            vec![p(&[1.0, 2.0]), p(&[3.0])],
            vec![p(&[0.0, 1.0]), p(&[4.0, 5.0])],
        ])
        .unwrap();
        let pen = companion_linearization(&a).unwrap();
        assert_eq!(pen.to_matpoly(), a);
    }

    #[test]
    fn pencil_blocks() {
        let pen = companion_linearization(&sample()).unwrap();
        assert_eq!(pen.size(), 4);
        assert_eq!(pen.e[(0, 0)], 1.0);
        assert_eq!(pen.e[(2, 2)], 1.0);
        assert_eq!(pen.e[(3, 2)], 0.4);
        assert_eq!(pen.f[(0, 2)], 1.0);
        assert_eq!(pen.f[(2, 0)], -1.0);
        assert_eq!(pen.f[(3, 3)], -1.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for lin in [true, false] {
            let a = sample();
            let prob = McCoyProblem::new(a.clone(), PerturbStructure::full(&a), 2)
                .unwrap()
                .with_linearization(lin);
            let model = Model::new(&prob).unwrap();
            let z = state(&prob);
            let l = prob.layout().unwrap();
            let lagr = |v: &[f64]| -> Vec<f64> {
                let zz = DVector::from_column_slice(v);
                let (c, _) = model.constraints(&zz);
                let obj = (&model.c0_mask + zz.rows(0, l.params)).norm_squared();
                vec![obj + zz.rows(l.lam_off, l.constraints()).dot(&c)]
            };
            let fd = central_difference(lagr, z.as_slice(), 1e-6);
            let g = mccoy_residual(&prob, &z).unwrap();
            let err = (fd.row(0).transpose() - &g).norm();
            assert!(err <= 1e-5 * (1.0 + g.norm()), "{lin}: {err}");
        }
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let a = sample();
        let prob = McCoyProblem::new(a.clone(), PerturbStructure::support(&a), 2).unwrap();
        let z = state(&prob);
        let fd = central_difference(
            |v| {
                mccoy_residual(&prob, &DVector::from_column_slice(v))
                    .unwrap()
                    .as_slice()
                    .to_vec()
            },
            z.as_slice(),
            1e-5,
        );
        let h = mccoy_hessian(&prob, &z).unwrap();
        let err = (&fd - &h).norm();
        assert!(err <= 1e-5 * (1.0 + h.norm()), "{err}");
    }

    #[test]
    fn planted_instance_has_zero_residual() {
        // diag(t - 1, t - 1) drops rank 2 at w = 1 with B = I.
        let a = MatPoly::from_rows(vec![vec![p(&[-1.0, 1.0]), p(&[0.0])], vec![p(&[0.0]), p(&[-1.0, 1.0])]]).unwrap();
        let prob = McCoyProblem::new(a.clone(), PerturbStructure::degree(&a), 2).unwrap();
        let l = prob.layout().unwrap();
        let mut z = DVector::zeros(l.len);
        z[l.params] = 1.0;
        z[l.b_off] = 1.0;
        z[l.b_off + 3] = 1.0;
        assert_eq!(mccoy_residual(&prob, &z).unwrap().norm(), 0.0);
    }

    #[test]
    fn already_deficient_input_has_zero_distance() {
        let a = MatPoly::from_rows(vec![vec![p(&[-1.0, 1.0]), p(&[0.0])], vec![p(&[0.0]), p(&[-1.0, 1.0])]]).unwrap();
        let prob = McCoyProblem::new(a.clone(), PerturbStructure::full(&a), 2).unwrap();
        let r = solve_mccoy(&prob, &LmConfig::default()).unwrap();
        assert!(r.distance < 1e-10, "{}", r.distance);
        assert!((r.omega - C64::new(1.0, 0.0)).norm() < 1e-8);
        assert_eq!(r.invariant_factor.degree(), crate::Degree::Finite(1));
    }

    #[test]
    fn rank_drop_bounds() {
        let a = sample();
        assert!(McCoyProblem::new(a.clone(), PerturbStructure::full(&a), 1).is_err());
        assert!(McCoyProblem::new(a.clone(), PerturbStructure::full(&a), 3).is_err());
    }
}
