//! Nearest matrix polynomial with a non-trivial Smith form.
//!
//! The adjoint of the perturbed matrix is required to factor as `F* h` with
//! a monic common divisor `h`; the KKT system of
//! `min |dA|^2  s.t.  vec(Adj(A + dA)) = vec(F* h),  lcoeff(h) = 1`
//! is solved with [`lm_minimize`].

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::detadj::{adjoint, jacobian_adj_with, vec_index};
use crate::error::{Error, Result};
use crate::gcdkit::{
    adjoint_polys, approx_gcd, approx_gcd_from, detect_unattainable, initial_divisors, is_numerically_singular,
    partial_multiplicities, reachable_adjoint_degrees, ENTRY_TOL,
};
use crate::lmsolve::{lm_minimize, LmConfig, LmTrace, Termination};
use crate::matpoly::{apply_perturbation, perturbation_matrix, Degree, PerturbStructure};
use crate::structured::{conv_matrix, kernel_basis, lstsq, singular_values};
use crate::{MatPoly, Poly};

#[derive(Clone, Debug)]
pub struct SnfProblem {
    pub a: MatPoly,
    pub structure: PerturbStructure,
    pub deg_h: usize,
    /// Impose the factorization on the reversed adjoint entries so that a
    /// common root at zero encodes a common factor at infinity.
    pub use_reversal: bool,
}

/// Placement of one adjoint entry in the state and constraint vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryBlock {
    /// Column-major index `j n + i` of the adjoint entry.
    pub entry: usize,
    /// Structural degree of the entry.
    pub degree: usize,
    pub f_off: usize,
    /// `degree + 1 - deg_h`, or zero when the entry must vanish.
    pub f_len: usize,
    pub row_off: usize,
}

/// Offsets of the blocks of `z = (p, F*, h, lambda_adj, lambda_norm)`.
///
/// Every structurally nonzero adjoint entry of degree `d'` contributes a
/// cofactor of degree `d' - deg_h` and `d' + 1` constraint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub d: usize,
    pub gamma: usize,
    pub deg_h: usize,
    pub params: usize,
    pub blocks: Vec<EntryBlock>,
    pub f_off: usize,
    pub h_off: usize,
    pub lam_off: usize,
    pub norm_off: usize,
    pub len: usize,
}

impl Layout {
    /// Number of primal variables `x = (p, F*, h)`.
    pub fn primal(&self) -> usize {
        self.lam_off
    }

    pub fn constraints(&self) -> usize {
        self.len - self.lam_off
    }
}

impl SnfProblem {
    pub fn new(a: MatPoly, structure: PerturbStructure, deg_h: usize) -> Result<Self> {
        let p = Self {
            a,
            structure,
            deg_h,
            use_reversal: false,
        };
        p.layout()?;
        Ok(p)
    }

    pub fn with_reversal(mut self, on: bool) -> Self {
        self.use_reversal = on;
        self
    }

    pub fn layout(&self) -> Result<Layout> {
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
        if n < 2 {
            return Err(Error::InvalidArgument("matrix polynomial must be at least 2x2".into()));
        }
        let d = a.degree_bound();
        let gamma = (n - 1) * d;
        if self.deg_h == 0 {
            return Err(Error::InvalidArgument("deg_h must be at least 1".into()));
        }
        let reach = reachable_adjoint_degrees(a, s);
        let max = reach.iter().filter_map(|r| r.finite()).max().unwrap_or(0);
        if self.deg_h > max {
            return Err(Error::DegreeTooLarge {
                requested: self.deg_h,
                max,
            });
        }
        let params = s.count();
        let mut blocks = Vec::new();
        let mut f_len_total = 0;
        let mut rows = 0;
        for j in 0..n {
            for i in 0..n {
                if let Degree::Finite(dp) = reach[i * n + j] {
                    let f_len = (dp + 1).saturating_sub(self.deg_h);
                    blocks.push(EntryBlock {
                        entry: j * n + i,
                        degree: dp,
                        f_off: params + f_len_total,
                        f_len,
                        row_off: rows,
                    });
                    f_len_total += f_len;
                    rows += dp + 1;
                }
            }
        }
        let f_off = params;
        let h_off = f_off + f_len_total;
        let lam_off = h_off + self.deg_h + 1;
        let norm_off = lam_off + rows;
        Ok(Layout {
            n,
            d,
            gamma,
            deg_h: self.deg_h,
            params,
            blocks,
            f_off,
            h_off,
            lam_off,
            norm_off,
            len: norm_off + 1,
        })
    }

    /// `A + C0`, the matrix the free parameters are added to.
    fn base(&self) -> Result<MatPoly> {
        match self.structure.base_offset() {
            Some(c0) => self.a.try_add(c0),
            None => Ok(self.a.clone()),
        }
    }

    /// Constraint row of every coefficient of `vec(Adj)`; `None` drops it.
    /// Reversal maps coefficient `m` of an entry of degree `d'` to `d' - m`.
    fn row_map(&self, l: &Layout) -> Vec<Option<usize>> {
        let per = l.gamma + 1;
        let mut map = vec![None; l.n * l.n * per];
        for b in &l.blocks {
            for m in 0..=b.degree {
                let k = if self.use_reversal { b.degree - m } else { m };
                map[b.entry * per + m] = Some(b.row_off + k);
            }
        }
        map
    }
}

struct Point {
    g: DVector<f64>,
    /// Constraint Jacobian `m x n_x`.
    jac: DMatrix<f64>,
}

struct Ctx<'a> {
    prob: &'a SnfProblem,
    layout: Layout,
    base: MatPoly,
    c0_mask: DVector<f64>,
    /// Columns of `vec(A)` of the free parameters.
    param_cols: Vec<usize>,
    row_map: Vec<Option<usize>>,
}

impl<'a> Ctx<'a> {
    fn new(prob: &'a SnfProblem) -> Result<Self> {
        let layout = prob.layout()?;
        let base = prob.base()?;
        let positions = prob.structure.positions();
        let c0_mask = DVector::from_iterator(
            positions.len(),
            positions
                .iter()
                .map(|&(i, j, k)| prob.structure.base_offset().map_or(0.0, |c| c.coeff(i, j, k))),
        );
        let param_cols = positions
            .iter()
            .map(|&(i, j, k)| vec_index(layout.n, layout.d, i, j, k))
            .collect();
        let row_map = prob.row_map(&layout);
        Ok(Self {
            prob,
            layout,
            base,
            c0_mask,
            param_cols,
            row_map,
        })
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

    fn perturbed(&self, p: &[f64]) -> Result<MatPoly> {
        apply_perturbation(&self.base, &self.prob.structure, p)
    }

    fn h(&self, z: &DVector<f64>) -> Poly {
        let l = &self.layout;
        Poly::new(z.rows(l.h_off, l.deg_h + 1).iter().copied().collect())
    }

    fn cofactor(&self, z: &DVector<f64>, b: &EntryBlock) -> Poly {
        Poly::new(z.rows(b.f_off, b.f_len).iter().copied().collect())
    }

    /// Mapped `vec(Adj)` and the mapped adjoint Jacobian restricted to the
    /// free parameters.
    fn adjoint_part(&self, p: &[f64]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let l = &self.layout;
        let ap = self.perturbed(p)?;
        let adj = adjoint(&ap)?;
        let jadj = jacobian_adj_with(&ap, &adj)?.matrix;
        let rows = l.constraints() - 1;
        let v = adj.vec(l.gamma)?;
        let mut av = DVector::zeros(rows);
        let mut jm = DMatrix::zeros(rows, l.params);
        for (src, dst) in self.row_map.iter().enumerate() {
            if let Some(dst) = *dst {
                av[dst] = v[src];
                for (q, &col) in self.param_cols.iter().enumerate() {
                    jm[(dst, q)] = jadj[(src, col)];
                }
            }
        }
        Ok((av, jm))
    }

    fn point(&self, z: &DVector<f64>) -> Result<Point> {
        self.check_len(z)?;
        let l = &self.layout;
        let p: Vec<f64> = z.rows(0, l.params).iter().copied().collect();
        let (av, jm) = self.adjoint_part(&p)?;
        let h = self.h(z);
        let m = l.constraints();
        let nx = l.primal();

        let mut jac = DMatrix::zeros(m, nx);
        jac.view_mut((0, 0), (m - 1, l.params)).copy_from(&jm);
        let mut cons = av;
        for b in &l.blocks {
            if b.f_len == 0 {
                continue;
            }
            let rows = b.degree + 1;
            let f = self.cofactor(z, b);
            let ch = conv_matrix(&h, b.f_len - 1);
            let cf = conv_matrix(&f, l.deg_h);
            jac.view_mut((b.row_off, b.f_off), (rows, b.f_len)).copy_from(&(-&ch));
            jac.view_mut((b.row_off, l.h_off), (rows, l.deg_h + 1))
                .copy_from(&(-&cf));
            let prod = &f * &h;
            for k in 0..rows {
                cons[b.row_off + k] -= prod.coeff(k);
            }
        }
        jac[(m - 1, l.h_off + l.deg_h)] = 1.0;

        let mut g = DVector::zeros(l.len);
        let pv = DVector::from_vec(p);
        g.rows_mut(0, l.params).copy_from(&((&self.c0_mask + &pv) * 2.0));
        let lam = z.rows(l.lam_off, m);
        let jt_lam = jac.transpose() * lam;
        let mut gx = g.rows_mut(0, nx);
        gx += &jt_lam;
        g.rows_mut(l.lam_off, m - 1).copy_from(&cons);
        g[l.norm_off] = h.coeff(l.deg_h) - 1.0;
        Ok(Point { g, jac })
    }
}

/// Gradient of the Lagrangian at `z`.
pub fn kkt_residual(prob: &SnfProblem, z: &DVector<f64>) -> Result<DVector<f64>> {
    Ok(Ctx::new(prob)?.point(z)?.g)
}

/// Jacobian of the constraints with respect to `x = (p, F*, h)`.
pub fn constraint_jacobian(prob: &SnfProblem, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    Ok(Ctx::new(prob)?.point(z)?.jac)
}

fn hessian_at(ctx: &Ctx<'_>, z: &DVector<f64>, pt: &Point) -> Result<DMatrix<f64>> {
    let l = &ctx.layout;
    let nx = l.primal();
    let m = l.constraints();
    let mut hm = DMatrix::zeros(l.len, l.len);
    for q in 0..l.params {
        hm[(q, q)] = 2.0;
    }
    // Curvature of lambda^T vec(Adj(A + dA)) by forward differences of its gradient.
    if l.params > 0 {
        let lam = z.rows(l.lam_off, m - 1).into_owned();
        let step = f64::EPSILON.sqrt() * (1.0 + z.norm());
        let p0: Vec<f64> = z.rows(0, l.params).iter().copied().collect();
        let g0 = pt.jac.view((0, 0), (m - 1, l.params)).transpose() * &lam;
        for q in 0..l.params {
            let mut pq = p0.clone();
            pq[q] += step;
            let (_, jq) = ctx.adjoint_part(&pq)?;
            let col = (jq.transpose() * &lam - &g0) / step;
            for r in 0..l.params {
                hm[(r, q)] += col[r];
            }
        }
    }
    // Bilinear coupling of F* and h.
    for b in &l.blocks {
        for mm in 0..b.f_len {
            for k in 0..=l.deg_h {
                let v = -z[l.lam_off + b.row_off + mm + k];
                hm[(b.f_off + mm, l.h_off + k)] += v;
                hm[(l.h_off + k, b.f_off + mm)] += v;
            }
        }
    }
    hm.view_mut((nx, 0), (m, nx)).copy_from(&pt.jac);
    hm.view_mut((0, nx), (nx, m)).copy_from(&pt.jac.transpose());
    Ok((&hm + hm.transpose()) * 0.5)
}

/// Symmetric Hessian of the Lagrangian at `z`.
pub fn kkt_hessian(prob: &SnfProblem, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    let ctx = Ctx::new(prob)?;
    let pt = ctx.point(z)?;
    hessian_at(&ctx, z, &pt)
}

fn mapped_entries(ctx: &Ctx<'_>) -> Result<Vec<(EntryBlock, Poly)>> {
    let l = &ctx.layout;
    let (av, _) = ctx.adjoint_part(&vec![0.0; l.params])?;
    let scale = av.amax();
    Ok(l.blocks
        .iter()
        .filter(|b| b.f_len > 0)
        .map(|b| {
            let f = Poly::new(av.rows(b.row_off, b.degree + 1).iter().copied().collect());
            (b.clone(), f.chopped(ENTRY_TOL * scale))
        })
        .collect())
}

fn state_from(ctx: &Ctx<'_>, h: &Poly, cofactors: &[(EntryBlock, Poly)]) -> Result<DVector<f64>> {
    let l = &ctx.layout;
    let mut z = DVector::zeros(l.len);
    for (b, q) in cofactors {
        for k in 0..b.f_len {
            z[b.f_off + k] = q.coeff(k);
        }
    }
    for k in 0..=l.deg_h {
        z[l.h_off + k] = h.coeff(k);
    }
    let pt = ctx.point(&z)?;
    let nx = l.primal();
    let target = -pt.g.rows(0, nx).into_owned();
    let lam = lstsq(&pt.jac.transpose(), &target)?;
    z.rows_mut(l.lam_off, l.constraints()).copy_from(&lam);
    Ok(z)
}

/// `dA = 0`, `(h, F*)` from an approximate GCD of the (mapped) adjoint
/// entries, `lambda` by least squares on the stationarity equations.
pub fn initial_guess(prob: &SnfProblem) -> Result<DVector<f64>> {
    let ctx = Ctx::new(prob)?;
    let entries = mapped_entries(&ctx)?;
    let f: Vec<Poly> = entries.iter().map(|(_, f)| f.clone()).collect();
    let degs: Vec<usize> = entries.iter().map(|(b, _)| b.degree).collect();
    let g = approx_gcd(&f, ctx.layout.deg_h, &degs)?;
    let cof: Vec<(EntryBlock, Poly)> = entries.into_iter().map(|(b, _)| b).zip(g.cofactors).collect();
    state_from(&ctx, &g.h, &cof)
}

/// Starting point for a prescribed monic divisor `h`: cofactors by least
/// squares, `dA = 0`.
pub fn initial_guess_with_divisor(prob: &SnfProblem, h: &Poly) -> Result<DVector<f64>> {
    let ctx = Ctx::new(prob)?;
    if h.degree() != Degree::Finite(ctx.layout.deg_h) {
        return Err(Error::InvalidArgument(format!(
            "divisor must have degree {}",
            ctx.layout.deg_h
        )));
    }
    let cof = mapped_entries(&ctx)?
        .into_iter()
        .map(|(b, f)| {
            let c = conv_matrix(h, b.f_len - 1);
            let target = DVector::from_fn(b.degree + 1, |k, _| f.coeff(k));
            let q = lstsq(&c, &target)?;
            Ok((b, Poly::new(q.iter().copied().collect())))
        })
        .collect::<Result<Vec<_>>>()?;
    state_from(&ctx, h, &cof)
}

#[derive(Clone, Debug)]
pub struct SnfReport {
    pub delta_a: MatPoly,
    pub distance: f64,
    /// Monic common divisor of the adjoint entries.
    pub h: Poly,
    /// Cofactors, `Adj(A + dA) = F* h` entry-wise (of the reversed entries
    /// in reversal mode).
    pub cofactors: MatPoly,
    pub deg_h: usize,
    pub iterations: usize,
    pub final_grad_norm: f64,
    /// Root of `h` where the rank drops; meaningless when `at_infinity`.
    pub omega: Complex<f64>,
    pub at_infinity: bool,
    /// `(partial multiplicity, count)` pairs of `A + dA` at `omega`.
    pub invariant_structure: Vec<(usize, usize)>,
    pub certified: bool,
    pub sigma_min: f64,
    pub termination: Termination,
    pub trace: LmTrace,
    pub z: DVector<f64>,
}

fn group_counts(kappa: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &k in kappa {
        match out.last_mut() {
            Some((v, c)) if *v == k => *c += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// Root of `h` reported as the eigenvalue: the one with non-positive
/// imaginary part, and among real roots the one where the rank drops most.
fn pick_root(h: &Poly, a: &MatPoly) -> Complex<f64> {
    let roots = h.roots();
    if roots.is_empty() {
        return Complex::new(0.0, 0.0);
    }
    roots
        .iter()
        .copied()
        .min_by(|x, y| {
            let sx = crate::structured::complex_singular_values(&a.evaluate(*x));
            let sy = crate::structured::complex_singular_values(&a.evaluate(*y));
            let kx = sx[sx.len().saturating_sub(2)];
            let ky = sy[sy.len().saturating_sub(2)];
            kx.total_cmp(&ky).then(x.im.total_cmp(&y.im))
        })
        .map(|r| if r.im > 0.0 { r.conj() } else { r })
        .unwrap()
}

fn build_report(prob: &SnfProblem, z: DVector<f64>, trace: LmTrace, cfg: &LmConfig) -> Result<SnfReport> {
    let ctx = Ctx::new(prob)?;
    let l = &ctx.layout;
    let p: Vec<f64> = z.rows(0, l.params).iter().copied().collect();
    let delta_a = perturbation_matrix(&prob.structure, &p)?;
    let distance = delta_a.frobenius_norm();
    let h_raw = ctx.h(&z);
    let lead = h_raw.coeff(l.deg_h);
    let h = h_raw.scale(&(1.0 / lead));
    let mut grid = vec![vec![Poly::zero(); l.n]; l.n];
    for b in &l.blocks {
        grid[b.entry % l.n][b.entry / l.n] = ctx.cofactor(&z, b).scale(&lead);
    }
    let bound = l.blocks.iter().map(|b| b.f_len.saturating_sub(1)).max().unwrap_or(0);
    let cofactors = MatPoly::from_rows_with_bound(grid, bound)?;
    let perturbed = ctx.perturbed(&p)?;
    let (omega, at_infinity, structure_at) = if prob.use_reversal {
        let rev = perturbed.reversed();
        let r = pick_root(&h, &rev);
        if r.norm() <= 1e-8 {
            (
                Complex::new(0.0, 0.0),
                true,
                partial_multiplicities(&rev, Complex::new(0.0, 0.0))?,
            )
        } else {
            let w = Complex::new(1.0, 0.0) / r;
            (w, false, partial_multiplicities(&perturbed, w)?)
        }
    } else {
        let w = pick_root(&h, &perturbed);
        (w, false, partial_multiplicities(&perturbed, w)?)
    };
    let final_grad_norm = trace.final_merit();
    let mut report = SnfReport {
        delta_a,
        distance,
        h,
        cofactors,
        deg_h: l.deg_h,
        iterations: trace.iterations.len(),
        final_grad_norm,
        omega,
        at_infinity,
        invariant_structure: group_counts(&structure_at),
        certified: false,
        sigma_min: 0.0,
        termination: trace.termination,
        trace,
        z,
    };
    let (certified, sigma_min) = certify(prob, &report, cfg)?;
    report.certified = certified && report.termination != Termination::Stalled;
    report.sigma_min = sigma_min;
    Ok(report)
}

/// Runs the KKT iteration from each of [`starting_divisors`] in turn until
/// one run converges; otherwise reports the first run.
pub fn solve(prob: &SnfProblem, cfg: &LmConfig) -> Result<SnfReport> {
    cfg.validate()?;
    let ctx = Ctx::new(prob)?;
    if is_numerically_singular(&ctx.base) {
        return Err(Error::RankDeficientInput("determinant vanishes identically".into()));
    }
    if !prob.use_reversal && detect_unattainable(&prob.a, &prob.structure)? {
        return Err(Error::UnattainableProblem);
    }
    let mut first = None;
    for h in starting_divisors(prob)? {
        let run = initial_guess_with_divisor(prob, &h).and_then(|z0| solve_from(prob, z0, cfg));
        if let Ok(r) = &run {
            if converged(r) {
                return run;
            }
        }
        first.get_or_insert(run);
    }
    first.unwrap_or_else(|| Err(Error::NoCandidates("no starting divisor".into())))
}

fn converged(r: &SnfReport) -> bool {
    matches!(r.termination, Termination::GradTol | Termination::StepTol)
}

/// Divisors [`solve`] starts from, in order: each root based guess refined
/// by the approximate GCD, then unrefined. The refinement ignores the mask
/// and can wander toward roots the structure cannot reach.
pub fn starting_divisors(prob: &SnfProblem) -> Result<Vec<Poly>> {
    let ctx = Ctx::new(prob)?;
    let entries = mapped_entries(&ctx)?;
    let f: Vec<Poly> = entries.iter().map(|(_, f)| f.clone()).collect();
    let degs: Vec<usize> = entries.iter().map(|(b, _)| b.degree).collect();
    let mut out: Vec<Poly> = Vec::new();
    for h0 in initial_divisors(&f, ctx.layout.deg_h)? {
        let refined = approx_gcd_from(&f, &degs, h0.clone())?.h;
        for h in [refined, h0] {
            if !out.iter().any(|g| (g - &h).norm() <= 1e-10 * (1.0 + h.norm())) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Runs the KKT iteration from a caller supplied state.
pub fn solve_from(prob: &SnfProblem, z0: DVector<f64>, cfg: &LmConfig) -> Result<SnfReport> {
    let ctx = Ctx::new(prob)?;
    let (z, trace) = lm_minimize(
        |z| ctx.point(z).map(|pt| pt.g),
        |z| {
            let pt = ctx.point(z)?;
            hessian_at(&ctx, z, &pt)
        },
        z0,
        cfg,
    )?;
    build_report(prob, z, trace, cfg)
}

/// Solves with `deg_h = 1` and `deg_h = 2` (when admissible) and keeps the
/// closer result, preferring runs that converged.
pub fn solve_best(a: &MatPoly, s: &PerturbStructure, use_reversal: bool, cfg: &LmConfig) -> Result<SnfReport> {
    let gamma = (a.rows().max(1) - 1) * a.degree_bound();
    let mut best: Option<SnfReport> = None;
    let mut last_err = None;
    for deg_h in 1..=gamma.min(2) {
        let prob = SnfProblem::new(a.clone(), s.clone(), deg_h)?.with_reversal(use_reversal);
        match solve(&prob, cfg) {
            Ok(r) => {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        let open = |x: &SnfReport| matches!(x.termination, Termination::Stalled | Termination::MaxIter);
                        (open(b) && !open(&r)) || (open(b) == open(&r) && r.distance < b.distance)
                    }
                };
                if better {
                    best = Some(r);
                }
            }
            Err(Error::UnattainableProblem) => return Err(Error::UnattainableProblem),
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some(r) => Ok(r),
        None => Err(last_err.unwrap_or(Error::DegreeTooLarge {
            requested: 1,
            max: gamma,
        })),
    }
}

/// Second order check at a solution: the Hessian of the Lagrangian
/// restricted to the kernel of the constraint Jacobian must be positive
/// semidefinite (up to `-1e-8`) and the KKT residual below `grad_tol`.
/// Also returns the smallest singular value of `[H_xx; J]`.
pub fn certify(prob: &SnfProblem, report: &SnfReport, cfg: &LmConfig) -> Result<(bool, f64)> {
    let ctx = Ctx::new(prob)?;
    let z = &report.z;
    let pt = ctx.point(z)?;
    let hess = hessian_at(&ctx, z, &pt)?;
    let nx = ctx.layout.primal();
    let hxx = hess.view((0, 0), (nx, nx)).into_owned();
    let kernel = kernel_basis(&pt.jac, None)?;
    let psd = if kernel.ncols() == 0 {
        true
    } else {
        let proj = kernel.transpose() * &hxx * &kernel;
        let proj = (&proj + proj.transpose()) * 0.5;
        let eig = SymmetricEigen::new(proj);
        eig.eigenvalues.iter().all(|&v| v > -1e-8)
    };
    let mut stacked = DMatrix::zeros(nx + pt.jac.nrows(), nx);
    stacked.view_mut((0, 0), (nx, nx)).copy_from(&hxx);
    stacked.view_mut((nx, 0), (pt.jac.nrows(), nx)).copy_from(&pt.jac);
    let sigma_min = singular_values(&stacked)?.sigma_min();
    Ok((psd && pt.g.norm() <= cfg.grad_tol, sigma_min))
}

/// Adjoint entries of `a` as polynomials, for callers that want to inspect
/// the factorization target directly.
pub fn adjoint_entries(a: &MatPoly) -> Result<Vec<Poly>> {
    Ok(adjoint_polys(&adjoint(a)?))
}
