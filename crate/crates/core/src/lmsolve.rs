//! Levenberg–Marquardt iteration for square or overdetermined nonlinear
//! systems `g(z) = 0`, used on KKT systems `grad L = 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LmConfig {
    pub max_iter: usize,
    pub grad_tol: f64,
    pub step_tol: f64,
    pub nu_floor: f64,
    pub nu_scale: f64,
    /// Damping inflations (x10) tried before giving up on an iteration.
    pub max_retries: usize,
}

impl Default for LmConfig {
    fn default() -> Self {
        Self {
            max_iter: 500,
            grad_tol: 1e-12,
            step_tol: 1e-14,
            nu_floor: 1e-14,
            nu_scale: 1.0,
            max_retries: 20,
        }
    }
}

impl LmConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.grad_tol, self.step_tol, self.nu_floor, self.nu_scale];
        if self.max_iter == 0 || positive.iter().any(|v| v.is_nan() || *v <= 0.0) {
            return Err(Error::InvalidArgument(
                "tolerances must be positive and max_iter at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    GradTol,
    StepTol,
    MaxIter,
    Stalled,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::GradTol => "grad_tol",
            Termination::StepTol => "step_tol",
            Termination::MaxIter => "max_iter",
            Termination::Stalled => "stalled",
        }
    }
}

/// One accepted iteration.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LmIteration {
    /// `|g|` after the step.
    pub merit: f64,
    pub nu: f64,
    pub step_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmTrace {
    pub initial_merit: f64,
    pub iterations: Vec<LmIteration>,
    pub termination: Termination,
}

impl LmTrace {
    /// `|g|` at z0 followed by every accepted iterate.
    pub fn merits(&self) -> Vec<f64> {
        std::iter::once(self.initial_merit)
            .chain(self.iterations.iter().map(|it| it.merit))
            .collect()
    }

    pub fn final_merit(&self) -> f64 {
        self.iterations.last().map_or(self.initial_merit, |it| it.merit)
    }
}

/// Solves `(H^T H + nu I) dz = -H^T g` through a QR factorization of the
/// stacked matrix `[H; sqrt(nu) I]`.
pub fn lm_step(g: &DVector<f64>, h: &DMatrix<f64>, nu: f64) -> Result<DVector<f64>> {
    let (m, n) = h.shape();
    if g.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "H has {m} rows but g has length {}",
            g.len()
        )));
    }
    if nu.is_nan() || nu <= 0.0 {
        return Err(Error::InvalidArgument("damping must be positive".into()));
    }
    let mut aug = DMatrix::zeros(m + n, n);
    aug.view_mut((0, 0), (m, n)).copy_from(h);
    aug.view_mut((m, 0), (n, n)).fill_diagonal(nu.sqrt());
    let mut rhs = DVector::zeros(m + n);
    rhs.rows_mut(0, m).copy_from(&(-g));
    let qr = aug.qr();
    let qtb = qr.q().transpose() * rhs;
    let dz = qr
        .r()
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::LinearSolveFailure("singular triangular factor".into()))?;
    let htg = h.transpose() * g;
    let resid = h.transpose() * (h * &dz) + &dz * nu + &htg;
    let bound = 1e-10 * (1.0 + htg.norm());
    if !resid.iter().all(|v| v.is_finite()) || resid.norm() > bound {
        let normal = h.transpose() * h + DMatrix::identity(n, n) * nu;
        let dz2 = normal
            .cholesky()
            .map(|c| c.solve(&(-&htg)))
            .ok_or_else(|| Error::LinearSolveFailure("normal equations not positive definite".into()))?;
        let resid2 = h.transpose() * (h * &dz2) + &dz2 * nu + &htg;
        if resid2.norm() <= bound {
            return Ok(dz2);
        }
        return Err(Error::LinearSolveFailure(format!(
            "residual {:.3e} exceeds {bound:.3e}",
            resid.norm().min(resid2.norm())
        )));
    }
    Ok(dz)
}

/// Damped Gauss–Newton iteration with monotone merit `|g|`.
///
/// `nu_k = max(nu_floor, nu_scale |g(z_k)|)`; a trial step is accepted only if
/// it lowers the merit, otherwise `nu` grows tenfold (at most `max_retries`
/// times) before the run ends as [`Termination::Stalled`]. Evaluation errors
/// at trial points count as rejections.
pub fn lm_minimize<G, H>(mut g_fn: G, mut h_fn: H, z0: DVector<f64>, cfg: &LmConfig) -> Result<(DVector<f64>, LmTrace)>
where
    G: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
    H: FnMut(&DVector<f64>) -> Result<DMatrix<f64>>,
{
    cfg.validate()?;
    let mut z = z0;
    let mut g = g_fn(&z)?;
    let mut merit = g.norm();
    let mut trace = LmTrace {
        initial_merit: merit,
        iterations: Vec::new(),
        termination: Termination::MaxIter,
    };
    for _ in 0..cfg.max_iter {
        if merit <= cfg.grad_tol {
            trace.termination = Termination::GradTol;
            return Ok((z, trace));
        }
        let h = h_fn(&z)?;
        let mut nu = cfg.nu_floor.max(cfg.nu_scale * merit);
        let mut accepted = None;
        let mut last_err = None;
        for retry in 0..=cfg.max_retries {
            let dz = match lm_step(&g, &h, nu) {
                Ok(dz) => dz,
                Err(e) => {
                    last_err = Some(e);
                    nu *= 10.0;
                    continue;
                }
            };
            let step_norm = dz.norm();
            if step_norm <= cfg.step_tol {
                if retry == 0 {
                    trace.termination = Termination::StepTol;
                    return Ok((z, trace));
                }
                break;
            }
            let zt = &z + &dz;
            if let Ok(gt) = g_fn(&zt) {
                let mt = gt.norm();
                if mt < merit {
                    accepted = Some((zt, gt, mt, step_norm));
                    break;
                }
            }
            nu *= 10.0;
        }
        match accepted {
            Some((zt, gt, mt, step_norm)) => {
                trace.iterations.push(LmIteration {
                    merit: mt,
                    nu,
                    step_norm,
                });
                z = zt;
                g = gt;
                merit = mt;
            }
            None => {
                if let Some(e) = last_err {
                    if trace.iterations.is_empty() {
                        return Err(e);
                    }
                }
                trace.termination = Termination::Stalled;
                return Ok((z, trace));
            }
        }
    }
    trace.termination = if merit <= cfg.grad_tol {
        Termination::GradTol
    } else {
        Termination::MaxIter
    };
    Ok((z, trace))
}
