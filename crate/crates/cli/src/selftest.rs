//! Seeded cross-checks of the library against independent oracles:
//! finite differences, exact rational arithmetic and closed-form distances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use snf_core::detadj::{adjoint, determinant, jacobian_adj, jacobian_det};
use snf_core::gcdkit::distance_lower_bound;
use snf_core::lmsolve::LmConfig;
use snf_core::mccoy_opt::{solve_mccoy, McCoyProblem};
use snf_core::oracle::{
    all_entries_vanish_distance, central_difference, cofactor_determinant, diagonal_common_root_distance,
    exact_gcd_degree, projection_distance_sq, to_exact_mat, to_float,
};
use snf_core::snf_opt::{solve, SnfProblem};
use snf_core::structured::{generalized_sylvester, numeric_rank};
use snf_core::{MatPoly, PerturbStructure, Poly};

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    /// Largest observed error measure (relative or absolute per check).
    pub worst: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            cases: 0,
            worst: 0.0,
            detail: String::new(),
        }
    }

    fn record(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
        if (err.is_nan() || err > tol) && self.passed {
            self.passed = false;
            self.detail = what();
        }
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        if self.passed {
            self.passed = false;
            self.detail = what;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients uniform in `[-1, 1]` with leading coefficient at least 0.5
/// in magnitude.
pub fn random_poly(r: &mut impl Rng, deg: usize) -> Poly {
    let mut c: Vec<f64> = (0..=deg).map(|_| r.random_range(-1.0..1.0)).collect();
    let lead = r.random_range(0.5..1.0);
    c[deg] = if r.random_bool(0.5) { lead } else { -lead };
    Poly::new(c)
}

pub fn random_int_poly(r: &mut impl Rng, deg: usize) -> Poly {
    let mut c: Vec<f64> = (0..=deg).map(|_| r.random_range(-4i32..=4) as f64).collect();
    if c[deg] == 0.0 {
        c[deg] = 1.0;
    }
    Poly::new(c)
}

pub fn random_matpoly(r: &mut impl Rng, n: usize, d: usize) -> MatPoly {
    let grid = (0..n).map(|_| (0..n).map(|_| random_poly(r, d)).collect()).collect();
    MatPoly::from_rows_with_bound(grid, d).expect("entries respect the bound")
}

pub fn diagonal(f: &Poly, g: &Poly) -> MatPoly {
    let z = Poly::zero();
    MatPoly::from_rows(vec![vec![f.clone(), z.clone()], vec![z, g.clone()]]).expect("2x2 grid")
}

fn perturbed_vec(a: &MatPoly, x: &[f64]) -> MatPoly {
    let d = a.degree_bound();
    MatPoly::unvec(a.rows(), a.cols(), d, x).expect("length matches")
}

/// Relative distance of `j` from the central-difference Jacobian of `f`.
fn fd_error(j: &snf_core::ScalarMat, a: &MatPoly, f: impl Fn(&MatPoly) -> Vec<f64>) -> f64 {
    let x = a.vec(a.degree_bound()).expect("own bound");
    let fd = central_difference(|v| f(&perturbed_vec(a, v)), &x, 1e-6);
    (j - fd).norm() / j.norm().max(1.0)
}

pub fn jacobian_det_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("jacobian_det_finite_difference");
    let mut r = rng(seed);
    for case in 0..count {
        let n = 1 + case % 3;
        let d = 1 + (case / 3) % 2;
        let a = random_matpoly(&mut r, n, d);
        let j = jacobian_det(&a).expect("square input").matrix;
        let nd = n * d;
        let err = fd_error(&j, &a, |m| {
            let det = determinant(m).expect("square");
            (0..=nd).map(|k| det.coeff(k)).collect()
        });
        out.record(err, 1e-5, || {
            format!("case {case} (n={n}, d={d}): relative error {err:.3e}")
        });
    }
    out
}

pub fn jacobian_adj_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("jacobian_adj_finite_difference");
    let mut r = rng(seed);
    for case in 0..count {
        let n = 2 + case % 2;
        let d = 1 + (case / 2) % 2;
        let a = random_matpoly(&mut r, n, d);
        let j = match jacobian_adj(&a) {
            Ok(j) => j.matrix,
            Err(e) => {
                out.fail(format!("case {case}: {e}"));
                continue;
            }
        };
        let gamma = (n - 1) * d;
        let err = fd_error(&j, &a, |m| adjoint(m).expect("square").vec(gamma).expect("bound"));
        out.record(err, 1e-5, || {
            format!("case {case} (n={n}, d={d}): relative error {err:.3e}")
        });
        let rank = numeric_rank(&j, None).unwrap_or(0);
        if rank != j.ncols() {
            out.fail(format!("case {case}: Jacobian rank {rank} < {}", j.ncols()));
        }
    }
    out
}

pub fn adjoint_identity_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("adjoint_and_determinant_identities");
    let mut r = rng(seed);
    for case in 0..count {
        let n = 1 + case % 4;
        let d = case % 4;
        let a = random_matpoly(&mut r, n, d);
        let adj = adjoint(&a).expect("square");
        let det = determinant(&a).expect("square");
        let lhs = a.try_mul(&adj).expect("conformal");
        let mut diff = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { det.clone() } else { Poly::zero() };
                let e = lhs.get(i, j) - &target;
                diff += e.norm().powi(2);
            }
        }
        let diff = diff.sqrt();
        let scale = 1.0 + a.frobenius_norm().powi(n as i32);
        out.record(diff / scale, 1e-10, || {
            format!("case {case}: |A Adj - det I| = {diff:.3e}")
        });
        let exact = to_float(&cofactor_determinant(&to_exact_mat(&a)));
        let err = (&det - &exact).norm() / exact.norm().max(1e-300);
        out.record(err, 1e-10, || {
            format!("case {case}: determinant relative error {err:.3e}")
        });
    }
    out
}

pub fn sylvester_gcd_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("sylvester_rank_matches_exact_gcd");
    let mut r = rng(seed);
    for case in 0..count {
        let k = 2 + case % 3;
        let planted = case % 3;
        let common = random_int_poly(&mut r, planted);
        let polys: Vec<Poly> = (0..k)
            .map(|_| {
                let deg = r.random_range(1..=3);
                &random_int_poly(&mut r, deg) * &common
            })
            .collect();
        let degs: Vec<usize> = polys.iter().map(|p| p.degree().finite().unwrap_or(0)).collect();
        let syl = match generalized_sylvester(&polys, &degs) {
            Ok(s) => s,
            Err(e) => {
                out.fail(format!("case {case}: {e}"));
                continue;
            }
        };
        let nullity = syl.ncols() - numeric_rank(&syl, None).unwrap_or(0);
        let exact = exact_gcd_degree(&polys).finite().unwrap_or(0);
        out.record((nullity as f64 - exact as f64).abs(), 0.0, || {
            format!("case {case}: nullity {nullity}, exact gcd degree {exact}")
        });
    }
    out
}

/// Closed form of the squared distance from `diag((t-1)^2, t^2+2t+2)` to
/// pairs divisible by `gamma t + 1`.
pub fn intro_curve(gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    (5.0 * g2 * g2 - 4.0 * g2 * gamma + 14.0 * g2 + 2.0) / (g2 * g2 + g2 + 1.0)
}

pub fn intro_curve_projection(gamma: f64) -> f64 {
    let f = Poly::new(vec![1.0, -2.0, 1.0]);
    let g = Poly::new(vec![2.0, 2.0, 1.0]);
    let h = Poly::new(vec![1.0, gamma]);
    projection_distance_sq(&f, &h, 1) + projection_distance_sq(&g, &h, 1)
}

pub fn intro_curve_check() -> CheckResult {
    let mut out = CheckResult::new("intro_gcd_distance_curve");
    for gamma in [0.01, 0.5, 1.0, -1.0] {
        let err = (intro_curve_projection(gamma) - intro_curve(gamma)).abs();
        out.record(err, 1e-8, || format!("gamma {gamma}: error {err:.3e}"));
    }
    let v = intro_curve_projection(0.01);
    if !(v > 2.0 && v < 2.01) {
        out.fail(format!("value at 0.01 is {v}"));
    }
    out
}

/// `(solver distance, oracle distance)` for a 2x2 diagonal instance.
pub fn snf_vs_oracle(f: &Poly, g: &Poly) -> Result<(f64, f64), snf_core::Error> {
    let a = diagonal(f, g);
    let prob = SnfProblem::new(a.clone(), PerturbStructure::degree(&a), 1)?;
    let rep = solve(&prob, &LmConfig::default())?;
    Ok((rep.distance, diagonal_common_root_distance(f, g).0))
}

pub fn mccoy_vs_oracle(a: &MatPoly) -> Result<(f64, f64), snf_core::Error> {
    let prob = McCoyProblem::new(a.clone(), PerturbStructure::full(a), 2)?;
    let rep = solve_mccoy(&prob, &LmConfig::default())?;
    Ok((rep.distance, all_entries_vanish_distance(a).0))
}

/// 2x2 diagonal instances `diag(f, g)` with quadratic entries.
pub fn snf_instances(seed: u64, count: usize) -> Vec<(Poly, Poly)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (random_poly(&mut r, 2), random_poly(&mut r, 2)))
        .collect()
}

/// Dense 2x2 instances of degree 1.
pub fn mccoy_instances(seed: u64, count: usize) -> Vec<MatPoly> {
    let mut r = rng(seed.wrapping_add(1));
    (0..count).map(|_| random_matpoly(&mut r, 2, 1)).collect()
}

pub fn snf_oracle_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("snf_small_matches_projection_oracle");
    for (case, (f, g)) in snf_instances(seed, count).iter().enumerate() {
        match snf_vs_oracle(f, g) {
            Ok((s, o)) => out.record((s - o).abs(), 1e-6, || format!("case {case}: solver {s}, oracle {o}")),
            Err(e) => out.fail(format!("case {case}: {e}")),
        }
    }
    out
}

pub fn mccoy_oracle_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("mccoy_small_matches_vanishing_oracle");
    for (case, a) in mccoy_instances(seed, count).iter().enumerate() {
        match mccoy_vs_oracle(a) {
            Ok((s, o)) => out.record((s - o).abs(), 1e-6, || format!("case {case}: solver {s}, oracle {o}")),
            Err(e) => out.fail(format!("case {case}: {e}")),
        }
    }
    out
}

pub fn lower_bound_check(seed: u64, count: usize) -> CheckResult {
    let mut out = CheckResult::new("lower_bound_below_solved_distance");
    for (case, (f, g)) in snf_instances(seed, count).iter().enumerate() {
        match (distance_lower_bound(&diagonal(f, g)), snf_vs_oracle(f, g)) {
            (Ok((lb, _)), Ok((s, _))) => out.record(lb - s, 0.0, || format!("case {case}: bound {lb} > distance {s}")),
            (Err(e), _) | (_, Err(e)) => out.fail(format!("case {case}: {e}")),
        }
    }
    out
}

pub fn run_suite(seed: u64) -> Vec<CheckResult> {
    vec![
        jacobian_det_check(seed, 20),
        jacobian_adj_check(seed, 20),
        adjoint_identity_check(seed, 50),
        sylvester_gcd_check(seed, 50),
        intro_curve_check(),
        snf_oracle_check(seed, 10),
        mccoy_oracle_check(seed, 5),
        lower_bound_check(seed, 10),
    ]
}
