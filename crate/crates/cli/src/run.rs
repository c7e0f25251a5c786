//! Subcommand dispatch and report assembly.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use snf_core::gcdkit::{distance_lower_bound, triviality_report};
use snf_core::lmsolve::{LmConfig, LmTrace, Termination};
use snf_core::mccoy_opt::{reversed_problem, solve_mccoy, McCoyProblem, McCoyReport};
use snf_core::snf_opt::{solve, solve_best, SnfProblem, SnfReport};
use snf_core::structured::complex_singular_values;
use snf_core::{ComplexMat, MatPoly};

use crate::error::{CliError, EXIT_FAILURE, EXIT_OK, EXIT_STALLED};
use crate::input::{self, InputDocument};
use crate::json;
use crate::selftest;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Bound,
    Snf,
    Mccoy,
    Selftest,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Bound => "bound",
            Command::Snf => "snf",
            Command::Mccoy => "mccoy",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub deg_h: Option<usize>,
    pub structure: Option<String>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub reversal: bool,
    pub rank_drop: Option<usize>,
    pub linearize: Option<bool>,
    pub seed: u64,
}

impl Options {
    fn lm_config(&self) -> LmConfig {
        let mut cfg = LmConfig::default();
        if let Some(m) = self.max_iter {
            cfg.max_iter = m;
        }
        if let Some(t) = self.tol {
            cfg.grad_tol = t;
        }
        cfg
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
    /// Human-readable diagnostic for standard error.
    pub message: Option<String>,
}

/// Runs one command. Failures still produce a report carrying the error.
pub fn run(command: Command, path: Option<&Path>, opts: &Options, argv: &[String]) -> Outcome {
    let start = Instant::now();
    let mut report = Map::new();
    report.insert("command".into(), json!(command.as_str()));
    report.insert("argv".into(), json!(argv));
    let result = dispatch(command, path, opts, &mut report);
    let (exit_code, message) = match result {
        Ok((value, code)) => {
            report.insert("result".into(), value);
            (code, None)
        }
        Err(e) => {
            report.insert(
                "error".into(),
                json!({ "kind": error_kind(&e), "message": e.to_string() }),
            );
            (e.exit_code(), Some(e.to_string()))
        }
    };
    report.insert("exit_code".into(), json!(exit_code));
    report.insert("wall_clock_seconds".into(), json!(start.elapsed().as_secs_f64()));
    Outcome {
        report: Value::Object(report),
        exit_code,
        message,
    }
}

fn error_kind(e: &CliError) -> &'static str {
    use snf_core::Error as E;
    match e {
        CliError::Parse(_) => "parse",
        CliError::Validation(_) => "validation",
        CliError::Core(E::UnattainableProblem) => "unattainable",
        CliError::Core(_) => "solver",
    }
}

fn dispatch(
    command: Command,
    path: Option<&Path>,
    opts: &Options,
    report: &mut Map<String, Value>,
) -> Result<(Value, i32), CliError> {
    if command == Command::Selftest {
        return Ok(run_selftest(opts.seed));
    }
    let path = path.ok_or_else(|| CliError::Validation(format!("{} needs an input file", command.as_str())))?;
    let (doc, bytes) = input::parse(path)?;
    report.insert(
        "input".into(),
        json!({ "path": path.display().to_string(), "sha256": hex::encode(Sha256::digest(&bytes)) }),
    );
    doc.require_square()?;
    let a = doc.matpoly()?;
    match command {
        Command::Check => check(&doc, &a, opts),
        Command::Bound => bound(&a),
        Command::Snf => snf(&doc, &a, opts),
        Command::Mccoy => mccoy(&doc, &a, opts),
        Command::Selftest => unreachable!("handled above"),
    }
}

fn check(doc: &InputDocument, a: &MatPoly, opts: &Options) -> Result<(Value, i32), CliError> {
    let s = doc.perturb_structure(a, opts.structure.as_deref())?;
    let r = triviality_report(a, &s)?;
    Ok((
        json!({
            "is_trivial": r.is_trivial,
            "mccoy_rank": r.mccoy_rank,
            "gcd_adjoint_degree": r.gcd_adjoint_degree,
            "lower_bound": r.lower_bound,
            "unattainable": r.unattainable,
            "sylvester_rank": r.sylvester_rank,
            "sylvester_sigma": r.sylvester_sigma,
        }),
        EXIT_OK,
    ))
}

fn bound(a: &MatPoly) -> Result<(Value, i32), CliError> {
    let (lower_bound, sigma) = distance_lower_bound(a)?;
    Ok((json!({ "lower_bound": lower_bound, "sigma": sigma }), EXIT_OK))
}

fn termination_exit(t: Termination) -> i32 {
    match t {
        Termination::GradTol | Termination::StepTol => EXIT_OK,
        Termination::MaxIter | Termination::Stalled => EXIT_STALLED,
    }
}

fn trace_json(t: &LmTrace) -> Value {
    json!({
        "initial_merit": t.initial_merit,
        "merits": t.merits(),
        "nu": t.iterations.iter().map(|i| i.nu).collect::<Vec<_>>(),
        "step_norms": t.iterations.iter().map(|i| i.step_norm).collect::<Vec<_>>(),
        "termination": t.termination.as_str(),
    })
}

fn complex_matrix(m: &ComplexMat) -> Value {
    let part = |f: fn(&snf_core::Complex) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    json!({ "re": part(|c| c.re), "im": part(|c| c.im) })
}

fn snf(doc: &InputDocument, a: &MatPoly, opts: &Options) -> Result<(Value, i32), CliError> {
    let s = doc.perturb_structure(a, opts.structure.as_deref())?;
    let cfg = opts.lm_config();
    let r: SnfReport = match opts.deg_h {
        Some(k) => solve(&SnfProblem::new(a.clone(), s, k)?.with_reversal(opts.reversal), &cfg)?,
        None => solve_best(a, &s, opts.reversal, &cfg)?,
    };
    let value = json!({
        "distance": r.distance,
        "delta_a": json::matpoly(&r.delta_a),
        "h": json::poly(&r.h),
        "s1": json::poly(&r.h),
        "cofactors": json::matpoly(&r.cofactors),
        "deg_h": r.deg_h,
        "reversal": opts.reversal,
        "omega": json::complex(r.omega),
        "at_infinity": r.at_infinity,
        "invariant_structure": r.invariant_structure,
        "certified": r.certified,
        "sigma_min": r.sigma_min,
        "iterations": r.iterations,
        "final_grad_norm": r.final_grad_norm,
        "termination": r.termination.as_str(),
        "trace": trace_json(&r.trace),
        "z": r.z.as_slice(),
    });
    Ok((value, termination_exit(r.termination)))
}

fn mccoy(doc: &InputDocument, a: &MatPoly, opts: &Options) -> Result<(Value, i32), CliError> {
    let s = doc.perturb_structure(a, opts.structure.as_deref())?;
    let cfg = opts.lm_config();
    let rank_drop = opts.rank_drop.unwrap_or(2);
    let mut prob = McCoyProblem::new(a.clone(), s, rank_drop)?;
    if let Some(lin) = opts.linearize {
        prob = prob.with_linearization(lin);
    }
    if opts.reversal {
        prob = reversed_problem(&prob);
    }
    let r: McCoyReport = solve_mccoy(&prob, &cfg)?;
    // Reversal with the full degree bound is an involution, so the
    // perturbation of the original input is the reversal of the solved one.
    let delta_a = if opts.reversal {
        r.delta_a.reversed()
    } else {
        r.delta_a.clone()
    };
    let perturbed = prob.a.try_add(&r.delta_a)?;
    let sv = complex_singular_values(&perturbed.evaluate(r.omega));
    let n = a.rows();
    let value = json!({
        "distance": r.distance,
        "delta_a": json::matpoly(&delta_a),
        "rank_drop": rank_drop,
        "linearized": prob.use_linearization,
        "reversal": opts.reversal,
        "omega": json::complex(r.omega),
        "at_infinity": r.at_infinity,
        "invariant_factor": json::poly(&r.invariant_factor),
        "singular_values": sv,
        "kernel_vectors": complex_matrix(&r.kernel_vectors(n)),
        "b": complex_matrix(&r.b),
        "orthonormality_error": r.orthonormality_error,
        "kernel_residual": r.kernel_residual,
        "normalization": r.scale,
        "iterations": r.iterations,
        "final_grad_norm": r.final_grad_norm,
        "termination": r.termination.as_str(),
        "trace": trace_json(&r.trace),
        "z": r.z.as_slice(),
    });
    Ok((value, termination_exit(r.termination)))
}

fn run_selftest(seed: u64) -> (Value, i32) {
    let checks = selftest::run_suite(seed);
    let passed = checks.iter().all(|c| c.passed);
    let value = json!({
        "seed": seed,
        "passed": passed,
        "checks": checks,
    });
    (value, if passed { EXIT_OK } else { EXIT_FAILURE })
}
