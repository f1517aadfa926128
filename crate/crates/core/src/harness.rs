//! Experiment runner: configuration, traced runs, CSV traces and summaries.
//!
//! Configuration files are flat `section.key = value` lines; `#` starts a
//! comment. Recognised keys and defaults:
//!
//! ```text
//! name               = run
//! problem.kind       = lasso          # lasso | svm | nnls | logreg
//! problem.m          = 40             # samples / rows
//! problem.n          = 200            # features / columns
//! problem.lambda     = 0.01
//! problem.noise_var  = 1e-4           # lasso
//! problem.c          = 100            # svm box bound
//! problem.flip       = 0.2            # label noise of synthetic classification
//! problem.phi        = lpn            # logreg: exp | lpn | log | fra | tan
//! problem.p          = 0.75
//! problem.dataset    = path           # optional LIBSVM file (svm, logreg, nnls)
//! problem.samples    = 2000           # rows drawn from the dataset, if fewer
//! problem.seed       = 0
//! algorithm.kind     = pga            # pga | fista | pcd | drs | irl1
//! algorithm.beta     = 1/L            # or an explicit positive number
//! algorithm.delta    = 1.0            # drs
//! algorithm.mu       = 0.9            # irl1
//! algorithm.eps0     = 1.0            # irl1
//! aa.enabled         = false
//! aa.memory          = 10
//! aa.tikhonov        = 0
//! aa.tikhonov_mode   = absolute       # absolute | relative (τ = value · ‖R‖_F²)
//! aa.safeguard       = 1.0
//! aa.restart         = 5
//! aa.alpha_cap       = none
//! run.max_iter       = 1000
//! run.tol            = 1e-10
//! run.zero_tol       = 1e-9
//! run.window         = 10
//! output.trace       = path           # optional CSV trace
//! output.summary     = path           # optional summary file
//! ```

use std::fmt::{self, Write as _};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use crate::algorithms::{
    fista_step, CoordinateDescent, DouglasRachford, DrsParams, FistaState, FixedPointOperator,
    Irl1Operator, ProximalGradient, SmoothFunction,
};
use crate::anderson::{
    fit_linear_rate, safeguarded_step, AaConfig, AaState, RateFit, Tikhonov,
};
use crate::error::{Error, Result};
use crate::linalg::{self, LinearOperator, Matrix};
use crate::manifold::{identification_iter, pattern_of, SignPattern};
use crate::problems::{
    gaussian_vec, gen_classification, gen_lasso, gen_nnls, parse_libsvm_raw, read_libsvm,
    seeded_rng, subsample, LogRegInstance, NnlsInstance, Phi, PhiFamily, SvmDualInstance,
};
use crate::prox::{BoxIndicator, NonNegative};

/// Residual above which a run is declared diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;
/// Fraction of the trace used for the summary rate fit.
pub const RATE_TAIL_FRACTION: f64 = 0.3;
pub const TRACE_HEADER: &str = "k,residual_norm,objective,alpha_l1,accepted,support_size,elapsed_us";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Lasso,
    Svm,
    Nnls,
    LogReg,
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lasso" => Ok(Self::Lasso),
            "svm" => Ok(Self::Svm),
            "nnls" => Ok(Self::Nnls),
            "logreg" => Ok(Self::LogReg),
            _ => Err(Error::Config(format!("unknown problem kind '{s}'"))),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lasso => "lasso",
            Self::Svm => "svm",
            Self::Nnls => "nnls",
            Self::LogReg => "logreg",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    /// Proximal gradient (ISTA).
    Pga,
    Fista,
    /// Cyclic proximal coordinate descent.
    Pcd,
    Drs,
    Irl1,
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pga" | "ista" => Ok(Self::Pga),
            "fista" => Ok(Self::Fista),
            "pcd" => Ok(Self::Pcd),
            "drs" => Ok(Self::Drs),
            "irl1" => Ok(Self::Irl1),
            _ => Err(Error::Config(format!("unknown algorithm kind '{s}'"))),
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pga => "pga",
            Self::Fista => "fista",
            Self::Pcd => "pcd",
            Self::Drs => "drs",
            Self::Irl1 => "irl1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaRule {
    /// `1/L` for the problem's Lipschitz constant (coordinate-wise for PCD).
    OneOverL,
    Explicit(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub noise_var: f64,
    pub c: f64,
    pub flip: f64,
    pub phi: PhiFamily,
    pub p: f64,
    pub dataset: Option<PathBuf>,
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self {
            kind: ProblemKind::Lasso,
            m: 40,
            n: 200,
            lambda: 0.01,
            noise_var: 1e-4,
            c: 100.0,
            flip: 0.2,
            phi: PhiFamily::Lpn,
            p: 0.75,
            dataset: None,
            samples: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    pub kind: AlgorithmKind,
    pub beta: BetaRule,
    pub delta: f64,
    pub mu: f64,
    pub eps0: f64,
}

impl Default for AlgorithmSpec {
    fn default() -> Self {
        Self {
            kind: AlgorithmKind::Pga,
            beta: BetaRule::OneOverL,
            delta: 1.0,
            mu: 0.9,
            eps0: 1.0,
        }
    }
}

/// Stopping and monitoring settings shared by every run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub max_iter: usize,
    pub tol: f64,
    pub zero_tol: f64,
    pub window: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            max_iter: 1000,
            tol: 1e-10,
            zero_tol: crate::manifold::DEFAULT_ZERO_TOL,
            window: crate::manifold::DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub problem: ProblemSpec,
    pub algorithm: AlgorithmSpec,
    /// `None` runs the plain iteration.
    pub aa: Option<AaConfig>,
    pub run: RunSettings,
    pub trace_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            problem: ProblemSpec::default(),
            algorithm: AlgorithmSpec::default(),
            aa: None,
            run: RunSettings::default(),
            trace_path: None,
            summary_path: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str, line: usize) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("line {line}: '{key}' has invalid value '{v}'")))
}

fn parse_bool(key: &str, v: &str, line: usize) -> Result<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("line {line}: '{key}' expects a boolean, got '{v}'"))),
    }
}

impl ExperimentConfig {
    /// Parse configuration text (see the module docs for the grammar).
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut aa_enabled = false;
        let mut aa = AaConfig::new(10);
        let mut tik_value = 0.0;
        let mut tik_absolute = true;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line}: expected 'key = value'")))?;
            let (key, v) = (key.trim(), value.trim());
            let p = &mut cfg.problem;
            let a = &mut cfg.algorithm;
            match key {
                "name" => cfg.name = v.to_string(),
                "problem.kind" => p.kind = v.parse()?,
                "problem.m" => p.m = parse_num(key, v, line)?,
                "problem.n" => p.n = parse_num(key, v, line)?,
                "problem.lambda" => p.lambda = parse_num(key, v, line)?,
                "problem.noise_var" => p.noise_var = parse_num(key, v, line)?,
                "problem.c" => p.c = parse_num(key, v, line)?,
                "problem.flip" => p.flip = parse_num(key, v, line)?,
                "problem.phi" => {
                    p.phi = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?
                }
                "problem.p" => p.p = parse_num(key, v, line)?,
                "problem.dataset" => p.dataset = Some(PathBuf::from(v)),
                "problem.samples" => p.samples = Some(parse_num(key, v, line)?),
                "problem.seed" => p.seed = parse_num(key, v, line)?,
                "algorithm.kind" => a.kind = v.parse()?,
                "algorithm.beta" => {
                    a.beta = match v {
                        "1/L" | "1/l" | "one-over-l" => BetaRule::OneOverL,
                        _ => BetaRule::Explicit(parse_num(key, v, line)?),
                    }
                }
                "algorithm.delta" => a.delta = parse_num(key, v, line)?,
                "algorithm.mu" => a.mu = parse_num(key, v, line)?,
                "algorithm.eps0" => a.eps0 = parse_num(key, v, line)?,
                "aa.enabled" => aa_enabled = parse_bool(key, v, line)?,
                "aa.memory" => aa.memory = parse_num(key, v, line)?,
                "aa.tikhonov" => tik_value = parse_num(key, v, line)?,
                "aa.tikhonov_mode" => {
                    tik_absolute = match v {
                        "relative" => false,
                        "absolute" => true,
                        _ => {
                            return Err(Error::Config(format!(
                                "line {line}: tikhonov_mode must be relative or absolute"
                            )))
                        }
                    }
                }
                "aa.safeguard" => aa.safeguard = parse_num(key, v, line)?,
                "aa.restart" => aa.restart_after_rejects = parse_num(key, v, line)?,
                "aa.alpha_cap" => {
                    aa.alpha_cap = match v {
                        "none" => None,
                        _ => Some(parse_num(key, v, line)?),
                    }
                }
                "run.max_iter" => cfg.run.max_iter = parse_num(key, v, line)?,
                "run.tol" => cfg.run.tol = parse_num(key, v, line)?,
                "run.zero_tol" => cfg.run.zero_tol = parse_num(key, v, line)?,
                "run.window" => cfg.run.window = parse_num(key, v, line)?,
                "output.trace" => cfg.trace_path = Some(PathBuf::from(v)),
                "output.summary" => cfg.summary_path = Some(PathBuf::from(v)),
                _ => return Err(Error::Config(format!("line {line}: unknown key '{key}'"))),
            }
        }
        aa.tikhonov = if tik_absolute {
            Tikhonov::Absolute(tik_value)
        } else {
            Tikhonov::Relative(tik_value)
        };
        cfg.aa = aa_enabled.then_some(aa);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read and parse a file; relative dataset and output paths resolve
    /// against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut Option<PathBuf>| {
            if let Some(q) = p.as_mut() {
                if q.is_relative() {
                    *q = base.join(&*q);
                }
            }
        };
        resolve(&mut cfg.problem.dataset);
        resolve(&mut cfg.trace_path);
        resolve(&mut cfg.summary_path);
        Ok(cfg)
    }

    /// Apply command-line overrides, then revalidate.
    pub fn with_overrides(
        mut self,
        tol: Option<f64>,
        max_iter: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if let Some(t) = tol {
            self.run.tol = t;
        }
        if let Some(m) = max_iter {
            self.run.max_iter = m;
        }
        if let Some(s) = seed {
            self.problem.seed = s;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.run.max_iter < 1 {
            return bad("run.max_iter must be at least 1".into());
        }
        if !(self.run.tol > 0.0) {
            return bad(format!("run.tol must be positive, got {}", self.run.tol));
        }
        if self.run.window < 1 {
            return bad("run.window must be at least 1".into());
        }
        if let Some(aa) = &self.aa {
            if !(1..=64).contains(&aa.memory) {
                return bad(format!("aa.memory must lie in [1, 64], got {}", aa.memory));
            }
            aa.validate().map_err(|e| Error::Config(e.to_string()))?;
            if self.algorithm.kind == AlgorithmKind::Fista {
                return bad("fista is a baseline and cannot be combined with aa.enabled".into());
            }
        }
        if let BetaRule::Explicit(b) = self.algorithm.beta {
            if !(b > 0.0) {
                return bad(format!("algorithm.beta must be positive, got {b}"));
            }
        }
        use AlgorithmKind::*;
        use ProblemKind::*;
        let ok = matches!(
            (self.problem.kind, self.algorithm.kind),
            (Lasso, Pga | Fista | Pcd)
                | (Svm, Pga | Fista | Pcd)
                | (Nnls, Pga | Fista | Drs)
                | (LogReg, Irl1)
        );
        if !ok {
            return bad(format!(
                "algorithm '{}' is not available for problem '{}'",
                self.algorithm.kind, self.problem.kind
            ));
        }
        Ok(())
    }
}

/// One row of a trace, describing iterate `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `‖H(x^k) − x^k‖₂`.
    pub residual_norm: f64,
    /// `NaN` when the operator has no objective.
    pub objective: f64,
    /// `Σ|α_i|` of the step that produced `x^k`; `NaN` for plain steps.
    pub alpha_l1: f64,
    pub accepted: bool,
    pub support_size: usize,
    pub elapsed_us: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual_norm).collect()
    }

    /// First `k` with `‖r^k‖ ≤ tol`.
    pub fn iterations_to(&self, tol: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.residual_norm <= tol)
            .map(|r| r.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIter,
    Diverged,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Converged => "converged",
            Self::MaxIter => "max_iter",
            Self::Diverged => "diverged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub name: String,
    pub status: RunStatus,
    /// Index of the last recorded iterate.
    pub iterations: usize,
    pub final_residual: f64,
    pub final_objective: f64,
    /// Fit over the trailing 30% of the residuals.
    pub rate: Option<RateFit>,
    /// Fit over the residuals from the identification iteration on.
    pub rate_after_identification: Option<RateFit>,
    pub identification_iter: Option<usize>,
    pub final_support_size: usize,
    /// `NaN` for plain runs.
    pub max_alpha_l1: f64,
    /// `max |Σα_i − 1|` over all steps (0 for plain runs).
    pub max_alpha_sum_error: f64,
    pub rejects: usize,
    pub restarts: usize,
    pub elapsed_us: u64,
}

impl RunSummary {
    /// `key=value` lines, one per field.
    pub fn to_block(&self) -> String {
        let opt_rate = |r: &Option<RateFit>| match r {
            Some(f) => (fmt_f64(f.rate), fmt_f64(f.r_squared)),
            None => ("none".to_string(), "none".to_string()),
        };
        let (rate, r2) = opt_rate(&self.rate);
        let (rate_id, r2_id) = opt_rate(&self.rate_after_identification);
        let mut s = String::new();
        let _ = writeln!(s, "name={}", self.name);
        let _ = writeln!(s, "status={}", self.status);
        let _ = writeln!(s, "iterations={}", self.iterations);
        let _ = writeln!(s, "final_residual={}", fmt_f64(self.final_residual));
        let _ = writeln!(s, "final_objective={}", fmt_f64(self.final_objective));
        let _ = writeln!(s, "rate={rate}");
        let _ = writeln!(s, "rate_r2={r2}");
        let _ = writeln!(s, "rate_after_identification={rate_id}");
        let _ = writeln!(s, "rate_after_identification_r2={r2_id}");
        let _ = writeln!(
            s,
            "identification_iter={}",
            self.identification_iter
                .map_or_else(|| "none".to_string(), |k| k.to_string())
        );
        let _ = writeln!(s, "final_support_size={}", self.final_support_size);
        let _ = writeln!(s, "max_alpha_l1={}", fmt_f64(self.max_alpha_l1));
        let _ = writeln!(s, "max_alpha_sum_error={}", fmt_f64(self.max_alpha_sum_error));
        let _ = writeln!(s, "rejects={}", self.rejects);
        let _ = writeln!(s, "restarts={}", self.restarts);
        let _ = writeln!(s, "elapsed_us={}", self.elapsed_us);
        s
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Drive `op` from `x0`, with Anderson acceleration when `aa` is given.
///
/// Stops at the first iterate with `‖r^k‖ ≤ tol`, after `max_iter` steps, or
/// when the residual exceeds [`DIVERGENCE_THRESHOLD`] or becomes non-finite.
pub fn run_operator(
    name: &str,
    op: &dyn FixedPointOperator,
    x0: Vec<f64>,
    aa: Option<&AaConfig>,
    settings: &RunSettings,
) -> Result<(IterationTrace, RunSummary)> {
    let start = Instant::now();
    let plain = AaConfig::new(1);
    let cfg = aa.unwrap_or(&plain);
    cfg.validate()?;
    let mut state = match AaState::new(op, x0) {
        Ok(s) => s,
        Err(Error::NonFinite(_)) => return Ok(diverged_at_start(name, start)),
        Err(e) => return Err(e),
    };

    let mut trace = IterationTrace::default();
    let mut patterns = Vec::new();
    let mut max_alpha_l1 = f64::NAN;
    let mut max_sum_err: f64 = 0.0;
    let mut observe = |state: &AaState, alpha_l1: f64, accepted: bool, trace: &mut IterationTrace| {
        let x = state.iterate();
        let pat = op
            .monitored(x, state.current_h())
            .map(|p| pattern_of(&p, settings.zero_tol, op.pattern_bounds()))
            .unwrap_or_else(|_| SignPattern(Vec::new()));
        trace.records.push(IterationRecord {
            k: state.iteration(),
            residual_norm: state.residual_norm(),
            objective: op.objective(x).unwrap_or(f64::NAN),
            alpha_l1,
            accepted,
            support_size: pat.support_size(),
            elapsed_us: start.elapsed().as_micros() as u64,
        });
        patterns.push(pat);
    };
    observe(&state, f64::NAN, true, &mut trace);

    let mut status = RunStatus::MaxIter;
    loop {
        let rn = state.residual_norm();
        if rn <= settings.tol {
            status = RunStatus::Converged;
            break;
        }
        if !(rn <= DIVERGENCE_THRESHOLD) {
            status = RunStatus::Diverged;
            break;
        }
        if state.iteration() >= settings.max_iter {
            break;
        }
        if aa.is_none() {
            state.truncate(1);
        }
        let diag = match safeguarded_step(op, &mut state, cfg) {
            Ok(d) => d,
            Err(Error::NonFinite(_)) => {
                status = RunStatus::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let alpha_l1 = if aa.is_some() {
            let sum = linalg::sum_compensated(&diag.alpha);
            max_sum_err = max_sum_err.max((sum - 1.0).abs());
            max_alpha_l1 = if max_alpha_l1.is_nan() {
                diag.alpha_l1
            } else {
                max_alpha_l1.max(diag.alpha_l1)
            };
            diag.alpha_l1
        } else {
            f64::NAN
        };
        observe(&state, alpha_l1, diag.accepted, &mut trace);
    }

    let residuals = trace.residuals();
    let ident = identification_iter(&patterns, settings.window);
    let rate_after_identification = ident.and_then(|k| fit_linear_rate(&residuals[k..], 1.0));
    let last = trace.records.last().expect("at least the initial record");
    let summary = RunSummary {
        name: name.to_string(),
        status,
        iterations: last.k,
        final_residual: last.residual_norm,
        final_objective: last.objective,
        rate: fit_linear_rate(&residuals, RATE_TAIL_FRACTION),
        rate_after_identification,
        identification_iter: ident,
        final_support_size: last.support_size,
        max_alpha_l1,
        max_alpha_sum_error: max_sum_err,
        rejects: state.rejects(),
        restarts: state.restarts(),
        elapsed_us: start.elapsed().as_micros() as u64,
    };
    Ok((trace, summary))
}

fn diverged_at_start(name: &str, start: Instant) -> (IterationTrace, RunSummary) {
    let summary = RunSummary {
        name: name.to_string(),
        status: RunStatus::Diverged,
        iterations: 0,
        final_residual: f64::NAN,
        final_objective: f64::NAN,
        rate: None,
        rate_after_identification: None,
        identification_iter: None,
        final_support_size: 0,
        max_alpha_l1: f64::NAN,
        max_alpha_sum_error: 0.0,
        rejects: 0,
        restarts: 0,
        elapsed_us: start.elapsed().as_micros() as u64,
    };
    (IterationTrace::default(), summary)
}

/// FISTA baseline traced with the residual of the proximal gradient map at
/// each main iterate `x^k`.
pub fn run_fista<F: SmoothFunction, G: crate::prox::Prox>(
    name: &str,
    op: &ProximalGradient<F, G>,
    x0: Vec<f64>,
    settings: &RunSettings,
) -> Result<(IterationTrace, RunSummary)> {
    let start = Instant::now();
    let mut st = FistaState::new(x0);
    let mut trace = IterationTrace::default();
    let mut patterns = Vec::new();
    let mut status = RunStatus::MaxIter;
    for k in 0..=settings.max_iter {
        if k > 0 {
            st = match fista_step(&st, |z| op.f.gradient(z), &op.g, op.beta) {
                Ok(s) => s,
                Err(Error::NonFinite(_)) => {
                    status = RunStatus::Diverged;
                    break;
                }
                Err(e) => return Err(e),
            };
        }
        let rn = match op.residual(&st.x) {
            Ok(r) => linalg::norm2(&r),
            Err(Error::NonFinite(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        let pat = pattern_of(&st.x, settings.zero_tol, op.pattern_bounds());
        trace.records.push(IterationRecord {
            k,
            residual_norm: rn,
            objective: op.objective(&st.x).unwrap_or(f64::NAN),
            alpha_l1: f64::NAN,
            accepted: true,
            support_size: pat.support_size(),
            elapsed_us: start.elapsed().as_micros() as u64,
        });
        patterns.push(pat);
        if rn <= settings.tol {
            status = RunStatus::Converged;
            break;
        }
        if !(rn <= DIVERGENCE_THRESHOLD) {
            status = RunStatus::Diverged;
            break;
        }
    }
    let residuals = trace.residuals();
    let ident = identification_iter(&patterns, settings.window);
    let last = trace.records.last().cloned();
    Ok((
        trace,
        RunSummary {
            name: name.to_string(),
            status,
            iterations: last.as_ref().map_or(0, |r| r.k),
            final_residual: last.as_ref().map_or(f64::NAN, |r| r.residual_norm),
            final_objective: last.as_ref().map_or(f64::NAN, |r| r.objective),
            rate: fit_linear_rate(&residuals, RATE_TAIL_FRACTION),
            rate_after_identification: ident.and_then(|k| fit_linear_rate(&residuals[k..], 1.0)),
            identification_iter: ident,
            final_support_size: last.as_ref().map_or(0, |r| r.support_size),
            max_alpha_l1: f64::NAN,
            max_alpha_sum_error: 0.0,
            rejects: 0,
            restarts: 0,
            elapsed_us: start.elapsed().as_micros() as u64,
        },
    ))
}

/// Standard Gaussian starting point; the stream is derived from the problem
/// seed so that instance and `x⁰` are independent but both reproducible.
pub fn initial_point(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = seeded_rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    gaussian_vec(&mut rng, n)
}

fn load_classification(spec: &ProblemSpec) -> Result<(Matrix, Vec<f64>)> {
    match &spec.dataset {
        Some(path) => {
            let data = read_libsvm(path)?;
            let x = Matrix::Sparse(data.x);
            match spec.samples {
                Some(k) if k < data.labels.len() => subsample(&x, &data.labels, k, spec.seed),
                _ => Ok((x, data.labels)),
            }
        }
        None => gen_classification(spec.m, spec.n, spec.flip, spec.seed),
    }
}

fn load_nnls(spec: &ProblemSpec) -> Result<NnlsInstance> {
    match &spec.dataset {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            let data = parse_libsvm_raw(BufReader::new(file))?;
            let x = Matrix::Sparse(data.x);
            let (x, y) = match spec.samples {
                Some(k) if k < data.labels.len() => subsample(&x, &data.labels, k, spec.seed)?,
                _ => (x, data.labels),
            };
            NnlsInstance::new(x, y, spec.lambda)
        }
        None => gen_nnls(spec.m, spec.n, spec.lambda, spec.seed),
    }
}

fn beta_for(rule: BetaRule, lipschitz: f64) -> Result<f64> {
    match rule {
        BetaRule::Explicit(b) => Ok(b),
        BetaRule::OneOverL if lipschitz > 0.0 => Ok(1.0 / lipschitz),
        BetaRule::OneOverL => Err(Error::invalid("Lipschitz constant is zero; set algorithm.beta")),
    }
}

/// Build the configured problem and operator and run it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(IterationTrace, RunSummary)> {
    cfg.validate()?;
    let spec = &cfg.problem;
    let alg = &cfg.algorithm;
    let aa = cfg.aa.as_ref();
    let name = cfg.name.as_str();
    let settings = &cfg.run;
    let x0 = |n: usize| initial_point(spec.seed, n);

    match (spec.kind, alg.kind) {
        (ProblemKind::Lasso, kind) => {
            let inst = gen_lasso(spec.m, spec.n, spec.lambda, spec.noise_var, spec.seed)?;
            let smooth = inst.smooth();
            match kind {
                AlgorithmKind::Pcd => {
                    let lmax = inst.a.col_norms_sq().into_iter().fold(0.0, f64::max);
                    let op = CoordinateDescent {
                        f: smooth,
                        g: inst.regularizer(),
                        beta: beta_for(alg.beta, lmax)?,
                        bounds: None,
                    };
                    run_operator(name, &op, x0(spec.n), aa, settings)
                }
                _ => {
                    let beta = beta_for(alg.beta, inst.lipschitz())?;
                    let op = ProximalGradient::new(smooth, inst.regularizer(), beta);
                    if kind == AlgorithmKind::Fista {
                        run_fista(name, &op, x0(spec.n), settings)
                    } else {
                        run_operator(name, &op, x0(spec.n), aa, settings)
                    }
                }
            }
        }
        (ProblemKind::Svm, kind) => {
            let (a, y) = load_classification(spec)?;
            let inst = SvmDualInstance::new(a, y, spec.c)?;
            let dim = SmoothFunction::dim(&inst);
            let bounds = inst.bounds();
            let g = BoxIndicator(bounds.clone());
            match kind {
                AlgorithmKind::Pcd => {
                    let op = CoordinateDescent {
                        beta: beta_for(alg.beta, inst.max_coord_lipschitz())?,
                        f: &inst,
                        g,
                        bounds: Some(bounds),
                    };
                    run_operator(name, &op, x0(dim), aa, settings)
                }
                _ => {
                    let beta = beta_for(alg.beta, inst.lipschitz())?;
                    let op = ProximalGradient::new(&inst, g, beta).with_pattern_bounds(bounds);
                    if kind == AlgorithmKind::Fista {
                        run_fista(name, &op, x0(dim), settings)
                    } else {
                        run_operator(name, &op, x0(dim), aa, settings)
                    }
                }
            }
        }
        (ProblemKind::Nnls, kind) => {
            let inst = load_nnls(spec)?;
            let dim = SmoothFunction::dim(&inst);
            let beta = beta_for(alg.beta, inst.lipschitz())?;
            match kind {
                AlgorithmKind::Drs => {
                    let op = DouglasRachford {
                        f: inst.smooth_prox(NNLS_PROX_TOL),
                        g: NonNegative,
                        params: DrsParams::new(beta, alg.delta)?,
                        dim,
                    };
                    run_operator(name, &op, x0(dim), aa, settings)
                }
                _ => {
                    let op = ProximalGradient::new(&inst, NonNegative, beta);
                    if kind == AlgorithmKind::Fista {
                        run_fista(name, &op, x0(dim), settings)
                    } else {
                        run_operator(name, &op, x0(dim), aa, settings)
                    }
                }
            }
        }
        (ProblemKind::LogReg, _) => {
            let (a, y) = load_classification(spec)?;
            let phi = Phi::new(spec.phi, spec.p)?;
            let inst = LogRegInstance::new(a, y, spec.lambda, phi)?;
            let n = SmoothFunction::dim(&inst);
            let op = Irl1Operator {
                beta: beta_for(alg.beta, inst.lipschitz())?,
                f: &inst,
                phi,
                lambda: spec.lambda,
                mu: alg.mu,
            };
            if !(alg.eps0 > 0.0) {
                return Err(Error::Config(format!("algorithm.eps0 must be positive, got {}", alg.eps0)));
            }
            let mut theta = x0(n);
            theta.extend(std::iter::repeat_n(alg.eps0, n));
            run_operator(name, &op, theta, aa, settings)
        }
    }
}

/// Relative accuracy of the conjugate-gradient prox inside NNLS-DRS.
pub const NNLS_PROX_TOL: f64 = 1e-13;

/// Run the configuration without acceleration and once per memory size, on
/// the same instance and `x⁰`, concurrently. Results come back in the order
/// baseline, then `memories`.
pub fn sweep(cfg: &ExperimentConfig, memories: &[usize]) -> Result<Vec<(IterationTrace, RunSummary)>> {
    if cfg.algorithm.kind == AlgorithmKind::Fista && !memories.is_empty() {
        return Err(Error::Config("fista cannot be accelerated; sweep a fixed-point algorithm".into()));
    }
    let template = cfg.aa.clone().unwrap_or_else(|| AaConfig::new(10));
    let mut configs = Vec::with_capacity(memories.len() + 1);
    let mut base = cfg.clone();
    base.aa = None;
    base.name = format!("{}_base", cfg.name);
    configs.push(base);
    for &m in memories {
        let mut c = cfg.clone();
        c.aa = Some(AaConfig {
            memory: m,
            ..template.clone()
        });
        c.name = format!("{}_m{m}", cfg.name);
        c.validate()?;
        configs.push(c);
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || run_experiment(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect()
    })
}

/// `trace.csv` with label `m5` becomes `trace_m5.csv`.
pub fn labelled_path(path: &Path, label: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
    let file = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{label}.{ext}"),
        None => format!("{stem}_{label}"),
    };
    path.with_file_name(file)
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(std::io::BufWriter::new(f))
}

pub fn write_trace(trace: &IterationTrace, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "{TRACE_HEADER}").map_err(io)?;
    for r in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.k,
            fmt_f64(r.residual_norm),
            fmt_f64(r.objective),
            fmt_f64(r.alpha_l1),
            u8::from(r.accepted),
            r.support_size,
            r.elapsed_us
        )
        .map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Parse a trace written by [`write_trace`].
pub fn read_trace(path: &Path) -> Result<IterationTrace> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let ln = idx + 1;
        if ln == 1 {
            if line.trim() != TRACE_HEADER {
                return Err(Error::Parse {
                    line: 1,
                    message: "unexpected trace header".into(),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let perr = |message: String| Error::Parse { line: ln, message };
        if f.len() != 7 {
            return Err(perr(format!("expected 7 fields, got {}", f.len())));
        }
        let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| perr(format!("bad number '{s}'"))) };
        let int = |s: &str| -> Result<u64> { s.parse().map_err(|_| perr(format!("bad integer '{s}'"))) };
        records.push(IterationRecord {
            k: int(f[0])? as usize,
            residual_norm: num(f[1])?,
            objective: num(f[2])?,
            alpha_l1: num(f[3])?,
            accepted: match f[4] {
                "1" => true,
                "0" => false,
                other => return Err(perr(format!("bad flag '{other}'"))),
            },
            support_size: int(f[5])? as usize,
            elapsed_us: int(f[6])?,
        });
    }
    Ok(IterationTrace { records })
}

/// Summary blocks separated by a blank line.
pub fn format_summaries(summaries: &[RunSummary]) -> String {
    summaries
        .iter()
        .map(RunSummary::to_block)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn write_summary(summaries: &[RunSummary], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(format_summaries(summaries).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
