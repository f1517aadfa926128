//! Safeguarded Anderson acceleration for a fixed-point map `x = H(x)`.
//!
//! The engine keeps a window of the last `m_k + 1 = min(m, k) + 1` pairs
//! `(H(x^i), r^i)` with `r^i = H(x^i) − x^i`, **newest first**. Each step
//! solves
//!
//! ```text
//! min ‖R α‖² + τ‖α‖²   subject to   Σ α_i = 1
//! ```
//!
//! and proposes `Σ α_i H(x^i)`. The proposal is kept only when its residual
//! does not exceed `θ_safe` times the smallest residual in the window;
//! otherwise the plain step `H(x^k)` is taken.

use std::collections::VecDeque;

use crate::algorithms::FixedPointOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, all_finite};

/// How the Tikhonov weight `τ` is chosen at each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tikhonov {
    /// Fixed `τ`.
    Absolute(f64),
    /// `τ = c · ‖R‖_F²`, scale-aware.
    Relative(f64),
}

impl Tikhonov {
    pub fn resolve(&self, frobenius_sq: f64) -> f64 {
        match *self {
            Tikhonov::Absolute(t) => t,
            Tikhonov::Relative(c) => c * frobenius_sq,
        }
    }
}

/// Relative factor `c` of the retry `τ = c · ‖R‖_F²` after a rank-deficient
/// solve with `τ = 0`.
pub const SINGULAR_RETRY_TIKHONOV: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct AaConfig {
    /// Memory `m ≥ 1`; the window holds up to `m + 1` residuals.
    pub memory: usize,
    /// Defaults to `τ = 0`; rank-deficient windows then fall back to a
    /// small relative weight.
    pub tikhonov: Tikhonov,
    /// Accept the candidate iff `‖r(candidate)‖ ≤ safeguard · min ‖r‖` over the window.
    pub safeguard: f64,
    /// Consecutive rejections after which the history is cleared.
    pub restart_after_rejects: usize,
    /// Reject before evaluating when `Σ|α_i|` exceeds this bound.
    pub alpha_cap: Option<f64>,
}

impl AaConfig {
    pub fn new(memory: usize) -> Self {
        Self {
            memory,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.memory < 1 {
            return Err(Error::invalid("AA memory must be at least 1"));
        }
        if !(self.safeguard >= 1.0) {
            return Err(Error::invalid(format!(
                "safeguard factor must be >= 1, got {}",
                self.safeguard
            )));
        }
        let tau = match self.tikhonov {
            Tikhonov::Absolute(t) | Tikhonov::Relative(t) => t,
        };
        if !(tau >= 0.0) {
            return Err(Error::invalid(format!("tikhonov weight must be >= 0, got {tau}")));
        }
        if let Some(cap) = self.alpha_cap {
            if !(cap > 0.0) {
                return Err(Error::invalid(format!("alpha cap must be positive, got {cap}")));
            }
        }
        Ok(())
    }
}

impl Default for AaConfig {
    fn default() -> Self {
        Self {
            memory: 5,
            tikhonov: Tikhonov::Absolute(0.0),
            safeguard: 1.0,
            restart_after_rejects: 5,
            alpha_cap: None,
        }
    }
}

/// Per-step report from [`safeguarded_step`].
#[derive(Debug, Clone, PartialEq)]
pub struct AaDiagnostics {
    /// Weights, newest column first.
    pub alpha: Vec<f64>,
    pub alpha_l1: f64,
    /// Whether the extrapolated candidate became the next iterate.
    pub accepted: bool,
    /// `‖r^{k+1}‖` of the iterate actually taken.
    pub residual_norm: f64,
    /// History was cleared at the end of this step.
    pub restarted: bool,
}

#[derive(Debug, Clone)]
struct Column {
    h: Vec<f64>,
    r: Vec<f64>,
    r_norm: f64,
}

impl Column {
    fn new(h: Vec<f64>, r: Vec<f64>) -> Self {
        let r_norm = linalg::norm2(&r);
        Self { h, r, r_norm }
    }
}

/// Iterate, window of `(H, r)` pairs (newest first) and counters.
#[derive(Debug, Clone)]
pub struct AaState {
    x: Vec<f64>,
    history: VecDeque<Column>,
    k: usize,
    reject_streak: usize,
    rejects: usize,
    restarts: usize,
}

impl AaState {
    /// Evaluate `H(x⁰)` and start the window with `r⁰`.
    pub fn new(op: &dyn FixedPointOperator, x0: Vec<f64>) -> Result<Self> {
        if x0.len() != op.dim() {
            return Err(Error::dim(format!(
                "initial point has length {}, operator dimension is {}",
                x0.len(),
                op.dim()
            )));
        }
        let h = op.apply(&x0)?;
        let r = linalg::sub(&h, &x0);
        if !all_finite(&r) {
            return Err(Error::NonFinite("initial residual"));
        }
        let mut history = VecDeque::new();
        history.push_front(Column::new(h, r));
        Ok(Self {
            x: x0,
            history,
            k: 0,
            reject_streak: 0,
            rejects: 0,
            restarts: 0,
        })
    }

    pub fn iterate(&self) -> &[f64] {
        &self.x
    }

    /// `H(x^k)`.
    pub fn current_h(&self) -> &[f64] {
        &self.history[0].h
    }

    /// `r^k = H(x^k) − x^k`.
    pub fn current_residual(&self) -> &[f64] {
        &self.history[0].r
    }

    pub fn residual_norm(&self) -> f64 {
        self.history[0].r_norm
    }

    pub fn iteration(&self) -> usize {
        self.k
    }

    /// Number of stored columns, `m_k + 1`.
    pub fn columns(&self) -> usize {
        self.history.len()
    }

    pub fn rejects(&self) -> usize {
        self.rejects
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn reject_streak(&self) -> usize {
        self.reject_streak
    }

    /// Stored `H` values, newest first.
    pub fn h_values(&self) -> Vec<&[f64]> {
        self.history.iter().map(|c| c.h.as_slice()).collect()
    }

    /// Stored residuals, newest first.
    pub fn residuals(&self) -> Vec<&[f64]> {
        self.history.iter().map(|c| c.r.as_slice()).collect()
    }

    /// Drop all but the newest `keep` columns (at least one is kept).
    pub fn truncate(&mut self, keep: usize) {
        self.history.truncate(keep.max(1));
    }

    /// Append an externally supplied column as the oldest entry.
    pub fn inject_history(&mut self, h: Vec<f64>, r: Vec<f64>) -> Result<()> {
        if h.len() != self.x.len() || r.len() != self.x.len() {
            return Err(Error::dim("injected column length"));
        }
        self.history.push_back(Column::new(h, r));
        Ok(())
    }

    fn push(&mut self, x: Vec<f64>, col: Column, memory: usize) {
        self.x = x;
        self.history.push_front(col);
        self.history.truncate(memory + 1);
        self.k += 1;
    }

    fn min_residual(&self) -> f64 {
        self.history
            .iter()
            .map(|c| c.r_norm)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Least squares `min ‖A γ − b‖` by Householder QR with column pivoting.
///
/// `cols` holds the columns of `A`. Returns `None` if a pivot falls below
/// `rank_tol` times the largest one.
fn lstsq_pivoted(mut cols: Vec<Vec<f64>>, mut b: Vec<f64>, rank_tol: f64) -> Option<Vec<f64>> {
    let p = cols.len();
    let n = b.len();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut diag = vec![0.0; p];
    for k in 0..p.min(n) {
        let (piv, _) = (k..p)
            .map(|j| (j, cols[j][k..].iter().map(|v| v * v).sum::<f64>()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        cols.swap(k, piv);
        perm.swap(k, piv);

        let norm = linalg::norm2(&cols[k][k..]);
        if norm == 0.0 {
            diag[k] = 0.0;
            continue;
        }
        let alpha = if cols[k][k] > 0.0 { -norm } else { norm };
        let mut v = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vv = linalg::dot(&v, &v);
        for col in cols.iter_mut().skip(k + 1) {
            let s = 2.0 * linalg::dot(&v, &col[k..]) / vv;
            linalg::axpy(-s, &v, &mut col[k..]);
        }
        let s = 2.0 * linalg::dot(&v, &b[k..]) / vv;
        linalg::axpy(-s, &v, &mut b[k..]);
        diag[k] = alpha;
        cols[k][k] = alpha;
    }
    if p > n {
        return None;
    }
    let dmax = diag.first().map_or(0.0, |d| d.abs());
    if diag.iter().any(|d| d.abs() <= rank_tol * dmax || *d == 0.0) {
        return None;
    }
    let mut sol = vec![0.0; p];
    for k in (0..p).rev() {
        let s: f64 = (k + 1..p).map(|j| cols[j][k] * sol[j]).sum();
        sol[k] = (b[k] - s) / diag[k];
    }
    let mut gamma = vec![0.0; p];
    for (k, &j) in perm.iter().enumerate() {
        gamma[j] = sol[k];
    }
    Some(gamma)
}

const RANK_TOL: f64 = 1e-13;

fn solve_weights(residuals: &[&[f64]], tau: f64) -> Option<Vec<f64>> {
    let p = residuals.len() - 1;
    let newest = residuals[0];
    let n = newest.len();
    let sqrt_tau = tau.sqrt();
    let extra = if tau > 0.0 { p + 1 } else { 0 };

    // α_0 = 1 − Σγ_j, α_j = γ_j:  Rα = r_0 + Σ γ_j (r_j − r_0)
    let cols: Vec<Vec<f64>> = (1..=p)
        .map(|j| {
            let mut c = Vec::with_capacity(n + extra);
            c.extend(residuals[j].iter().zip(newest).map(|(a, b)| a - b));
            if tau > 0.0 {
                c.push(-sqrt_tau);
                c.extend((1..=p).map(|i| if i == j { sqrt_tau } else { 0.0 }));
            }
            c
        })
        .collect();
    let mut rhs: Vec<f64> = newest.iter().map(|v| -v).collect();
    if tau > 0.0 {
        rhs.push(-sqrt_tau);
        rhs.extend(std::iter::repeat_n(0.0, p));
    }
    let tol = if tau > 0.0 { 0.0 } else { RANK_TOL };
    let gamma = lstsq_pivoted(cols, rhs, tol)?;
    let mut alpha = Vec::with_capacity(p + 1);
    alpha.push(1.0 - gamma.iter().sum::<f64>());
    alpha.extend(gamma);
    Some(alpha)
}

fn normalize(alpha: &mut [f64]) -> Result<()> {
    let s: f64 = alpha.iter().sum();
    if !(s.is_finite() && s != 0.0) || !all_finite(alpha) {
        return Err(Error::NonFinite("anderson weights"));
    }
    alpha.iter_mut().for_each(|a| *a /= s);
    // absorb the rounding drift in the smallest weight, where it is exact-ish
    let small = (0..alpha.len())
        .min_by(|&i, &j| alpha[i].abs().total_cmp(&alpha[j].abs()))
        .unwrap_or(0);
    for _ in 0..2 {
        alpha[small] += 1.0 - linalg::sum_compensated(alpha);
    }
    Ok(())
}

/// Weights minimizing `‖Rα‖² + τ‖α‖²` subject to `Σα = 1`.
///
/// `residuals` are the columns of `R`, newest first. The problem is solved
/// through `α = e₀ + D γ` with the differences `r_j − r_0`, then
/// renormalized. With `τ = 0` a rank-deficient window is retried once with
/// `τ = 1e-10 · ‖R‖_F²`.
pub fn compute_alpha(residuals: &[&[f64]], tau: f64) -> Result<Vec<f64>> {
    let Some(first) = residuals.first() else {
        return Err(Error::invalid("compute_alpha needs at least one column"));
    };
    if residuals.iter().any(|r| r.len() != first.len()) {
        return Err(Error::dim("residual columns differ in length"));
    }
    if !(tau >= 0.0) {
        return Err(Error::invalid(format!("tikhonov weight must be >= 0, got {tau}")));
    }
    if residuals.iter().any(|r| !all_finite(r)) {
        return Err(Error::NonFinite("residual window"));
    }
    if residuals.len() == 1 {
        return Ok(vec![1.0]);
    }
    let mut alpha = match solve_weights(residuals, tau) {
        Some(a) => a,
        None if tau == 0.0 => {
            let fro: f64 = residuals.iter().map(|r| linalg::dot(r, r)).sum();
            let retry = SINGULAR_RETRY_TIKHONOV * fro;
            if retry == 0.0 {
                return Err(Error::Singular("anderson weights"));
            }
            solve_weights(residuals, retry).ok_or(Error::Singular("anderson weights"))?
        }
        None => return Err(Error::Singular("anderson weights")),
    };
    normalize(&mut alpha)?;
    Ok(alpha)
}

/// `Σ α_i H_i` over the stored `H` values (same ordering as `alpha`).
pub fn aa_candidate(h_values: &[&[f64]], alpha: &[f64]) -> Result<Vec<f64>> {
    if h_values.len() != alpha.len() || h_values.is_empty() {
        return Err(Error::dim(format!(
            "{} weights for {} stored values",
            alpha.len(),
            h_values.len()
        )));
    }
    let n = h_values[0].len();
    if h_values.iter().any(|h| h.len() != n) {
        return Err(Error::dim("stored H values differ in length"));
    }
    let mut out = vec![0.0; n];
    for (h, a) in h_values.iter().zip(alpha) {
        linalg::axpy(*a, h, &mut out);
    }
    Ok(out)
}

/// One safeguarded Anderson step; updates `state` to `x^{k+1}`.
///
/// A candidate that is non-finite, whose evaluation fails, or whose
/// weights exceed `alpha_cap` counts as rejected. Errors from the plain
/// fallback step are returned.
pub fn safeguarded_step(
    op: &dyn FixedPointOperator,
    state: &mut AaState,
    cfg: &AaConfig,
) -> Result<AaDiagnostics> {
    if state.residual_norm() == 0.0 {
        state.k += 1;
        return Ok(AaDiagnostics {
            alpha: vec![1.0],
            alpha_l1: 1.0,
            accepted: true,
            residual_norm: 0.0,
            restarted: false,
        });
    }
    if state.columns() == 1 {
        let x = state.current_h().to_vec();
        let col = evaluate(op, &x)?;
        let residual_norm = col.r_norm;
        state.push(x, col, cfg.memory);
        return Ok(AaDiagnostics {
            alpha: vec![1.0],
            alpha_l1: 1.0,
            accepted: true,
            residual_norm,
            restarted: false,
        });
    }

    let residuals = state.residuals();
    let fro: f64 = residuals.iter().map(|r| linalg::dot(r, r)).sum();
    let alpha = compute_alpha(&residuals, cfg.tikhonov.resolve(fro))?;
    let alpha_l1: f64 = alpha.iter().map(|a| a.abs()).sum();

    let within_cap = cfg.alpha_cap.is_none_or(|cap| alpha_l1 <= cap);
    let accepted_col = if within_cap {
        let candidate = aa_candidate(&state.h_values(), &alpha)?;
        if all_finite(&candidate) {
            match evaluate(op, &candidate) {
                Ok(col) if col.r_norm <= cfg.safeguard * state.min_residual() => {
                    Some((candidate, col))
                }
                _ => None,
            }
        } else {
            None
        }
    } else {
        None
    };

    let (accepted, residual_norm, restarted) = match accepted_col {
        Some((x, col)) => {
            let rn = col.r_norm;
            state.push(x, col, cfg.memory);
            state.reject_streak = 0;
            (true, rn, false)
        }
        None => {
            let x = state.current_h().to_vec();
            let col = evaluate(op, &x)?;
            let rn = col.r_norm;
            state.push(x, col, cfg.memory);
            state.rejects += 1;
            state.reject_streak += 1;
            let restart = state.reject_streak >= cfg.restart_after_rejects.max(1);
            if restart {
                state.history.truncate(1);
                state.reject_streak = 0;
                state.restarts += 1;
            }
            (false, rn, restart)
        }
    };

    Ok(AaDiagnostics {
        alpha,
        alpha_l1,
        accepted,
        residual_norm,
        restarted,
    })
}

fn evaluate(op: &dyn FixedPointOperator, x: &[f64]) -> Result<Column> {
    let h = op.apply(x)?;
    let r = linalg::sub(&h, x);
    let col = Column::new(h, r);
    if !col.r_norm.is_finite() {
        return Err(Error::NonFinite("fixed-point residual"));
    }
    Ok(col)
}

/// Geometric rate fitted to a residual sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    /// `exp(slope)` of `log ‖r_k‖` against `k`.
    pub rate: f64,
    pub r_squared: f64,
    /// Number of points used.
    pub points: usize,
}

pub const MIN_RATE_POINTS: usize = 5;

/// Least-squares fit of `log r_k ≈ a + k log γ̂` over the trailing
/// `tail_fraction` of the sequence (at least five points).
///
/// The sequence is cut at the first nonpositive entry. Returns `None` when
/// fewer than five usable points remain.
pub fn fit_linear_rate(residuals: &[f64], tail_fraction: f64) -> Option<RateFit> {
    let usable = residuals
        .iter()
        .position(|r| !(*r > 0.0) || !r.is_finite())
        .unwrap_or(residuals.len());
    if usable < MIN_RATE_POINTS {
        return None;
    }
    let frac = tail_fraction.clamp(0.0, 1.0);
    let take = ((usable as f64 * frac).ceil() as usize).clamp(MIN_RATE_POINTS, usable);
    let start = usable - take;
    let pts: Vec<(f64, f64)> = (start..usable)
        .map(|k| (k as f64, residuals[k].ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let sse: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    let r_squared = if syy <= f64::EPSILON * n * my.abs().max(1.0) {
        1.0
    } else {
        1.0 - sse / syy
    };
    Some(RateFit {
        rate: slope.exp(),
        r_squared,
        points: pts.len(),
    })
}
