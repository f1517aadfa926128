//! Closed-form proximal mappings and projections.
//!
//! `prox_{t g}(v) = argmin_y g(y) + ‖y − v‖² / (2t)`.

use crate::error::{Error, Result};
use crate::linalg::{self, cg_solve_spd, LinearOperator};

/// A function with a computable proximal mapping.
pub trait Prox {
    /// `prox_{step · g}(v)`.
    fn prox(&self, v: &[f64], step: f64) -> Result<Vec<f64>>;

    /// Function value, `+∞` outside the domain.
    fn value(&self, _x: &[f64]) -> f64 {
        0.0
    }
}

/// A separable function `g(x) = Σ g_i(x_i)` whose prox acts per coordinate.
pub trait SeparableProx: Prox {
    fn prox_coord(&self, i: usize, v: f64, step: f64) -> f64;
}

impl<F> Prox for F
where
    F: Fn(&[f64], f64) -> Result<Vec<f64>>,
{
    fn prox(&self, v: &[f64], step: f64) -> Result<Vec<f64>> {
        self(v, step)
    }
}

#[inline]
fn shrink(v: f64, threshold: f64) -> f64 {
    if v > threshold {
        v - threshold
    } else if v < -threshold {
        v + threshold
    } else {
        0.0
    }
}

/// Coordinatewise `sign(v_i) · max(|v_i| − t, 0)`. Ties map to zero.
pub fn soft_threshold(v: &[f64], t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("threshold must be nonnegative, got {t}")));
    }
    Ok(v.iter().map(|&vi| shrink(vi, t)).collect())
}

/// Soft thresholding with per-coordinate threshold `s · w_i`.
pub fn weighted_soft_threshold(v: &[f64], w: &[f64], s: f64) -> Result<Vec<f64>> {
    if v.len() != w.len() {
        return Err(Error::dim(format!("{} values vs {} weights", v.len(), w.len())));
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("scale must be nonnegative, got {s}")));
    }
    if let Some(i) = w.iter().position(|wi| !(*wi >= 0.0)) {
        return Err(Error::invalid(format!("weight {i} is negative ({})", w[i])));
    }
    Ok(v.iter().zip(w).map(|(&vi, &wi)| shrink(vi, s * wi)).collect())
}

/// Coordinatewise bounds `lower_i ≤ x_i ≤ upper_i`; infinite bounds allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::dim("lower and upper bounds differ in length"));
        }
        if let Some(i) = lower
            .iter()
            .zip(&upper)
            .position(|(l, u)| !(l <= u) || l.is_nan())
        {
            return Err(Error::invalid(format!(
                "bound {i}: lower {} exceeds upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| l <= v && v <= u)
    }
}

pub fn box_project(v: &[f64], b: &BoxBounds) -> Result<Vec<f64>> {
    if v.len() != b.len() {
        return Err(Error::dim(format!("vector {} vs box {}", v.len(), b.len())));
    }
    Ok(v.iter()
        .zip(b.lower.iter().zip(&b.upper))
        .map(|(x, (l, u))| x.max(*l).min(*u))
        .collect())
}

pub fn nonneg_project(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.max(0.0)).collect()
}

/// Solution of `prox_{βf}(z)` for `f(x) = ‖Ax − y‖²/(2M) + λ‖x‖²`.
#[derive(Debug, Clone)]
pub struct ProxLsOutcome {
    pub x: Vec<f64>,
    pub cg_iterations: usize,
    /// `false` if conjugate gradients hit its iteration cap first.
    pub converged: bool,
}

/// `prox_{βf}(z)` for the regularized least-squares term, by conjugate
/// gradients on `(I/β + AᵀA/M + 2λI) x = z/β + Aᵀy/M`.
///
/// On success the optimality residual `‖∇f(x) + (x − z)/β‖` is at most
/// `tol · (1 + ‖z‖)`.
pub fn prox_quadratic_ls(
    a: &dyn LinearOperator,
    y: &[f64],
    lam: f64,
    scale_m: usize,
    beta: f64,
    z: &[f64],
    tol: f64,
) -> Result<ProxLsOutcome> {
    if !(beta > 0.0) || !(lam >= 0.0) || scale_m == 0 {
        return Err(Error::invalid(format!(
            "prox_quadratic_ls needs beta > 0, lam >= 0, M >= 1 (beta={beta}, lam={lam}, M={scale_m})"
        )));
    }
    if y.len() != a.nrows() || z.len() != a.ncols() {
        return Err(Error::dim("prox_quadratic_ls: y or z does not match A"));
    }
    let m = scale_m as f64;
    let mut rhs = a.matvec(y, true)?;
    for (r, zi) in rhs.iter_mut().zip(z) {
        *r = *r / m + zi / beta;
    }
    let diag = 1.0 / beta + 2.0 * lam;
    let apply = |x: &[f64]| {
        let mut ax = vec![0.0; a.nrows()];
        a.apply_into(x, &mut ax);
        let mut out = vec![0.0; x.len()];
        a.apply_t_into(&ax, &mut out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = *o / m + diag * xi;
        }
        out
    };
    let rhs_norm = linalg::norm2(&rhs);
    if rhs_norm == 0.0 {
        return Ok(ProxLsOutcome {
            x: vec![0.0; z.len()],
            cg_iterations: 0,
            converged: true,
        });
    }
    let cg_tol = tol * (1.0 + linalg::norm2(z)) / rhs_norm;
    let n = z.len();
    let out = cg_solve_spd(apply, &rhs, cg_tol, 10 * n + 10)?;
    Ok(ProxLsOutcome {
        x: out.x,
        cg_iterations: out.iterations,
        converged: out.converged,
    })
}

/// The zero function; its prox is the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl Prox for Zero {
    fn prox(&self, v: &[f64], _step: f64) -> Result<Vec<f64>> {
        Ok(v.to_vec())
    }
}

impl SeparableProx for Zero {
    fn prox_coord(&self, _i: usize, v: f64, _step: f64) -> f64 {
        v
    }
}

/// `λ‖x‖₁`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    pub lambda: f64,
}

impl Prox for L1Norm {
    fn prox(&self, v: &[f64], step: f64) -> Result<Vec<f64>> {
        soft_threshold(v, step * self.lambda)
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    }
}

impl SeparableProx for L1Norm {
    fn prox_coord(&self, _i: usize, v: f64, step: f64) -> f64 {
        shrink(v, step * self.lambda)
    }
}

/// Indicator of a box.
#[derive(Debug, Clone)]
pub struct BoxIndicator(pub BoxBounds);

impl Prox for BoxIndicator {
    fn prox(&self, v: &[f64], _step: f64) -> Result<Vec<f64>> {
        box_project(v, &self.0)
    }

    fn value(&self, x: &[f64]) -> f64 {
        if self.0.contains(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

impl SeparableProx for BoxIndicator {
    fn prox_coord(&self, i: usize, v: f64, _step: f64) -> f64 {
        v.max(self.0.lower[i]).min(self.0.upper[i])
    }
}

/// Indicator of the nonnegative orthant.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonNegative;

impl Prox for NonNegative {
    fn prox(&self, v: &[f64], _step: f64) -> Result<Vec<f64>> {
        Ok(nonneg_project(v))
    }

    fn value(&self, x: &[f64]) -> f64 {
        if x.iter().all(|v| *v >= 0.0) {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

impl SeparableProx for NonNegative {
    fn prox_coord(&self, _i: usize, v: f64, _step: f64) -> f64 {
        v.max(0.0)
    }
}

/// The linear functional `x ↦ ⟨a, x⟩`; `prox_{t f}(v) = v − t a`.
#[derive(Debug, Clone)]
pub struct Linear {
    pub coeffs: Vec<f64>,
}

impl Prox for Linear {
    fn prox(&self, v: &[f64], step: f64) -> Result<Vec<f64>> {
        if v.len() != self.coeffs.len() {
            return Err(Error::dim("linear functional length"));
        }
        Ok(v.iter().zip(&self.coeffs).map(|(x, a)| x - step * a).collect())
    }

    fn value(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.coeffs, x)
    }
}
