//! The solvers, each written as a fixed-point map `H`.
//!
//! Free functions (`pga_step`, `drs_step`, ...) compute one application of
//! the map from closures or [`Prox`] values; the structs at the bottom wrap
//! them as [`FixedPointOperator`]s that the Anderson engine and the harness
//! drive.

use crate::error::{Error, Result};
use crate::linalg::{self, all_finite, spectral_norm_sq, DenseMatrix, LinearOperator};
use crate::problems::Phi;
use crate::prox::{weighted_soft_threshold, BoxBounds, Prox, SeparableProx};

/// A map `H: Rⁿ → Rⁿ` whose fixed points are the solutions sought.
pub trait FixedPointOperator {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// `H(x) − x`.
    fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(linalg::sub(&self.apply(x)?, x))
    }

    /// Objective value at the primal point associated with `x`, if known.
    fn objective(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// The primal variable whose sign pattern is monitored (e.g. `prox_{βf}(z)`
    /// for DRS, the `x` block for IRL1).
    fn primal(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(x.to_vec())
    }

    /// The vector whose pattern is tracked, given `x` and `hx = H(x)`.
    /// Forward-backward type maps override this with their prox output.
    fn monitored(&self, x: &[f64], _hx: &[f64]) -> Result<Vec<f64>> {
        self.primal(x)
    }

    /// Bounds to monitor activity against instead of signs.
    fn pattern_bounds(&self) -> Option<&BoxBounds> {
        None
    }
}

/// Wrap a closure as an operator.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> FixedPointOperator for FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (self.f)(x)
    }
}

/// A differentiable function with Lipschitz gradient.
pub trait SmoothFunction {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;
}

impl<T: SmoothFunction + ?Sized> SmoothFunction for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
}

impl<T: SmoothFunction + ?Sized> SmoothFunction for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
}

fn check_finite_grad(g: Vec<f64>) -> Result<Vec<f64>> {
    if all_finite(&g) {
        Ok(g)
    } else {
        Err(Error::NonFinite("gradient"))
    }
}

/// Proximal point step: `prox_{βg}(x)`.
pub fn ppa_step(g: &dyn Prox, beta: f64, x: &[f64]) -> Result<Vec<f64>> {
    g.prox(x, beta)
}

/// Proximal gradient (forward-backward) step: `prox_{βg}(x − β∇f(x))`.
pub fn pga_step<G>(grad: G, g: &dyn Prox, beta: f64, x: &[f64]) -> Result<Vec<f64>>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let gr = check_finite_grad(grad(x)?)?;
    if gr.len() != x.len() {
        return Err(Error::dim("gradient length"));
    }
    let v: Vec<f64> = x.iter().zip(&gr).map(|(xi, gi)| xi - beta * gi).collect();
    g.prox(&v, beta)
}

/// Nesterov-momentum state for FISTA. Baseline only; not a fixed-point map.
#[derive(Debug, Clone, PartialEq)]
pub struct FistaState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

impl FistaState {
    pub fn new(x0: Vec<f64>) -> Self {
        Self {
            y: x0.clone(),
            x: x0,
            t: 1.0,
        }
    }
}

pub fn fista_next_t(t: f64) -> f64 {
    (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0
}

pub fn fista_step<G>(state: &FistaState, grad: G, g: &dyn Prox, beta: f64) -> Result<FistaState>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let x = pga_step(grad, g, beta, &state.y)?;
    let t = fista_next_t(state.t);
    let mom = (state.t - 1.0) / t;
    let y = x
        .iter()
        .zip(&state.x)
        .map(|(xn, xo)| xn + mom * (xn - xo))
        .collect();
    Ok(FistaState { x, y, t })
}

/// Smooth inner map `h: Rⁿ → R^d` of a composite `f(h(x))`.
pub trait SmoothMap {
    fn out_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// `d × n` Jacobian at `x`.
    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix>;
}

/// `h(x) = Jx + c`.
#[derive(Debug, Clone)]
pub struct AffineMap {
    pub jac: DenseMatrix,
    pub offset: Vec<f64>,
}

impl SmoothMap for AffineMap {
    fn out_dim(&self) -> usize {
        self.jac.rows()
    }

    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut v = self.jac.matvec(x, false)?;
        linalg::axpy(1.0, &self.offset, &mut v);
        Ok(v)
    }

    fn jacobian(&self, _x: &[f64]) -> Result<DenseMatrix> {
        Ok(self.jac.clone())
    }
}

#[derive(Debug, Clone)]
pub struct PlaOutcome {
    pub y: Vec<f64>,
    pub inner_iterations: usize,
    /// `false` when the inner solver hit its cap before `inner_tol`.
    pub converged: bool,
}

/// Default inner iteration cap for an outer dimension `n`.
pub fn pla_inner_cap(n: usize) -> usize {
    (10 * n).max(1000)
}

/// Prox-linear step: minimize
/// `f(h(x) + ∇h(x)(y − x)) + g(y) + ‖y − x‖²/(2β)` over `y`.
///
/// The subproblem is solved by proximal gradient ascent on its dual, which
/// only needs `prox_f` (through Moreau's identity) and `prox_g`:
/// `y(w) = prox_{βg}(x − βJᵀw)`, `w ← prox_{σf*}(w + σ(J y(w) + c))` with
/// `σ = 1/(β‖J‖²)`. Stops when `‖w⁺ − w‖/σ ≤ inner_tol`.
pub fn pla_step(
    f_outer: &dyn Prox,
    h: &dyn SmoothMap,
    g: &dyn Prox,
    beta: f64,
    x: &[f64],
    inner_tol: f64,
    max_inner: usize,
) -> Result<PlaOutcome> {
    if !(beta > 0.0) {
        return Err(Error::invalid("pla_step needs beta > 0"));
    }
    let hx = h.eval(x)?;
    let jac = h.jacobian(x)?;
    if jac.cols() != x.len() || jac.rows() != hx.len() {
        return Err(Error::dim("jacobian shape"));
    }
    let jnorm = spectral_norm_sq(&jac);
    if jnorm == 0.0 {
        return Ok(PlaOutcome {
            y: g.prox(x, beta)?,
            inner_iterations: 0,
            converged: true,
        });
    }
    // linearization offset: h(x) − J x
    let jx = jac.matvec(x, false)?;
    let offset = linalg::sub(&hx, &jx);
    let sigma = 1.0 / (beta * jnorm);

    let primal = |w: &[f64]| -> Result<Vec<f64>> {
        let jtw = jac.matvec(w, true)?;
        let v: Vec<f64> = x.iter().zip(&jtw).map(|(xi, ji)| xi - beta * ji).collect();
        g.prox(&v, beta)
    };
    // prox_{σ f*}(v) = v − σ prox_{f/σ}(v/σ)
    let prox_conj = |v: &[f64]| -> Result<Vec<f64>> {
        let scaled: Vec<f64> = v.iter().map(|vi| vi / sigma).collect();
        let p = f_outer.prox(&scaled, 1.0 / sigma)?;
        Ok(v.iter().zip(&p).map(|(vi, pi)| vi - sigma * pi).collect())
    };

    let mut w = vec![0.0; hx.len()];
    let mut y = primal(&w)?;
    for it in 1..=max_inner {
        let mut ascent = jac.matvec(&y, false)?;
        linalg::axpy(1.0, &offset, &mut ascent);
        let v: Vec<f64> = w.iter().zip(&ascent).map(|(wi, ai)| wi + sigma * ai).collect();
        let w_next = prox_conj(&v)?;
        if !all_finite(&w_next) {
            return Err(Error::NonFinite("prox-linear inner dual"));
        }
        let step = linalg::norm2(&linalg::sub(&w_next, &w)) / sigma;
        w = w_next;
        y = primal(&w)?;
        if step <= inner_tol {
            return Ok(PlaOutcome {
                y,
                inner_iterations: it,
                converged: true,
            });
        }
    }
    Ok(PlaOutcome {
        y,
        inner_iterations: max_inner,
        converged: false,
    })
}

/// One cyclic sweep of proximal coordinate descent.
///
/// Coordinate `i` is updated to `prox_{βg_i}(x_i − β∇_i f(x))` using the
/// partially updated iterate. `grad_coord(x, i)` must return `∇_i f(x)`.
pub fn pcd_sweep<C>(grad_coord: C, g: &dyn SeparableProx, beta: f64, x: &[f64]) -> Vec<f64>
where
    C: Fn(&[f64], usize) -> f64,
{
    let mut z = x.to_vec();
    for i in 0..z.len() {
        let gi = grad_coord(&z, i);
        z[i] = g.prox_coord(i, z[i] - beta * gi, beta);
    }
    z
}

/// Step size `β` and relaxation `δ` for Douglas–Rachford splitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrsParams {
    pub beta: f64,
    pub delta: f64,
}

impl DrsParams {
    pub fn new(beta: f64, delta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::invalid(format!("DRS beta must be positive, got {beta}")));
        }
        if !(delta > 0.0 && delta < 2.0) {
            return Err(Error::invalid(format!("DRS delta must lie in (0, 2), got {delta}")));
        }
        Ok(Self { beta, delta })
    }
}

/// The three DRS quantities produced from one `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct DrsStep {
    /// `prox_{βf}(z)`
    pub x: Vec<f64>,
    /// `R_β(z) = prox_{βg}(2x − z)`
    pub y: Vec<f64>,
    /// `S_β(z) = z + δ(y − x)`
    pub z_next: Vec<f64>,
}

pub fn drs_step(f: &dyn Prox, g: &dyn Prox, params: DrsParams, z: &[f64]) -> Result<DrsStep> {
    let x = f.prox(z, params.beta)?;
    let reflected: Vec<f64> = x.iter().zip(z).map(|(xi, zi)| 2.0 * xi - zi).collect();
    let y = g.prox(&reflected, params.beta)?;
    let z_next = z
        .iter()
        .zip(y.iter().zip(&x))
        .map(|(zi, (yi, xi))| zi + params.delta * (yi - xi))
        .collect();
    Ok(DrsStep { x, y, z_next })
}

/// ADMM iterate `(u, v, w)` for `min φ₁(u) + φ₂(w)` s.t. `Au + Bw = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// One ADMM pass in the order `u`, `v`, `w`.
///
/// `phi1_min(t)` must return `argmin_u φ₁(u) + (λ/2)‖Au − t‖²` and
/// `phi2_min(t)` must return `argmin_w φ₂(w) + (λ/2)‖Bw − t‖²`; both are the
/// augmented-Lagrangian subproblems after completing the square.
pub fn admm_step<P1, P2>(
    phi1_min: P1,
    phi2_min: P2,
    a: &dyn LinearOperator,
    b_mat: &dyn LinearOperator,
    b: &[f64],
    lambda: f64,
    state: &AdmmState,
) -> Result<AdmmState>
where
    P1: Fn(&[f64]) -> Result<Vec<f64>>,
    P2: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(lambda > 0.0) {
        return Err(Error::invalid(format!("ADMM penalty must be positive, got {lambda}")));
    }
    let bw = b_mat.matvec(&state.w, false)?;
    if bw.len() != b.len() || state.v.len() != b.len() {
        return Err(Error::dim("ADMM constraint dimensions"));
    }
    let t1: Vec<f64> = (0..b.len())
        .map(|i| b[i] - bw[i] - state.v[i] / lambda)
        .collect();
    let u = phi1_min(&t1)?;
    let au = a.matvec(&u, false)?;
    let v: Vec<f64> = (0..b.len())
        .map(|i| state.v[i] + lambda * (au[i] + bw[i] - b[i]))
        .collect();
    let t2: Vec<f64> = (0..b.len()).map(|i| b[i] - au[i] - v[i] / lambda).collect();
    let w = phi2_min(&t2)?;
    Ok(AdmmState { u, v, w })
}

/// DRS variables `(x, y, z) = (Au, b − Bw, Au − v/λ)` of an ADMM iterate.
///
/// After ADMM step `k` these equal `(prox_{βf}(z), R_β(z), z)` of the DRS
/// step taken from `z = z^{k−1}`, with `β = 1/λ`, `δ = 1`,
/// `f = Aφ₁` and `g = (Bφ₂)(b − ·)`.
pub fn admm_drs_view(
    a: &dyn LinearOperator,
    b_mat: &dyn LinearOperator,
    b: &[f64],
    lambda: f64,
    state: &AdmmState,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let au = a.matvec(&state.u, false)?;
    let bw = b_mat.matvec(&state.w, false)?;
    let y = b.iter().zip(&bw).map(|(bi, wi)| bi - wi).collect();
    let z = au.iter().zip(&state.v).map(|(x, v)| x - v / lambda).collect();
    Ok((au, y, z))
}

/// IRL1 iterate `θ = [x; ε]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Irl1State {
    pub x: Vec<f64>,
    pub eps: Vec<f64>,
}

impl Irl1State {
    pub fn new(x: Vec<f64>, eps: Vec<f64>) -> Result<Self> {
        if x.len() != eps.len() {
            return Err(Error::dim("x and eps lengths differ"));
        }
        if let Some(i) = eps.iter().position(|e| !(*e >= 0.0)) {
            return Err(Error::invalid(format!("eps[{i}] = {} is negative", eps[i])));
        }
        Ok(Self { x, eps })
    }

    /// Split a stacked `[x; ε]` vector.
    pub fn from_theta(theta: &[f64]) -> Result<Self> {
        if !theta.len().is_multiple_of(2) {
            return Err(Error::dim("theta must have even length"));
        }
        let n = theta.len() / 2;
        Self::new(theta[..n].to_vec(), theta[n..].to_vec())
    }

    pub fn to_theta(&self) -> Vec<f64> {
        [self.x.as_slice(), self.eps.as_slice()].concat()
    }
}

/// One IRL1 step: weighted soft thresholding of `x − β∇f(x)` with weights
/// `φ'(|x_i| + ε_i)` and scale `βλ`, then `ε ← με`.
pub fn irl1_step<G>(
    grad: G,
    phi: &Phi,
    lambda: f64,
    beta: f64,
    mu: f64,
    theta: &Irl1State,
) -> Result<Irl1State>
where
    G: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::invalid(format!("mu must lie in (0, 1), got {mu}")));
    }
    let n = theta.x.len();
    let gr = check_finite_grad(grad(&theta.x)?)?;
    if gr.len() != n {
        return Err(Error::dim("gradient length"));
    }
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let t = theta.x[i].abs() + theta.eps[i];
        let w = phi
            .deriv(t)
            .map_err(|_| Error::UndefinedWeight { index: i, value: t })?;
        weights.push(w);
    }
    let v: Vec<f64> = (0..n).map(|i| theta.x[i] - beta * gr[i]).collect();
    let x = weighted_soft_threshold(&v, &weights, beta * lambda)?;
    let eps = theta.eps.iter().map(|e| mu * e).collect();
    Ok(Irl1State { x, eps })
}

/// Roots `(β_lo, β_hi)` of `(κ² + λ²L_ω²)β² − 2κβ + 2μ − μ² = 0`.
///
/// Real roots exist iff `μ ≤ 1 − sqrt(λ²L_ω²/(κ² + λ²L_ω²))`.
pub fn irl1_beta_window(kappa: f64, lambda: f64, l_omega: f64, mu: f64) -> Result<(f64, f64)> {
    if !(kappa > 0.0) || !(mu > 0.0 && mu < 1.0) || !(lambda >= 0.0) || !(l_omega >= 0.0) {
        return Err(Error::invalid(format!(
            "need kappa > 0, lambda, L_omega >= 0 and mu in (0, 1) (kappa={kappa}, lambda={lambda}, L_omega={l_omega}, mu={mu})"
        )));
    }
    let ll = lambda * l_omega;
    let a = kappa * kappa + ll * ll;
    let half_b = -kappa;
    let c = 2.0 * mu - mu * mu;
    let disc = half_b * half_b - a * c;
    if disc < 0.0 {
        return Err(Error::MuOutsideWindow {
            discriminant: 4.0 * disc,
        });
    }
    // c > 0, so both roots are positive; avoid cancellation in the small one.
    let q = kappa + disc.sqrt();
    let hi = q / a;
    let lo = c / q;
    Ok((lo, hi))
}

/// `x ↦ prox_{βg}(x)`.
pub struct ProximalPoint<G> {
    pub g: G,
    pub beta: f64,
    pub dim: usize,
}

impl<G: Prox> FixedPointOperator for ProximalPoint<G> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        ppa_step(&self.g, self.beta, x)
    }

    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(self.g.value(x))
    }
}

/// `x ↦ prox_{βg}(x − β∇f(x))` (ISTA for the Lasso).
pub struct ProximalGradient<F, G> {
    pub f: F,
    pub g: G,
    pub beta: f64,
    pub bounds: Option<BoxBounds>,
}

impl<F: SmoothFunction, G: Prox> ProximalGradient<F, G> {
    pub fn new(f: F, g: G, beta: f64) -> Self {
        Self {
            f,
            g,
            beta,
            bounds: None,
        }
    }

    pub fn with_pattern_bounds(mut self, bounds: BoxBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }
}

impl<F: SmoothFunction, G: Prox> FixedPointOperator for ProximalGradient<F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        pga_step(|z| self.f.gradient(z), &self.g, self.beta, x)
    }

    fn monitored(&self, _x: &[f64], hx: &[f64]) -> Result<Vec<f64>> {
        Ok(hx.to_vec())
    }

    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(self.f.value(x) + self.g.value(x))
    }

    fn pattern_bounds(&self) -> Option<&BoxBounds> {
        self.bounds.as_ref()
    }
}

/// `x ↦ argmin_y f(h(x) + ∇h(x)(y − x)) + g(y) + ‖y − x‖²/(2β)`.
pub struct ProxLinear<F, H, G> {
    pub f: F,
    pub h: H,
    pub g: G,
    pub beta: f64,
    pub dim: usize,
    pub inner_tol: f64,
    pub max_inner: usize,
}

impl<F: Prox, H: SmoothMap, G: Prox> FixedPointOperator for ProxLinear<F, H, G> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let out = pla_step(
            &self.f,
            &self.h,
            &self.g,
            self.beta,
            x,
            self.inner_tol,
            self.max_inner,
        )?;
        Ok(out.y)
    }

    fn objective(&self, x: &[f64]) -> Option<f64> {
        let hx = self.h.eval(x).ok()?;
        Some(self.f.value(&hx) + self.g.value(x))
    }
}

/// Coordinate partial derivatives with an incrementally maintained cache
/// (for example `Ax − y`), so a sweep costs one pass over the data.
pub trait CoordinateGradient {
    type Cache;

    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn init_cache(&self, x: &[f64]) -> Self::Cache;
    /// `∇_i f(x)` where `cache` is consistent with `x`.
    fn partial(&self, cache: &Self::Cache, x: &[f64], i: usize) -> f64;
    /// Account for `x_i += delta`.
    fn update(&self, cache: &mut Self::Cache, i: usize, delta: f64);
}

impl<T: CoordinateGradient + ?Sized> CoordinateGradient for &T {
    type Cache = T::Cache;

    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn init_cache(&self, x: &[f64]) -> Self::Cache {
        (**self).init_cache(x)
    }
    fn partial(&self, cache: &Self::Cache, x: &[f64], i: usize) -> f64 {
        (**self).partial(cache, x, i)
    }
    fn update(&self, cache: &mut Self::Cache, i: usize, delta: f64) {
        (**self).update(cache, i, delta)
    }
}

/// Cyclic proximal coordinate descent; `H` is one full sweep.
pub struct CoordinateDescent<C, G> {
    pub f: C,
    pub g: G,
    pub beta: f64,
    pub bounds: Option<BoxBounds>,
}

impl<C: CoordinateGradient, G: SeparableProx> FixedPointOperator for CoordinateDescent<C, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut z = x.to_vec();
        let mut cache = self.f.init_cache(x);
        for i in 0..z.len() {
            let gi = self.f.partial(&cache, &z, i);
            let zi = self.g.prox_coord(i, z[i] - self.beta * gi, self.beta);
            let delta = zi - z[i];
            if delta != 0.0 {
                self.f.update(&mut cache, i, delta);
                z[i] = zi;
            }
        }
        if all_finite(&z) {
            Ok(z)
        } else {
            Err(Error::NonFinite("coordinate sweep"))
        }
    }

    fn monitored(&self, _x: &[f64], hx: &[f64]) -> Result<Vec<f64>> {
        Ok(hx.to_vec())
    }

    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(self.f.value(x) + self.g.value(x))
    }

    fn pattern_bounds(&self) -> Option<&BoxBounds> {
        self.bounds.as_ref()
    }
}

/// Douglas–Rachford operator `S_β` acting on `z`; the primal point is
/// `prox_{βf}(z)`.
pub struct DouglasRachford<F, G> {
    pub f: F,
    pub g: G,
    pub params: DrsParams,
    pub dim: usize,
}

impl<F: Prox, G: Prox> DouglasRachford<F, G> {
    pub fn step(&self, z: &[f64]) -> Result<DrsStep> {
        drs_step(&self.f, &self.g, self.params, z)
    }
}

impl<F: Prox, G: Prox> FixedPointOperator for DouglasRachford<F, G> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        Ok(self.step(z)?.z_next)
    }

    fn objective(&self, z: &[f64]) -> Option<f64> {
        let x = self.f.prox(z, self.params.beta).ok()?;
        Some(self.f.value(&x) + self.g.value(&x))
    }

    fn primal(&self, z: &[f64]) -> Result<Vec<f64>> {
        self.f.prox(z, self.params.beta)
    }
}

/// IRL1 as a map on `θ = [x; ε] ∈ R^{2n}`.
///
/// A `θ` with a negative `ε` entry is outside the domain and rejected.
pub struct Irl1Operator<F> {
    pub f: F,
    pub phi: Phi,
    pub lambda: f64,
    pub beta: f64,
    pub mu: f64,
}

impl<F: SmoothFunction> Irl1Operator<F> {
    pub fn objective_x(&self, x: &[f64]) -> f64 {
        self.f.value(x) + self.lambda * x.iter().map(|v| self.phi.value(v.abs())).sum::<f64>()
    }
}

impl<F: SmoothFunction> FixedPointOperator for Irl1Operator<F> {
    fn dim(&self) -> usize {
        2 * self.f.dim()
    }

    fn apply(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let st = Irl1State::from_theta(theta)?;
        let next = irl1_step(
            |x| self.f.gradient(x),
            &self.phi,
            self.lambda,
            self.beta,
            self.mu,
            &st,
        )?;
        Ok(next.to_theta())
    }

    fn objective(&self, theta: &[f64]) -> Option<f64> {
        Some(self.objective_x(&theta[..theta.len() / 2]))
    }

    fn primal(&self, theta: &[f64]) -> Result<Vec<f64>> {
        Ok(theta[..theta.len() / 2].to_vec())
    }

    fn monitored(&self, _theta: &[f64], h_theta: &[f64]) -> Result<Vec<f64>> {
        Ok(h_theta[..h_theta.len() / 2].to_vec())
    }
}
