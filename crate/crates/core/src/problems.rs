//! Problem instances: generators, objectives, gradients and Lipschitz
//! constants, the concave regularizer family used by IRL1, and LIBSVM input.

use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algorithms::{CoordinateGradient, SmoothFunction};
use crate::error::{Error, Result};
use crate::linalg::{self, spectral_norm_sq, CsrMatrix, DenseMatrix, LinearOperator, Matrix};
use crate::prox::{prox_quadratic_ls, BoxBounds, L1Norm, Prox};

/// Deterministic generator used by every builder in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, gaussian_vec(rng, rows * cols))
        .expect("gaussian entries are finite")
}

/// Concave penalties `φ(|x_i|)` for IRL1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiFamily {
    /// `1 − e^{−pt}`
    Exp,
    /// `t^p`, `p ∈ (0, 1)`
    Lpn,
    /// `ln(1 + pt)`
    Log,
    /// `t / (t + p)`
    Fra,
    /// `atan(pt)`
    Tan,
}

impl FromStr for PhiFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exp" => Ok(PhiFamily::Exp),
            "lpn" => Ok(PhiFamily::Lpn),
            "log" => Ok(PhiFamily::Log),
            "fra" => Ok(PhiFamily::Fra),
            "tan" => Ok(PhiFamily::Tan),
            other => Err(Error::invalid(format!("unknown regularizer family '{other}'"))),
        }
    }
}

impl fmt::Display for PhiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PhiFamily::Exp => "exp",
            PhiFamily::Lpn => "lpn",
            PhiFamily::Log => "log",
            PhiFamily::Fra => "fra",
            PhiFamily::Tan => "tan",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi {
    family: PhiFamily,
    p: f64,
}

impl Phi {
    pub fn new(family: PhiFamily, p: f64) -> Result<Self> {
        let ok = match family {
            PhiFamily::Lpn => p > 0.0 && p < 1.0,
            _ => p > 0.0 && p.is_finite(),
        };
        if !ok {
            return Err(Error::invalid(format!("parameter p = {p} out of range for {family}")));
        }
        Ok(Self { family, p })
    }

    pub fn family(&self) -> PhiFamily {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn value(&self, t: f64) -> f64 {
        let p = self.p;
        match self.family {
            PhiFamily::Exp => -(-p * t).exp_m1(),
            PhiFamily::Lpn => t.powf(p),
            PhiFamily::Log => (p * t).ln_1p(),
            PhiFamily::Fra => t / (t + p),
            PhiFamily::Tan => (p * t).atan(),
        }
    }

    /// `φ'(t)`; undefined for LPN at `t = 0`.
    pub fn deriv(&self, t: f64) -> Result<f64> {
        let p = self.p;
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("phi derivative needs t >= 0, got {t}")));
        }
        Ok(match self.family {
            PhiFamily::Exp => p * (-p * t).exp(),
            PhiFamily::Lpn => {
                if t == 0.0 {
                    return Err(Error::invalid("lpn derivative is unbounded at 0"));
                }
                p * t.powf(p - 1.0)
            }
            PhiFamily::Log => p / (1.0 + p * t),
            PhiFamily::Fra => p / ((t + p) * (t + p)),
            PhiFamily::Tan => p / (1.0 + p * p * t * t),
        })
    }
}

/// `½‖Ax − y‖²` with cached `Aᵀ` for column access.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: DenseMatrix,
    at: DenseMatrix,
    y: Vec<f64>,
}

impl LeastSquares {
    pub fn new(a: DenseMatrix, y: Vec<f64>) -> Result<Self> {
        if y.len() != a.rows() {
            return Err(Error::dim("least squares: y does not match A"));
        }
        Ok(Self {
            at: a.transpose(),
            a,
            y,
        })
    }

    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.a.matvec(x, false)?;
        linalg::axpy(-1.0, &self.y, &mut r);
        Ok(r)
    }
}

impl SmoothFunction for LeastSquares {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.residual(x) {
            Ok(r) => 0.5 * linalg::dot(&r, &r),
            Err(_) => f64::NAN,
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let r = self.residual(x)?;
        self.a.matvec(&r, true)
    }
}

impl CoordinateGradient for LeastSquares {
    /// `Ax − y`
    type Cache = Vec<f64>;

    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        SmoothFunction::value(self, x)
    }

    fn init_cache(&self, x: &[f64]) -> Vec<f64> {
        self.residual(x).expect("dimension checked by caller")
    }

    fn partial(&self, cache: &Vec<f64>, _x: &[f64], i: usize) -> f64 {
        linalg::dot(self.at.row(i), cache)
    }

    fn update(&self, cache: &mut Vec<f64>, i: usize, delta: f64) {
        linalg::axpy(delta, self.at.row(i), cache);
    }
}

/// `min ½‖Ax − y‖² + λ‖x‖₁` with row-orthonormal `A`.
#[derive(Debug, Clone)]
pub struct LassoInstance {
    pub a: DenseMatrix,
    pub y: Vec<f64>,
    pub x_true: Vec<f64>,
    pub lambda: f64,
}

impl LassoInstance {
    pub fn smooth(&self) -> LeastSquares {
        LeastSquares::new(self.a.clone(), self.y.clone()).expect("instance is consistent")
    }

    pub fn regularizer(&self) -> L1Norm {
        L1Norm {
            lambda: self.lambda,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        spectral_norm_sq(&self.a)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        SmoothFunction::value(&self.smooth(), x) + self.regularizer().value(x)
    }
}

/// Orthonormalize the rows of `a` in place (modified Gram–Schmidt, applied
/// twice for stability). Fails on rank deficiency.
pub fn orthonormalize_rows(a: &mut DenseMatrix) -> Result<()> {
    for _pass in 0..2 {
        for i in 0..a.rows() {
            for j in 0..i {
                let proj = linalg::dot(a.row(i), a.row(j));
                let prev = a.row(j).to_vec();
                linalg::axpy(-proj, &prev, a.row_mut(i));
            }
            let nrm = linalg::norm2(a.row(i));
            if !(nrm > 1e-12) {
                return Err(Error::Singular("row orthonormalization"));
            }
            a.row_mut(i).iter_mut().for_each(|v| *v /= nrm);
        }
    }
    Ok(())
}

/// Gaussian `A ∈ R^{M×N}` with orthonormal rows, `x_true` with `⌊N/10⌋`
/// entries `±1`, and `y = A x_true + noise`.
pub fn gen_lasso(m: usize, n: usize, lambda: f64, noise_var: f64, seed: u64) -> Result<LassoInstance> {
    if m == 0 || m >= n {
        return Err(Error::invalid(format!("gen_lasso needs 0 < M < N, got M={m}, N={n}")));
    }
    if n < 10 {
        return Err(Error::invalid(format!("gen_lasso needs N >= 10, got {n}")));
    }
    if !(lambda >= 0.0) || !(noise_var >= 0.0) {
        return Err(Error::invalid("gen_lasso needs lambda >= 0 and noise_var >= 0"));
    }
    let mut rng = seeded_rng(seed);
    let mut a = gaussian_matrix(&mut rng, m, n);
    orthonormalize_rows(&mut a)?;

    let mut x_true = vec![0.0; n];
    for i in sample(&mut rng, n, n / 10).into_iter() {
        x_true[i] = if rng.random::<bool>() { 1.0 } else { -1.0 };
    }
    let sd = noise_var.sqrt();
    let mut y = a.matvec(&x_true, false)?;
    for yi in y.iter_mut() {
        *yi += sd * rng.sample::<f64, _>(StandardNormal);
    }
    Ok(LassoInstance { a, y, x_true, lambda })
}

/// Gaussian features and `±1` labels from a sparse planted separator with
/// label noise. Stands in for the LIBSVM datasets in tests and benches.
pub fn gen_classification(m: usize, n: usize, flip_prob: f64, seed: u64) -> Result<(Matrix, Vec<f64>)> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("gen_classification needs M, N >= 1"));
    }
    if !(0.0..=0.5).contains(&flip_prob) {
        return Err(Error::invalid(format!("flip probability {flip_prob} not in [0, 0.5]")));
    }
    let mut rng = seeded_rng(seed);
    let a = gaussian_matrix(&mut rng, m, n);
    let mut w = vec![0.0; n];
    for i in sample(&mut rng, n, n.div_ceil(3)).into_iter() {
        w[i] = rng.sample(StandardNormal);
    }
    let score = a.matvec(&w, false)?;
    let labels = score
        .iter()
        .map(|s| {
            let lab = if *s >= 0.0 { 1.0 } else { -1.0 };
            if rng.random::<f64>() < flip_prob {
                -lab
            } else {
                lab
            }
        })
        .collect();
    Ok((Matrix::Dense(a), labels))
}

fn check_labels(y: &[f64], rows: usize) -> Result<()> {
    if y.len() != rows {
        return Err(Error::dim("labels do not match sample count"));
    }
    if let Some(i) = y.iter().position(|v| *v != 1.0 && *v != -1.0) {
        return Err(Error::invalid(format!("label {} at row {i} is not +1/-1", y[i])));
    }
    Ok(())
}

/// Dual soft-margin SVM: `min ½‖(y⊙A)ᵀx‖² − Σx_i` over `x ∈ [0, C]^M`.
#[derive(Debug, Clone)]
pub struct SvmDualInstance {
    /// Rows `y_i a_i`.
    ya: Matrix,
    y: Vec<f64>,
    c: f64,
}

impl SvmDualInstance {
    pub fn new(a: Matrix, y: Vec<f64>, c: f64) -> Result<Self> {
        check_labels(&y, a.nrows())?;
        if !(c > 0.0) {
            return Err(Error::invalid(format!("SVM needs C > 0, got {c}")));
        }
        let ya = match &a {
            Matrix::Dense(d) => Matrix::Dense(d.scale_rows(&y)),
            Matrix::Sparse(s) => {
                let dense_free = scale_csr_rows(s, &y);
                Matrix::Sparse(dense_free)
            }
        };
        Ok(Self { ya, y, c })
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn bounds(&self) -> BoxBounds {
        BoxBounds::uniform(self.ya.nrows(), 0.0, self.c).expect("C > 0")
    }

    /// `(y⊙A)(y⊙A)ᵀx`
    pub fn kernel_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let w = self.ya.matvec(x, true)?;
        self.ya.matvec(&w, false)
    }

    /// `‖y⊙A‖²`
    pub fn lipschitz(&self) -> f64 {
        spectral_norm_sq(&self.ya)
    }

    /// `max_i ‖y_i a_i‖²`, the largest coordinate-wise Lipschitz constant.
    pub fn max_coord_lipschitz(&self) -> f64 {
        self.ya.row_norms_sq().into_iter().fold(0.0, f64::max)
    }
}

fn scale_csr_rows(s: &CsrMatrix, y: &[f64]) -> CsrMatrix {
    let mut offsets = vec![0];
    let mut idx = Vec::with_capacity(s.nnz());
    let mut val = Vec::with_capacity(s.nnz());
    for (i, yi) in y.iter().enumerate() {
        let (ri, rv) = s.row(i);
        idx.extend_from_slice(ri);
        val.extend(rv.iter().map(|v| v * yi));
        offsets.push(idx.len());
    }
    CsrMatrix::new(s.rows(), s.cols(), offsets, idx, val).expect("scaled copy keeps structure")
}

impl SmoothFunction for SvmDualInstance {
    fn dim(&self) -> usize {
        self.ya.nrows()
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.ya.matvec(x, true) {
            Ok(w) => 0.5 * linalg::dot(&w, &w) - x.iter().sum::<f64>(),
            Err(_) => f64::NAN,
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.kernel_apply(x)?;
        g.iter_mut().for_each(|v| *v -= 1.0);
        Ok(g)
    }
}

impl CoordinateGradient for SvmDualInstance {
    /// `w = (y⊙A)ᵀx`
    type Cache = Vec<f64>;

    fn dim(&self) -> usize {
        self.ya.nrows()
    }

    fn value(&self, x: &[f64]) -> f64 {
        SmoothFunction::value(self, x)
    }

    fn init_cache(&self, x: &[f64]) -> Vec<f64> {
        self.ya.matvec(x, true).expect("dimension checked by caller")
    }

    fn partial(&self, cache: &Vec<f64>, _x: &[f64], i: usize) -> f64 {
        let mut s = 0.0;
        self.ya.for_each_in_row(i, |j, v| s += v * cache[j]);
        s - 1.0
    }

    fn update(&self, cache: &mut Vec<f64>, i: usize, delta: f64) {
        self.ya.for_each_in_row(i, |j, v| cache[j] += delta * v);
    }
}

/// Regularized least squares `‖Ax − y‖²/(2M) + λ‖x‖²` over `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct NnlsInstance {
    pub a: Matrix,
    pub y: Vec<f64>,
    pub lambda: f64,
}

impl NnlsInstance {
    pub fn new(a: Matrix, y: Vec<f64>, lambda: f64) -> Result<Self> {
        if y.len() != a.nrows() {
            return Err(Error::dim("NNLS: y does not match A"));
        }
        if !(lambda >= 0.0) {
            return Err(Error::invalid(format!("NNLS needs lambda >= 0, got {lambda}")));
        }
        Ok(Self { a, y, lambda })
    }

    fn m(&self) -> f64 {
        self.a.nrows() as f64
    }

    /// `‖A‖²/M + 2λ`.
    pub fn lipschitz(&self) -> f64 {
        spectral_norm_sq(&self.a) / self.m() + 2.0 * self.lambda
    }

    /// The smooth part with its prox, for use as the `f` of DRS.
    pub fn smooth_prox(&self, tol: f64) -> NnlsSmoothProx<'_> {
        NnlsSmoothProx { inst: self, tol }
    }
}

impl SmoothFunction for NnlsInstance {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.a.matvec(x, false) {
            Ok(mut r) => {
                linalg::axpy(-1.0, &self.y, &mut r);
                linalg::dot(&r, &r) / (2.0 * self.m()) + self.lambda * linalg::dot(x, x)
            }
            Err(_) => f64::NAN,
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut r = self.a.matvec(x, false)?;
        linalg::axpy(-1.0, &self.y, &mut r);
        let mut g = self.a.matvec(&r, true)?;
        let m = self.m();
        for (gi, xi) in g.iter_mut().zip(x) {
            *gi = *gi / m + 2.0 * self.lambda * xi;
        }
        Ok(g)
    }
}

/// `prox_{βF}` for the NNLS smooth term, solved by conjugate gradients.
pub struct NnlsSmoothProx<'a> {
    inst: &'a NnlsInstance,
    tol: f64,
}

impl Prox for NnlsSmoothProx<'_> {
    fn prox(&self, v: &[f64], step: f64) -> Result<Vec<f64>> {
        let out = prox_quadratic_ls(
            &self.inst.a,
            &self.inst.y,
            self.inst.lambda,
            self.inst.a.nrows(),
            step,
            v,
            self.tol,
        )?;
        Ok(out.x)
    }

    fn value(&self, x: &[f64]) -> f64 {
        SmoothFunction::value(self.inst, x)
    }
}

/// Gaussian `A`, nonnegative sparse `x_true`, `y = A x_true + 0.01·noise`.
pub fn gen_nnls(m: usize, n: usize, lambda: f64, seed: u64) -> Result<NnlsInstance> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("gen_nnls needs M, N >= 1"));
    }
    let mut rng = seeded_rng(seed);
    let a = gaussian_matrix(&mut rng, m, n);
    let mut x_true = vec![0.0; n];
    for i in sample(&mut rng, n, n.div_ceil(2)).into_iter() {
        x_true[i] = rng.random::<f64>() + 0.1;
    }
    let mut y = a.matvec(&x_true, false)?;
    for yi in y.iter_mut() {
        *yi += 0.01 * rng.sample::<f64, _>(StandardNormal);
    }
    NnlsInstance::new(Matrix::Dense(a), y, lambda)
}

#[inline]
fn softplus(t: f64) -> f64 {
    // log(1 + e^t) without overflow
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

#[inline]
fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Sparse logistic regression: `(1/M)Σ log(1 + exp(−y_i a_iᵀx)) + λΣφ(|x_i|)`.
#[derive(Debug, Clone)]
pub struct LogRegInstance {
    pub a: Matrix,
    pub y: Vec<f64>,
    pub lambda: f64,
    pub phi: Phi,
    l: f64,
}

impl LogRegInstance {
    pub fn new(a: Matrix, y: Vec<f64>, lambda: f64, phi: Phi) -> Result<Self> {
        check_labels(&y, a.nrows())?;
        if !(lambda >= 0.0) {
            return Err(Error::invalid(format!("logistic needs lambda >= 0, got {lambda}")));
        }
        let l = spectral_norm_sq(&a) / (4.0 * a.nrows() as f64);
        if !(l > 0.0) {
            return Err(Error::invalid("logistic loss with zero data matrix"));
        }
        Ok(Self { a, y, lambda, phi, l })
    }

    /// `‖A‖²/(4M)`.
    pub fn lipschitz(&self) -> f64 {
        self.l
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        SmoothFunction::value(self, x)
            + self.lambda * x.iter().map(|v| self.phi.value(v.abs())).sum::<f64>()
    }
}

impl SmoothFunction for LogRegInstance {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.a.matvec(x, false) {
            Ok(ax) => {
                let s: f64 = ax.iter().zip(&self.y).map(|(t, yi)| softplus(-yi * t)).sum();
                s / self.a.nrows() as f64
            }
            Err(_) => f64::NAN,
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ax = self.a.matvec(x, false)?;
        let m = self.a.nrows() as f64;
        let coef: Vec<f64> = ax
            .iter()
            .zip(&self.y)
            .map(|(t, yi)| -yi * sigmoid(-yi * t) / m)
            .collect();
        self.a.matvec(&coef, true)
    }
}

/// Samples read from LIBSVM text.
#[derive(Debug, Clone, PartialEq)]
pub struct LibsvmData {
    pub x: CsrMatrix,
    pub labels: Vec<f64>,
}

/// Parse LIBSVM text keeping the label column as read (regression targets).
///
/// Each non-blank line is `<label> <index>:<value> ...` with 1-based,
/// strictly ascending indices. Text after `#` is ignored. The column count
/// is the largest index seen.
pub fn parse_libsvm_raw<R: BufRead>(reader: R) -> Result<LibsvmData> {
    let mut offsets = vec![0];
    let mut idx = Vec::new();
    let mut val = Vec::new();
    let mut labels = Vec::new();
    let mut cols = 0usize;
    for (ln, line) in reader.lines().enumerate() {
        let line_no = ln + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let perr = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut tokens = body.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| perr(format!("bad label '{label_tok}'")))?;
        if !label.is_finite() {
            return Err(perr(format!("non-finite label '{label_tok}'")));
        }
        let mut last = 0usize;
        for tok in tokens {
            let (i_str, v_str) = tok
                .split_once(':')
                .ok_or_else(|| perr(format!("expected index:value, got '{tok}'")))?;
            let i: usize = i_str
                .parse()
                .map_err(|_| perr(format!("bad index '{i_str}'")))?;
            if i == 0 {
                return Err(perr("indices are 1-based; found 0".into()));
            }
            if i <= last {
                return Err(perr(format!("index {i} does not follow {last}")));
            }
            let v: f64 = v_str
                .parse()
                .map_err(|_| perr(format!("bad value '{v_str}'")))?;
            if !v.is_finite() {
                return Err(perr(format!("non-finite value '{v_str}'")));
            }
            last = i;
            idx.push(i - 1);
            val.push(v);
        }
        cols = cols.max(last);
        labels.push(label);
        offsets.push(idx.len());
    }
    let x = CsrMatrix::new(labels.len(), cols, offsets, idx, val)?;
    Ok(LibsvmData { x, labels })
}

/// Parse LIBSVM text for binary classification.
///
/// Labels already in `{−1, +1}` are kept; `{0, 1}` maps `0 → −1`; any other
/// pair of distinct values maps the smaller to `−1` and the larger to `+1`.
/// More than two distinct labels is an error.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<LibsvmData> {
    let mut data = parse_libsvm_raw(reader)?;
    let mut distinct: Vec<f64> = Vec::new();
    for l in &data.labels {
        if !distinct.contains(l) {
            distinct.push(*l);
            if distinct.len() > 2 {
                return Err(Error::invalid(format!(
                    "more than two distinct labels ({:?}); only binary data is supported",
                    distinct
                )));
            }
        }
    }
    if distinct.iter().all(|l| *l == 1.0 || *l == -1.0) {
        return Ok(data);
    }
    // {0, 1} and any other pair: the larger value is the positive class
    let pos = distinct.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for l in data.labels.iter_mut() {
        *l = if *l == pos { 1.0 } else { -1.0 };
    }
    Ok(data)
}

/// [`parse_libsvm`] on a file.
pub fn read_libsvm(path: &Path) -> Result<LibsvmData> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_libsvm(std::io::BufReader::new(file))
}

/// `k` rows drawn uniformly without replacement, in draw order.
pub fn subsample(x: &Matrix, y: &[f64], k: usize, seed: u64) -> Result<(Matrix, Vec<f64>)> {
    if y.len() != x.nrows() {
        return Err(Error::dim("labels do not match sample count"));
    }
    if k > x.nrows() {
        return Err(Error::invalid(format!(
            "cannot draw {k} samples from {} rows",
            x.nrows()
        )));
    }
    let mut rng = seeded_rng(seed);
    let rows = sample(&mut rng, x.nrows(), k).into_vec();
    let ys = rows.iter().map(|i| y[*i]).collect();
    Ok((x.select_rows(&rows), ys))
}
