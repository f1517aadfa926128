//! Dense and compressed-row matrices plus the few kernels the solvers need:
//! products, a power-method estimate of `‖A‖²`, conjugate gradients for SPD
//! systems and a small dense LU solve.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Neumaier-compensated sum.
pub fn sum_compensated(a: &[f64]) -> f64 {
    let mut s = 0.0_f64;
    let mut c = 0.0_f64;
    for &v in a {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

/// A real matrix that can be applied to a vector, possibly transposed.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;

    /// `out = A x`; dimensions are assumed checked.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    /// `out = Aᵀ x`; dimensions are assumed checked.
    fn apply_t_into(&self, x: &[f64], out: &mut [f64]);

    /// Squared Euclidean norm of every row.
    fn row_norms_sq(&self) -> Vec<f64>;

    /// Squared Euclidean norm of every column.
    fn col_norms_sq(&self) -> Vec<f64>;

    /// Product with dimension checking. With `transpose` the product is `Aᵀ x`.
    fn matvec(&self, x: &[f64], transpose: bool) -> Result<Vec<f64>> {
        let (inner, outer) = if transpose {
            (self.nrows(), self.ncols())
        } else {
            (self.ncols(), self.nrows())
        };
        if x.len() != inner {
            return Err(Error::dim(format!(
                "matrix is {}x{}, vector has length {} (transpose = {transpose})",
                self.nrows(),
                self.ncols(),
                x.len()
            )));
        }
        let mut out = vec![0.0; outer];
        if transpose {
            self.apply_t_into(x, &mut out);
        } else {
            self.apply_into(x, &mut out);
        }
        Ok(out)
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![1.0; n])
    }

    pub fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in d.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dim("ragged rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_sq(&self) -> f64 {
        dot(&self.data, &self.data)
    }

    /// Rows selected in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Multiply row `i` by `s[i]`.
    pub fn scale_rows(&self, s: &[f64]) -> Self {
        let mut out = self.clone();
        for (i, si) in s.iter().enumerate().take(self.rows) {
            for v in out.row_mut(i) {
                *v *= si;
            }
        }
        out
    }
}

impl LinearOperator for DenseMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x);
        }
    }

    fn apply_t_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, xi) in x.iter().enumerate() {
            if *xi != 0.0 {
                axpy(*xi, self.row(i), out);
            }
        }
    }

    fn row_norms_sq(&self) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), self.row(i))).collect()
    }

    fn col_norms_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (o, v) in out.iter_mut().zip(self.row(i)) {
                *o += v * v;
            }
        }
        out
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if offsets.len() != rows + 1 || offsets[0] != 0 {
            return Err(Error::dim("offsets must have rows+1 entries starting at 0"));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid("row offsets must be nondecreasing"));
        }
        if *offsets.last().unwrap() != indices.len() || indices.len() != values.len() {
            return Err(Error::dim("offsets, indices and values disagree"));
        }
        for r in 0..rows {
            let idx = &indices[offsets[r]..offsets[r + 1]];
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "column indices of row {r} are not strictly increasing"
                )));
            }
            if idx.last().is_some_and(|&c| c >= cols) {
                return Err(Error::dim(format!("row {r} has a column index >= {cols}")));
            }
        }
        if !all_finite(&values) {
            return Err(Error::NonFinite("sparse matrix values"));
        }
        Ok(Self {
            rows,
            cols,
            offsets,
            indices,
            values,
        })
    }

    pub fn empty() -> Self {
        Self {
            rows: 0,
            cols: 0,
            offsets: vec![0],
            indices: vec![],
            values: vec![],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.offsets[i]..self.offsets[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            for (j, v) in idx.iter().zip(val) {
                d.set(i, *j, *v);
            }
        }
        d
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut offsets = Vec::with_capacity(idx.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for &i in idx {
            let (ci, cv) = self.row(i);
            indices.extend_from_slice(ci);
            values.extend_from_slice(cv);
            offsets.push(indices.len());
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            offsets,
            indices,
            values,
        }
    }

    /// Widen to at least `cols` columns (LIBSVM files may omit trailing features).
    pub fn with_cols(mut self, cols: usize) -> Self {
        self.cols = self.cols.max(cols);
        self
    }
}

impl LinearOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        self.rows
    }

    fn ncols(&self) -> usize {
        self.cols
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let (idx, val) = self.row(i);
            *o = idx.iter().zip(val).map(|(j, v)| v * x[*j]).sum();
        }
    }

    fn apply_t_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (i, xi) in x.iter().enumerate() {
            let (idx, val) = self.row(i);
            for (j, v) in idx.iter().zip(val) {
                out[*j] += v * xi;
            }
        }
    }

    fn row_norms_sq(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).1.iter().map(|v| v * v).sum())
            .collect()
    }

    fn col_norms_sq(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (j, v) in self.indices.iter().zip(&self.values) {
            out[*j] += v * v;
        }
        out
    }
}

/// Either storage layout, so problem instances can hold data loaded from
/// LIBSVM files or generated densely.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Dense(DenseMatrix),
    Sparse(CsrMatrix),
}

impl Matrix {
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        match self {
            Matrix::Dense(m) => Matrix::Dense(m.select_rows(idx)),
            Matrix::Sparse(m) => Matrix::Sparse(m.select_rows(idx)),
        }
    }

    /// Visit the nonzero entries `(col, value)` of row `i`.
    pub fn for_each_in_row(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        match self {
            Matrix::Dense(m) => m.row(i).iter().enumerate().for_each(|(j, v)| f(j, *v)),
            Matrix::Sparse(m) => {
                let (idx, val) = m.row(i);
                idx.iter().zip(val).for_each(|(j, v)| f(*j, *v));
            }
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Dense(m) => m.clone(),
            Matrix::Sparse(m) => m.to_dense(),
        }
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(m: DenseMatrix) -> Self {
        Matrix::Dense(m)
    }
}

impl From<CsrMatrix> for Matrix {
    fn from(m: CsrMatrix) -> Self {
        Matrix::Sparse(m)
    }
}

impl LinearOperator for Matrix {
    fn nrows(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.nrows(),
            Matrix::Sparse(m) => m.nrows(),
        }
    }

    fn ncols(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.ncols(),
            Matrix::Sparse(m) => m.ncols(),
        }
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Matrix::Dense(m) => m.apply_into(x, out),
            Matrix::Sparse(m) => m.apply_into(x, out),
        }
    }

    fn apply_t_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            Matrix::Dense(m) => m.apply_t_into(x, out),
            Matrix::Sparse(m) => m.apply_t_into(x, out),
        }
    }

    fn row_norms_sq(&self) -> Vec<f64> {
        match self {
            Matrix::Dense(m) => m.row_norms_sq(),
            Matrix::Sparse(m) => m.row_norms_sq(),
        }
    }

    fn col_norms_sq(&self) -> Vec<f64> {
        match self {
            Matrix::Dense(m) => m.col_norms_sq(),
            Matrix::Sparse(m) => m.col_norms_sq(),
        }
    }
}

const POWER_TOL: f64 = 1e-6;
const POWER_MAX_ITER: usize = 500;

/// Power-method estimate of `λ_max(AᵀA) = ‖A‖₂²`.
///
/// The iteration starts from the heaviest column direction, so the Rayleigh
/// quotients are nondecreasing and never below the largest squared column
/// norm. Stops when consecutive estimates agree to a relative `1e-6`.
pub fn spectral_norm_sq(a: &dyn LinearOperator) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let col = a.col_norms_sq();
    let (jmax, &cmax) = col
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .unwrap();
    if cmax == 0.0 {
        return 0.0;
    }
    // Small deterministic spread keeps the start off any eigenvector-orthogonal
    // coordinate axis.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1e-3 * (1.0 + ((i * 7919) % 97) as f64 / 97.0))
        .collect();
    v[jmax] += 1.0;
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut av = vec![0.0; a.nrows()];
    let mut atav = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITER {
        a.apply_into(&v, &mut av);
        let rayleigh = dot(&av, &av);
        a.apply_t_into(&av, &mut atav);
        let norm = norm2(&atav);
        let converged = (rayleigh - estimate).abs() <= POWER_TOL * rayleigh;
        estimate = rayleigh;
        if converged || norm == 0.0 {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&atav) {
            *vi = wi / norm;
        }
    }
    estimate.max(cmax)
}

/// Result of a conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
    /// `false` when `max_iter` was reached before `‖Ax − b‖ ≤ tol·‖b‖`.
    pub converged: bool,
}

/// Conjugate gradients for a symmetric positive definite operator.
pub fn cg_solve_spd<F>(apply: F, b: &[f64], tol: f64, max_iter: usize) -> Result<CgOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("cg tolerance must be positive, got {tol}")));
    }
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            x,
            iterations: 0,
            residual_norm: 0.0,
            converged: true,
        });
    }
    let target = tol * bnorm;
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    for it in 0..max_iter {
        let ap = apply(&p);
        if ap.len() != n {
            return Err(Error::dim("cg operator output length"));
        }
        let pap = dot(&p, &ap);
        let step = rr / pap;
        if !step.is_finite() {
            return Err(Error::NonFinite("conjugate gradients"));
        }
        axpy(step, &p, &mut x);
        axpy(-step, &ap, &mut r);
        let rr_new = dot(&r, &r);
        if !rr_new.is_finite() {
            return Err(Error::NonFinite("conjugate gradients"));
        }
        if rr_new.sqrt() <= target {
            return Ok(CgOutcome {
                x,
                iterations: it + 1,
                residual_norm: rr_new.sqrt(),
                converged: true,
            });
        }
        let beta = rr_new / rr;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
        rr = rr_new;
    }
    // Recompute the true residual; the recursive one drifts.
    let ax = apply(&x);
    let residual_norm = norm2(&sub(&ax, b));
    Ok(CgOutcome {
        converged: residual_norm <= target,
        x,
        iterations: max_iter,
        residual_norm,
    })
}

/// Solve a square dense system by LU with partial pivoting.
pub fn solve_dense(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::dim("solve_dense needs a square matrix and matching rhs"));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = norm_inf(a.data()).max(f64::MIN_POSITIVE);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m.get(i, k).abs().total_cmp(&m.get(j, k).abs()))
            .unwrap();
        if m.get(piv, k).abs() <= 1e-14 * scale {
            return Err(Error::Singular("dense LU"));
        }
        if piv != k {
            for j in 0..n {
                let t = m.get(k, j);
                m.set(k, j, m.get(piv, j));
                m.set(piv, j, t);
            }
            x.swap(k, piv);
        }
        let d = m.get(k, k);
        for i in k + 1..n {
            let f = m.get(i, k) / d;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                m.set(i, j, m.get(i, j) - f * m.get(k, j));
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m.get(k, j) * x[j]).sum();
        x[k] = (x[k] - s) / m.get(k, k);
    }
    Ok(x)
}
