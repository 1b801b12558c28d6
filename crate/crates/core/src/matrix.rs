//! Dense and CSR design matrices.
//!
//! Solvers only see [`Design`], which exposes the handful of kernels they
//! need: products with `X` and `Xᵀ`, and row/column access for stochastic
//! and coordinate methods. Sparse designs keep a transposed copy so that
//! column access is as cheap as row access.
//!
//! Transposed products and column dot products accumulate over rows in
//! ascending order, so `rmatvec(r)[j]` and `col_dot(j, r)` are bitwise equal.
//! Solvers rely on this to return exact zeros at `λ = λ_max`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "{} values for a {}x{} matrix",
                data.len(),
                n_rows,
                n_cols
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { n_rows, n_cols, data })
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for r in rows {
            if r.len() != n_cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), n_cols, data)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCsr {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseCsr {
    /// Builds a CSR matrix, validating the structural invariants.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if indptr.len() != n_rows + 1 || indptr[0] != 0 {
            return Err(Error::Dimension("row pointer length must be n_rows + 1, starting at 0".into()));
        }
        if indices.len() != values.len() || *indptr.last().unwrap() != indices.len() {
            return Err(Error::Dimension("row pointers must end at nnz".into()));
        }
        for i in 0..n_rows {
            let (lo, hi) = (indptr[i], indptr[i + 1]);
            if lo > hi {
                return Err(Error::InvalidArgument(format!("row pointers decrease at row {i}")));
            }
            let row = &indices[lo..hi];
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "column indices not strictly increasing in row {i}"
                )));
            }
            if row.last().is_some_and(|&c| c >= n_cols) {
                return Err(Error::Dimension(format!("column index out of range in row {i}")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        Ok(Self { n_rows, n_cols, indptr, indices, values })
    }

    /// Keeps the nonzero entries of a dense matrix.
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut indptr = Vec::with_capacity(m.n_rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for i in 0..m.n_rows {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { n_rows: m.n_rows, n_cols: m.n_cols, indptr, indices, values }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            let (idx, val) = self.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &j in &self.indices {
            counts[j + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let nnz = self.values.len();
        let mut indices = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        // rows visited in ascending order, so each transposed row stays sorted
        for i in 0..self.n_rows {
            let (idx, val) = self.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                let slot = next[j];
                indices[slot] = i;
                values[slot] = v;
                next[j] += 1;
            }
        }
        Self { n_rows: self.n_cols, n_cols: self.n_rows, indptr, indices, values }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn indptr(&self) -> &[usize] {
        &self.indptr
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.indptr[i], self.indptr[i + 1]);
        (&self.indices[lo..hi], &self.values[lo..hi])
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// A design matrix as seen by the objectives and solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Design {
    Dense(DenseMatrix),
    /// `csc` holds `Xᵀ` in CSR layout, i.e. `X` by columns.
    Sparse { csr: SparseCsr, csc: SparseCsr },
}

impl From<DenseMatrix> for Design {
    fn from(m: DenseMatrix) -> Self {
        Design::Dense(m)
    }
}

impl From<SparseCsr> for Design {
    fn from(csr: SparseCsr) -> Self {
        let csc = csr.transpose();
        Design::Sparse { csr, csc }
    }
}

impl Design {
    pub fn n_rows(&self) -> usize {
        match self {
            Design::Dense(m) => m.n_rows,
            Design::Sparse { csr, .. } => csr.n_rows,
        }
    }

    pub fn n_cols(&self) -> usize {
        match self {
            Design::Dense(m) => m.n_cols,
            Design::Sparse { csr, .. } => csr.n_cols,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Design::Sparse { .. })
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Design::Dense(m) => m.clone(),
            Design::Sparse { csr, .. } => csr.to_dense(),
        }
    }

    /// `out = X v`
    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n_cols());
        debug_assert_eq!(out.len(), self.n_rows());
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row_dot(i, v);
        }
    }

    pub fn matvec_alloc(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_rows()];
        self.matvec(v, &mut out);
        out
    }

    /// `out = Xᵀ r`
    pub fn rmatvec(&self, r: &[f64], out: &mut [f64]) {
        debug_assert_eq!(r.len(), self.n_rows());
        debug_assert_eq!(out.len(), self.n_cols());
        match self {
            Design::Dense(m) => {
                out.iter_mut().for_each(|o| *o = 0.0);
                for (i, &ri) in r.iter().enumerate() {
                    for (o, &x) in out.iter_mut().zip(m.row(i)) {
                        *o += x * ri;
                    }
                }
            }
            Design::Sparse { .. } => {
                for (j, o) in out.iter_mut().enumerate() {
                    *o = self.col_dot(j, r);
                }
            }
        }
    }

    pub fn rmatvec_alloc(&self, r: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_cols()];
        self.rmatvec(r, &mut out);
        out
    }

    #[inline]
    pub fn row_dot(&self, i: usize, v: &[f64]) -> f64 {
        match self {
            Design::Dense(m) => m.row(i).iter().zip(v).map(|(a, b)| a * b).sum(),
            Design::Sparse { csr, .. } => {
                let (idx, val) = csr.row(i);
                idx.iter().zip(val).map(|(&j, &a)| a * v[j]).sum()
            }
        }
    }

    /// `out += a * X_i` (row `i`)
    #[inline]
    pub fn row_axpy(&self, i: usize, a: f64, out: &mut [f64]) {
        match self {
            Design::Dense(m) => {
                for (o, &x) in out.iter_mut().zip(m.row(i)) {
                    *o += a * x;
                }
            }
            Design::Sparse { csr, .. } => {
                let (idx, val) = csr.row(i);
                for (&j, &x) in idx.iter().zip(val) {
                    out[j] += a * x;
                }
            }
        }
    }

    pub fn row_norm_sq(&self, i: usize) -> f64 {
        match self {
            Design::Dense(m) => m.row(i).iter().map(|x| x * x).sum(),
            Design::Sparse { csr, .. } => csr.row(i).1.iter().map(|x| x * x).sum(),
        }
    }

    /// `Σ_i X_ij v_i`, accumulated over ascending `i`.
    #[inline]
    pub fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        self.col_fold(j, |i, x| x * v[i])
    }

    /// `Σ_i X_ij f(i)`, accumulated over ascending `i`.
    #[inline]
    pub fn col_fold(&self, j: usize, mut f: impl FnMut(usize, f64) -> f64) -> f64 {
        match self {
            Design::Dense(m) => {
                let mut acc = 0.0;
                for i in 0..m.n_rows {
                    acc += f(i, m.get(i, j));
                }
                acc
            }
            Design::Sparse { csc, .. } => {
                let (idx, val) = csc.row(j);
                let mut acc = 0.0;
                for (&i, &x) in idx.iter().zip(val) {
                    acc += f(i, x);
                }
                acc
            }
        }
    }

    /// `v += a * X_j` (column `j`)
    #[inline]
    pub fn col_axpy(&self, j: usize, a: f64, v: &mut [f64]) {
        match self {
            Design::Dense(m) => {
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi += a * m.get(i, j);
                }
            }
            Design::Sparse { csc, .. } => {
                let (idx, val) = csc.row(j);
                for (&i, &x) in idx.iter().zip(val) {
                    v[i] += a * x;
                }
            }
        }
    }

    pub fn col_norms_sq(&self) -> Vec<f64> {
        (0..self.n_cols()).map(|j| self.col_fold(j, |_, x| x * x)).collect()
    }

    /// Row sums, i.e. `X 𝟙`.
    pub fn row_sums(&self) -> Vec<f64> {
        let ones = vec![1.0; self.n_cols()];
        self.matvec_alloc(&ones)
    }
}

/// Largest eigenvalue of `XᵀX` by power iteration.
///
/// Starts from the normalized all-ones vector and stops once the Rayleigh
/// quotient changes by less than `1e-10` relative, or after 1000 iterations.
pub fn spectral_norm_sq(x: &Design) -> Result<f64> {
    let p = x.n_cols();
    if p == 0 || x.n_rows() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut v = vec![1.0 / libm::sqrt(p as f64); p];
    let mut xv = vec![0.0; x.n_rows()];
    let mut w = vec![0.0; p];
    let mut eig = 0.0_f64;
    for it in 0..1000 {
        x.matvec(&v, &mut xv);
        let rayleigh = crate::math::norm_sq(&xv);
        x.rmatvec(&xv, &mut w);
        let wn = crate::math::norm(&w);
        if wn == 0.0 {
            if it == 0 {
                // the start vector may lie in the null space; retry from a basis sweep
                return spectral_norm_sq_fallback(x);
            }
            break;
        }
        let converged = it > 0 && (rayleigh - eig).abs() <= 1e-10 * rayleigh;
        eig = rayleigh;
        if converged {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    if eig == 0.0 {
        return Err(Error::InvalidArgument("zero matrix".into()));
    }
    Ok(eig)
}

fn spectral_norm_sq_fallback(x: &Design) -> Result<f64> {
    let norms = x.col_norms_sq();
    let (j, &best) = norms
        .iter()
        .enumerate()
        .fold((0, &0.0), |acc, (j, n)| if *n > *acc.1 { (j, n) } else { acc });
    if best == 0.0 {
        return Err(Error::InvalidArgument("zero matrix".into()));
    }
    let p = x.n_cols();
    let mut v = vec![0.0; p];
    v[j] = 1.0;
    let mut xv = vec![0.0; x.n_rows()];
    let mut w = vec![0.0; p];
    let mut eig = 0.0_f64;
    for it in 0..1000 {
        x.matvec(&v, &mut xv);
        let rayleigh = crate::math::norm_sq(&xv);
        x.rmatvec(&xv, &mut w);
        let wn = crate::math::norm(&w);
        let converged = it > 0 && (rayleigh - eig).abs() <= 1e-10 * rayleigh;
        eig = rayleigh;
        if converged || wn == 0.0 {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> DenseMatrix {
        DenseMatrix::from_rows(&[&[1.0, 0.0, 2.0], &[0.0, 0.0, 3.0], &[4.0, 5.0, 0.0]]).unwrap()
    }

    #[test]
    fn csr_rejects_unsorted_columns() {
        let err = SparseCsr::new(1, 3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]);
        assert!(err.is_err());
        let err = SparseCsr::new(2, 3, vec![0, 2, 1], vec![0, 1], vec![1.0, 1.0]);
        assert!(err.is_err());
    }

    #[test]
    fn transpose_roundtrip() {
        let csr = SparseCsr::from_dense(&small());
        assert_eq!(csr.nnz(), 5);
        assert_eq!(csr.transpose().transpose(), csr);
        assert_eq!(csr.to_dense(), small());
    }

    #[test]
    fn identity_and_diag_spectral_norm() {
        let eye: Design = DenseMatrix::identity(3).into();
        assert!((spectral_norm_sq(&eye).unwrap() - 1.0).abs() < 1e-12);
        let d: Design = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap().into();
        assert!((spectral_norm_sq(&d).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix_is_an_error() {
        let z: Design = DenseMatrix::zeros(3, 2).into();
        assert!(spectral_norm_sq(&z).is_err());
    }

    #[test]
    fn ones_start_in_null_space() {
        // (1, 1)/√2 is in the null space of this matrix
        let m: Design = DenseMatrix::from_rows(&[&[1.0, -1.0]]).unwrap().into();
        assert!((spectral_norm_sq(&m).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sparse_and_dense_kernels_agree_bitwise() {
        let dense: Design = small().into();
        let sparse: Design = SparseCsr::from_dense(&small()).into();
        let r = [0.3, -1.7, 2.5];
        assert_eq!(dense.rmatvec_alloc(&r), sparse.rmatvec_alloc(&r));
        for j in 0..3 {
            assert_eq!(dense.col_dot(j, &r), dense.rmatvec_alloc(&r)[j]);
        }
    }
}
