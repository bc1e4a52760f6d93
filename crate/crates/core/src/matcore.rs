//! Dense complex linear algebra for operators up to dimension ~64.
//!
//! Everything is built on a row-major [`ComplexMatrix`] and a cyclic complex
//! Jacobi eigensolver for Hermitian matrices. Spectral matrix functions,
//! Kronecker products, partial trace/transpose, the trace norm, and the
//! Uhlmann fidelity all reduce to [`eigh`].

use num_complex::Complex64;

use crate::{tol, Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r: Vec<Vec<C64>> =
            rows.iter().map(|row| row.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&r)
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// |u><v| outer product.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: C64) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        let data = self.data.iter().map(|a| a.conj()).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Hermiticity defect ||A - A^dag||_max.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        self.hermiticity_defect() <= tol * scale
    }

    /// (A + A^dag)/2.
    pub fn hermitize(&self) -> Self {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    /// Standard Kronecker product, shape (ra*rb, ca*cb).
    pub fn kron(&self, rhs: &Self) -> Self {
        let (ra, ca, rb, cb) = (self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(ra * rb, ca * cb);
        for i in 0..ra {
            for j in 0..ca {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        out[(i * rb + k, j * cb + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Commutator [A, B] = AB - BA.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Anticommutator {A, B} = AB + BA.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).add(&rhs.mul(self))
    }

    /// Row-major vec (row-stacking). Matches `kron` so that
    /// vec(A X B) = (A (x) B^T) vec(X).
    pub fn vec_row_major(&self) -> Vec<C64> {
        self.data.clone()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Pauli matrices. `pauli(0)` is the identity.
pub fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        2 => ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]),
        3 => ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V f(Lambda) V^dag.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)];
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj() * fk;
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Ascending eigenvalues; reconstruction error stays below
/// 1e-10 * ||H||_F for the dimensions this crate targets.
pub fn eigh(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimMismatch(format!("eigh needs a square matrix, got {}x{}", h.rows(), h.cols())));
    }
    let defect = h.hermiticity_defect();
    let scale = h.max_abs().max(1.0);
    if defect > tol::HERMITICITY * scale {
        return Err(Error::NonHermitian { defect });
    }

    let n = h.rows();
    let mut a = h.hermitize();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return Ok(EigenDecomposition { eigenvalues: vec![a[(0, 0)].re], eigenvectors: v });
    }

    let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * fro;
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let m = apq.norm();
                if m <= 1e-300 {
                    continue;
                }
                let phase = apq / m; // e^{i phi}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Annihilating tangent for the convention below:
                // t^2 - 2 tau t - 1 = 0, small-magnitude root.
                let tau = (aqq - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cp = C64::new(c, 0.0);
                let sp = C64::new(s, 0.0);
                let ph_c = phase.conj();

                // Columns: A <- A * U, with U mixing columns (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cp * akp + sp * ph_c * akq;
                    a[(k, q)] = -sp * akp + cp * ph_c * akq;
                }
                // Rows: A <- U^dag * A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cp * apk + sp * phase * aqk;
                    a[(q, k)] = -sp * apk + cp * phase * aqk;
                }
                // Accumulate eigenvectors: V <- V * U.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cp * vkp + sp * ph_c * vkq;
                    v[(k, q)] = -sp * vkp + cp * ph_c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// V f(Lambda) V^dag for Hermitian input. With `clamp_negative` set,
/// eigenvalues in (PSD_FLOOR, 0] are clamped to 0 and anything below the
/// floor is a `DomainError`; this is the entry point for sqrt/log of
/// numerically drifted PSD matrices.
pub fn matrix_function(
    h: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
    clamp_negative: bool,
) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    let mut vals = eig.eigenvalues.clone();
    if clamp_negative {
        for v in &mut vals {
            if *v < 0.0 {
                if *v < tol::PSD_FLOOR {
                    return Err(Error::DomainError { value: *v });
                }
                *v = 0.0;
            }
        }
    }
    let n = vals.len();
    let v = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let fk = f(vals[k]);
        if fk == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)];
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj() * fk;
            }
        }
    }
    Ok(out)
}

/// PSD square root with spectral clamping of small negative drift.
/// Eigenvalues at or below the numerical-rank floor are treated as exact
/// zeros; the square root would otherwise amplify solver noise of order
/// 1e-16 into 1e-8 components.
pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function(h, |x| if x <= tol::RANK { 0.0 } else { x.sqrt() }, true)
}

/// Moore-Penrose pseudo-inverse of a Hermitian matrix via its spectrum;
/// eigenvalues below `cutoff` in magnitude map to zero.
pub fn pinv_hermitian(h: &ComplexMatrix, cutoff: f64) -> Result<ComplexMatrix> {
    matrix_function(h, |x| if x.abs() <= cutoff { 0.0 } else { 1.0 / x }, false)
}

/// Trace norm ||A||_1 = Tr sqrt(A^dag A), the sum of singular values.
///
/// Computed from the Hermitian embedding [[0, A], [A^dag, 0]], whose
/// spectrum is {+-sigma_i}: this keeps small singular values at machine
/// precision, where the A^dag A route would square them into sqrt(eps) noise.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimMismatch("trace_norm needs a square matrix".into()));
    }
    let n = a.rows();
    let mut emb = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            emb[(i, n + j)] = a[(i, j)];
            emb[(n + i, j)] = a[(j, i)].conj();
        }
    }
    let eig = eigh(&emb)?;
    Ok(eig.eigenvalues[n..].iter().map(|&x| x.max(0.0)).sum())
}

/// Uhlmann fidelity F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
pub fn fidelity_mats(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() || rho.cols() != sigma.cols() {
        return Err(Error::DimMismatch("fidelity needs equal shapes".into()));
    }
    let a = sqrt_psd(rho)?.mul(&sqrt_psd(sigma)?);
    let t = trace_norm(&a)?;
    Ok((t * t).clamp(0.0, 1.0 + 1e-9).min(1.0))
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
/// Returns the solution and a pivot-ratio condition estimate.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    assert!(a.is_square());
    assert_eq!(a.rows(), b.rows());
    let n = a.rows();
    let m = b.cols();
    let mut aug = ComplexMatrix::zeros(n, n + m);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)];
        }
        for j in 0..m {
            aug[(i, n + j)] = b[(i, j)];
        }
    }
    let mut pivot_max = 0.0f64;
    let mut pivot_min = f64::INFINITY;
    for col in 0..n {
        let (mut best, mut best_val) = (col, aug[(col, col)].norm());
        for r in (col + 1)..n {
            let v = aug[(r, col)].norm();
            if v > best_val {
                best = r;
                best_val = v;
            }
        }
        if best_val < 1e-14 * pivot_max.max(1.0) {
            return Err(Error::SingularPurification { cond: f64::INFINITY });
        }
        if best != col {
            for j in 0..(n + m) {
                let t = aug[(col, j)];
                aug[(col, j)] = aug[(best, j)];
                aug[(best, j)] = t;
            }
        }
        pivot_max = pivot_max.max(best_val);
        pivot_min = pivot_min.min(best_val);
        let p = aug[(col, col)];
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = aug[(r, col)] / p;
            if factor == ZERO {
                continue;
            }
            for j in col..(n + m) {
                let v = aug[(col, j)];
                aug[(r, j)] -= factor * v;
            }
        }
    }
    let mut x = ComplexMatrix::zeros(n, m);
    for i in 0..n {
        let p = aug[(i, i)];
        for j in 0..m {
            x[(i, j)] = aug[(i, n + j)] / p;
        }
    }
    Ok((x, pivot_max / pivot_min))
}

/// e^{-i t H} for Hermitian H, via the spectral theorem.
pub fn expi_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eigh(h)?;
    let n = eig.eigenvalues.len();
    let v = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let ph = C64::from_polar(1.0, -t * eig.eigenvalues[k]);
        for i in 0..n {
            let vik = v[(i, k)];
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj() * ph;
            }
        }
    }
    Ok(out)
}

// --- multi-index helpers for tensor-product structure -----------------------

/// Decode a flat index into per-subsystem coordinates (subsystem 0 is the
/// leftmost, i.e. most significant, tensor factor).
pub fn index_to_multi(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

pub fn multi_to_index(multi: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0usize;
    for (m, d) in multi.iter().zip(dims) {
        idx = idx * d + m;
    }
    idx
}

/// Partial trace over all subsystems NOT in `keep` (ascending order kept).
pub fn partial_trace_mat(
    mat: &ComplexMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if mat.rows() != total || mat.cols() != total {
        return Err(Error::DimMismatch(format!(
            "matrix is {}x{} but dims give {}",
            mat.rows(),
            mat.cols(),
            total
        )));
    }
    if keep.is_empty() {
        return Err(Error::BadSubsystem { index: 0, count: dims.len() });
    }
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::BadSubsystem { index: k, count: dims.len() });
        }
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let mut row_multi = vec![0usize; dims.len()];
    let mut col_multi = vec![0usize; dims.len()];
    for a in 0..out_dim {
        let am = index_to_multi(a, &kept_dims);
        for b in 0..out_dim {
            let bm = index_to_multi(b, &kept_dims);
            let mut acc = ZERO;
            for t in 0..traced_total {
                let tm = index_to_multi(t, &traced_dims);
                for (pos, &k) in keep_sorted.iter().enumerate() {
                    row_multi[k] = am[pos];
                    col_multi[k] = bm[pos];
                }
                for (pos, &k) in traced.iter().enumerate() {
                    row_multi[k] = tm[pos];
                    col_multi[k] = tm[pos];
                }
                acc += mat[(multi_to_index(&row_multi, dims), multi_to_index(&col_multi, dims))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Partial transpose with respect to one subsystem.
pub fn partial_transpose_mat(
    mat: &ComplexMatrix,
    dims: &[usize],
    subsystem: usize,
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if mat.rows() != total || mat.cols() != total {
        return Err(Error::DimMismatch("partial_transpose: size mismatch".into()));
    }
    if subsystem >= dims.len() {
        return Err(Error::BadSubsystem { index: subsystem, count: dims.len() });
    }
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        let mut im = index_to_multi(i, dims);
        for j in 0..total {
            let mut jm = index_to_multi(j, dims);
            std::mem::swap(&mut im[subsystem], &mut jm[subsystem]);
            let (ti, tj) = (multi_to_index(&im, dims), multi_to_index(&jm, dims));
            std::mem::swap(&mut im[subsystem], &mut jm[subsystem]);
            out[(ti, tj)] = mat[(i, j)];
        }
    }
    Ok(out)
}

/// Reorder tensor factors of an operator: `perm[k]` is the old position of
/// the subsystem that ends up at new position `k`.
pub fn permute_systems_mat(
    mat: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let n = dims.len();
    if perm.len() != n {
        return Err(Error::BadSubsystem { index: perm.len(), count: n });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::BadSubsystem { index: p, count: n });
        }
        seen[p] = true;
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut out = ComplexMatrix::zeros(total, total);
    for i in 0..total {
        let im = index_to_multi(i, dims);
        let ni: Vec<usize> = perm.iter().map(|&p| im[p]).collect();
        let ti = multi_to_index(&ni, &new_dims);
        for j in 0..total {
            let jm = index_to_multi(j, dims);
            let nj: Vec<usize> = perm.iter().map(|&p| jm[p]).collect();
            out[(ti, multi_to_index(&nj, &new_dims))] = mat[(i, j)];
        }
    }
    Ok(out)
}

/// Lift a single-subsystem operator to the full space by identity padding.
pub fn lift_operator(op: &ComplexMatrix, dims: &[usize], target: usize) -> Result<ComplexMatrix> {
    if target >= dims.len() {
        return Err(Error::BadSubsystem { index: target, count: dims.len() });
    }
    if op.rows() != dims[target] || op.cols() != dims[target] {
        return Err(Error::DimMismatch(format!(
            "operator is {}x{} but subsystem {} has dimension {}",
            op.rows(),
            op.cols(),
            target,
            dims[target]
        )));
    }
    let mut out = ComplexMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        out = if k == target { out.kron(op) } else { out.kron(&ComplexMatrix::identity(d)) };
    }
    Ok(out)
}
