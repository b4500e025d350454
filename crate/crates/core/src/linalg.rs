//! Small dense complex matrices.
//!
//! Everything here is sized for spin systems of at most a handful of spins
//! (dimension up to 2^10), so the kernels are plain row-major loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Maximum number of cyclic Jacobi sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm (relative to the matrix norm, floored at 1)
/// below which a Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;

/// Eigenvalues of the Hermitian part closer than this are treated as one
/// degenerate cluster by [`eig_unitary`].
pub const CLUSTER_TOL: f64 = 1e-8;

/// Tolerance used by [`matrix_exp_hermitian`] for its Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Square complex matrix stored row-major. Entry `(r, c)` is `<r|M|c>`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics unless `data.len()` is a
    /// perfect square.
    pub fn from_row_major(data: Vec<Complex64>) -> Self {
        let dim = (data.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, data.len(), "row-major data must be square");
        ComplexMatrix { dim, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix { dim, data })
    }

    /// Builds a real matrix from rows of `f64`.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of spins when `dim` is a power of two.
    pub fn spins(&self) -> Option<usize> {
        if self.dim.is_power_of_two() {
            Some(self.dim.trailing_zeros() as usize)
        } else {
            None
        }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.dim).map(|k| self[(k, k)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product. Block `(r, c)` of the result is `self[r][c] * other`,
    /// so `self` acts on the more significant bits.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let dim = n * m;
        let mut out = Self::zeros(dim);
        for r in 0..n {
            for c in 0..n {
                let a = self.data[r * n + c];
                if a == ZERO {
                    continue;
                }
                for rr in 0..m {
                    for cc in 0..m {
                        out.data[(r * m + rr) * dim + c * m + cc] = a * other.data[rr * m + cc];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |U U^† - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self
            .multiply(&self.adjoint())
            .expect("square matrix times its adjoint");
        max_abs_diff(&prod, &Self::identity(self.dim)).expect("same dimension")
    }

    /// `max |H - H^†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs_diff(self, &self.adjoint()).expect("same dimension")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() < tol
    }

    /// `(M + M^†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }

    /// Copies columns `cols` into a `dim x cols.len()` block, returned as
    /// a vector of column vectors.
    fn columns(&self, cols: &[usize]) -> Vec<Vec<Complex64>> {
        cols.iter()
            .map(|&c| (0..self.dim).map(|r| self[(r, c)]).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::multiply`] for the
    /// fallible form.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.multiply(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn multiply(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.multiply(b)
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Eigendecomposition of a unitary matrix: `T U T^† = diag(eigenvalues)`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    /// Unitary whose rows are the eigen-bras.
    pub t: ComplexMatrix,
}

impl EigenDecomposition {
    /// `T^† diag(eigenvalues) T`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diag(&self.eigenvalues);
        &(&self.t.adjoint() * &d) * &self.t
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Returns ascending eigenvalues and a unitary `V` whose columns are the
/// matching eigenvectors, so `H = V diag(w) V^†`. The input is assumed
/// Hermitian; only its Hermitian part is used.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = h.dim;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * a.frobenius().max(1.0);

    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        if off_diagonal_norm(&a) < stop {
            converged = true;
        } else {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    debug_assert!(converged);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut sorted = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            sorted[(r, new)] = v[(r, old)];
        }
    }
    Ok((values, sorted))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided rotation zeroing `a[p][q]`: `a <- W^† a W`, `v <- v W`,
/// with `W = diag(1, e^{-i arg a_pq}) * [[c, s], [-s, c]]` in the `(p, q)`
/// plane.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let w_pp = Complex64::new(c, 0.0);
    let w_pq = Complex64::new(s, 0.0);
    let w_qp = -phase.conj() * s;
    let w_qq = phase.conj() * c;

    // a <- a W
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    // a <- W^† a
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * w_pp + vkq * w_qp;
        v[(k, q)] = vkp * w_pq + vkq * w_qq;
    }
}

/// Common eigenbasis of a unitary matrix.
///
/// Diagonalizes `H1 = (U + U^†)/2`, then diagonalizes `H2 = (U - U^†)/2i`
/// inside every degenerate eigenspace of `H1`. Both are Hermitian and commute
/// because `U` is normal.
pub fn eig_unitary(u: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    let n = u.dim;
    let defect = u.unitarity_defect();
    if defect >= tol {
        return Err(Error::NotUnitary(defect));
    }
    let ud = u.adjoint();
    let h1 = (u + &ud).scale_real(0.5);
    let h2 = (u - &ud).scale(Complex64::new(0.0, -0.5));

    let (w1, mut v) = eigh(&h1)?;

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && w1[end] - w1[end - 1] < CLUSTER_TOL {
            end += 1;
        }
        if end - start > 1 {
            refine_cluster(&h2, &mut v, start, end)?;
        }
        start = end;
    }

    let t = v.adjoint();
    let diag = &(&t * u) * &v;
    Ok(EigenDecomposition {
        eigenvalues: diag.diag(),
        t,
    })
}

/// Rotates columns `start..end` of `v` to diagonalize `h` restricted to
/// their span.
fn refine_cluster(
    h: &ComplexMatrix,
    v: &mut ComplexMatrix,
    start: usize,
    end: usize,
) -> Result<()> {
    let cols: Vec<usize> = (start..end).collect();
    let basis = v.columns(&cols);
    let k = cols.len();
    let n = v.dim;

    // restricted = B^† H B
    let hb: Vec<Vec<Complex64>> = basis
        .iter()
        .map(|b| {
            (0..n)
                .map(|r| (0..n).map(|c| h[(r, c)] * b[c]).sum())
                .collect()
        })
        .collect();
    let mut restricted = ComplexMatrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            restricted[(i, j)] = (0..n).map(|r| basis[i][r].conj() * hb[j][r]).sum();
        }
    }
    let (_, w) = eigh(&restricted)?;
    for (j, &col) in cols.iter().enumerate() {
        for r in 0..n {
            v[(r, col)] = (0..k).map(|i| basis[i][r] * w[(i, j)]).sum();
        }
    }
    Ok(())
}

/// `exp(-i H)` for Hermitian `H`, via its eigendecomposition.
pub fn matrix_exp_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let defect = h.hermiticity_defect();
    if defect >= HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let (w, v) = eigh(h)?;
    let phases: Vec<Complex64> = w.iter().map(|&x| Complex64::from_polar(1.0, -x)).collect();
    Ok(&(&v * &ComplexMatrix::from_diag(&phases)) * &v.adjoint())
}
