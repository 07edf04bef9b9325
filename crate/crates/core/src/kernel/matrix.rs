//! Dense row-major complex matrices and the handful of factorizations the
//! solver needs: LU with partial pivoting, Householder QR and one-sided
//! Jacobi singular values.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use super::LinalgError;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Pivot ratio below which a factorized matrix is treated as numerically singular.
const SINGULAR_PIVOT_RATIO: f64 = 1.0e-13;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// The reversal permutation: column `j` is `e_{n-1-j}`.
    pub fn exchange(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i + j + 1 == n { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                expected: (rows, cols),
                actual: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::ShapeMismatch {
                    expected: (rows.len(), cols),
                    actual: (rows.len(), row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            rows,
            cols,
            data: values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[C64]) {
        assert_eq!(values.len(), self.rows);
        for (i, v) in values.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// First `m` columns.
    pub fn leading_columns(&self, m: usize) -> CMatrix {
        assert!(m <= self.cols);
        Self::from_fn(self.rows, m, |i, j| self[(i, j)])
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> CMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn select_columns(&self, cols: &[usize]) -> CMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn hstack(&self, other: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.rows, other.cols),
                actual: other.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        }))
    }

    pub fn adjoint(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: C64) -> CMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `a * self + b * other`, entrywise.
    pub fn combine(&self, a: C64, other: &CMatrix, b: C64) -> CMatrix {
        assert_eq!(self.shape(), other.shape());
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &CMatrix) -> Result<CMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.cols, other.cols),
                actual: other.shape(),
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == ZERO {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        (0..self.rows)
            .map(|i| self[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Rescales every nonzero column to unit Euclidean norm.
    pub fn normalize_columns(&mut self) {
        for j in 0..self.cols {
            let norm = self.column_norm(j);
            if norm > 0.0 {
                for i in 0..self.rows {
                    self[(i, j)] /= norm;
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for v in self.row(i) {
                write!(f, " {:+.6e}{:+.6e}i", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// LU factorization `P A = L U` with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    odd_permutation: bool,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        let n = a.rows;
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_permutation = false;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_abs = lu[(col, col)].norm();
            for row in col + 1..n {
                let v = lu[(row, col)].norm();
                if v > pivot_abs {
                    pivot_abs = v;
                    pivot_row = row;
                }
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.data.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
                odd_permutation = !odd_permutation;
            }
            let pivot = lu[(col, col)];
            if pivot == ZERO {
                continue;
            }
            for row in col + 1..n {
                let factor = lu[(row, col)] / pivot;
                lu[(row, col)] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(row, j)] -= factor * u;
                }
            }
        }
        Ok(Self {
            lu,
            perm,
            odd_permutation,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    pub fn determinant(&self) -> C64 {
        let mut det = if self.odd_permutation { -ONE } else { ONE };
        for i in 0..self.dim() {
            det *= self.lu[(i, i)];
        }
        det
    }

    /// Ratio of the smallest to the largest pivot magnitude; a cheap
    /// reciprocal-condition proxy.
    pub fn pivot_ratio(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..self.dim() {
            let v = self.lu[(i, i)].norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if self.dim() == 0 {
            1.0
        } else if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    fn check_regular(&self) -> Result<(), LinalgError> {
        if self.pivot_ratio() < SINGULAR_PIVOT_RATIO {
            return Err(LinalgError::Singular);
        }
        Ok(())
    }

    pub fn solve_vec(&self, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
        let n = self.dim();
        if b.len() != n {
            return Err(LinalgError::ShapeMismatch {
                expected: (n, 1),
                actual: (b.len(), 1),
            });
        }
        self.check_regular()?;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(x)
    }

    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        if b.rows != self.dim() {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.dim(), b.cols),
                actual: b.shape(),
            });
        }
        let mut out = CMatrix::zeros(b.rows, b.cols);
        for j in 0..b.cols {
            let col = self.solve_vec(&b.column(j))?;
            out.set_column(j, &col);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<CMatrix, LinalgError> {
        self.solve(&CMatrix::identity(self.dim()))
    }
}

pub fn determinant(m: &CMatrix) -> Result<C64, LinalgError> {
    Ok(Lu::factor(m)?.determinant())
}

/// Solves `a x = b`. Square systems use LU; tall systems are solved in the
/// least-squares sense through a Householder QR factorization.
pub fn solve_linear(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    if a.rows != b.rows {
        return Err(LinalgError::ShapeMismatch {
            expected: (a.rows, b.cols),
            actual: b.shape(),
        });
    }
    if a.is_square() {
        Lu::factor(a)?.solve(b)
    } else if a.rows > a.cols {
        Qr::factor(a).least_squares(b)
    } else {
        Err(LinalgError::Underdetermined {
            rows: a.rows,
            cols: a.cols,
        })
    }
}

/// Householder QR of an `m x n` matrix with `m >= n`.
#[derive(Debug, Clone)]
pub struct Qr {
    // Householder vectors, each of length m, zero above its step index.
    reflectors: Vec<Vec<C64>>,
    r: CMatrix,
}

impl Qr {
    pub fn factor(a: &CMatrix) -> Self {
        let (m, n) = a.shape();
        let steps = m.min(n);
        let mut r = a.clone();
        let mut reflectors = Vec::with_capacity(steps);
        for k in 0..steps {
            let norm = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
            let mut v = vec![ZERO; m];
            if norm == 0.0 {
                reflectors.push(v);
                continue;
            }
            let x0 = r[(k, k)];
            let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            for i in k..m {
                v[i] = r[(i, k)];
            }
            v[k] -= alpha;
            let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in v.iter_mut() {
                *c /= vnorm;
            }
            apply_reflector(&v, &mut r, k);
            reflectors.push(v);
        }
        Self { reflectors, r }
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    /// Applies `Q^H` to `b` in place.
    fn apply_qh(&self, b: &mut CMatrix) {
        for (k, v) in self.reflectors.iter().enumerate() {
            apply_reflector(v, b, k);
        }
    }

    /// The first `cols` columns of `Q`.
    pub fn thin_q(&self, cols: usize) -> CMatrix {
        let m = self.r.rows;
        let mut q = CMatrix::from_fn(m, cols, |i, j| if i == j { ONE } else { ZERO });
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            apply_reflector(v, &mut q, k);
        }
        q
    }

    pub fn least_squares(&self, b: &CMatrix) -> Result<CMatrix, LinalgError> {
        let (m, n) = self.r.shape();
        if b.rows != m {
            return Err(LinalgError::ShapeMismatch {
                expected: (m, b.cols),
                actual: b.shape(),
            });
        }
        let scale = (0..n).map(|i| self.r[(i, i)].norm()).fold(0.0, f64::max);
        if (0..n).any(|i| self.r[(i, i)].norm() <= SINGULAR_PIVOT_RATIO * scale) || scale == 0.0 {
            return Err(LinalgError::Singular);
        }
        let mut qb = b.clone();
        self.apply_qh(&mut qb);
        let mut x = CMatrix::zeros(n, b.cols);
        for c in 0..b.cols {
            for i in (0..n).rev() {
                let mut s = qb[(i, c)];
                for j in i + 1..n {
                    s -= self.r[(i, j)] * x[(j, c)];
                }
                x[(i, c)] = s / self.r[(i, i)];
            }
        }
        Ok(x)
    }
}

// (I - 2 v v^H) applied to rows k.. of `target`.
fn apply_reflector(v: &[C64], target: &mut CMatrix, k: usize) {
    let (m, n) = target.shape();
    for j in 0..n {
        let mut dot = ZERO;
        for i in k..m {
            dot += v[i].conj() * target[(i, j)];
        }
        if dot == ZERO {
            continue;
        }
        let two_dot = dot * 2.0;
        for i in k..m {
            target[(i, j)] -= v[i] * two_dot;
        }
    }
}

/// Orthonormal basis of the column span of a full-column-rank matrix.
pub fn orthonormal_columns(a: &CMatrix) -> CMatrix {
    Qr::factor(a).thin_q(a.cols.min(a.rows))
}

/// Singular values in decreasing order, by one-sided (Hestenes) Jacobi.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let work = if a.rows >= a.cols {
        a.clone()
    } else {
        a.adjoint()
    };
    let (m, n) = work.shape();
    // Column-major copy; the sweeps work on columns.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| work.column(j)).collect();
    let mut norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v.norm_sqr()).sum())
        .collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let mut gamma = ZERO;
                for i in 0..m {
                    gamma += cols[p][i].conj() * cols[q][i];
                }
                let g = gamma.norm();
                if g <= 1.0e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                for i in 0..m {
                    let xp = cp[i];
                    let xq = cq[i] * phase.conj();
                    cp[i] = xp * c - xq * s;
                    cq[i] = xp * s + xq * c;
                }
                norms[p] = cp.iter().map(|v| v.norm_sqr()).sum();
                norms[q] = cq.iter().map(|v| v.norm_sqr()).sum();
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: Vec<f64> = norms.iter().map(|v| v.sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Number of singular values exceeding `tol` times the largest one.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > tol * top).count(),
        _ => 0,
    }
}

/// 2-norm condition number; infinite for singular or empty input.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn vec_norm_inf(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn vec_norm2(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
