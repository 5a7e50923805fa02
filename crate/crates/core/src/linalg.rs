//! Dense matrices over ℝ or ℂ.
//!
//! Real and complex matrices share one storage type: entries are always
//! [`C64`], and a [`Field`] tag records whether the imaginary parts are
//! known to be zero. The tag decides dimension formulas and which
//! constructions are legal; kernels never branch on it.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default scale-relative tolerance for numerical predicates.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative residual below which a Gram–Schmidt column counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl Field {
    /// The field that contains both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "R"),
            Field::Complex => write!(f, "C"),
        }
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
    field: Field,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Mat {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Mat {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
            field,
        }
    }

    pub fn identity(n: usize, field: Field) -> Mat {
        let mut m = Mat::zeros(n, n, field);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major complex entries.
    ///
    /// Under [`Field::Real`] every imaginary part must be exactly zero.
    pub fn from_complex(rows: usize, cols: usize, data: Vec<C64>, field: Field) -> Result<Mat> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidArgument(
                "real-tagged matrix has a nonzero imaginary part".into(),
            ));
        }
        Ok(Mat {
            rows,
            cols,
            data,
            field,
        })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Mat> {
        let data = data.iter().map(|&x| C64::new(x, 0.0)).collect();
        Mat::from_complex(rows, cols, data, Field::Real)
    }

    /// Column vector.
    pub fn column(entries: Vec<C64>, field: Field) -> Result<Mat> {
        let n = entries.len();
        Mat::from_complex(n, 1, entries, field)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    /// Retags as complex; real matrices embed trivially.
    pub fn into_complex(mut self) -> Mat {
        self.field = Field::Complex;
        self
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// `self * other`. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.cols, other.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.rows, other.cols, self.field.join(other.field));
        for i in 0..self.rows {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in arow.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self* · other` without materializing the adjoint.
    pub fn adjoint_mul(&self, other: &Mat) -> Mat {
        assert_eq!(
            self.rows, other.rows,
            "adjoint_mul: {}x{} and {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Mat::zeros(self.cols, other.cols, self.field.join(other.field));
        for k in 0..self.rows {
            let arow = &self.data[k * self.cols..(k + 1) * self.cols];
            let brow = &other.data[k * other.cols..(k + 1) * other.cols];
            for (i, a) in arow.iter().enumerate() {
                let a = a.conj();
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: C64) -> Mat {
        let mut out = self.map(|z| z * s);
        if s.im != 0.0 {
            out.field = Field::Complex;
        }
        out
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
            field: self.field,
        }
    }

    fn zip_with(&self, other: &Mat, op: &str, f: impl Fn(C64, C64) -> C64) -> Mat {
        assert_eq!(self.shape(), other.shape(), "{op}: shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            field: self.field.join(other.field),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(singular_values(self)?[0])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_real_valued(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "add", |a, b| a + b)
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

/// Conjugate transpose of `a`.
pub fn adjoint(a: &Mat) -> Mat {
    a.adjoint()
}

/// Frobenius inner product `Tr(a* b)`.
pub fn frobenius_inner(a: &Mat, b: &Mat) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Singular values in nonincreasing order, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, after which their norms are the singular values. Accurate to
/// high relative precision for the small matrices used here.
pub fn singular_values(a: &Mat) -> Result<Vec<f64>> {
    // Work on the orientation with at least as many rows as columns.
    let work = if a.rows >= a.cols {
        a.clone()
    } else {
        a.adjoint()
    };
    let (m, n) = work.shape();
    let scale = work.max_abs();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    if !scale.is_finite() {
        return Err(Error::NonFinite);
    }
    // Column-major copy, normalized to unit max entry.
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|j| work.col(j).into_iter().map(|z| z / scale).collect())
        .collect();
    let threshold = f64::EPSILON * m as f64;

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (left, right) = cols.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                // Rotate cp against cq·e^{-iφ}, which makes the overlap real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                if s == 0.0 {
                    continue;
                }
                rotated = true;
                let unphase = phase.conj();
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yp = *y * unphase;
                    let nx = *x * c - yp * s;
                    let ny = *x * s + yp * c;
                    *x = nx;
                    *y = ny;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::SvdNoConvergence);
    }
    let mut sv: Vec<f64> = cols
        .iter()
        .map(|c| scale * c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    debug_assert_eq!(sv.len(), n.min(m));
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(sv)
}

/// Orthonormal basis for the column span of `a`, as `q` in `a = q r` with
/// the diagonal of `r` real and positive.
///
/// Modified Gram–Schmidt with one full reorthogonalization pass per column.
pub fn orthonormalize(a: &Mat) -> Result<Mat> {
    let (m, n) = a.shape();
    if n > m {
        return Err(Error::RankDeficient {
            rank: m,
            cols: n,
        });
    }
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Err(Error::RankDeficient { rank: 0, cols: n });
    }
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let orig = a.col(j);
        let mut v = orig.clone();
        for _pass in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= RANK_TOL * scale {
            return Err(Error::RankDeficient { rank: j, cols: n });
        }
        // Positive-real diagonal: r_jj = <q_j, a_j> > 0 for q_j = v/|v|.
        let inv = 1.0 / norm;
        v.iter_mut().for_each(|z| *z *= inv);
        let rjj: C64 = v.iter().zip(&orig).map(|(x, y)| x.conj() * y).sum();
        if rjj.norm() > 0.0 {
            let phase = rjj / rjj.norm();
            v.iter_mut().for_each(|z| *z *= phase);
        }
        q.push(v);
    }
    let mut out = Mat::zeros(m, n, a.field);
    for (j, col) in q.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = if a.field == Field::Real {
                C64::new(z.re, 0.0)
            } else {
                z
            };
        }
    }
    Ok(out)
}

/// Kronecker product with block `(i, j)` equal to `a[(i, j)] · b`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = Mat::zeros(ar * br, ac * bc, a.field.join(b.field));
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = s * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest entrywise deviation of `a* a` from the identity.
pub fn orthonormality_defect(a: &Mat) -> f64 {
    let g = a.adjoint_mul(a);
    let id = Mat::identity(a.cols, g.field);
    (&g - &id).max_abs()
}
