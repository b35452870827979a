//! Dense complex Hermitian linear algebra.
//!
//! Matrices are stored row-major as interleaved `Complex64` entries. The only
//! decomposition is a cyclic complex Jacobi sweep, which is accurate and
//! unconditionally convergent for the small dimensions used here (≤ 256).
//! Spectral functions and first divided differences (Daleckii–Krein) are
//! evaluated in the eigenbasis.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Admission tolerance for Hermitian symmetry, relative to `max(1, max|a_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

const JACOBI_REL_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative half-gap `(x - y)/(x + y)` below which divided differences use
/// their series expansion.
const SERIES_SWITCH: f64 = 1e-4;

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row vectors; fails unless the rows form a non-empty square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::OutOfRange("matrix must have at least one row".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        let rows = re
            .iter()
            .zip(im)
            .map(|(r, i)| {
                if r.len() != i.len() {
                    return Err(Error::DimensionMismatch {
                        expected: r.len(),
                        found: i.len(),
                    });
                }
                Ok(r.iter()
                    .zip(i)
                    .map(|(&a, &b)| Complex64::new(a, b))
                    .collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Real parts as nested rows.
    pub fn re_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    /// Imaginary parts as nested rows.
    pub fn im_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.iter().map(|z| z.im).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.dim, other.dim, "elementwise dimension mismatch");
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// A complex matrix known to be Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Admits `m` if it is Hermitian within [`HERMITIAN_TOL`], then symmetrizes it.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOL)
    }

    /// Like [`HermitianMatrix::new`] with a caller-chosen relative tolerance.
    pub fn with_tolerance(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = m.hermitian_defect();
        if !(defect <= tol * m.max_abs().max(1.0)) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(A + A†)/2`, with no admission check.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self(out)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `Re Tr(self · other)`; the imaginary part vanishes for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> f64 {
        self.0.trace_product(&other.0).re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

/// Eigenvalues in ascending order and the unitary whose columns are the eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    /// `U · diag(values) · U†`.
    pub fn compose(&self, values: &[f64]) -> HermitianMatrix {
        let n = self.dim();
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    acc += u[(i, k)] * v * u[(j, k)].conj();
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        for i in 0..n {
            out[(i, i)].im = 0.0;
        }
        HermitianMatrix(out)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.compose(&self.eigenvalues)
    }

    /// `U† A U`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint().matmul(&a.matmul(&self.eigenvectors))
    }

    /// `U X U†`.
    pub fn from_eigenbasis(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.matmul(&x.matmul(&self.eigenvectors.adjoint()))
    }

    /// Hadamard product with `kernel(λ_i, λ_j)` taken in the eigenbasis and
    /// mapped back: the Daleckii–Krein form of a Fréchet derivative.
    pub fn divided_difference_map(
        &self,
        v: &HermitianMatrix,
        kernel: impl Fn(f64, f64) -> f64,
    ) -> HermitianMatrix {
        let mut vt = self.to_eigenbasis(v.as_matrix());
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                vt[(i, j)] *= kernel(self.eigenvalues[i], self.eigenvalues[j]);
            }
        }
        HermitianMatrix::symmetrize(&self.from_eigenbasis(&vt))
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Sweeps stop once the off-diagonal Frobenius norm falls below
/// `1e-14 · ‖H‖_F`.
pub fn eig_hermitian(h: &HermitianMatrix) -> SpectralDecomposition {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm();
    let target = JACOBI_REL_TOL * norm;

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    if norm > 0.0 {
        let mut sweeps = 0;
        while off_norm(&a) > target {
            if sweeps == JACOBI_MAX_SWEEPS {
                log::warn!("jacobi: sweep limit reached, off-diagonal {:e}", off_norm(&a));
                break;
            }
            sweeps += 1;
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// One Jacobi rotation annihilating `a[p][q]`. The unitary is `J = D·R` with
/// `D = diag(1, e^{-iφ})` on `(p, q)` making the pivot real and `R` the real
/// plane rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// `U · diag(f(λ)) · U†`. Fails with `DomainError` if `f` is not finite at an eigenvalue.
pub fn spectral_fn(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(h);
    let values = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            let y = f(l);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::DomainError(l))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(eig.compose(&values))
}

pub fn matrix_exp(h: &HermitianMatrix) -> HermitianMatrix {
    let eig = eig_hermitian(h);
    let values: Vec<f64> = eig.eigenvalues.iter().map(|l| l.exp()).collect();
    eig.compose(&values)
}

/// Matrix logarithm of a positive definite matrix.
pub fn matrix_log(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = positive_eig(h)?;
    let values: Vec<f64> = eig.eigenvalues.iter().map(|l| l.ln()).collect();
    Ok(eig.compose(&values))
}

/// Eigendecomposition that fails with `NotPositive` unless every eigenvalue is `> 0`.
pub fn positive_eig(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let eig = eig_hermitian(h);
    let min = eig.min_eigenvalue();
    if !(min > 0.0) {
        return Err(Error::NotPositive(min));
    }
    Ok(eig)
}

/// Fréchet derivative of `log` at positive definite `p` in direction `v`.
///
/// In the eigenbasis of `p` the result is `v_ij · (log λ_i − log λ_j)/(λ_i − λ_j)`,
/// with `1/λ_i` on coincident eigenvalues.
pub fn dlog_frechet(p: &HermitianMatrix, v: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(p.dim(), v.dim())?;
    let eig = positive_eig(p)?;
    Ok(eig.divided_difference_map(v, log_divided_difference))
}

/// Logarithmic mean `(x − y)/(log x − log y)`, equal to `∫₀¹ x^s y^(1−s) ds`.
///
/// Symmetric by construction; near `x = y` it switches to the series
/// `m·(1 − r²/3 − 4r⁴/45)` with `m = (x+y)/2`, `r = (x−y)/(x+y)`.
pub fn log_mean_kernel(x: f64, y: f64) -> f64 {
    let (a, b) = if x >= y { (x, y) } else { (y, x) };
    if a == b {
        return a;
    }
    let m = 0.5 * (a + b);
    let r = (a - b) / (a + b);
    if r <= SERIES_SWITCH {
        let r2 = r * r;
        m * (1.0 - r2 / 3.0 - 4.0 * r2 * r2 / 45.0)
    } else if r > 0.5 {
        (a - b) / (a.ln() - b.ln())
    } else {
        (a - b) / (2.0 * r.atanh())
    }
}

/// First divided difference of `log`: `1 / log_mean_kernel(x, y)`.
pub fn log_divided_difference(x: f64, y: f64) -> f64 {
    1.0 / log_mean_kernel(x, y)
}

/// First divided difference of `exp`: `(e^x − e^y)/(x − y)`, `e^x` on the diagonal.
pub fn exp_divided_difference(x: f64, y: f64) -> f64 {
    let d = 0.5 * (x - y);
    let mid = (0.5 * (x + y)).exp();
    let ad = d.abs();
    if ad <= SERIES_SWITCH {
        let d2 = d * d;
        mid * (1.0 + d2 / 6.0 + d2 * d2 / 120.0)
    } else {
        mid * d.sinh() / d
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
