//! Dense complex linear algebra for small Hermitian operators.
//!
//! Density operators and measurement elements in this crate live in spaces of
//! at most a few hundred dimensions, so everything here is a plain row-major
//! `Vec<Complex64>` with O(d^3) algorithms. Hermitian eigendecomposition uses
//! cyclic Jacobi rotations, which are slow but accurate to working precision
//! for every eigenvalue, including the tiny ones that truncated coherent-state
//! density operators produce.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance on `|m - m^dag|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Relative rank cutoff applied to the largest eigenvalue when none is given.
pub const DEFAULT_RELATIVE_CUTOFF: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square or non-finite input.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "{} entries cannot form a {dim}x{dim} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The rank-1 operator `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entry of `|m - m^dag|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &Self, s: f64) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, 1.0)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, -1.0)?;
        Ok(out)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch(self.dim, v.len()));
        }
        Ok((0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect())
    }

    /// `<v|M|v>`.
    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        let mv = self.apply(v)?;
        Ok(v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Inner product `<a|b>`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.vectors[(r, k)]).collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `DEFAULT_RELATIVE_CUTOFF` times the largest eigenvalue (zero for non-positive spectra).
    pub fn default_cutoff(&self) -> f64 {
        DEFAULT_RELATIVE_CUTOFF * self.max_value().max(0.0)
    }

    /// `V diag(w) V^dag` for arbitrary real weights.
    pub fn compose(&self, weights: &[f64]) -> CMatrix {
        let n = self.dim();
        let v = &self.vectors;
        CMatrix::from_fn(n, |r, c| {
            weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(k, w)| v[(r, k)] * v[(c, k)].conj() * *w)
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.compose(&self.values)
    }

    /// Applies `f` to every eigenvalue above `rank_cutoff`, zeroing the rest.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64, rank_cutoff: f64) -> Result<CMatrix> {
        let mut weights = Vec::with_capacity(self.dim());
        for &lambda in &self.values {
            if lambda > rank_cutoff {
                let w = f(lambda);
                if !w.is_finite() {
                    return Err(Error::DomainError(lambda));
                }
                weights.push(w);
            } else {
                weights.push(0.0);
            }
        }
        Ok(self.compose(&weights))
    }

    /// Orthogonal projector onto the eigenvectors above `rank_cutoff`.
    pub fn support_projector(&self, rank_cutoff: f64) -> CMatrix {
        let weights: Vec<f64> = self
            .values
            .iter()
            .map(|&l| if l > rank_cutoff { 1.0 } else { 0.0 })
            .collect();
        self.compose(&weights)
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized as `(m + m^dag)/2` once its asymmetry is known to be
/// below [`HERMITIAN_TOL`].
pub fn herm_eig(m: &CMatrix) -> Result<HermEigen> {
    let defect = m.hermitian_defect();
    if defect.is_nan() || defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    for k in 0..n {
        a[(k, k)].im = 0.0;
    }
    let mut v = CMatrix::identity(n);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotations = 0usize;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                let dp = a[(p, p)].re;
                let dq = a[(q, q)].re;
                if r == 0.0 {
                    continue;
                }
                // Negligible against both diagonal entries: drop it.
                if r <= 1e-2 * f64::EPSILON * (dp.abs() + dq.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, r, dp, dq);
                rotations += 1;
            }
        }
        converged = rotations == 0;
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermEigen { values, vectors })
}

/// One two-sided rotation `A <- U^dag A U`, `V <- V U` that zeroes `A[p][q]`.
///
/// `U = D P` where `D` removes the phase of `A[p][q]` and `P` is the real
/// Jacobi rotation of the resulting symmetric 2x2 block.
#[allow(clippy::too_many_arguments)]
fn rotate(
    a: &mut CMatrix,
    v: &mut CMatrix,
    p: usize,
    q: usize,
    apq: Complex64,
    r: f64,
    dp: f64,
    dq: f64,
) {
    let n = a.dim();
    let tau = (dq - dp) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + tau.hypot(1.0))
    } else {
        -1.0 / (-tau + tau.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let phase = (apq / r).conj();

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase * (-s);
    let u_qq = phase * c;

    // columns: A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // rows: A <- U^dag A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, p)] = Complex64::new(dp - t * r, 0.0);
    a[(q, q)] = Complex64::new(dq + t * r, 0.0);
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// `V diag(f(lambda_k) if lambda_k > rank_cutoff else 0) V^dag`.
///
/// With `f = x^{-1/2}` this is the pseudo-inverse square root on the support of `m`.
pub fn matrix_function(m: &CMatrix, f: impl Fn(f64) -> f64, rank_cutoff: f64) -> Result<CMatrix> {
    herm_eig(m)?.apply_fn(f, rank_cutoff)
}

/// Pseudo-inverse square root with the default relative rank cutoff.
pub fn pinv_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let eig = herm_eig(m)?;
    eig.apply_fn(|x| x.powf(-0.5), eig.default_cutoff())
}

/// `Tr(a b)`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    let n = a.dim();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..n {
            acc += a[(r, c)] * b[(c, r)];
        }
    }
    Ok(acc)
}

/// Real part of `Tr(a b)`; the imaginary part vanishes up to round-off for Hermitian pairs.
pub fn trace_product_real(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    Ok(trace_product(a, b)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn check_decomposition(m: &CMatrix) {
        let eig = herm_eig(m).unwrap();
        let scale = 1.0 + m.max_abs();
        assert!(eig.reconstruct().max_abs_diff(m).unwrap() <= 1e-10 * scale);
        let vtv = eig.vectors.adjoint().matmul(&eig.vectors).unwrap();
        assert!(vtv.max_abs_diff(&CMatrix::identity(m.dim())).unwrap() <= 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = herm_eig(&CMatrix::identity(2)).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0]);
        check_decomposition(&CMatrix::identity(2));
    }

    #[test]
    fn diagonal_input_is_left_alone() {
        let m = CMatrix::from_real_diag(&[0.75, 0.25]);
        let eig = herm_eig(&m).unwrap();
        assert_eq!(eig.values, vec![0.25, 0.75]);
        assert_eq!(eig.vector(0), vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn two_qubit_density_eigenvalues() {
        let th = FRAC_PI_6;
        let s0 = [c(th.cos(), 0.0), c(th.sin(), 0.0)];
        let s1 = [c(th.sin(), 0.0), c(th.cos(), 0.0)];
        let mut rho = CMatrix::outer(&s0).scaled(0.5);
        rho.add_scaled(&CMatrix::outer(&s1), 0.5).unwrap();
        let eig = herm_eig(&rho).unwrap();
        let l = (2.0 * FRAC_PI_3).sin();
        assert_close(eig.values[0], (1.0 - l) / 2.0, 1e-14);
        assert_close(eig.values[1], (1.0 + l) / 2.0, 1e-14);
    }

    #[test]
    fn complex_hermitian_decomposition() {
        let m = CMatrix::from_row_major(
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, -1.0),
                c(0.0, 0.5),
                c(1.0, 1.0),
                c(-1.0, 0.0),
                c(0.25, 0.0),
                c(0.0, -0.5),
                c(0.25, 0.0),
                c(3.0, 0.0),
            ],
        )
        .unwrap();
        check_decomposition(&m);
        let eig = herm_eig(&m).unwrap();
        assert_close(eig.values.iter().sum::<f64>(), 4.0, 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(1e-6, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn symmetrizes_small_asymmetry() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        m[(1, 0)] = c(0.5 + 1e-12, 0.0);
        let eig = herm_eig(&m).unwrap();
        assert_close(eig.values[0], 0.5, 1e-11);
        assert_close(eig.values[1], 1.5, 1e-11);
    }

    #[test]
    fn from_row_major_validation() {
        assert!(CMatrix::from_row_major(2, vec![ONE; 3]).is_err());
        assert!(CMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CMatrix::from_row_major(0, vec![]).is_err());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let m = CMatrix::from_real_diag(&[4.0, 9.0]);
        let r = matrix_function(&m, f64::sqrt, 0.0).unwrap();
        assert!(
            r.max_abs_diff(&CMatrix::from_real_diag(&[2.0, 3.0]))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn pseudo_inverse_sqrt_zeroes_null_space() {
        let m = CMatrix::from_real_diag(&[0.0, 1.0]);
        let r = matrix_function(&m, |x| x.powf(-0.5), 1e-12).unwrap();
        assert!(r.max_abs_diff(&m).unwrap() < 1e-15);
    }

    #[test]
    fn inverse_sqrt_of_maximally_mixed() {
        let r = pinv_sqrt(&CMatrix::identity(2).scaled(0.5)).unwrap();
        let want = CMatrix::identity(2).scaled(2f64.sqrt());
        assert!(r.max_abs_diff(&want).unwrap() < 1e-14);
    }

    #[test]
    fn domain_error_on_retained_eigenvalue() {
        let m = CMatrix::from_real_diag(&[-1.0, 1.0]);
        let err = matrix_function(&m, f64::sqrt, -2.0).unwrap_err();
        assert_eq!(err, Error::DomainError(-1.0));
    }

    #[test]
    fn trace_products() {
        let i2 = CMatrix::identity(2);
        assert_eq!(trace_product(&i2, &i2).unwrap(), c(2.0, 0.0));
        let p0 = CMatrix::from_real_diag(&[1.0, 0.0]);
        let p1 = CMatrix::from_real_diag(&[0.0, 1.0]);
        assert_eq!(trace_product_real(&p0, &p1).unwrap(), 0.0);
        assert_eq!(
            trace_product(&i2, &CMatrix::identity(3)),
            Err(Error::DimMismatch(2, 3))
        );
    }

    #[test]
    fn trace_product_with_projector_state() {
        let th = FRAC_PI_6;
        let rho0 = CMatrix::outer(&[c(th.cos(), 0.0), c(th.sin(), 0.0)]);
        let p0 = CMatrix::from_real_diag(&[1.0, 0.0]);
        assert_close(trace_product_real(&p0, &rho0).unwrap(), 0.75, 1e-15);
    }

    #[test]
    fn degenerate_and_zero_matrices() {
        check_decomposition(&CMatrix::zeros(4));
        let v = [c(0.5, 0.5), c(0.5, -0.5), c(0.0, 0.0)];
        check_decomposition(&CMatrix::outer(&v));
        let eig = herm_eig(&CMatrix::outer(&v)).unwrap();
        assert_close(eig.max_value(), 1.0, 1e-15);
    }
}
