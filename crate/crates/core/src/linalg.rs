//! Dense complex matrix kernel: Hermitian eigendecomposition, spectral
//! calculus on positive matrices, operator norm and quadratic forms.
//!
//! Every positive matrix carries the eigendecomposition it was built from, so
//! all powers of one operand (`A^s`, `A^r`, `A^{2s}` ...) are exact spectral
//! functions of the same computed matrix. Inequalities that compare such
//! powers then hold up to roundoff rather than up to solver noise.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{RadError, Result};
use crate::tolerance::ToleranceConfig;

const EIGEN_MAX_SWEEPS: usize = 10_000;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(RadError::InvalidMatrix("dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(RadError::InvalidMatrix(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let entries: Vec<Complex64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)))
            .collect();
        Self::from_row_major(dim, &entries)
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(RadError::InvalidMatrix(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(RadError::InvalidMatrix("non-finite entry".into()));
        }
        Ok(ComplexMatrix(m))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn diag(values: &[Complex64]) -> Self {
        ComplexMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix(&self.0 * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        ComplexMatrix(self.0.map(|z| z * c))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `(T + T*)/2`, exactly Hermitian by construction.
    pub fn hermitian_part(&self) -> HermitianMatrix {
        HermitianMatrix(hermitize(&self.0))
    }

    /// `(T - T*)/(2i)`, exactly Hermitian by construction.
    pub fn skew_part(&self) -> HermitianMatrix {
        let d = (&self.0 - self.0.adjoint()) * Complex64::new(0.0, -0.5);
        HermitianMatrix(hermitize(&d))
    }

    /// `Re(e^{i theta} T)` as a Hermitian matrix.
    pub fn rotated_real_part(&self, theta: f64) -> HermitianMatrix {
        let m = &self.0 * Complex64::from_polar(1.0, theta);
        HermitianMatrix(hermitize(&m))
    }

    pub(crate) fn dim_check(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(RadError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let mut h = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            h[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
        h[(j, j)].im = 0.0;
    }
    h
}

/// Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(DMatrix<Complex64>);

impl HermitianMatrix {
    /// Validates `‖M − M*‖_max ≤ herm_tol·max(1, ‖M‖_max)` and symmetrizes.
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let n = m.dim();
        let mut deviation: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                deviation = deviation.max((m.0[(i, j)] - m.0[(j, i)].conj()).norm());
            }
        }
        let allowed = tol.herm_tol * m.max_abs().max(1.0);
        if deviation > allowed {
            return Err(RadError::NotHermitian {
                deviation,
                tolerance: allowed,
            });
        }
        Ok(HermitianMatrix(hermitize(&m.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.clone())
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// Eigenvalues only, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let vals = self.0.symmetric_eigenvalues();
        let mut v: Vec<f64> = vals.iter().copied().collect();
        if v.iter().any(|x| !x.is_finite()) {
            return Err(RadError::EigenFailure { dim: self.dim() });
        }
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("non-empty"))
    }
}

/// Eigendecomposition `H = V diag(values) V*` with ascending eigenvalues and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl Eigen {
    /// Reassembles `V diag(phi(values)) V*`.
    pub fn compose(&self, phi: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = phi(lam);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        hermitize(&(scaled * self.vectors.adjoint()))
    }

    /// The `k`-th eigenvector as a unit vector.
    pub fn vector(&self, k: usize) -> UnitVector {
        let col: Vec<Complex64> = self.vectors.column(k).iter().copied().collect();
        UnitVector::normalized(col).expect("eigenvectors are nonzero")
    }
}

/// `H = V diag(λ) V*` with `λ` ascending.
pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<Eigen> {
    let n = h.dim();
    let dec = h
        .0
        .clone()
        .try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_SWEEPS * n)
        .ok_or(RadError::EigenFailure { dim: n })?;
    if dec.eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(RadError::EigenFailure { dim: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
    let values = order.iter().map(|&k| dec.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| dec.eigenvectors[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// Positive semidefinite matrix together with its eigendecomposition.
///
/// Eigenvalues stored in the cache are already clamped to be nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    matrix: DMatrix<Complex64>,
    eigen: Eigen,
}

impl PsdMatrix {
    /// Validates positivity: `λ_min ≥ −psd_tol·max(1, λ_max)`.
    pub fn new(h: HermitianMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let eigen = hermitian_eigen(&h)?;
        Self::from_eigen(h.0, eigen, tol)
    }

    /// Convenience: Hermitian validation followed by positivity validation.
    pub fn from_complex(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        Self::new(HermitianMatrix::new(m, tol)?, tol)
    }

    fn from_eigen(matrix: DMatrix<Complex64>, mut eigen: Eigen, tol: &ToleranceConfig) -> Result<Self> {
        let top = eigen.values.last().copied().unwrap_or(0.0);
        let floor = -tol.psd_tol * top.max(1.0);
        let min = eigen.values.first().copied().unwrap_or(0.0);
        if min < floor {
            return Err(RadError::NotPsd {
                min_eigenvalue: min,
                tolerance: -floor,
            });
        }
        for v in eigen.values.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(PsdMatrix { matrix, eigen })
    }

    /// Builds `V diag(values) V*` from nonnegative values and orthonormal columns.
    pub(crate) fn from_spectrum(values: Vec<f64>, vectors: DMatrix<Complex64>) -> Self {
        let eigen = Eigen { values, vectors };
        let matrix = eigen.compose(|x| x);
        PsdMatrix { matrix, eigen }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_spectrum(vec![1.0; dim], DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eigen
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn as_complex(&self) -> ComplexMatrix {
        ComplexMatrix(self.matrix.clone())
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigen.values.last().copied().unwrap_or(0.0)
    }
}

/// Complex vector of unit Euclidean norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct UnitVector(Vec<Complex64>);

impl UnitVector {
    pub fn new(entries: Vec<Complex64>, tol: &ToleranceConfig) -> Result<Self> {
        let norm = euclid(&entries);
        if entries.is_empty() || (norm - 1.0).abs() > tol.unit_tol {
            return Err(RadError::NotUnit { norm });
        }
        Ok(UnitVector(entries))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(mut entries: Vec<Complex64>) -> Result<Self> {
        let norm = euclid(&entries);
        if entries.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(RadError::NotUnit { norm });
        }
        for z in entries.iter_mut() {
            *z /= norm;
        }
        Ok(UnitVector(entries))
    }

    /// The `k`-th standard basis vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub(crate) fn raw_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.0
    }

    /// `⟨x, y⟩`, linear in `self`, conjugate-linear in `other`.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }
}

impl TryFrom<Vec<[f64; 2]>> for UnitVector {
    type Error = RadError;
    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        UnitVector::normalized(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<UnitVector> for Vec<[f64; 2]> {
    fn from(v: UnitVector) -> Self {
        v.0.iter().map(|z| [z.re, z.im]).collect()
    }
}

pub(crate) fn euclid(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|T| = (T*T)^{1/2}`.
///
/// Built from the singular value decomposition `T = U Σ V*` as `V Σ V*`,
/// which keeps small singular values accurate to roundoff of `‖T‖` rather
/// than of `‖T‖²`.
pub fn abs_op(t: &ComplexMatrix) -> Result<PsdMatrix> {
    Ok(abs_pair(t)?.0)
}

/// `|T*| = (TT*)^{1/2}`, i.e. `U Σ U*`.
pub fn abs_adj(t: &ComplexMatrix) -> Result<PsdMatrix> {
    Ok(abs_pair(t)?.1)
}

/// `(|T|, |T*|)` from one singular value decomposition.
pub fn abs_pair(t: &ComplexMatrix) -> Result<(PsdMatrix, PsdMatrix)> {
    let n = t.dim();
    let svd = t
        .0
        .clone()
        .try_svd(true, true, f64::EPSILON, EIGEN_MAX_SWEEPS * n)
        .ok_or(RadError::EigenFailure { dim: n })?;
    let u = svd.u.ok_or(RadError::EigenFailure { dim: n })?;
    let v = svd.v_t.ok_or(RadError::EigenFailure { dim: n })?.adjoint();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let sigma: Vec<f64> = order.iter().map(|&k| svd.singular_values[k].max(0.0)).collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(RadError::EigenFailure { dim: n });
    }
    let v_sorted = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let u_sorted = DMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((
        PsdMatrix::from_spectrum(sigma.clone(), v_sorted),
        PsdMatrix::from_spectrum(sigma, u_sorted),
    ))
}

/// `A^s` for `s ≥ 0`, with `0^0 = 1` so that `A^0 = I`.
pub fn psd_power(a: &PsdMatrix, s: f64) -> Result<PsdMatrix> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(RadError::domain(format!("exponent must satisfy s >= 0, got {s}")));
    }
    Ok(spectral_map(a, |t| spectral_pow(t, s)))
}

/// `φ(A) = V diag(φ(λ)) V*` for a nonnegative scalar function `φ`.
pub fn spectral_apply(a: &PsdMatrix, phi: impl Fn(f64) -> f64) -> Result<PsdMatrix> {
    for &lam in &a.eigen.values {
        let value = phi(lam);
        if !(value >= 0.0) || !value.is_finite() {
            return Err(RadError::FunctionRange { point: lam, value });
        }
    }
    Ok(spectral_map(a, phi))
}

fn spectral_map(a: &PsdMatrix, phi: impl Fn(f64) -> f64) -> PsdMatrix {
    let mut pairs: Vec<(f64, usize)> = a
        .eigen
        .values
        .iter()
        .enumerate()
        .map(|(k, &lam)| (phi(lam), k))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = a.dim();
    let vectors = DMatrix::from_fn(n, n, |i, j| a.eigen.vectors[(i, pairs[j].1)]);
    PsdMatrix::from_spectrum(pairs.into_iter().map(|p| p.0).collect(), vectors)
}

/// `t^s` on `t ≥ 0` with `0^0 = 1`.
pub fn spectral_pow(t: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        t.powf(s)
    }
}

/// Largest singular value.
pub fn op_norm(t: &ComplexMatrix) -> Result<f64> {
    let n = t.dim();
    let svd = t
        .0
        .clone()
        .try_svd(false, false, f64::EPSILON, EIGEN_MAX_SWEEPS * n)
        .ok_or(RadError::EigenFailure { dim: n })?;
    let top = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    if !top.is_finite() {
        return Err(RadError::EigenFailure { dim: n });
    }
    Ok(top)
}

/// `⟨Ax, x⟩ = x* A x`.
pub fn quad_form(a: &ComplexMatrix, x: &UnitVector) -> Result<Complex64> {
    if a.dim() != x.dim() {
        return Err(RadError::DimensionMismatch {
            expected: a.dim(),
            found: x.dim(),
        });
    }
    Ok(quad(&a.0, x.as_slice()))
}

/// `⟨Ax, y⟩ = y* A x` without dimension checks.
#[inline]
pub(crate) fn bilinear(a: &DMatrix<Complex64>, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let n = x.len();
    let data = a.as_slice();
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, xj) in x.iter().enumerate() {
        let col = &data[j * n..(j + 1) * n];
        let mut s = Complex64::new(0.0, 0.0);
        for (aij, yi) in col.iter().zip(y) {
            s += aij * yi.conj();
        }
        acc += s * xj;
    }
    acc
}

#[inline]
pub(crate) fn quad(a: &DMatrix<Complex64>, x: &[Complex64]) -> Complex64 {
    bilinear(a, x, x)
}

/// Real part of `⟨Ax, x⟩` for a Hermitian `A`.
#[inline]
pub(crate) fn quad_re(a: &DMatrix<Complex64>, x: &[Complex64]) -> f64 {
    quad(a, x).re
}

/// `‖Ax‖`.
#[inline]
pub(crate) fn apply_norm(a: &DMatrix<Complex64>, x: &[Complex64]) -> f64 {
    let n = x.len();
    let data = a.as_slice();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, xj) in x.iter().enumerate() {
        let col = &data[j * n..(j + 1) * n];
        for (o, aij) in out.iter_mut().zip(col) {
            *o += aij * xj;
        }
    }
    euclid(&out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    #[test]
    fn eigen_identity_and_diagonal() {
        let tol = ToleranceConfig::default();
        let e = hermitian_eigen(&ComplexMatrix::identity(3).hermitian_part()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let vtv = e.vectors.adjoint() * &e.vectors;
        assert!(max_dev(&vtv, &DMatrix::identity(3, 3)) < 1e-12);

        let d = HermitianMatrix::new(ComplexMatrix::real_diag(&[3.0, 1.0, 2.0]), &tol).unwrap();
        let e = hermitian_eigen(&d).unwrap();
        for (got, want) in e.values.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigen_swap_matrix() {
        let tol = ToleranceConfig::default();
        let h = HermitianMatrix::new(
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
            &tol,
        )
        .unwrap();
        let e = hermitian_eigen(&h).unwrap();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
        let rebuilt = e.compose(|x| x);
        assert!(max_dev(&rebuilt, h.as_dmatrix()) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let tol = ToleranceConfig::default();
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m, &tol),
            Err(RadError::NotHermitian { .. })
        ));
    }

    #[test]
    fn abs_of_diagonal_and_nilpotent() {
        let t = ComplexMatrix::diag(&[c(-2.0, 0.0), c(0.0, 3.0)]);
        let a = abs_op(&t).unwrap();
        assert!(max_dev(a.as_dmatrix(), ComplexMatrix::real_diag(&[2.0, 3.0]).as_dmatrix()) < 1e-12);

        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let (abs, adj) = abs_pair(&n).unwrap();
        assert!(max_dev(abs.as_dmatrix(), ComplexMatrix::real_diag(&[0.0, 1.0]).as_dmatrix()) < 1e-12);
        assert!(max_dev(adj.as_dmatrix(), ComplexMatrix::real_diag(&[1.0, 0.0]).as_dmatrix()) < 1e-12);
    }

    #[test]
    fn abs_of_unitary_and_zero() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_row_major(2, &[c(s, 0.0), c(0.0, s), c(0.0, s), c(s, 0.0)]).unwrap();
        let a = abs_op(&u).unwrap();
        assert!(max_dev(a.as_dmatrix(), &DMatrix::identity(2, 2)) < 1e-12);
        let z = abs_adj(&ComplexMatrix::zeros(3)).unwrap();
        assert!(z.as_dmatrix().iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn normal_matrix_has_equal_abs_values() {
        let t = ComplexMatrix::diag(&[c(1.0, 2.0), c(-0.5, 0.1), c(0.0, -3.0)]);
        let (abs, adj) = abs_pair(&t).unwrap();
        assert!(max_dev(abs.as_dmatrix(), adj.as_dmatrix()) < 1e-12);
    }

    #[test]
    fn powers_of_diagonal() {
        let tol = ToleranceConfig::default();
        let a = PsdMatrix::from_complex(ComplexMatrix::real_diag(&[4.0, 9.0]), &tol).unwrap();
        let r = psd_power(&a, 0.5).unwrap();
        assert!(max_dev(r.as_dmatrix(), ComplexMatrix::real_diag(&[2.0, 3.0]).as_dmatrix()) < 1e-12);
        let z = psd_power(&a, 0.0).unwrap();
        assert!(max_dev(z.as_dmatrix(), &DMatrix::identity(2, 2)) < 1e-12);
        let b = PsdMatrix::from_complex(ComplexMatrix::real_diag(&[2.0]), &tol).unwrap();
        assert_abs_diff_eq!(psd_power(&b, 3.0).unwrap().as_dmatrix()[(0, 0)].re, 8.0, epsilon = 1e-12);
        assert!(matches!(psd_power(&a, -1.0), Err(RadError::Domain(_))));
    }

    #[test]
    fn zero_power_of_singular_is_identity() {
        let tol = ToleranceConfig::default();
        let a = PsdMatrix::from_complex(ComplexMatrix::real_diag(&[0.0, 2.0]), &tol).unwrap();
        let z = psd_power(&a, 0.0).unwrap();
        assert!(max_dev(z.as_dmatrix(), &DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn rejects_indefinite() {
        let tol = ToleranceConfig::default();
        let m = ComplexMatrix::real_diag(&[1.0, -0.1]);
        assert!(matches!(PsdMatrix::from_complex(m, &tol), Err(RadError::NotPsd { .. })));
        // roundoff-sized negatives are clamped
        let m = ComplexMatrix::real_diag(&[1.0, -1e-12]);
        let a = PsdMatrix::from_complex(m, &tol).unwrap();
        assert_eq!(a.eigen().values[0], 0.0);
    }

    #[test]
    fn spectral_apply_cases() {
        let tol = ToleranceConfig::default();
        let a = PsdMatrix::from_complex(ComplexMatrix::real_diag(&[4.0, 0.25, 1.0]), &tol).unwrap();
        let same = spectral_apply(&a, |t| t).unwrap();
        assert!(max_dev(same.as_dmatrix(), a.as_dmatrix()) < 1e-12);
        let d4 = PsdMatrix::from_complex(ComplexMatrix::real_diag(&[4.0]), &tol).unwrap();
        assert_abs_diff_eq!(spectral_apply(&d4, f64::sqrt).unwrap().as_dmatrix()[(0, 0)].re, 2.0, epsilon = 1e-14);

        let alpha = 0.3;
        let f = spectral_apply(&a, |t| t.powf(alpha)).unwrap();
        let g = spectral_apply(&a, |t| t.powf(1.0 - alpha)).unwrap();
        let prod = f.as_dmatrix() * g.as_dmatrix();
        assert!(max_dev(&prod, a.as_dmatrix()) < 1e-12);

        let p = psd_power(&a, 1.7).unwrap();
        let s = spectral_apply(&a, |t| t.powf(1.7)).unwrap();
        assert!(max_dev(p.as_dmatrix(), s.as_dmatrix()) < 1e-10);

        assert!(matches!(
            spectral_apply(&a, |t| t - 2.0),
            Err(RadError::FunctionRange { .. })
        ));
        assert!(matches!(
            spectral_apply(&a, |_| f64::NAN),
            Err(RadError::FunctionRange { .. })
        ));
    }

    #[test]
    fn operator_norms() {
        assert_abs_diff_eq!(op_norm(&ComplexMatrix::identity(4)).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(op_norm(&ComplexMatrix::real_diag(&[1.0, -3.0])).unwrap(), 3.0, epsilon = 1e-14);
        let t = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(op_norm(&t).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn quadratic_forms() {
        let tol = ToleranceConfig::default();
        let x = UnitVector::normalized(vec![c(0.3, 0.1), c(-0.2, 0.7)]).unwrap();
        assert_abs_diff_eq!(quad_form(&ComplexMatrix::identity(2), &x).unwrap().re, 1.0, epsilon = 1e-14);
        let e1 = UnitVector::basis(2, 0);
        assert_abs_diff_eq!(quad_form(&ComplexMatrix::real_diag(&[2.0, 0.0]), &e1).unwrap().re, 2.0, epsilon = 1e-14);
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = UnitVector::new(vec![c(s, 0.0), c(s, 0.0)], &tol).unwrap();
        let q = quad_form(&n, &v).unwrap();
        assert_abs_diff_eq!(q.re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(q.im, 0.0, epsilon = 1e-14);
        assert!(matches!(
            quad_form(&ComplexMatrix::identity(3), &v),
            Err(RadError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_vector_validation() {
        let tol = ToleranceConfig::default();
        assert!(UnitVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)], &tol).is_err());
        assert!(UnitVector::normalized(vec![c(0.0, 0.0)]).is_err());
        let apply = apply_norm(ComplexMatrix::real_diag(&[3.0, 4.0]).as_dmatrix(), UnitVector::basis(2, 1).as_slice());
        assert_abs_diff_eq!(apply, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn matrix_construction_errors() {
        assert!(ComplexMatrix::from_row_major(2, &[c(1.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::from_row_major(1, &[c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::from_row_major(0, &[]).is_err());
        let m = ComplexMatrix::from_row_major(2, &[c(1.0, 2.0), c(3.0, 4.0), c(5.0, 6.0), c(7.0, 8.0)]).unwrap();
        assert_eq!(m.get(0, 1), c(3.0, 4.0));
        assert_eq!(m.to_row_major()[2], c(5.0, 6.0));
    }
}
