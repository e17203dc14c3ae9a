//! Dense complex matrix substrate.
//!
//! Thin wrappers over `nalgebra` decompositions with explicit tolerances:
//! Hermitian functional calculus, null spaces, spectra and block assembly.

use crate::error::{Error, Result};
use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn, Schur, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Relative tolerance used where a Hermitian input is expected.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Bound constant for [`hermitian_sqrt`]: `‖S·S − M‖ ≤ SQRT_BOUND·tol·‖M‖`
/// up to rounding of order `n·eps·‖M‖`.
pub const SQRT_BOUND: f64 = 2.0;

const EPS: f64 = f64::EPSILON;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Promotes a real row-major array to a complex matrix.
pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c64(x, 0.0)))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Horizontal concatenation; all blocks must share the row count.
pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Vertical concatenation; all blocks must share the column count.
pub fn vstack(blocks: &[&CMatrix]) -> CMatrix {
    let cols = blocks.first().map_or(0, |b| b.ncols());
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((at, 0), (b.nrows(), cols)).copy_from(*b);
        at += b.nrows();
    }
    out
}

/// `[a b; c d]`.
pub fn block2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    vstack(&[&hstack(&[a, b]), &hstack(&[c, d])])
}

pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut(a.shape(), b.shape()).copy_from(b);
    out
}

pub fn sub(m: &CMatrix, r0: usize, c0: usize, rows: usize, cols: usize) -> CMatrix {
    m.view((r0, c0), (rows, cols)).into_owned()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match m.clone().try_svd(false, false, EPS, 0) {
        Some(svd) => svd.singular_values.max(),
        None => {
            let g = m.adjoint() * m;
            libm::sqrt(SymmetricEigen::new(hermitian_part(&g)).eigenvalues.max().max(0.0))
        }
    }
}

fn symmetry_residual(m: &CMatrix) -> f64 {
    operator_norm(&(m - m.adjoint()))
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch("square matrix expected"))
    }
}

/// Eigen-decomposition of the Hermitian part of `m`, after checking that
/// `‖M − M*‖ ≤ tol·‖M‖`.
pub fn hermitian_eig(m: &CMatrix, tol: f64) -> Result<(DVector<f64>, CMatrix)> {
    check_square(m)?;
    let scale = operator_norm(m);
    let residual = symmetry_residual(m);
    if residual > tol * scale {
        return Err(Error::NotHermitian { residual });
    }
    if m.is_empty() {
        return Ok((DVector::zeros(0), CMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::try_new(hermitian_part(m), EPS, 0).ok_or(Error::EigenFailure)?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

fn rebuild(vals: &DVector<f64>, vecs: &CMatrix) -> CMatrix {
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    hermitian_part(&(scaled * vecs.adjoint()))
}

/// Applies `f` to the spectrum of a positive semidefinite `m`.
/// Eigenvalues in `[−tol‖M‖, 0)` are clamped to zero.
pub fn psd_map(m: &CMatrix, tol: f64, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eig(m, tol)?;
    let floor = -tol * operator_norm(m);
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < floor {
        return Err(Error::NotPSD { min_eig });
    }
    let mapped = vals.map(|v| f(v.max(0.0)));
    Ok(rebuild(&mapped, &vecs))
}

/// Unique positive semidefinite square root.
pub fn hermitian_sqrt(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    psd_map(m, tol, libm::sqrt)
}

/// `M^{-1/2}` for strictly positive `m`.
pub fn hermitian_inv_sqrt(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    strictly_positive_map(m, tol, |v| 1.0 / libm::sqrt(v))
}

/// `M^{-1}` for strictly positive `m`, returned exactly Hermitian.
pub fn hermitian_inverse(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    strictly_positive_map(m, tol, |v| 1.0 / v)
}

fn strictly_positive_map(m: &CMatrix, tol: f64, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = hermitian_eig(m, tol)?;
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_eig > 0.0) && !vals.is_empty() {
        return Err(Error::NotPSD { min_eig });
    }
    Ok(rebuild(&vals.map(f), &vecs))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eig(m, HERMITIAN_TOL)?;
    Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Default rank threshold `max(rows, cols)·eps·σ_max`.
pub fn default_rank_tol(m: &CMatrix) -> f64 {
    m.nrows().max(m.ncols()) as f64 * EPS * operator_norm(m)
}

/// Singular values and right singular vectors (as columns of `V`) of `m`,
/// padded with zero rows so that `V` is square.
fn full_right_svd(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        vstack(&[m, &CMatrix::zeros(cols - m.nrows(), cols)])
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v = svd.v_t.expect("right singular vectors requested").adjoint();
    (svd.singular_values.iter().copied().collect(), v)
}

/// Number of singular values above `rank_tol` (default threshold if `None`).
pub fn numerical_rank(m: &CMatrix, rank_tol: Option<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(m));
    let (sv, _) = full_right_svd(m);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Orthonormal basis `φ` (m×d) of the numerical null space of a k×m matrix.
pub fn null_space_isometry(m: &CMatrix, rank_tol: Option<f64>) -> CMatrix {
    let cols = m.ncols();
    if cols == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(cols);
    }
    let tol = rank_tol.unwrap_or_else(|| default_rank_tol(m));
    let (sv, v) = full_right_svd(m);
    let picked: Vec<usize> = (0..cols).filter(|&j| sv[j] <= tol).collect();
    let mut phi = CMatrix::zeros(cols, picked.len());
    for (k, &j) in picked.iter().enumerate() {
        phi.set_column(k, &v.column(j));
    }
    phi
}

/// Real `2n×2n` matrix with the same spectrum as `m` together with its
/// conjugate; used so that the real Schur form yields complex eigenvalues.
fn realify(m: &CMatrix) -> DMatrix<f64> {
    let n = m.nrows();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            r[(i, j)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
            r[(i + n, j + n)] = z.re;
        }
    }
    r
}

/// Eigenvalues of a square complex matrix (each listed twice with its
/// conjugate partner from the realification, so only moduli are meaningful).
pub fn eigenvalue_moduli(m: &CMatrix) -> Result<Vec<f64>> {
    check_square(m)?;
    if m.is_empty() {
        return Ok(Vec::new());
    }
    // moduli are invariant under rotation by a unit scalar, and a real shift
    // can be undone on the realified spectrum; both restart a stagnating
    // double-shift iteration
    let limit = 100 * m.nrows().max(10);
    let scale = operator_norm(m).max(f64::MIN_POSITIVE);
    for k in 0..16 {
        let phase = C64::from_polar(1.0, 0.7 * k as f64);
        let shift = if k < 8 { 0.0 } else { 0.37 * (k - 7) as f64 * scale };
        let mut rotated = m * phase;
        for i in 0..m.nrows() {
            rotated[(i, i)] += c64(shift, 0.0);
        }
        if let Some(schur) = Schur::try_new(realify(&rotated), EPS, limit) {
            return Ok(schur.complex_eigenvalues().iter().map(|z| (z - shift).norm()).collect());
        }
    }
    Err(Error::EigenFailure)
}

pub fn spectral_radius(m: &CMatrix) -> Result<f64> {
    Ok(eigenvalue_moduli(m)?.into_iter().fold(0.0, f64::max))
}

/// LU solve `a·x = b`; `None` when a pivot is negligible relative to the
/// largest one.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Option<CMatrix> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return None;
    }
    if a.is_empty() {
        return Some(b.clone());
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let diag = u.diagonal();
    let big = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let small = diag.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if !(small > a.nrows() as f64 * EPS * big) {
        return None;
    }
    let x = lu.solve(b)?;
    is_finite(&x).then_some(x)
}

pub fn inverse(a: &CMatrix) -> Option<CMatrix> {
    lu_solve(a, &identity(a.nrows()))
}

/// Complex logarithm of the determinant from LU pivots.
pub fn log_det(a: &CMatrix) -> Option<C64> {
    if !a.is_square() {
        return None;
    }
    if a.is_empty() {
        return Some(c64(0.0, 0.0));
    }
    let lu = a.clone().lu();
    let sign: f64 = lu.p().determinant();
    let mut acc = c64(0.0, 0.0);
    for z in lu.u().diagonal().iter() {
        if z.norm() == 0.0 {
            return None;
        }
        acc += z.ln();
    }
    if sign < 0.0 {
        acc += c64(0.0, core::f64::consts::PI);
    }
    Some(acc)
}

/// Cholesky factorization of the Hermitian part of `m`, or `None` unless `m ≫ 0`.
///
/// The complex factorization in `nalgebra` takes complex square roots of
/// negative pivots instead of failing, so pivots are checked afterwards.
pub fn hermitian_cholesky(m: &CMatrix) -> Option<Cholesky<C64, Dyn>> {
    let chol = Cholesky::new(hermitian_part(m))?;
    let l = chol.l_dirty();
    let ok = (0..m.nrows()).all(|i| {
        let d = l[(i, i)];
        d.re > 0.0 && d.im.abs() <= 1e-8 * d.re && d.re.is_finite()
    });
    ok.then_some(chol)
}

pub fn is_positive_definite(m: &CMatrix) -> bool {
    m.is_empty() || hermitian_cholesky(m).is_some()
}

pub fn pow(m: &CMatrix, k: usize) -> CMatrix {
    let mut acc = identity(m.nrows());
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Smallest `k ≤ n` with `Z^k = 0` exactly, if any.
pub fn nilpotency_index(m: &CMatrix) -> Option<usize> {
    if m.is_empty() {
        return Some(0);
    }
    let mut p = m.clone();
    for k in 1..=m.nrows() {
        if p.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return Some(k);
        }
        p = &p * m;
    }
    None
}
