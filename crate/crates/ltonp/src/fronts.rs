//! Leech, Toeplitz-corona and commutant-lifting problems as interpolation instances.
//!
//! The Leech problem `G·F = K` is reduced to its order-`N` finite section: `Z`
//! is the nilpotent block shift on `C^{N·v}` and `B`, `B̃` stack the first `N`
//! Taylor coefficients of `G` and `K`. A solution of the reduced instance
//! satisfies `G·F ≡ K (mod λ^N)` with `‖F‖∞ ≤ 1`; exact equality is the limit
//! `N → ∞` and is not claimed.

use crate::complementary::ComplementaryPair;
use crate::error::{Error, Result};
use crate::kernel::{hermitian_inv_sqrt, identity, operator_norm, CMatrix, HERMITIAN_TOL};
use crate::problem::{gramians, Classification, PickData, ProblemData, STEIN_TOL};
use crate::solver::CoefficientSystem;
use crate::system::RationalSystem;
use alloc::vec::Vec;

/// Default relative tolerance for the co-isometry check.
pub const COISOMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LeechInstance {
    /// Taylor coefficients of `G`, each `v×p`.
    pub g_coeffs: Vec<CMatrix>,
    /// Taylor coefficients of `K`, each `v×q`.
    pub k_coeffs: Vec<CMatrix>,
    pub order: usize,
}

impl LeechInstance {
    pub fn new(g_coeffs: Vec<CMatrix>, k_coeffs: Vec<CMatrix>, order: usize) -> Result<Self> {
        let (Some(g0), Some(k0)) = (g_coeffs.first(), k_coeffs.first()) else {
            return Err(Error::DimensionMismatch("G and K need at least one coefficient"));
        };
        let (v, p, q) = (g0.nrows(), g0.ncols(), k0.ncols());
        if v == 0 || p == 0 || q == 0 || order == 0 {
            return Err(Error::DimensionMismatch("empty Leech data"));
        }
        if g_coeffs.iter().any(|g| g.shape() != (v, p)) || k_coeffs.iter().any(|k| k.shape() != (v, q)) {
            return Err(Error::DimensionMismatch("Leech coefficients must share shapes"));
        }
        Ok(Self { g_coeffs, k_coeffs, order })
    }

    pub fn v(&self) -> usize {
        self.g_coeffs[0].nrows()
    }
}

fn stacked(coeffs: &[CMatrix], order: usize, rows: usize, cols: usize) -> CMatrix {
    let mut out = CMatrix::zeros(order * rows, cols);
    for (k, c) in coeffs.iter().take(order).enumerate() {
        out.view_mut((k * rows, 0), (rows, cols)).copy_from(c);
    }
    out
}

/// Block lower shift on `C^{order·v}`.
pub fn block_shift(order: usize, v: usize) -> CMatrix {
    let mut z = CMatrix::zeros(order * v, order * v);
    for k in 1..order {
        z.view_mut((k * v, (k - 1) * v), (v, v)).copy_from(&identity(v));
    }
    z
}

pub fn leech_truncate(leech: &LeechInstance) -> Result<ProblemData> {
    let (v, n) = (leech.v(), leech.order);
    let p = leech.g_coeffs[0].ncols();
    let q = leech.k_coeffs[0].ncols();
    ProblemData::new(
        block_shift(n, v),
        stacked(&leech.g_coeffs, n, v, p),
        stacked(&leech.k_coeffs, n, v, q),
    )
}

/// Classification of the order-`N` Pick operator; a necessary condition for
/// the untruncated problem.
pub fn leech_solvability(leech: &LeechInstance) -> Result<Classification> {
    let prob = leech_truncate(leech)?;
    Ok(gramians(&prob, STEIN_TOL)?.classification)
}

/// `max_{k < orders} ‖Σ_{j≤k} G_j F_{k−j} − K_k‖` from exact Taylor coefficients of `F`.
pub fn leech_residual(leech: &LeechInstance, f: &RationalSystem, orders: usize) -> Result<f64> {
    let v = leech.v();
    let (p, q) = (leech.g_coeffs[0].ncols(), leech.k_coeffs[0].ncols());
    if f.output_dim() != p || f.input_dim() != q {
        return Err(Error::DimensionMismatch("F must be p×q"));
    }
    let fk = f.taylor_coefficients(orders);
    let mut worst: f64 = 0.0;
    for k in 0..orders {
        let mut acc = leech.k_coeffs.get(k).cloned().unwrap_or_else(|| CMatrix::zeros(v, q));
        acc = -acc;
        for (j, g) in leech.g_coeffs.iter().enumerate().take(k + 1) {
            acc += g * &fk[k - j];
        }
        worst = worst.max(operator_norm(&acc));
    }
    Ok(worst)
}

/// Toeplitz-corona data: the Leech problem with `K ≡ I`.
pub fn toeplitz_corona_instance(g_coeffs: Vec<CMatrix>, order: usize) -> Result<ProblemData> {
    let v = g_coeffs.first().map_or(0, |g| g.nrows());
    leech_truncate(&LeechInstance::new(g_coeffs, alloc::vec![identity(v)], order)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutantLiftingInstance {
    pub z: CMatrix,
    pub b: CMatrix,
    pub btilde: CMatrix,
}

/// Accepts `{Z, B, B̃}` with `ZZ* + BB* = I`, so that `P = I`.
pub fn commutant_lifting_instance(cl: &CommutantLiftingInstance, tol: f64) -> Result<ProblemData> {
    let n = cl.z.nrows();
    if cl.b.nrows() != n {
        return Err(Error::DimensionMismatch("B needs n rows"));
    }
    let residual = operator_norm(&(&cl.z * cl.z.adjoint() + &cl.b * cl.b.adjoint() - identity(n)));
    if residual > tol {
        return Err(Error::NotCoisometricPair { residual });
    }
    ProblemData::new(cl.z.clone(), cl.b.clone(), cl.btilde.clone())
}

/// `‖Q∘ − (I + C·P̃·Λ⁻¹·C*)^{−1/2}‖`, the lifting form of `Q∘` valid when `P = I`.
pub fn lifting_q0_residual(coeffs: &CoefficientSystem, pick: &PickData, pair: &ComplementaryPair) -> Result<f64> {
    let c = &pair.c;
    let m = identity(pair.e) + c * &pick.ptilde * &coeffs.lambda_inv * c.adjoint();
    let q0 = hermitian_inv_sqrt(&crate::kernel::hermitian_part(&m), HERMITIAN_TOL)?;
    Ok(operator_norm(&(q0 - &coeffs.q0)))
}
