//! Complementary pairs `(C, D)` and the inner function `Θ`.
//!
//! The pair is read off an orthonormal basis `φ = [φ₁; φ₂]` of the null space
//! of `[B, Z·P^{1/2}]` as `D = φ₁*`, `C = φ₂*·P^{−1/2}`. It is unique up to a
//! unitary factor on the left, and `E`-indexed outputs depend on that choice.

use crate::error::{Error, Result};
use crate::kernel::{
    block2, block_diag, hermitian_inv_sqrt, hermitian_inverse, hermitian_sqrt, hstack, identity,
    null_space_isometry, operator_norm, sub, CMatrix, HERMITIAN_TOL,
};
use crate::problem::{PickData, ProblemData};
use crate::system::RationalSystem;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryPair {
    /// `e×n`.
    pub c: CMatrix,
    /// `e×p`.
    pub d: CMatrix,
    pub e: usize,
    /// Numerical rank of `[B, Z·P^{1/2}]`.
    pub rank: usize,
    /// Residuals of the two block identities at construction.
    pub residual_report: (f64, f64),
}

/// Residuals of the block identities and of the five scalar identities they encode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairResiduals {
    pub semiunit1: f64,
    pub semiunit2: f64,
    /// `DD* + CPC* − I_e`.
    pub dd_cpc: f64,
    /// `BD* + ZPC*`.
    pub bd_zpc: f64,
    /// `D*D + B*P⁻¹B − I_p`.
    pub dd_bpb: f64,
    /// `D*C + B*P⁻¹Z`.
    pub dc_bpz: f64,
    /// `C*C + Z*P⁻¹Z − P⁻¹`.
    pub cc_zpz: f64,
}

impl PairResiduals {
    pub fn max(&self) -> f64 {
        [self.semiunit1, self.semiunit2, self.dd_cpc, self.bd_zpc, self.dd_bpb, self.dc_bpz, self.cc_zpz]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// `tol` is the Hermitian-symmetry tolerance used for `P^{±1/2}`.
pub fn complementary_pair(prob: &ProblemData, pick: &PickData, tol: f64) -> Result<ComplementaryPair> {
    if !pick.p_strictly_positive() {
        return Err(Error::PNotStrictlyPositive { min_eig: pick.p_min_eig });
    }
    let (n, p) = (prob.n(), prob.p());
    let p_half = hermitian_sqrt(&pick.p, tol)?;
    let p_inv_half = hermitian_inv_sqrt(&pick.p, tol)?;
    let m = hstack(&[&prob.b, &(&prob.z * &p_half)]);
    let phi = null_space_isometry(&m, None);
    let e = phi.ncols();
    let d = sub(&phi, 0, 0, p, e).adjoint();
    let c = sub(&phi, p, 0, n, e).adjoint() * p_inv_half;
    let mut pair = ComplementaryPair { c, d, e, rank: p + n - e, residual_report: (0.0, 0.0) };
    let r = verify_pair(&pair, prob, pick)?;
    pair.residual_report = (r.semiunit1, r.semiunit2);
    Ok(pair)
}

/// `Θ(λ) = D* + λ·B*·(I − λZ*)⁻¹·C*`.
pub fn inner_theta(pair: &ComplementaryPair, prob: &ProblemData) -> Result<RationalSystem> {
    RationalSystem::new(prob.z.adjoint(), pair.c.adjoint(), prob.b.adjoint(), pair.d.adjoint())
}

pub fn verify_pair(pair: &ComplementaryPair, prob: &ProblemData, pick: &PickData) -> Result<PairResiduals> {
    let (p, e) = (prob.p(), pair.e);
    let (b, z, c, d) = (&prob.b, &prob.z, &pair.c, &pair.d);
    let pm = &pick.p;
    let p_inv = hermitian_inverse(pm, HERMITIAN_TOL)?;

    let top = block2(d, c, b, z);
    let lhs1 = &top * block_diag(&identity(p), pm) * top.adjoint();
    let semiunit1 = operator_norm(&(lhs1 - block_diag(&identity(e), pm)));
    let left = top.adjoint();
    let lhs2 = &left * block_diag(&identity(e), &p_inv) * &top;
    let semiunit2 = operator_norm(&(lhs2 - block_diag(&identity(p), &p_inv)));

    let dd_cpc = operator_norm(&(d * d.adjoint() + c * pm * c.adjoint() - identity(e)));
    let bd_zpc = operator_norm(&(b * d.adjoint() + z * pm * c.adjoint()));
    let dd_bpb = operator_norm(&(d.adjoint() * d + b.adjoint() * &p_inv * b - identity(p)));
    let dc_bpz = operator_norm(&(d.adjoint() * c + b.adjoint() * &p_inv * z));
    let cc_zpz = operator_norm(&(c.adjoint() * c + z.adjoint() * &p_inv * z - &p_inv));
    Ok(PairResiduals { semiunit1, semiunit2, dd_cpc, bd_zpc, dd_bpb, dc_bpz, cc_zpz })
}
