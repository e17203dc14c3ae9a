//! Coefficient function `Υ`, central solution and the parametrization of all solutions.
//!
//! With `Λ ≫ 0` every solution is `F = (Υ₁₁X + Υ₁₂)(Υ₂₁X + Υ₂₂)⁻¹` for a Schur
//! class parameter `X`, and equivalently the feedback form
//! `F = G₁₁ + λG₁₂(I − λG₂₂)⁻¹G₂₁` with `G = ωP_F + τ₂Xτ₁*`. Both are
//! implemented; the first is returned as an exact realization.

use crate::complementary::ComplementaryPair;
use crate::error::{Error, Result};
use crate::kernel::{
    block2, block_diag, hermitian_inv_sqrt, hermitian_inverse, hermitian_sqrt, hstack, identity,
    inverse, lu_solve, operator_norm, sub, vstack, CMatrix, C64, HERMITIAN_TOL,
};
use crate::problem::{truncated_controllability, PickData, ProblemData, Tangent};
use crate::system::{RationalSystem, CONTRACTIVE_SLACK};

/// `Q∘`, `R∘` and the realization data of `Υ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSystem {
    /// `e×e`, `(DD* + CPΛ⁻¹PC*)^{−1/2}`.
    pub q0: CMatrix,
    /// `q×q`, `(I + B̃*Λ⁻¹B̃)^{−1/2}`.
    pub r0: CMatrix,
    /// `[Λ⁻¹PC*, Z*Λ⁻¹B̃]`.
    pub bhat: CMatrix,
    /// `[B*; B̃*]`.
    pub chat: CMatrix,
    /// `[D*, B*Λ⁻¹B̃; 0, I + B̃*Λ⁻¹B̃]`.
    pub dhat: CMatrix,
    /// `(B̃B̃* + Λ)⁻¹`.
    pub k: CMatrix,
    pub lambda_inv: CMatrix,
    /// `cond(Λ)` when `Λ` is close to singular.
    pub ill_conditioned: Option<f64>,
    pub e: usize,
}

pub fn coefficient_system(prob: &ProblemData, pick: &PickData, pair: &ComplementaryPair) -> Result<CoefficientSystem> {
    pick.require_lambda_positive()?;
    let (q, e) = (prob.q(), pair.e);
    let (b, bt, z) = (&prob.b, &prob.btilde, &prob.z);
    let lambda_inv = hermitian_inverse(&pick.lambda, HERMITIAN_TOL)?;
    let pc = &pick.p * pair.c.adjoint();
    let q0_inv_sq = &pair.d * pair.d.adjoint() + pc.adjoint() * &lambda_inv * &pc;
    let q0 = hermitian_inv_sqrt(&q0_inv_sq, HERMITIAN_TOL)?;
    let r0_inv_sq = identity(q) + bt.adjoint() * &lambda_inv * bt;
    let r0 = hermitian_inv_sqrt(&r0_inv_sq, HERMITIAN_TOL)?;
    let k = hermitian_inverse(&(bt * bt.adjoint() + &pick.lambda), HERMITIAN_TOL)?;
    let bhat = hstack(&[&(&lambda_inv * &pc), &(z.adjoint() * &lambda_inv * bt)]);
    let chat = vstack(&[&b.adjoint(), &bt.adjoint()]);
    let dhat = block2(
        &pair.d.adjoint(),
        &(b.adjoint() * &lambda_inv * bt),
        &CMatrix::zeros(q, e),
        &r0_inv_sq,
    );
    Ok(CoefficientSystem {
        q0,
        r0,
        bhat,
        chat,
        dhat,
        k,
        lambda_inv,
        ill_conditioned: pick.ill_conditioned(),
        e,
    })
}

impl CoefficientSystem {
    /// Residuals of the two defining forms of `Q∘⁻²`:
    /// `I + CP(Λ⁻¹ − P⁻¹)PC*` and `DD* + CPΛ⁻¹PC*`.
    pub fn q0_residuals(&self, pick: &PickData, pair: &ComplementaryPair) -> Result<(f64, f64)> {
        let e = pair.e;
        let q0_inv_sq = hermitian_inverse(&(&self.q0 * &self.q0), HERMITIAN_TOL)?;
        let p_inv = hermitian_inverse(&pick.p, HERMITIAN_TOL)?;
        let pc = &pick.p * pair.c.adjoint();
        let first = identity(e) + pc.adjoint() * (&self.lambda_inv - &p_inv) * &pc;
        let second = &pair.d * pair.d.adjoint() + pc.adjoint() * &self.lambda_inv * &pc;
        Ok((operator_norm(&(&q0_inv_sq - first)), operator_norm(&(&q0_inv_sq - second))))
    }

    /// `Υ(λ) = (D̂ + λĈ(I − λZ*)⁻¹B̂)·diag(Q∘, R∘)` as a realization.
    pub fn realization(&self, prob: &ProblemData) -> Result<RationalSystem> {
        let scale = block_diag(&self.q0, &self.r0);
        RationalSystem::new(prob.z.adjoint(), &self.bhat * &scale, self.chat.clone(), &self.dhat * &scale)
    }
}

/// The four blocks of `Υ(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpsilonBlocks {
    pub u11: CMatrix,
    pub u12: CMatrix,
    pub u21: CMatrix,
    pub u22: CMatrix,
}

impl UpsilonBlocks {
    pub fn assemble(&self) -> CMatrix {
        block2(&self.u11, &self.u12, &self.u21, &self.u22)
    }
}

/// Evaluates `Υ(λ)` from its defining formulas with one shared resolvent solve.
pub fn upsilon_eval(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    lambda: C64,
) -> Result<UpsilonBlocks> {
    let (n, e) = (prob.n(), pair.e);
    let (b, bt) = (&prob.b, &prob.btilde);
    let rhs = hstack(&[
        &(&coeffs.lambda_inv * &pick.p * pair.c.adjoint() * &coeffs.q0),
        &(&coeffs.lambda_inv * bt * &coeffs.r0),
    ]);
    let res = identity(n) - prob.z.adjoint() * lambda;
    let x = lu_solve(&res, &rhs).ok_or(Error::ResolventSingular)?;
    let x1 = sub(&x, 0, 0, n, e);
    let x2 = sub(&x, 0, e, n, prob.q());
    Ok(UpsilonBlocks {
        u11: pair.d.adjoint() * &coeffs.q0 + b.adjoint() * &x1 * lambda,
        u12: b.adjoint() * &x2,
        u21: bt.adjoint() * &x1 * lambda,
        u22: &coeffs.r0 + bt.adjoint() * &x2,
    })
}

/// `Υ₂₂(λ) = R∘ + B̃*(I − λZ*)⁻¹Λ⁻¹B̃R∘`.
pub fn upsilon22_eval(coeffs: &CoefficientSystem, prob: &ProblemData, lambda: C64) -> Result<CMatrix> {
    let bt = &prob.btilde;
    let res = identity(prob.n()) - prob.z.adjoint() * lambda;
    let x = lu_solve(&res, &(&coeffs.lambda_inv * bt * &coeffs.r0)).ok_or(Error::ResolventSingular)?;
    Ok(&coeffs.r0 + bt.adjoint() * x)
}

/// `F∘(λ) = B*K(I − λT)⁻¹B̃` with `K = (B̃B̃* + Λ)⁻¹`, `T = ΛZ*K`.
pub fn central_solution(prob: &ProblemData, pick: &PickData) -> Result<RationalSystem> {
    pick.require_lambda_positive()?;
    let bt = &prob.btilde;
    let k = hermitian_inverse(&(bt * bt.adjoint() + &pick.lambda), HERMITIAN_TOL)?;
    let t = &pick.lambda * prob.z.adjoint() * &k;
    let bk = prob.b.adjoint() * &k;
    RationalSystem::new(t.clone(), bt.clone(), &bk * &t, &bk * bt)
}

/// `Υ₂₂(λ)⁻¹ = R∘ − λR∘B̃*(I − λZ*KΛ)⁻¹Z*Λ⁻¹B̃R∘²`.
pub fn upsilon22_inverse(coeffs: &CoefficientSystem, prob: &ProblemData, pick: &PickData) -> Result<RationalSystem> {
    pick.require_lambda_positive()?;
    let (zs, bt, r0) = (prob.z.adjoint(), &prob.btilde, &coeffs.r0);
    let alpha = &zs * &coeffs.k * &pick.lambda;
    let beta = &zs * &coeffs.lambda_inv * bt * r0 * r0;
    let gamma = -(r0 * bt.adjoint());
    RationalSystem::new(alpha, beta, gamma, r0.clone())
}

/// Free parameter of the solution set: a contraction `e×q`, constant or given
/// by a realization with contractive system matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum SchurParameter {
    Constant(CMatrix),
    Dynamic(RationalSystem),
}

impl SchurParameter {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Self::Constant(x) => x.shape(),
            Self::Dynamic(s) => (s.output_dim(), s.input_dim()),
        }
    }

    pub fn validate(&self, e: usize, q: usize) -> Result<()> {
        if self.dims() != (e, q) {
            return Err(Error::DimensionMismatch("Schur parameter must be e×q"));
        }
        let norm = match self {
            Self::Constant(x) => operator_norm(x),
            Self::Dynamic(s) => operator_norm(&s.system_matrix()),
        };
        if norm > 1.0 + CONTRACTIVE_SLACK {
            return Err(Error::ParameterNotContractive { norm });
        }
        Ok(())
    }

    pub fn eval(&self, lambda: C64) -> Result<CMatrix> {
        match self {
            Self::Constant(x) => Ok(x.clone()),
            Self::Dynamic(s) => s.eval(lambda),
        }
    }

    pub fn to_system(&self) -> RationalSystem {
        match self {
            Self::Constant(x) => RationalSystem::constant(x.clone()),
            Self::Dynamic(s) => s.clone(),
        }
    }
}

/// Realization of `F = (Υ₁₁X + Υ₁₂)(Υ₂₁X + Υ₂₂)⁻¹`.
///
/// `N = Υ·col(X, I)` is realized on the joint state, its lower block `N₂` is
/// inverted by output feedback (`N₂(0) = R∘⁻¹`), and because `N₂⁻¹` runs on
/// the same state as `N`, the quotient `N₁N₂⁻¹` needs no additional copy.
pub fn lft_solution(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    x: &SchurParameter,
) -> Result<RationalSystem> {
    pick.require_lambda_positive()?;
    let (p, q, e) = (prob.p(), prob.q(), pair.e);
    if e == 0 {
        return central_solution(prob, pick);
    }
    x.validate(e, q)?;
    let xs = x.to_system();
    let s = xs.state_dim();
    let col = RationalSystem::new(
        xs.alpha.clone(),
        xs.beta.clone(),
        vstack(&[&xs.gamma, &CMatrix::zeros(q, s)]),
        vstack(&[&xs.delta, &identity(q)]),
    )?;
    let nsys = coeffs.realization(prob)?.series(&col)?;
    let m = nsys.state_dim();
    let gamma1 = sub(&nsys.gamma, 0, 0, p, m);
    let gamma2 = sub(&nsys.gamma, p, 0, q, m);
    let delta1 = sub(&nsys.delta, 0, 0, p, q);
    let delta2 = sub(&nsys.delta, p, 0, q, q);
    let d2inv = inverse(&delta2).ok_or(Error::FeedbackSingular)?;
    let beta = &nsys.beta * &d2inv;
    let alpha = &nsys.alpha - &beta * &gamma2;
    let gamma = &gamma1 - &delta1 * &d2inv * &gamma2;
    RationalSystem::new(alpha, beta, gamma, delta1 * d2inv)
}

/// `ωP_F = [B*; Λ^{1/2}Z*]·K·[B̃, Λ^{1/2}]`, a `(p+n)×(q+n)` matrix.
pub fn omega_pf(prob: &ProblemData, pick: &PickData) -> Result<CMatrix> {
    pick.require_lambda_positive()?;
    let bt = &prob.btilde;
    let half = hermitian_sqrt(&pick.lambda, HERMITIAN_TOL)?;
    let k = hermitian_inverse(&(bt * bt.adjoint() + &pick.lambda), HERMITIAN_TOL)?;
    let left = vstack(&[&prob.b.adjoint(), &(&half * prob.z.adjoint())]);
    let right = hstack(&[bt, &half]);
    Ok(left * k * right)
}

/// `τ₁ = [I; −Λ^{−1/2}B̃]R∘` and `τ₂ = [D*; Λ^{−1/2}PC*]Q∘`.
pub fn tau_isometries(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
) -> Result<(CMatrix, CMatrix)> {
    pick.require_lambda_positive()?;
    let inv_half = hermitian_inv_sqrt(&pick.lambda, HERMITIAN_TOL)?;
    let tau1 = vstack(&[&identity(prob.q()), &-(&inv_half * &prob.btilde)]) * &coeffs.r0;
    let tau2 = vstack(&[&pair.d.adjoint(), &(&inv_half * &pick.p * pair.c.adjoint())]) * &coeffs.q0;
    Ok((tau1, tau2))
}

/// Evaluates `F(λ) = G₁₁ + λG₁₂(I − λG₂₂)⁻¹G₂₁` with `G = ωP_F + τ₂X(λ)τ₁*`.
pub fn redheffer_solution(
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    coeffs: &CoefficientSystem,
    x: &SchurParameter,
    lambda: C64,
) -> Result<CMatrix> {
    let (n, p, q) = (prob.n(), prob.p(), prob.q());
    x.validate(pair.e, q)?;
    let (tau1, tau2) = tau_isometries(coeffs, prob, pick, pair)?;
    let g = omega_pf(prob, pick)? + &tau2 * x.eval(lambda)? * tau1.adjoint();
    let g11 = sub(&g, 0, 0, p, q);
    let g12 = sub(&g, 0, q, p, n);
    let g21 = sub(&g, p, 0, n, q);
    let g22 = sub(&g, p, q, n, n);
    let loop_op = identity(n) - g22 * lambda;
    let fb = lu_solve(&loop_op, &g21).ok_or(Error::FeedbackSingular)?;
    Ok(g11 + g12 * fb * lambda)
}

/// Toeplitz-side forms of `R∘` at truncation order `K`, with `A_K = W_K*·P⁻¹·W̃_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedForms {
    pub order: usize,
    /// `(E*(I − A_K*A_K)⁻¹E)^{−1/2}`.
    pub r0: CMatrix,
    /// `‖(I − A_K*A_K)⁻¹ − (I + W̃_K*Λ⁻¹W̃_K)‖`.
    pub inversion_residual: f64,
}

pub fn truncated_forms(prob: &ProblemData, pick: &PickData, order: usize) -> Result<TruncatedForms> {
    pick.require_lambda_positive()?;
    let q = prob.q();
    let w = truncated_controllability(prob, Tangent::B, order)?.w;
    let wt = truncated_controllability(prob, Tangent::Btilde, order)?.w;
    let p_inv = hermitian_inverse(&pick.p, HERMITIAN_TOL)?;
    let lambda_inv = hermitian_inverse(&pick.lambda, HERMITIAN_TOL)?;
    let a = w.adjoint() * &p_inv * &wt;
    let m = identity(wt.ncols()) - a.adjoint() * &a;
    let m_inv = inverse(&m).ok_or(Error::LambdaNotStrictlyPositive { min_eig: pick.classification.min_eig() })?;
    let expected = identity(wt.ncols()) + wt.adjoint() * lambda_inv * &wt;
    let corner = crate::kernel::hermitian_part(&sub(&m_inv, 0, 0, q, q));
    Ok(TruncatedForms {
        order: order.max(1),
        r0: hermitian_inv_sqrt(&corner, HERMITIAN_TOL)?,
        inversion_residual: operator_norm(&(m_inv - expected)),
    })
}
