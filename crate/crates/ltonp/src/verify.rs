//! Independent checks on computed solutions.
//!
//! Interpolation residuals are exact (one Stein solve, no truncation). Schur
//! margins, J-identities and spectral factorization are checked on grids.
//! Entropy uses finite Toeplitz sections of the solution with doubling.

use crate::complementary::{verify_pair, ComplementaryPair};
use crate::error::{Error, Result};
use crate::kernel::{
    block_diag, c64, hermitian_cholesky, hermitian_part, identity, inverse, is_positive_definite, log_det, lu_solve, operator_norm, CMatrix,
    C64,
};
use crate::problem::{stein_residual, stein_solve, PickData, ProblemData};
use crate::solver::{
    central_solution, upsilon22_eval, upsilon22_inverse, upsilon_eval, CoefficientSystem, SchurParameter,
    lft_solution,
};
use crate::system::RationalSystem;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

/// Default number of circle samples.
pub const CIRCLE_POINTS: usize = 128;
/// Default number of samples on each interior radius.
pub const RADIUS_POINTS: usize = 64;
/// Default interior radii.
pub const RADII: [f64; 3] = [0.3, 0.7, 0.95];
/// Largest Toeplitz section order (in blocks) tried by [`entropy_of_solution`].
pub const ENTROPY_ORDER_CAP: usize = 512;
/// `‖T_N‖² < 1 − margin` selects the strict-contraction formula.
pub const CONTRACTION_MARGIN: f64 = 1e-10;
/// Ridge factor for the normal equations, relative to the trace.
pub const RIDGE: f64 = 1e-14;

pub fn circle_grid(points: usize) -> Vec<C64> {
    (0..points).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / points as f64)).collect()
}

/// `points` equally spaced samples on each radius, rotated by half a step.
pub fn disc_grid(radii: &[f64], points: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(radii.len() * points);
    for &r in radii {
        for j in 0..points {
            out.push(C64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / points as f64));
        }
    }
    out
}

/// Default grid: 128 circle points and 64 points on each of the radii 0.3, 0.7, 0.95.
pub fn default_grid() -> Vec<C64> {
    let mut g = circle_grid(CIRCLE_POINTS);
    g.extend(disc_grid(&RADII, RADIUS_POINTS));
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationCheck {
    /// `‖Σ Z^k B F_k − B̃‖`.
    pub residual: f64,
    /// Relative residual of the auxiliary Stein solve.
    pub stein_residual: f64,
}

/// `‖Bδ + ZΩβ − B̃‖` with `Ω − ZΩα = Bγ`, which equals `‖Σ_k Z^k B F_k − B̃‖`.
pub fn interpolation_check(prob: &ProblemData, f: &RationalSystem, tol: f64) -> Result<InterpolationCheck> {
    if f.output_dim() != prob.p() || f.input_dim() != prob.q() {
        return Err(Error::DimensionMismatch("solution must be p×q"));
    }
    let xi = &prob.b * &f.gamma;
    let omega = stein_solve(&prob.z, &f.alpha, &xi, tol)?;
    let value = &prob.b * &f.delta + &prob.z * &omega * &f.beta;
    Ok(InterpolationCheck {
        residual: operator_norm(&(value - &prob.btilde)),
        stein_residual: stein_residual(&prob.z, &f.alpha, &xi, &omega),
    })
}

pub fn interpolation_residual(prob: &ProblemData, f: &RationalSystem, tol: f64) -> Result<f64> {
    Ok(interpolation_check(prob, f, tol)?.residual)
}

/// `max_λ ‖F(λ)‖ − 1` over the grid.
pub fn schur_margin(f: &RationalSystem, grid: &[C64]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &l in grid {
        worst = worst.max(operator_norm(&f.eval(l)?) - 1.0);
    }
    Ok(worst)
}

/// `max ‖(I − F∘*F∘) − Υ₂₂^{−*}Υ₂₂⁻¹‖` on equally spaced circle points.
pub fn spectral_factorization_residual(
    prob: &ProblemData,
    pick: &PickData,
    coeffs: &CoefficientSystem,
    circle_points: usize,
) -> Result<f64> {
    let f = central_solution(prob, pick)?;
    let inv = upsilon22_inverse(coeffs, prob, pick)?;
    let q = prob.q();
    let mut worst: f64 = 0.0;
    for l in circle_grid(circle_points) {
        let fv = f.eval(l)?;
        let g = inv.eval(l)?;
        let lhs = identity(q) - fv.adjoint() * &fv;
        worst = worst.max(operator_norm(&(lhs - g.adjoint() * g)));
    }
    Ok(worst)
}

/// `max ‖F∘(λ) − Υ₁₂(λ)Υ₂₂(λ)⁻¹‖` over the sample points.
pub fn quotient_residual(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    lambdas: &[C64],
) -> Result<f64> {
    let f = central_solution(prob, pick)?;
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let y = upsilon_eval(coeffs, prob, pick, pair, l)?;
        let u22_inv = inverse(&y.u22).ok_or(Error::ResolventSingular)?;
        worst = worst.max(operator_norm(&(f.eval(l)? - y.u12 * u22_inv)));
    }
    Ok(worst)
}

/// `max ‖Υ₂₂(λ)·Υ₂₂(λ)⁻¹ − I‖` with the inverse taken from its own realization.
pub fn upsilon22_product_residual(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    lambdas: &[C64],
) -> Result<f64> {
    let inv = upsilon22_inverse(coeffs, prob, pick)?;
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let prod = upsilon22_eval(coeffs, prob, l)? * inv.eval(l)?;
        worst = worst.max(operator_norm(&(prod - identity(prob.q()))));
    }
    Ok(worst)
}

/// `(I + B̃*Λ⁻¹B̃)⁻¹`.
pub fn entropy_central(pick: &PickData, prob: &ProblemData) -> Result<CMatrix> {
    pick.require_lambda_positive()?;
    let bt = &prob.btilde;
    let lam_inv_bt = lu_solve(&pick.lambda, bt).ok_or(Error::LambdaNotStrictlyPositive {
        min_eig: pick.classification.min_eig(),
    })?;
    let m = identity(prob.q()) + bt.adjoint() * lam_inv_bt;
    inverse(&m).ok_or(Error::ResolventSingular)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub matrix: CMatrix,
    /// Section order (in blocks) at which the estimate was accepted.
    pub order: usize,
    /// Whether the final section was a strict contraction.
    pub strict: bool,
}

/// Lower-triangular block Toeplitz section with `(i, j)` block `F_{i−j}`.
pub fn toeplitz_section(coeffs: &[CMatrix], order: usize) -> CMatrix {
    let (p, q) = coeffs[0].shape();
    let mut t = CMatrix::zeros(order * p, order * q);
    for i in 0..order {
        for j in 0..=i {
            t.view_mut((i * p, j * q), (p, q)).copy_from(&coeffs[i - j]);
        }
    }
    t
}

/// Entropy matrix of the order-`N` section.
fn section_entropy(t: &CMatrix, q: usize) -> Result<(CMatrix, bool)> {
    let cols = t.ncols();
    let a = identity(cols) - t.adjoint() * t;
    let shifted = &a - identity(cols) * c64(CONTRACTION_MARGIN, 0.0);
    if is_positive_definite(&shifted) {
        let chol = hermitian_cholesky(&a).ok_or(Error::ResolventSingular)?;
        let mut e = CMatrix::zeros(cols, q);
        e.view_mut((0, 0), (q, q)).copy_from(&identity(q));
        let x = chol.solve(&e);
        let top = x.view((0, 0), (q, q)).into_owned();
        let m = inverse(&top).ok_or(Error::ResolventSingular)?;
        return Ok((hermitian_part(&m), true));
    }
    let rows = t.nrows();
    let c = t.columns(0, q).into_owned();
    let mut normal = &c * c.adjoint() + identity(rows) - t * t.adjoint();
    let ridge = RIDGE * normal.trace().re;
    for i in 0..rows {
        normal[(i, i)] += c64(ridge, 0.0);
    }
    let h = hermitian_cholesky(&normal).ok_or(Error::ResolventSingular)?.solve(&c);
    let m = identity(q) - c.adjoint() * h;
    Ok((hermitian_part(&m), false))
}

/// Entropy matrix of `F` from Toeplitz sections of order `N`, doubling `N`
/// (starting at `truncation`) until consecutive estimates differ by less than `tol`.
pub fn entropy_of_solution(f: &RationalSystem, truncation: usize, tol: f64) -> Result<EntropyEstimate> {
    let q = f.input_dim();
    let mut order = truncation.max(1);
    let coeffs = f.taylor_coefficients(ENTROPY_ORDER_CAP);
    let (mut prev, _) = section_entropy(&toeplitz_section(&coeffs, order), q)?;
    while 2 * order <= ENTROPY_ORDER_CAP {
        order *= 2;
        let (next, strict) = section_entropy(&toeplitz_section(&coeffs, order), q)?;
        if operator_norm(&(&next - &prev)) < tol {
            return Ok(EntropyEstimate { matrix: next, order, strict });
        }
        prev = next;
    }
    Err(Error::NoConvergence { order })
}

/// Both sides of `det σ∘ = exp((1/2π)∫ ln det(I − F∘*F∘))`, the integral by
/// the trapezoid rule on `quad_points` nodes.
pub fn szego_check(
    prob: &ProblemData,
    pick: &PickData,
    f_central: &RationalSystem,
    quad_points: usize,
) -> Result<(f64, f64)> {
    let ent = entropy_central(pick, prob)?;
    let lhs = libm::exp(log_det(&ent).ok_or(Error::QuadratureDegenerate { node: 0 })?.re);
    let q = prob.q();
    let mut acc = 0.0;
    for (node, l) in circle_grid(quad_points).into_iter().enumerate() {
        let fv = f_central.eval(l)?;
        let a = identity(q) - fv.adjoint() * &fv;
        let ld = log_det(&a).ok_or(Error::QuadratureDegenerate { node })?;
        if !ld.re.is_finite() || libm::cos(ld.im) <= 0.0 {
            return Err(Error::QuadratureDegenerate { node });
        }
        acc += ld.re;
    }
    Ok((lhs, libm::exp(acc / quad_points as f64)))
}

fn j_mats(p: usize, e: usize, q: usize) -> (CMatrix, CMatrix) {
    let neg = -identity(q);
    (block_diag(&identity(p), &neg), block_diag(&identity(e), &neg))
}

/// Max residual of `Υ*J₁Υ = J₂ − (1−|λ|²)M*ΛM`, `M = (I−λZ*)⁻¹[Λ⁻¹PC*Q∘, Z*Λ⁻¹B̃R∘]`.
pub fn j_identity_residual(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    lambdas: &[C64],
) -> Result<f64> {
    let (j1, j2) = j_mats(prob.p(), pair.e, prob.q());
    let rhs_cols = &coeffs.bhat * block_diag(&coeffs.q0, &coeffs.r0);
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let ups = upsilon_eval(coeffs, prob, pick, pair, l)?.assemble();
        let res = identity(prob.n()) - prob.z.adjoint() * l;
        let m = lu_solve(&res, &rhs_cols).ok_or(Error::ResolventSingular)?;
        let defect = m.adjoint() * &pick.lambda * &m * c64(1.0 - l.norm_sqr(), 0.0);
        let lhs = ups.adjoint() * &j1 * &ups;
        worst = worst.max(operator_norm(&(lhs - (&j2 - defect))));
    }
    Ok(worst)
}

/// Max of `‖Υ*J₁Υ − J₂‖` on equally spaced circle points.
pub fn j_unitarity_residual(
    coeffs: &CoefficientSystem,
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    circle_points: usize,
) -> Result<f64> {
    let (j1, j2) = j_mats(prob.p(), pair.e, prob.q());
    let mut worst: f64 = 0.0;
    for l in circle_grid(circle_points) {
        let ups = upsilon_eval(coeffs, prob, pick, pair, l)?.assemble();
        worst = worst.max(operator_norm(&(ups.adjoint() * &j1 * &ups - &j2)));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub interpolation_residual: f64,
    pub schur_margin: f64,
    pub j_identity_residual: f64,
    pub spectral_factorization_residual: f64,
    pub pair_residual: f64,
    pub quotient_residual: f64,
    pub entropy_matrix: CMatrix,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// All residuals below `tol` and Schur margin at most `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.interpolation_residual <= tol
            && self.schur_margin <= tol
            && self.j_identity_residual <= tol
            && self.spectral_factorization_residual <= tol
            && self.pair_residual <= tol
            && self.quotient_residual <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub stein_tol: f64,
    pub circle_points: usize,
    pub radius_points: usize,
    pub entropy_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { stein_tol: 1e-14, circle_points: CIRCLE_POINTS, radius_points: RADIUS_POINTS, entropy_tol: 1e-10 }
    }
}

/// Runs the full set of checks for the solution with parameter `x`
/// (the central solution when `x` is `None`).
pub fn verify_solution(
    prob: &ProblemData,
    pick: &PickData,
    pair: &ComplementaryPair,
    coeffs: &CoefficientSystem,
    x: Option<&SchurParameter>,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let mut notes = Vec::new();
    let f = match x {
        Some(x) => lft_solution(coeffs, prob, pick, pair, x)?,
        None => central_solution(prob, pick)?,
    };
    let mut grid = circle_grid(opts.circle_points);
    let interior = disc_grid(&RADII, opts.radius_points);
    grid.extend(interior.iter().copied());
    let entropy_matrix = match x {
        None => entropy_central(pick, prob)?,
        Some(_) => entropy_of_solution(&f, 16, opts.entropy_tol)?.matrix,
    };
    if let Some(cond) = coeffs.ill_conditioned {
        notes.push(alloc::format!("ill-conditioned Pick operator, cond = {cond:.3e}"));
    }
    notes.push(String::from("E-indexed quantities are basis-dependent up to a left unitary factor"));
    Ok(VerificationReport {
        interpolation_residual: interpolation_residual(prob, &f, opts.stein_tol)?,
        schur_margin: schur_margin(&f, &grid)?,
        j_identity_residual: j_identity_residual(coeffs, prob, pick, pair, &grid)?,
        spectral_factorization_residual: spectral_factorization_residual(prob, pick, coeffs, opts.circle_points)?,
        pair_residual: verify_pair(pair, prob, pick)?.max(),
        quotient_residual: quotient_residual(coeffs, prob, pick, pair, &interior)?,
        entropy_matrix,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complementary::complementary_pair;
    use crate::kernel::from_real;
    use crate::problem::{gramians, STEIN_TOL};
    use crate::solver::coefficient_system;

    fn scalar_setup() -> (ProblemData, PickData, ComplementaryPair, CoefficientSystem) {
        let prob = ProblemData::new(from_real(1, 1, &[0.0]), from_real(1, 1, &[1.0]), from_real(1, 1, &[0.5]))
            .unwrap();
        let pick = gramians(&prob, STEIN_TOL).unwrap();
        let pair = complementary_pair(&prob, &pick, 1e-12).unwrap();
        let coeffs = coefficient_system(&prob, &pick, &pair).unwrap();
        (prob, pick, pair, coeffs)
    }

    #[test]
    fn scalar_checks() {
        let (prob, pick, pair, coeffs) = scalar_setup();
        let f = central_solution(&prob, &pick).unwrap();
        assert!(interpolation_residual(&prob, &f, STEIN_TOL).unwrap() < 1e-12);
        let zero = RationalSystem::constant(CMatrix::zeros(1, 1));
        assert!((interpolation_residual(&prob, &zero, STEIN_TOL).unwrap() - 0.5).abs() < 1e-15);
        assert!((schur_margin(&f, &default_grid()).unwrap() + 0.5).abs() < 1e-15);
        assert!(spectral_factorization_residual(&prob, &pick, &coeffs, 128).unwrap() < 1e-15);
        let ent = entropy_central(&pick, &prob).unwrap();
        assert!((ent[(0, 0)].re - 0.75).abs() < 1e-15);
        let (lhs, rhs) = szego_check(&prob, &pick, &f, 64).unwrap();
        assert!((lhs - 0.75).abs() < 1e-15 && (rhs - 0.75).abs() < 1e-15);
        assert!(j_unitarity_residual(&coeffs, &prob, &pick, &pair, 32).unwrap() < 1e-14);
        assert!(j_identity_residual(&coeffs, &prob, &pick, &pair, &default_grid()).unwrap() < 1e-14);
    }

    #[test]
    fn entropy_of_constants() {
        let half = RationalSystem::constant(from_real(1, 1, &[0.5]));
        let est = entropy_of_solution(&half, 4, 1e-12).unwrap();
        assert!((est.matrix[(0, 0)].re - 0.75).abs() < 1e-14);
        let zero = RationalSystem::constant(CMatrix::zeros(2, 2));
        let est = entropy_of_solution(&zero, 4, 1e-12).unwrap();
        assert!((est.matrix - identity(2)).norm() < 1e-14);
        // non-strict path: |F| = 1 gives zero entropy
        let one = RationalSystem::constant(from_real(1, 1, &[1.0]));
        let est = entropy_of_solution(&one, 4, 1e-10).unwrap();
        assert!(!est.strict);
        assert!(est.matrix[(0, 0)].re.abs() < 1e-8);
    }

    #[test]
    fn scalar_entropy_gap_matches_closed_form() {
        // For F = (λx + b)/(1 + bλx): σ_F = (1 − b²)(1 − |x|²)
        let (prob, pick, pair, coeffs) = scalar_setup();
        let u = pair.c[(0, 0)];
        let x = 0.3;
        let param = SchurParameter::Constant(CMatrix::from_element(1, 1, u * x));
        let f = lft_solution(&coeffs, &prob, &pick, &pair, &param).unwrap();
        let est = entropy_of_solution(&f, 8, 1e-13).unwrap();
        assert!((est.matrix[(0, 0)].re - 0.75 * (1.0 - x * x)).abs() < 1e-10);
    }
}
