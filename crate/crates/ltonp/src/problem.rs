//! Problem data, Stein equations, Gramians and the Pick operator.

use crate::error::{Error, Result};
use crate::kernel::{
    self, hermitian_part, identity, lu_solve, min_hermitian_eigenvalue, nilpotency_index,
    operator_norm, spectral_radius, CMatrix,
};

/// Default relative tolerance for Stein solves.
pub const STEIN_TOL: f64 = 1e-14;
/// `ρ(Z)·ρ(α)` must stay below `1 − STEIN_MARGIN`.
pub const STEIN_MARGIN: f64 = 1e-12;
/// Above this value of `ρ(Z)·ρ(α)` the dense vectorized solve is used.
pub const DENSE_SWITCH: f64 = 0.95;
/// Cap for truncation orders.
pub const ORDER_CAP: usize = 100_000;
/// Relative positivity threshold factor for `P` and `Λ`.
pub const POSDEF_FACTOR: f64 = 1e-10;

const DOUBLING_LIMIT: usize = 64;

/// A finite interpolation instance `{Z, B, B̃}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData {
    pub z: CMatrix,
    pub b: CMatrix,
    pub btilde: CMatrix,
    rho_z: f64,
}

impl ProblemData {
    pub fn new(z: CMatrix, b: CMatrix, btilde: CMatrix) -> Result<Self> {
        let n = z.nrows();
        if n == 0 || !z.is_square() {
            return Err(Error::DimensionMismatch("Z must be square and non-empty"));
        }
        if b.nrows() != n || btilde.nrows() != n {
            return Err(Error::DimensionMismatch("B and Btilde need n rows"));
        }
        if b.ncols() == 0 || btilde.ncols() == 0 {
            return Err(Error::DimensionMismatch("B and Btilde need at least one column"));
        }
        for (name, m) in [("Z", &z), ("B", &b), ("Btilde", &btilde)] {
            if !kernel::is_finite(m) {
                return Err(Error::NonFinite(name));
            }
        }
        let rho_z = spectral_radius(&z)?;
        if rho_z >= 1.0 {
            return Err(Error::UnstableState { radius: rho_z });
        }
        Ok(Self { z, b, btilde, rho_z })
    }

    pub fn n(&self) -> usize {
        self.z.nrows()
    }

    pub fn p(&self) -> usize {
        self.b.ncols()
    }

    pub fn q(&self) -> usize {
        self.btilde.ncols()
    }

    pub fn spectral_radius_z(&self) -> f64 {
        self.rho_z
    }
}

/// Solves `Ω − Z·Ω·α = Ξ`.
pub fn stein_solve(z: &CMatrix, alpha: &CMatrix, xi: &CMatrix, tol: f64) -> Result<CMatrix> {
    if !z.is_square() || !alpha.is_square() || xi.nrows() != z.nrows() || xi.ncols() != alpha.nrows()
    {
        return Err(Error::DimensionMismatch("Stein equation operands"));
    }
    if xi.is_empty() {
        return Ok(xi.clone());
    }
    if let Some(k) = nilpotency_index(z).or_else(|| nilpotency_index(alpha)) {
        return Ok(finite_stein_sum(z, alpha, xi, k));
    }
    let product = spectral_radius(z)? * spectral_radius(alpha)?;
    if product >= 1.0 - STEIN_MARGIN {
        return Err(Error::NotConvergent { product });
    }
    if product > DENSE_SWITCH {
        return dense_stein(z, alpha, xi);
    }
    let scale = xi.norm().max(1.0);
    let mut omega = xi.clone();
    let mut zk = z.clone();
    let mut ak = alpha.clone();
    for _ in 0..DOUBLING_LIMIT {
        let inc = &zk * &omega * &ak;
        omega += &inc;
        if inc.norm() <= tol * scale {
            return Ok(omega);
        }
        zk = &zk * &zk;
        ak = &ak * &ak;
    }
    Err(Error::IterationLimit { iterations: DOUBLING_LIMIT })
}

/// `Σ_{k<index} Z^k·Ξ·α^k`, exact when `Z^index = 0` or `α^index = 0`.
fn finite_stein_sum(z: &CMatrix, alpha: &CMatrix, xi: &CMatrix, index: usize) -> CMatrix {
    let mut omega = xi.clone();
    let mut term = xi.clone();
    for _ in 1..index {
        term = z * term * alpha;
        omega += &term;
    }
    omega
}

/// Dense solve of `(I − αᵀ⊗Z)·vec(Ω) = vec(Ξ)`.
fn dense_stein(z: &CMatrix, alpha: &CMatrix, xi: &CMatrix) -> Result<CMatrix> {
    let (n, m) = xi.shape();
    let op = identity(n * m) - alpha.transpose().kronecker(z);
    let rhs = CMatrix::from_column_slice(n * m, 1, xi.as_slice());
    let sol = lu_solve(&op, &rhs).ok_or(Error::NotConvergent { product: 1.0 })?;
    Ok(CMatrix::from_column_slice(n, m, sol.as_slice()))
}

/// Relative residual `‖Ω − ZΩα − Ξ‖ / max(1, ‖Ξ‖)`.
pub fn stein_residual(z: &CMatrix, alpha: &CMatrix, xi: &CMatrix, omega: &CMatrix) -> f64 {
    operator_norm(&(omega - z * omega * alpha - xi)) / operator_norm(xi).max(1.0)
}

/// Sign classification of the Pick operator, carrying its smallest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    StrictlyPositive(f64),
    NonnegativeSingular(f64),
    Indefinite(f64),
}

impl Classification {
    pub fn classify(min_eig: f64, posdef_tol: f64) -> Self {
        if min_eig >= posdef_tol {
            Self::StrictlyPositive(min_eig)
        } else if min_eig >= -posdef_tol {
            Self::NonnegativeSingular(min_eig)
        } else {
            Self::Indefinite(min_eig)
        }
    }

    pub fn min_eig(&self) -> f64 {
        match *self {
            Self::StrictlyPositive(v) | Self::NonnegativeSingular(v) | Self::Indefinite(v) => v,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::StrictlyPositive(_) => "StrictlyPositive",
            Self::NonnegativeSingular(_) => "NonnegativeSingular",
            Self::Indefinite(_) => "Indefinite",
        }
    }
}

/// Gramians `P`, `P̃` and the Pick operator `Λ = P − P̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct PickData {
    pub p: CMatrix,
    pub ptilde: CMatrix,
    pub lambda: CMatrix,
    pub classification: Classification,
    pub posdef_tol: f64,
    pub p_min_eig: f64,
}

impl PickData {
    pub fn lambda_strictly_positive(&self) -> bool {
        matches!(self.classification, Classification::StrictlyPositive(_))
    }

    pub fn p_strictly_positive(&self) -> bool {
        self.p_min_eig >= POSDEF_FACTOR * operator_norm(&self.p).max(1.0)
    }

    /// Condition number of `Λ` when its smallest eigenvalue lies within a
    /// factor 100 of the positivity threshold.
    pub fn ill_conditioned(&self) -> Option<f64> {
        let min = self.classification.min_eig();
        (self.lambda_strictly_positive() && min < 100.0 * self.posdef_tol)
            .then(|| operator_norm(&self.lambda) / min)
    }

    pub fn require_lambda_positive(&self) -> Result<()> {
        if self.lambda_strictly_positive() {
            Ok(())
        } else {
            Err(Error::LambdaNotStrictlyPositive { min_eig: self.classification.min_eig() })
        }
    }
}

pub fn gramians(prob: &ProblemData, tol: f64) -> Result<PickData> {
    let zs = prob.z.adjoint();
    let bb = &prob.b * prob.b.adjoint();
    let bbt = &prob.btilde * prob.btilde.adjoint();
    let p = hermitian_part(&stein_solve(&prob.z, &zs, &bb, tol)?);
    let ptilde = hermitian_part(&stein_solve(&prob.z, &zs, &bbt, tol)?);
    let lambda = &p - &ptilde;
    let posdef_tol = POSDEF_FACTOR * operator_norm(&lambda).max(1.0);
    let classification = Classification::classify(min_hermitian_eigenvalue(&lambda)?, posdef_tol);
    let p_min_eig = min_hermitian_eigenvalue(&p)?;
    Ok(PickData { p, ptilde, lambda, classification, posdef_tol, p_min_eig })
}

/// Which tangential data a controllability section is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tangent {
    B,
    Btilde,
}

/// Finite section `[X, ZX, …, Z^{K−1}X]` with a bound on the neglected tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub w: CMatrix,
    pub order: usize,
    /// Upper bound on `‖W − W_K‖`.
    pub tail_bound: f64,
}

/// Power bound `‖Z^k‖ ≤ c·ρ̂^k` for all `k ≥ 0`, or the exact nilpotency
/// index when `Z` is nilpotent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerBound {
    Nilpotent(usize),
    Geometric { c: f64, rho_hat: f64 },
}

/// Takes the first `j` with `‖Z^j‖ < 1`, sets `ρ̂ = ‖Z^j‖^{1/j}` and
/// `c = max_{i<j} ‖Z^i‖/ρ̂^i`.
pub fn power_bound(z: &CMatrix) -> Result<PowerBound> {
    if let Some(k) = nilpotency_index(z) {
        return Ok(PowerBound::Nilpotent(k));
    }
    let mut norms = alloc::vec![1.0];
    let mut power = z.clone();
    for j in 1..=ORDER_CAP {
        let nj = operator_norm(&power);
        if nj < 1.0 {
            let rho_hat = libm::pow(nj, 1.0 / j as f64);
            let c = norms
                .iter()
                .enumerate()
                .map(|(i, &ni)| ni / libm::pow(rho_hat, i as f64))
                .fold(1.0, f64::max);
            return Ok(PowerBound::Geometric { c, rho_hat });
        }
        norms.push(nj);
        power = &power * z;
    }
    Err(Error::OrderOverflow { cap: ORDER_CAP })
}

/// Bound on `‖W − W_K‖ = ‖[Z^K X, Z^{K+1} X, …]‖`, namely
/// `c·ρ̂^K·‖X‖/(1 − ρ̂)`; zero once `K` reaches the nilpotency index.
pub fn tail_bound(bound: PowerBound, x_norm: f64, k: usize, z: &CMatrix) -> f64 {
    match bound {
        PowerBound::Nilpotent(index) => {
            let mut acc = 0.0;
            for j in k..index {
                acc += operator_norm(&kernel::pow(z, j));
            }
            acc * x_norm
        }
        PowerBound::Geometric { c, rho_hat } => {
            c * libm::pow(rho_hat, k as f64) * x_norm / (1.0 - rho_hat)
        }
    }
}

pub fn truncated_controllability(prob: &ProblemData, which: Tangent, k: usize) -> Result<Truncation> {
    let x = match which {
        Tangent::B => &prob.b,
        Tangent::Btilde => &prob.btilde,
    };
    let k = k.max(1);
    let (n, m) = x.shape();
    let mut w = CMatrix::zeros(n, k * m);
    let mut block = x.clone();
    for j in 0..k {
        w.view_mut((0, j * m), (n, m)).copy_from(&block);
        block = &prob.z * block;
    }
    let bound = power_bound(&prob.z)?;
    Ok(Truncation { w, order: k, tail_bound: tail_bound(bound, operator_norm(x), k, &prob.z) })
}

/// Smallest `K ≥ 1` whose tail bound, with `‖X‖ = max(‖B‖, ‖B̃‖)`, is below `eps`.
pub fn auto_truncation_order(prob: &ProblemData, eps: f64) -> Result<usize> {
    let x_norm = operator_norm(&prob.b).max(operator_norm(&prob.btilde));
    let bound = power_bound(&prob.z)?;
    match bound {
        PowerBound::Nilpotent(index) => {
            (1..=index.max(1)).find(|&k| tail_bound(bound, x_norm, k, &prob.z) < eps).ok_or(
                Error::OrderOverflow { cap: ORDER_CAP },
            )
        }
        PowerBound::Geometric { c, rho_hat } => {
            if rho_hat == 0.0 || c * x_norm / (1.0 - rho_hat) < eps {
                return Ok(1);
            }
            let guess = libm::ceil(libm::log(eps * (1.0 - rho_hat) / (c * x_norm)) / libm::log(rho_hat));
            if !(guess < ORDER_CAP as f64) {
                return Err(Error::OrderOverflow { cap: ORDER_CAP });
            }
            let mut k = (guess as usize).max(1);
            while k > 1 && tail_bound(bound, x_norm, k - 1, &prob.z) < eps {
                k -= 1;
            }
            while tail_bound(bound, x_norm, k, &prob.z) >= eps {
                k += 1;
                if k > ORDER_CAP {
                    return Err(Error::OrderOverflow { cap: ORDER_CAP });
                }
            }
            Ok(k)
        }
    }
}
